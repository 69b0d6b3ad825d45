#include "slnw/certificate.hpp"

#include <sstream>

namespace slnw {

std::string factor_class_name(FactorClass c) {
  switch (c) {
    case FactorClass::U: return "U";
    case FactorClass::L: return "L";
    case FactorClass::Uc: return "Uc";
    case FactorClass::Eblock: return "Eblock";
  }
  return "?";
}

FactorClass factor_class_from_name(const std::string& s) {
  if (s == "U") return FactorClass::U;
  if (s == "L") return FactorClass::L;
  if (s == "Uc") return FactorClass::Uc;
  if (s == "Eblock") return FactorClass::Eblock;
  throw std::invalid_argument("unknown factor class '" + s + "'");
}

ClassifiedFactor make_U(IntMatrix m) {
  return ClassifiedFactor{FactorClass::U, std::move(m), {}, {}, 0};
}

ClassifiedFactor make_L(IntMatrix m) {
  return ClassifiedFactor{FactorClass::L, std::move(m), {}, {}, 0};
}

ClassifiedFactor make_Uc(IntMatrix h, IntMatrix k) {
  IntMatrix m = h * k * h.inverse();
  return ClassifiedFactor{FactorClass::Uc, std::move(m), std::move(h),
                          std::move(k), 0};
}

ClassifiedFactor make_Eblock(int n, IntMatrix corner) {
  int bs = corner.dim();
  return ClassifiedFactor{FactorClass::Eblock,
                          IntMatrix::embed_corner(n, corner), {}, {}, bs};
}

bool ClassifiedFactor::check(long q, std::string* why) const {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  switch (cls) {
    case FactorClass::U:
      if (!in_upper_unipotent(matrix, q)) return fail("factor not in U at level q");
      return true;
    case FactorClass::L:
      if (!in_lower_unipotent(matrix, q)) return fail("factor not in L at level q");
      return true;
    case FactorClass::Uc: {
      if (!witness_h || !witness_k) return fail("Uc factor missing witness");
      if (!in_upper_unipotent(*witness_k, q))
        return fail("Uc witness k not in U at level q");
      mpz_class dh = witness_h->det();
      if (dh != 1) return fail("Uc witness h not in SL_n(Z)");
      IntMatrix rebuilt = (*witness_h) * (*witness_k) * witness_h->inverse();
      if (!(rebuilt == matrix)) return fail("Uc witness identity fails");
      return true;
    }
    case FactorClass::Eblock: {
      int n = matrix.dim();
      if (block_size < 3 || block_size > n) return fail("Eblock bad block size");
      IntMatrix corner = matrix.corner_block(block_size);
      if (!(IntMatrix::embed_corner(n, corner) == matrix))
        return fail("Eblock factor not of the form diag(1,...,1,g*)");
      if (!mennicke_in_E(corner, q))
        return fail("Eblock corner fails the level-q diagonal test");
      return true;
    }
  }
  return fail("unknown class");
}

std::string FactorCertificate::class_sequence() const {
  std::string s;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) s += ',';
    s += factor_class_name(factors[i].cls);
  }
  return s;
}

VerifyReport FactorCertificate::verify() const {
  VerifyReport rep;
  IntMatrix prod = IntMatrix::identity(input.dim());
  for (size_t i = 0; i < factors.size(); ++i) {
    std::string why;
    if (factors[i].matrix.dim() != input.dim()) {
      rep.ok = false;
      rep.failed_factor = static_cast<int>(i) + 1;
      rep.detail = "factor dimension mismatch";
      return rep;
    }
    if (!factors[i].check(q, &why)) {
      rep.ok = false;
      rep.failed_factor = static_cast<int>(i) + 1;
      rep.detail = why;
      return rep;
    }
    prod = prod * factors[i].matrix;
  }
  if (!(prod == input)) {
    rep.ok = false;
    rep.detail = "product of factors does not reconstruct the input";
  }
  return rep;
}

uint64_t text_checksum(const std::string& body) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : body) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string FactorCertificate::serialize() const {
  std::ostringstream os;
  os << "slnw-factor-certificate v1\n";
  os << "n " << input.dim() << "\n";
  os << "q " << q << "\n";
  os << "input " << input.to_text() << "\n";
  os << "factors " << factors.size() << "\n";
  for (size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    os << "factor " << (i + 1) << " " << factor_class_name(f.cls) << "\n";
    os << "matrix " << f.matrix.to_text() << "\n";
    if (f.cls == FactorClass::Uc) {
      os << "witness-h " << f.witness_h->to_text() << "\n";
      os << "witness-k " << f.witness_k->to_text() << "\n";
    }
    if (f.cls == FactorClass::Eblock) os << "block-size " << f.block_size << "\n";
  }
  std::string body = os.str();
  std::ostringstream out;
  out << body << "checksum " << std::hex << text_checksum(body) << "\n";
  return out.str();
}

namespace {

struct LineReader {
  std::istringstream in;
  explicit LineReader(const std::string& s) : in(s) {}

  // Reads one line of the form "<key> <rest>".
  bool next(std::string& key, std::string& rest) {
    std::string line;
    if (!std::getline(in, line)) return false;
    size_t sp = line.find(' ');
    if (sp == std::string::npos) {
      key = line;
      rest.clear();
    } else {
      key = line.substr(0, sp);
      rest = line.substr(sp + 1);
    }
    return true;
  }
};

}  // namespace

FactorCertificate FactorCertificate::deserialize(const std::string& text) {
  size_t cs = text.rfind("checksum ");
  if (cs == std::string::npos)
    throw std::invalid_argument("certificate: missing checksum");
  std::string body = text.substr(0, cs);
  std::string cksline = text.substr(cs);
  uint64_t stored = std::stoull(cksline.substr(9), nullptr, 16);
  if (stored != text_checksum(body))
    throw std::invalid_argument("certificate: checksum mismatch");

  LineReader rd(body);
  std::string key, rest;
  if (!rd.next(key, rest) || key != "slnw-factor-certificate")
    throw std::invalid_argument("certificate: bad header");

  int n = 0;
  long q = 1;
  size_t nfactors = 0;
  FactorCertificate cert;
  std::optional<IntMatrix> input;
  while (rd.next(key, rest)) {
    if (key == "n") {
      n = std::stoi(rest);
    } else if (key == "q") {
      q = std::stol(rest);
    } else if (key == "input") {
      input = IntMatrix::from_text(rest);
    } else if (key == "factors") {
      nfactors = std::stoul(rest);
      break;
    }
  }
  if (!input || input->dim() != n)
    throw std::invalid_argument("certificate: bad input matrix");
  cert = FactorCertificate(*input, q);

  for (size_t i = 0; i < nfactors; ++i) {
    if (!rd.next(key, rest) || key != "factor")
      throw std::invalid_argument("certificate: expected factor line");
    std::istringstream fs(rest);
    size_t idx;
    std::string clsname;
    fs >> idx >> clsname;
    FactorClass cls = factor_class_from_name(clsname);
    if (!rd.next(key, rest) || key != "matrix")
      throw std::invalid_argument("certificate: expected matrix line");
    ClassifiedFactor f{cls, IntMatrix::from_text(rest), {}, {}, 0};
    if (cls == FactorClass::Uc) {
      if (!rd.next(key, rest) || key != "witness-h")
        throw std::invalid_argument("certificate: expected witness-h");
      f.witness_h = IntMatrix::from_text(rest);
      if (!rd.next(key, rest) || key != "witness-k")
        throw std::invalid_argument("certificate: expected witness-k");
      f.witness_k = IntMatrix::from_text(rest);
    }
    if (cls == FactorClass::Eblock) {
      if (!rd.next(key, rest) || key != "block-size")
        throw std::invalid_argument("certificate: expected block-size");
      f.block_size = std::stoi(rest);
    }
    cert.factors.push_back(std::move(f));
  }
  return cert;
}

}  // namespace slnw
