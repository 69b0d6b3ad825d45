#include "slnw/matrix.hpp"

#include <sstream>

#include "slnw/modmatrix.hpp"

namespace slnw {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n);
  for (int i = 1; i <= n; ++i) m.set_entry(i, i, 1);
  return m;
}

IntMatrix IntMatrix::elementary(int n, int i, int j, const mpz_class& x) {
  if (i == j) throw std::invalid_argument("elementary: i == j");
  IntMatrix m = identity(n);
  m.set_entry(i, j, x);
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("IntMatrix: dimension mismatch");
  IntMatrix out(n_);
  mpz_class acc, tmp;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      acc = 0;
      for (int k = 0; k < n_; ++k) {
        // acc += a[i][k] * b[k][j]
        mpz_addmul(acc.get_mpz_t(),
                   e_[static_cast<size_t>(i) * n_ + k].get_mpz_t(),
                   rhs.e_[static_cast<size_t>(k) * n_ + j].get_mpz_t());
      }
      out.e_[static_cast<size_t>(i) * n_ + j] = acc;
    }
  }
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("IntMatrix: dimension mismatch");
  IntMatrix out(n_);
  for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] + rhs.e_[k];
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("IntMatrix: dimension mismatch");
  IntMatrix out(n_);
  for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] - rhs.e_[k];
  return out;
}

mpz_class IntMatrix::det() const {
  // Bareiss: division-free growth control, every division below is exact.
  int n = n_;
  std::vector<mpz_class> a = e_;
  auto at = [&](int i, int j) -> mpz_class& {
    return a[static_cast<size_t>(i) * n + j];
  };
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) { piv = i; break; }
      if (piv < 0) return 0;
      for (int j = k; j < n; ++j) std::swap(at(k, j), at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class num = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return sign > 0 ? at(n - 1, n - 1) : mpz_class(-at(n - 1, n - 1));
}

IntMatrix IntMatrix::inverse() const {
  mpz_class d = det();
  if (d != 1 && d != -1)
    throw std::domain_error("IntMatrix::inverse: determinant is not +-1");
  int n = n_;
  IntMatrix adj(n);
  if (n == 1) {
    adj.set_entry(1, 1, d);
    return adj;
  }
  // adj[j][i] = (-1)^{i+j} det(minor_{i,j})
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      IntMatrix minor(n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor.set_entry(rr + 1, cc + 1, e_[static_cast<size_t>(r) * n + c]);
          ++cc;
        }
        ++rr;
      }
      mpz_class cof = minor.det();
      if ((i + j) % 2 != 0) cof = -cof;
      adj.set_entry(j + 1, i + 1, d == 1 ? cof : mpz_class(-cof));
    }
  }
  return adj;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(n_);
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) out.set_entry(j, i, entry(i, j));
  return out;
}

IntMatrix IntMatrix::conjugate_by(const IntMatrix& h) const {
  return h * (*this) * h.inverse();
}

bool IntMatrix::is_identity() const {
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      if (entry(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

ModMatrix IntMatrix::reduce_mod(unsigned long m) const {
  if (m < 2) throw std::invalid_argument("reduce_mod: modulus must be >= 2");
  ModMatrix out(n_, m);
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      out.set_entry(i, j, mpz_fdiv_ui(entry(i, j).get_mpz_t(), m));
  return out;
}

std::string IntMatrix::to_text() const {
  std::ostringstream os;
  for (int i = 1; i <= n_; ++i) {
    if (i > 1) os << ';';
    for (int j = 1; j <= n_; ++j) {
      if (j > 1) os << ',';
      os << entry(i, j).get_str();
    }
  }
  return os.str();
}

IntMatrix IntMatrix::from_text(const std::string& text) {
  std::vector<std::vector<mpz_class>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    rows.emplace_back();
    std::stringstream rs(row);
    std::string tok;
    while (std::getline(rs, tok, ',')) {
      size_t a = tok.find_first_not_of(" \t");
      size_t b = tok.find_last_not_of(" \t");
      if (a == std::string::npos)
        throw std::invalid_argument("matrix text: empty entry");
      tok = tok.substr(a, b - a + 1);
      try {
        rows.back().emplace_back(tok);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("matrix text: bad entry '" + tok + "'");
      }
    }
  }
  size_t n = rows.size();
  if (n == 0) throw std::invalid_argument("matrix text: empty");
  for (const auto& r : rows)
    if (r.size() != n)
      throw std::invalid_argument("matrix text: not square");
  IntMatrix out(static_cast<int>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      out.set_entry(static_cast<int>(i) + 1, static_cast<int>(j) + 1, rows[i][j]);
  return out;
}

IntMatrix IntMatrix::embed_corner(int n, const IntMatrix& block) {
  int m = block.dim();
  if (m > n) throw std::invalid_argument("embed_corner: block too large");
  IntMatrix out = identity(n);
  int off = n - m;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) out.set_entry(off + i, off + j, block.entry(i, j));
  return out;
}

IntMatrix IntMatrix::corner_block(int m) const {
  if (m > n_) throw std::invalid_argument("corner_block: block too large");
  IntMatrix out(m);
  int off = n_ - m;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) out.set_entry(i, j, entry(off + i, off + j));
  return out;
}

bool in_congruence(const IntMatrix& g, long q) {
  if (q < 1) throw std::invalid_argument("in_congruence: q must be >= 1");
  for (int i = 1; i <= g.dim(); ++i)
    for (int j = 1; j <= g.dim(); ++j) {
      mpz_class r = g.entry(i, j) - (i == j ? 1 : 0);
      if (!mpz_divisible_ui_p(r.get_mpz_t(), static_cast<unsigned long>(q)))
        return false;
    }
  return true;
}

namespace {

bool triangular_unipotent(const IntMatrix& g, long q, bool upper) {
  if (q < 1) throw std::invalid_argument("unipotent level: q must be >= 1");
  for (int i = 1; i <= g.dim(); ++i) {
    for (int j = 1; j <= g.dim(); ++j) {
      const mpz_class& v = g.entry(i, j);
      if (i == j) {
        if (v != 1) return false;
      } else if ((upper && i > j) || (!upper && i < j)) {
        if (v != 0) return false;
      } else {
        if (!mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(q)))
          return false;
      }
    }
  }
  return true;
}

}  // namespace

bool in_upper_unipotent(const IntMatrix& g, long q) {
  return triangular_unipotent(g, q, true);
}

bool in_lower_unipotent(const IntMatrix& g, long q) {
  return triangular_unipotent(g, q, false);
}

bool mennicke_in_E(const IntMatrix& g, long q) {
  if (g.dim() < 3)
    throw std::domain_error("mennicke_in_E: characterization requires n >= 3");
  if (q < 1) throw std::invalid_argument("mennicke_in_E: q must be >= 1");
  if (g.det() != 1) return false;
  if (!in_congruence(g, q)) return false;
  mpz_class q2 = mpz_class(q) * q;
  for (int i = 1; i <= g.dim(); ++i) {
    mpz_class r = g.entry(i, i) - 1;
    if (!mpz_divisible_p(r.get_mpz_t(), q2.get_mpz_t())) return false;
  }
  return true;
}

}  // namespace slnw
