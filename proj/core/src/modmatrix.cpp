#include "slnw/modmatrix.hpp"

#include <numeric>
#include <sstream>

#include "slnw/matrix.hpp"

namespace slnw {

namespace {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

}  // namespace

uint64_t mod_pow(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

uint64_t mod_inverse(uint64_t a, uint64_t m) {
  int64_t t = 0, nt = 1;
  int64_t r = static_cast<int64_t>(m), nr = static_cast<int64_t>(a % m);
  while (nr != 0) {
    int64_t qq = r / nr;
    std::swap(t -= qq * nt, nt);
    std::swap(r -= qq * nr, nr);
  }
  if (r != 1) throw std::domain_error("mod_inverse: not a unit");
  if (t < 0) t += static_cast<int64_t>(m);
  return static_cast<uint64_t>(t);
}

int val_p(uint64_t x, uint64_t p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

ModMatrix ModMatrix::identity(int n, uint64_t m) {
  ModMatrix out(n, m);
  for (int i = 1; i <= n; ++i) out.set_entry(i, i, 1);
  return out;
}

ModMatrix ModMatrix::elementary(int n, uint64_t m, int i, int j, uint64_t x) {
  if (i == j) throw std::invalid_argument("elementary: i == j");
  ModMatrix out = identity(n, m);
  out.set_entry(i, j, x);
  return out;
}

ModMatrix ModMatrix::operator*(const ModMatrix& rhs) const {
  if (n_ != rhs.n_ || m_ != rhs.m_)
    throw std::invalid_argument("ModMatrix: shape/modulus mismatch");
  ModMatrix out(n_, m_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      __uint128_t acc = 0;
      for (int k = 0; k < n_; ++k)
        acc += static_cast<__uint128_t>(e_[static_cast<size_t>(i) * n_ + k]) *
               rhs.e_[static_cast<size_t>(k) * n_ + j];
      out.e_[static_cast<size_t>(i) * n_ + j] = static_cast<uint64_t>(acc % m_);
    }
  }
  return out;
}

ModMatrix ModMatrix::operator+(const ModMatrix& rhs) const {
  if (n_ != rhs.n_ || m_ != rhs.m_)
    throw std::invalid_argument("ModMatrix: shape/modulus mismatch");
  ModMatrix out(n_, m_);
  for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = (e_[k] + rhs.e_[k]) % m_;
  return out;
}

ModMatrix ModMatrix::operator-(const ModMatrix& rhs) const {
  if (n_ != rhs.n_ || m_ != rhs.m_)
    throw std::invalid_argument("ModMatrix: shape/modulus mismatch");
  ModMatrix out(n_, m_);
  for (size_t k = 0; k < e_.size(); ++k)
    out.e_[k] = (e_[k] + m_ - rhs.e_[k]) % m_;
  return out;
}

uint64_t ModMatrix::det() const {
  // Laplace along the first row; composite moduli rule out plain
  // elimination and the dimensions here are small.  Larger matrices are
  // lifted to Z and handled by Bareiss.
  if (n_ == 1) return e_[0];
  if (n_ == 2) return (mulmod(e_[0], e_[3], m_) + m_ - mulmod(e_[1], e_[2], m_)) % m_;
  if (n_ > 6) {
    IntMatrix lift(n_);
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j)
        lift.set_entry(i, j, mpz_class(static_cast<unsigned long>(entry(i, j))));
    return mpz_fdiv_ui(lift.det().get_mpz_t(), m_);
  }
  uint64_t acc = 0;
  for (int j = 0; j < n_; ++j) {
    if (e_[static_cast<size_t>(j)] == 0) continue;
    ModMatrix minor(n_ - 1, m_);
    for (int r = 1; r < n_; ++r) {
      int cc = 0;
      for (int c = 0; c < n_; ++c) {
        if (c == j) continue;
        minor.e_[static_cast<size_t>(r - 1) * (n_ - 1) + cc] =
            e_[static_cast<size_t>(r) * n_ + c];
        ++cc;
      }
    }
    uint64_t term = mulmod(e_[static_cast<size_t>(j)], minor.det(), m_);
    acc = (j % 2 == 0) ? (acc + term) % m_ : (acc + m_ - term) % m_;
  }
  return acc;
}

uint64_t ModMatrix::trace() const {
  uint64_t t = 0;
  for (int i = 0; i < n_; ++i) t = (t + e_[static_cast<size_t>(i) * n_ + i]) % m_;
  return t;
}

ModMatrix ModMatrix::inverse() const {
  uint64_t d = det();
  uint64_t dinv = mod_inverse(d, m_);  // throws when det is not a unit
  ModMatrix out(n_, m_);
  if (n_ == 1) {
    out.e_[0] = dinv;
    return out;
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      ModMatrix minor(n_ - 1, m_);
      int rr = 0;
      for (int r = 0; r < n_; ++r) {
        if (r == i) continue;
        int cc = 0;
        for (int c = 0; c < n_; ++c) {
          if (c == j) continue;
          minor.e_[static_cast<size_t>(rr) * (n_ - 1) + cc] =
              e_[static_cast<size_t>(r) * n_ + c];
          ++cc;
        }
        ++rr;
      }
      uint64_t cof = mulmod(minor.det(), dinv, m_);
      if ((i + j) % 2 != 0) cof = (m_ - cof) % m_;
      out.e_[static_cast<size_t>(j) * n_ + i] = cof;
    }
  }
  return out;
}

ModMatrix ModMatrix::transpose() const {
  ModMatrix out(n_, m_);
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) out.set_entry(j, i, entry(i, j));
  return out;
}

ModMatrix ModMatrix::conjugate_by_inverse(const ModMatrix& x) const {
  return x.inverse() * (*this) * x;
}

ModMatrix ModMatrix::pow(long e) const {
  ModMatrix base = e < 0 ? inverse() : *this;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  ModMatrix r = identity(n_, m_);
  while (k) {
    if (k & 1) r = r * base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

bool ModMatrix::is_identity() const {
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      if (entry(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

bool ModMatrix::is_scalar() const {
  uint64_t d = entry(1, 1);
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      if (entry(i, j) != (i == j ? d : 0u)) return false;
  return true;
}

ModMatrix ModMatrix::reduce(uint64_t m2) const {
  if (m2 < 2 || m_ % m2 != 0)
    throw std::invalid_argument("ModMatrix::reduce: not a divisor");
  ModMatrix out(n_, m2);
  for (size_t k = 0; k < e_.size(); ++k) out.e_[k] = e_[k] % m2;
  return out;
}

std::optional<uint64_t> ModMatrix::pack() const {
  int bits = 1;
  while ((1ull << bits) < m_) ++bits;
  if (bits * n_ * n_ > 64) return std::nullopt;
  uint64_t key = 0;
  for (uint64_t v : e_) key = (key << bits) | v;
  return key;
}

size_t ModMatrix::hash() const {
  uint64_t h = 1469598103934665603ull;
  for (uint64_t v : e_) {
    h ^= v + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

std::string ModMatrix::to_text() const {
  std::ostringstream os;
  for (int i = 1; i <= n_; ++i) {
    if (i > 1) os << ';';
    for (int j = 1; j <= n_; ++j) {
      if (j > 1) os << ',';
      os << entry(i, j);
    }
  }
  return os.str();
}

ModMatrix ModMatrix::from_text(const std::string& text, uint64_t m) {
  std::vector<std::vector<uint64_t>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    rows.emplace_back();
    std::stringstream rs(row);
    std::string tok;
    while (std::getline(rs, tok, ',')) {
      long long v = std::stoll(tok);
      long long mm = static_cast<long long>(m);
      rows.back().push_back(static_cast<uint64_t>(((v % mm) + mm) % mm));
    }
  }
  size_t n = rows.size();
  if (n == 0) throw std::invalid_argument("matrix text: empty");
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("matrix text: not square");
  ModMatrix out(static_cast<int>(n), m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      out.set_entry(static_cast<int>(i) + 1, static_cast<int>(j) + 1, rows[i][j]);
  return out;
}

}  // namespace slnw
