#include "slnw/poly.hpp"

#include <stdexcept>

namespace slnw {

Poly Poly::constant(int nvars, const mpz_class& c) {
  Poly p(nvars);
  if (c != 0) p.terms_[Monomial(static_cast<size_t>(nvars), 0)] = c;
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw std::invalid_argument("Poly: bad var");
  Poly p(nvars);
  Monomial m(static_cast<size_t>(nvars), 0);
  m[static_cast<size_t>(index)] = 1;
  p.terms_[std::move(m)] = 1;
  return p;
}

void Poly::add_term(Monomial mono, const mpz_class& coeff) {
  if (coeff == 0) return;
  auto it = terms_.find(mono);
  if (it == terms_.end()) {
    terms_.emplace(std::move(mono), coeff);
  } else {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator+(const Poly& rhs) const {
  Poly out = *this;
  for (const auto& [m, c] : rhs.terms_) out.add_term(m, c);
  return out;
}

Poly Poly::operator-(const Poly& rhs) const {
  Poly out = *this;
  for (const auto& [m, c] : rhs.terms_) out.add_term(m, mpz_class(-c));
  return out;
}

Poly Poly::negate() const {
  Poly out(nvars_);
  for (const auto& [m, c] : terms_) out.terms_[m] = -c;
  return out;
}

Poly Poly::operator*(const Poly& rhs) const {
  Poly out(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : rhs.terms_) {
      Monomial m(static_cast<size_t>(nvars_));
      for (int i = 0; i < nvars_; ++i)
        m[static_cast<size_t>(i)] = static_cast<uint16_t>(
            ma[static_cast<size_t>(i)] + mb[static_cast<size_t>(i)]);
      out.add_term(std::move(m), ca * cb);
    }
  }
  return out;
}

Poly Poly::derivative(int var) const {
  Poly out(nvars_);
  for (const auto& [m, c] : terms_) {
    uint16_t e = m[static_cast<size_t>(var)];
    if (e == 0) continue;
    Monomial md = m;
    md[static_cast<size_t>(var)] = static_cast<uint16_t>(e - 1);
    out.add_term(std::move(md), c * e);
  }
  return out;
}

mpz_class Poly::evaluate(const std::vector<mpz_class>& point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("Poly::evaluate: wrong arity");
  mpz_class acc = 0;
  for (const auto& [m, c] : terms_) {
    mpz_class t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (uint16_t e = 0; e < m[static_cast<size_t>(i)]; ++e)
        t *= point[static_cast<size_t>(i)];
    }
    acc += t;
  }
  return acc;
}

uint64_t Poly::evaluate_mod(const std::vector<uint64_t>& point,
                            uint64_t m) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("Poly::evaluate_mod: wrong arity");
  uint64_t acc = 0;
  for (const auto& [mono, c] : terms_) {
    uint64_t t = mpz_fdiv_ui(c.get_mpz_t(), m);
    for (int i = 0; i < nvars_; ++i) {
      uint16_t e = mono[static_cast<size_t>(i)];
      if (e == 0) continue;
      uint64_t pw = mod_pow(point[static_cast<size_t>(i)], e, m);
      t = static_cast<uint64_t>((static_cast<__uint128_t>(t) * pw) % m);
    }
    acc = (acc + t) % m;
  }
  return acc;
}

std::optional<int> Poly::coeff_valuation(uint64_t p) const {
  if (terms_.empty()) return std::nullopt;
  int best = INT32_MAX;
  for (const auto& [m, c] : terms_) {
    (void)m;
    mpz_class a = abs(c);
    int v = 0;
    while (v < best && mpz_divisible_ui_p(a.get_mpz_t(), p)) {
      a /= static_cast<unsigned long>(p);
      ++v;
    }
    best = std::min(best, v);
    if (best == 0) break;
  }
  return best;
}

std::vector<mpz_class> PolyMap::evaluate(
    const std::vector<mpz_class>& point) const {
  std::vector<mpz_class> out;
  out.reserve(coords.size());
  for (const auto& f : coords) out.push_back(f.evaluate(point));
  return out;
}

std::vector<uint64_t> PolyMap::evaluate_mod(const std::vector<uint64_t>& point,
                                            uint64_t m) const {
  std::vector<uint64_t> out;
  out.reserve(coords.size());
  for (const auto& f : coords) out.push_back(f.evaluate_mod(point, m));
  return out;
}

std::vector<uint64_t> PolyMap::jacobian_mod(const std::vector<uint64_t>& point,
                                            uint64_t m) const {
  std::vector<uint64_t> J;
  J.reserve(coords.size() * static_cast<size_t>(arity_in));
  for (const auto& f : coords)
    for (int v = 0; v < arity_in; ++v)
      J.push_back(f.derivative(v).evaluate_mod(point, m));
  return J;
}

std::optional<int> pval(const PolyMap& f, uint64_t p) {
  std::optional<int> best;
  bool all_zero = true;
  for (const auto& c : f.coords) {
    auto v = c.coeff_valuation(p);
    if (!v) continue;  // zero coordinate does not constrain the minimum
    all_zero = false;
    if (!best || *v < *best) best = v;
  }
  if (all_zero) return std::nullopt;
  return best;
}

namespace {

Poly symbolic_det(const std::vector<std::vector<Poly>>& M) {
  size_t n = M.size();
  if (n == 1) return M[0][0];
  Poly acc(M[0][0].nvars());
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Poly>> minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(M[r][c]);
      minor.push_back(std::move(row));
    }
    Poly term = M[0][j] * symbolic_det(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

std::vector<Poly> symbolic_adjugate(int n, int nvars, int var_offset) {
  std::vector<std::vector<Poly>> X(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      X[static_cast<size_t>(i)].push_back(
          Poly::variable(nvars, var_offset + i * n + j));

  std::vector<Poly> adj(static_cast<size_t>(n) * n, Poly(nvars));
  if (n == 1) {
    adj[0] = Poly::constant(nvars, 1);
    return adj;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<Poly>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<Poly> row;
        for (int c = 0; c < n; ++c)
          if (c != j) row.push_back(X[static_cast<size_t>(r)][static_cast<size_t>(c)]);
        minor.push_back(std::move(row));
      }
      Poly cof = symbolic_det(minor);
      if ((i + j) % 2 != 0) cof = cof.negate();
      // adj[j][i] = cofactor(i, j)
      adj[static_cast<size_t>(j) * n + i] = cof;
    }
  }
  return adj;
}

PolyMap phi_map(const ModMatrix& g, const ModMatrix& h) {
  int n = g.dim();
  if (h.dim() != n || h.modulus() != g.modulus())
    throw std::invalid_argument("phi_map: mismatched inputs");
  int nvars = 2 * n * n;

  auto matrix_vars = [&](int off) {
    std::vector<Poly> M;
    for (int k = 0; k < n * n; ++k) M.push_back(Poly::variable(nvars, off + k));
    return M;
  };
  auto matrix_const = [&](const ModMatrix& M) {
    std::vector<Poly> out;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        out.push_back(Poly::constant(
            nvars, mpz_class(static_cast<unsigned long>(M.entry(i, j)))));
    return out;
  };
  auto mul = [&](const std::vector<Poly>& A, const std::vector<Poly>& B) {
    std::vector<Poly> C(static_cast<size_t>(n) * n, Poly(nvars));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Poly acc(nvars);
        for (int k = 0; k < n; ++k)
          acc = acc + A[static_cast<size_t>(i) * n + k] *
                          B[static_cast<size_t>(k) * n + j];
        C[static_cast<size_t>(i) * n + j] = acc;
      }
    return C;
  };

  std::vector<Poly> x = matrix_vars(0);
  std::vector<Poly> y = matrix_vars(n * n);
  std::vector<Poly> adjx = symbolic_adjugate(n, nvars, 0);
  std::vector<Poly> adjy = symbolic_adjugate(n, nvars, n * n);

  std::vector<Poly> gx = mul(mul(adjx, matrix_const(g)), x);
  std::vector<Poly> hy = mul(mul(adjy, matrix_const(h)), y);
  std::vector<Poly> full = mul(gx, hy);

  PolyMap out;
  out.arity_in = nvars;
  out.coords = std::move(full);
  return out;
}

}  // namespace slnw
