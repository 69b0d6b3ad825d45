#ifndef SLNW_POLY_HPP
#define SLNW_POLY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "slnw/modmatrix.hpp"

namespace slnw {

// Sparse multivariate polynomial with exact integer coefficients.
// Monomials are exponent vectors over a fixed variable count.
class Poly {
 public:
  using Monomial = std::vector<uint16_t>;

  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, const mpz_class& c);
  static Poly variable(int nvars, int index);  // 0-based

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, mpz_class>& terms() const { return terms_; }

  Poly operator+(const Poly& rhs) const;
  Poly operator-(const Poly& rhs) const;
  Poly operator*(const Poly& rhs) const;
  Poly negate() const;

  Poly derivative(int var) const;

  mpz_class evaluate(const std::vector<mpz_class>& point) const;
  uint64_t evaluate_mod(const std::vector<uint64_t>& point, uint64_t m) const;

  // Largest k with p^k dividing every coefficient; nullopt for the zero
  // polynomial (valuation +infinity).
  std::optional<int> coeff_valuation(uint64_t p) const;

  void add_term(Monomial mono, const mpz_class& coeff);

 private:
  int nvars_;
  std::map<Monomial, mpz_class> terms_;
};

// Polynomial map Z^s -> Z^t as one polynomial per target coordinate.
struct PolyMap {
  int arity_in = 0;
  std::vector<Poly> coords;

  int arity_out() const { return static_cast<int>(coords.size()); }
  std::vector<mpz_class> evaluate(const std::vector<mpz_class>& point) const;
  std::vector<uint64_t> evaluate_mod(const std::vector<uint64_t>& point,
                                     uint64_t m) const;
  // Jacobian evaluated mod m, row-major t x s.
  std::vector<uint64_t> jacobian_mod(const std::vector<uint64_t>& point,
                                     uint64_t m) const;
};

// min over coordinates of coeff_valuation; nullopt for the zero map.
std::optional<int> pval(const PolyMap& f, uint64_t p);

// Entries of the adjugate of an n x n matrix of variables, as polynomials
// in the entries (row-major variable layout starting at var_offset).
std::vector<Poly> symbolic_adjugate(int n, int nvars, int var_offset);

// The map (x, y) -> adj(x) g x adj(y) h y on matrix coordinates; agrees
// with (g^x)(h^y) on SL_n where adj = inverse.  Variables: x row-major,
// then y row-major (2 n^2 inputs, n^2 outputs).
PolyMap phi_map(const ModMatrix& g, const ModMatrix& h);

}  // namespace slnw

#endif
