#include "slnw/relations.hpp"

namespace slnw {

IntMatrix multiply_factors(int n, const std::vector<ElementaryFactor>& fs) {
  IntMatrix acc = IntMatrix::identity(n);
  for (const auto& f : fs) acc = acc * f.to_matrix(n);
  return acc;
}

std::vector<ElementaryFactor> steinberg_conjugate(int n, int r, int s,
                                                  const mpz_class& b, int i,
                                                  int j, const mpz_class& a) {
  auto in_range = [n](int v) { return v >= 1 && v <= n; };
  if (!in_range(r) || !in_range(s) || !in_range(i) || !in_range(j) || r == s ||
      i == j)
    throw std::invalid_argument("steinberg_conjugate: bad indices");
  if (j == r && i == s)
    throw OutOfRelation(
        "steinberg_conjugate: pattern j=r, i=s is not elementary");
  if (j == r) return {{i, j, a}, {i, s, mpz_class(-a * b)}};
  if (i == s) return {{i, j, a}, {r, j, mpz_class(a * b)}};
  return {{i, j, a}};
}

CommutatorBridge commutator_bridge(int n, const mpz_class& a,
                                   const mpz_class& b) {
  if (n < 2) throw std::invalid_argument("commutator_bridge: need n >= 2");
  int dim = n + 1;
  CommutatorBridge out{
      {{1, 2, mpz_class(-a)}, {2, dim, mpz_class(-b)}, {1, 2, a}, {2, dim, b}},
      {1, dim, mpz_class(a * b)},
      dim};
  return out;
}

}  // namespace slnw
