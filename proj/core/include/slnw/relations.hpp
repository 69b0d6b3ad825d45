#ifndef SLNW_RELATIONS_HPP
#define SLNW_RELATIONS_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "slnw/matrix.hpp"

namespace slnw {

// A single elementary matrix e_{i,j}(x), kept symbolic so relation output
// can be inspected without multiplying anything.
struct ElementaryFactor {
  int i;
  int j;
  mpz_class x;

  IntMatrix to_matrix(int n) const { return IntMatrix::elementary(n, i, j, x); }
  bool operator==(const ElementaryFactor&) const = default;
};

IntMatrix multiply_factors(int n, const std::vector<ElementaryFactor>& fs);

// Thrown for the index pattern j == r and i == s, where the conjugate of
// e_{i,j}(a) by e_{r,s}(b) is not a product of elementaries.
struct OutOfRelation : std::domain_error {
  using std::domain_error::domain_error;
};

// Rewrites e_{r,s}(b) e_{i,j}(a) e_{r,s}(b)^-1 as a product of elementary
// matrices, by case on the index pattern:
//   j == r, i != s  ->  e_{i,j}(a) e_{i,s}(-ab)
//   j != r, i == s  ->  e_{i,j}(a) e_{r,j}(ab)
//   j != r, i != s  ->  e_{i,j}(a)
std::vector<ElementaryFactor> steinberg_conjugate(int n, int r, int s,
                                                  const mpz_class& b, int i,
                                                  int j, const mpz_class& a);

// e_{1,n+1}(ab) written as the commutator [e_{1,2}(a), e_{2,n+1}(b)] with
// the convention [g,h] = g^-1 h^-1 g h.  Works in SL_{n+1}.
struct CommutatorBridge {
  std::vector<ElementaryFactor> factors;  // g^-1, h^-1, g, h
  ElementaryFactor target;                // e_{1,n+1}(ab)
  int dim;                                // n + 1
};

CommutatorBridge commutator_bridge(int n, const mpz_class& a, const mpz_class& b);

}  // namespace slnw

#endif
