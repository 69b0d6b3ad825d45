#ifndef SLNW_PADIC_HPP
#define SLNW_PADIC_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "slnw/modmatrix.hpp"
#include "slnw/poly.hpp"

namespace slnw {

// Any solution of M z == v (mod p^achieved), achieved as high as the system
// permits (K when consistent).  Gaussian elimination with valuation-aware
// pivoting over Z/p^K; free variables are set to zero.
struct ModLinearSolution {
  std::vector<uint64_t> z;
  int achieved = 0;    // precision actually satisfied
  int rank_mod_p = 0;  // pivots that are units
};

ModLinearSolution linear_solve_mod(std::vector<uint64_t> M,
                                   std::vector<uint64_t> v, int rows, int cols,
                                   uint64_t p, int K);

// Newton iteration for f(a*) == b (mod p^K) from a start within p^{-k-1}.
// The residual valuation strictly increases each step; the run fails fast
// with the offending rank when the differential cannot cover the request.
struct NewtonResult {
  bool ok = false;
  std::vector<uint64_t> point;
  std::vector<int> residual_valuations;  // per accepted iteration
  std::string error;
};

NewtonResult newton_lift(const PolyMap& f, std::vector<uint64_t> start,
                         const std::vector<uint64_t>& target, uint64_t p,
                         int k, int K);

// Group-coordinate Newton for (x, y) -> (x^-1 g x)(y^-1 h y) == target,
// with updates x <- x(I + xi), y <- y(I + eta) along trace-zero directions.
struct PhiLiftResult {
  bool ok = false;
  ModMatrix x, y;
  std::vector<int> residual_valuations;
  std::string error;

  PhiLiftResult() : x(ModMatrix::identity(1, 2)), y(ModMatrix::identity(1, 2)) {}
};

PhiLiftResult phi_lift(const ModMatrix& g, const ModMatrix& h,
                       const ModMatrix& target, uint64_t p, int k, int K);

// Uniform-ish element of SL_n(Z/p^K): random unit-determinant matrix with a
// row rescaled to determinant one.  Deterministic given the generator.
ModMatrix random_sl(int n, uint64_t p, int K, std::mt19937_64& rng);

// Entrywise lift from mod p to mod p^K with the determinant pushed back to
// exactly one; the reduction mod p is unchanged.
ModMatrix lift_to_precision(const ModMatrix& g, int K);

}  // namespace slnw

#endif
