#ifndef SLNW_LIE_HPP
#define SLNW_LIE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slnw/modmatrix.hpp"

namespace slnw {

// Trace-zero matrices over F_p live in plain ModMatrix values; these
// helpers enforce the invariants where they matter.
bool is_trace_zero(const ModMatrix& A);
bool is_central_lie(const ModMatrix& A);  // scalar matrix

// Basis of sl_n(F_p): E_ij (i != j) then E_11 - E_ii for i = 2..n.
std::vector<ModMatrix> sl_basis(int n, uint64_t p);

// Rank over F_p of (X,Y) -> (X - X^a)^b + (Y - Y^b) on sl_n x sl_n,
// where X^a = a^-1 X a.  Full rank n^2-1 characterizes the surjective
// differential for generating pairs.
int diff_rank(const ModMatrix& a, const ModMatrix& b);

// x^2 + y^2 = c in F_p, p odd (always solvable); lexicographic in x.
std::pair<uint64_t, uint64_t> two_squares(uint64_t c, uint64_t p);

// Point with x,y,z all nonzero, x^2+y^2+z^2 = 0 and x^-2+y^-2+z^-2 != 0.
// Guaranteed for p >= 17; smaller primes fall back to the same exhaustive
// search and may legitimately find nothing.
std::optional<std::array<uint64_t, 3>> curve_point(uint64_t p);

// Conjugators x_1..x_k in SL_n(F_p) with sum x_i^-1 A x_i = B, exact.
// Strategy ladder: nilpotent Jordan reduction, the n=2 antidiagonal route
// through curve_point, the singular/nonsingular split, then the generic
// spanning fallback which always succeeds for non-central A.
struct ConjSumResult {
  std::vector<ModMatrix> conjugators;
  std::string rung;  // which ladder rung produced the decomposition
};

ConjSumResult conj_sum_decompose(const ModMatrix& A, const ModMatrix& B,
                                 uint64_t p);

// Gaussian rank of a dense matrix over F_p (rows x cols, row-major).
int fp_rank(std::vector<uint64_t> rows, int nrows, int ncols, uint64_t p);

}  // namespace slnw

#endif
