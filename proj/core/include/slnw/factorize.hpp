#ifndef SLNW_FACTORIZE_HPP
#define SLNW_FACTORIZE_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "slnw/certificate.hpp"
#include "slnw/matrix.hpp"

namespace slnw {

// diag(g_1,...,g_m) = l1^-1 u1^-1 l2 u2 for 3x3 blocks g_i in SL_3(Z;q)
// multiplying to the identity.  The certificate regroups this as
// (l1^-1 l2)(l2^-1 u1^-1 l2) u2, classes L, Uc, U.
struct BlockDiagSplit {
  IntMatrix l1, u1, l2, u2;
  FactorCertificate certificate;
};

BlockDiagSplit block_diag_factor(const std::vector<IntMatrix>& blocks, long q);

struct ULPair {
  IntMatrix u;
  IntMatrix l;
};

// diag(g_1...g_m, I_3, ..., I_3) with g_i = u_i l_i, classes L,Uc,U,L.
FactorCertificate corner_factor(const std::vector<ULPair>& blocks, long q);

// Same compression with the product block at the lower-right corner of an
// ambient n >= 3m matrix; used by the main pipeline.
FactorCertificate corner_factor_bottom(const std::vector<ULPair>& blocks,
                                       long q, int ambient_n);

// t_2..t_m with gcd(a_2 - t_2 a_1, ..., a_m - t_m a_1) = gcd(a_1,...,a_m).
// Small box search first, then a prime-by-prime construction that always
// terminates.
std::vector<mpz_class> stable_range_coeffs(const std::vector<mpz_class>& a);

// One induction step of the column/row reduction:
//   g = c1 * r1 * c2 * diag(1, reduced) * r2
// with c1, c2 products of e_{i,1}(qZ), r1, r2 products of e_{1,j}(qZ).
struct PeelStep {
  IntMatrix c1, r1, c2, r2;
  IntMatrix reduced;  // size n-1, passes the same diagonal test
};

PeelStep peel_once(const IntMatrix& g, long q);

// g = l * reduced * u with l, u level-q unipotents and the middle factor
// entry-reduced; the outer factors ride along with neighbouring certificate
// factors for free.
struct LUReduction {
  IntMatrix l, reduced, u;
};
LUReduction size_reduce_lu(const IntMatrix& g, long q);

// Certificate with class sequence L,U,L,Eblock,U; the Eblock corner has the
// requested size m.
FactorCertificate factor_E(const IntMatrix& g, long q, int m = 3);

// Best-effort alternating U/L factorization of a 3x3 candidate by greedy
// entry-magnitude reduction.  No completeness claim: when the search budget
// runs out the residual is reported instead.
struct AlternatingResult {
  bool ok = false;
  std::vector<ClassifiedFactor> factors;  // alternating classes, product = g
  IntMatrix residual;                     // best remaining matrix when !ok
  AlternatingResult() : residual(IntMatrix::identity(3)) {}
};

AlternatingResult alternating_factor3(const IntMatrix& g, long q, int max_len);

enum class FactorStatus { Ok, SoftFail };

// Full pipeline: peel to a 3x3 corner, factor the corner into alternating
// unipotents, compress through the block construction, absorb everything
// into exactly five factors L,Uc,Uc,Uc,U.
struct LU3UResult {
  FactorStatus status = FactorStatus::SoftFail;
  FactorCertificate certificate;  // meaningful when status == Ok
  std::string detail;             // residual diagnostics on soft failure
};

LU3UResult factor_LU3U(const IntMatrix& g, long q, int max_len = 96);

// Conjugator swapping the upper and lower unipotent groups: h* L h*^-1 = U
// at every level q.  Reversal permutation with a sign fix, det = 1.
IntMatrix reversal_conjugator(int n);

}  // namespace slnw

#endif
