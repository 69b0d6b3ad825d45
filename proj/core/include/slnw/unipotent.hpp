#ifndef SLNW_UNIPOTENT_HPP
#define SLNW_UNIPOTENT_HPP

#include <gmpxx.h>

#include <array>
#include <vector>

#include "slnw/matrix.hpp"
#include "slnw/word.hpp"

namespace slnw {

// Three block-diagonal matrices in U_n(Z;q), built from 3x3 upper-unipotent
// blocks at offsets 0, 1, 2.  Each carries the superdiagonal entries q*a_i
// for one residue class of i mod 3, so the product has superdiagonal exactly
// q*a.
std::array<IntMatrix, 3> tridiagonal_cover(long q,
                                           const std::vector<mpz_class>& a,
                                           int n);

// For g, g' in U_n(Z;q) with every superdiagonal entry equal to q, returns
// an upper unipotent h with h g h^-1 = g'.  Solved one diagonal at a time,
// sweeping outward from the superdiagonal.
IntMatrix superdiag_conjugator(const IntMatrix& g, const IntMatrix& gp, long q);

// Sanov generators of a free subgroup of SL_2(Z).
IntMatrix sanov_a();
IntMatrix sanov_b();

// The q-witness pipeline: a nontrivial word evaluated on the Sanov pair,
// embedded in SL_3, gives a commutator with the column group that is
// conjugate to e_{1,3}(q) for a positive q.
struct QWitness {
  Word w;
  IntMatrix g;           // embedded word value in SL_3(Z)
  IntMatrix h;           // from <e_{1,3}(1), e_{2,3}(1)>
  IntMatrix commutator;  // [g,h] = g^-1 h^-1 g h
  long q;                // gcd of the column commutator entries
  IntMatrix conjugator;  // c with c [g,h] c^-1 = e_{1,3}(q)

  QWitness()
      : g(IntMatrix::identity(3)),
        h(IntMatrix::identity(3)),
        commutator(IntMatrix::identity(3)),
        q(0),
        conjugator(IntMatrix::identity(3)) {}
};

QWitness q_witness(const Word& w);

}  // namespace slnw

#endif
