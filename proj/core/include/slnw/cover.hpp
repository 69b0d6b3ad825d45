#ifndef SLNW_COVER_HPP
#define SLNW_COVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slnw/modmatrix.hpp"
#include "slnw/table.hpp"
#include "slnw/word.hpp"

namespace slnw {

// One word value at precision K, pinned by its defining tuple so the
// certificate can be replayed without trusting the stored value.
struct WordValueFactor {
  std::vector<ModMatrix> tuple;
  int exponent = 1;  // the factor is w(tuple)^exponent
  ModMatrix value;

  WordValueFactor() : value(ModMatrix::identity(1, 2)) {}
};

struct LiftSample {
  ModMatrix target;
  std::vector<WordValueFactor> factors;  // exact product == target mod p^K
  int residual_valuation = 0;            // K when the product is exact

  LiftSample() : target(ModMatrix::identity(1, 2)) {}
};

// Evidence object for the sampled covering at precision K: every sampled
// target is expressed through at most 7 symmetrized word values mod p^K.
struct LiftCertificate {
  Word w;
  int n = 0;
  uint64_t p = 0;
  int K = 0;
  uint64_t seed = 0;
  std::string status;  // PASS / FAIL / INCONCLUSIVE
  std::string note;
  std::vector<LiftSample> samples;

  std::string serialize() const;
  static LiftCertificate deserialize(const std::string& text);
};

struct LiftVerifyReport {
  bool ok = true;
  std::string detail;
  int failed_sample = -1;
};

// Replays every sample: factors re-evaluated from their tuples, product
// compared with the target, residual valuations recomputed.
LiftVerifyReport verify_lift_certificate(const LiftCertificate& cert);

// Builds the certificate: finds a generating pair among the word values
// mod p, lifts the pair to precision K, expresses each sampled target as
// (<=3 mod-p correction values) * g^x * h^y via the group Newton.
LiftCertificate word_coset_cover(const Word& w, int n, uint64_t p, int K,
                                 int samples, uint64_t seed = 1,
                                 uint64_t budget = 10000000);

// min over members of the first level where the element is not central,
// or nullopt when X is central at every level below K.
std::optional<int> level_k(const SymSet& X, uint64_t p, int K);

// Constructive upper bound on the closure exponent of X at precision K,
// by the level split: covering+lifting at level 0, conjugate-sum transport
// through sl_n(F_p) above.  The bound is cross-checked against the BFS
// closure exponent when the table is small enough.
struct PadicWidthBound {
  int bound = 0;
  std::string case_tag;
  bool lift_verified = false;  // sampled Newton runs all landed
  int oracle_exponent = -1;    // exact exponent when the oracle ran
};

PadicWidthBound padic_width_bound(const SymSet& X, uint64_t p, int K,
                                  uint64_t oracle_budget = 10000000,
                                  int lift_samples = 8, uint64_t seed = 1);

}  // namespace slnw

#endif
