#ifndef SLNW_TABLE_HPP
#define SLNW_TABLE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "slnw/modmatrix.hpp"
#include "slnw/word.hpp"

namespace slnw {

// |SL_n(Z/m)| by the standard order formula, multiplicative over prime
// powers.  Used as the enumeration budget estimate and as an independent
// cross-check of the BFS count.
mpz_class sl_order(int n, uint64_t m);

// Fully enumerated SL_n(Z/m) with ordinal indexing.  Elements are found by
// BFS from the elementary generators; ordinal 0 is the identity.
class FiniteGroupTable {
 public:
  static FiniteGroupTable enumerate(int n, uint64_t m,
                                    uint64_t budget = 10000000);

  int dim() const { return n_; }
  uint64_t modulus() const { return m_; }
  size_t size() const { return elems_.size(); }

  const ModMatrix& element(uint32_t ord) const { return elems_[ord]; }
  uint32_t index_of(const ModMatrix& g) const;
  std::optional<uint32_t> try_index_of(const ModMatrix& g) const;

  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t inv(uint32_t a) const { return inv_[a]; }
  uint32_t identity_ord() const { return 0; }

 private:
  FiniteGroupTable(int n, uint64_t m) : n_(n), m_(m) {}

  int n_;
  uint64_t m_;
  std::vector<ModMatrix> elems_;
  std::vector<uint32_t> inv_;
  bool packed_ = false;
  int pack_bits_ = 0;
  std::unordered_map<uint64_t, uint32_t> packed_index_;
  std::unordered_map<size_t, std::vector<uint32_t>> hashed_index_;
};

// Symmetric subset of a group table as a membership bitmap.
struct SymSet {
  const FiniteGroupTable* table = nullptr;
  std::vector<uint8_t> member;
  bool approximate = false;      // built from sampling, may undercount
  bool conj_invariant = false;   // flagged by construction

  size_t count() const;
  bool contains(uint32_t ord) const { return member[ord] != 0; }
  void add(uint32_t ord) { member[ord] = 1; }
  bool is_symmetric() const;
};

SymSet whole_group(const FiniteGroupTable& T);
SymSet singleton_symmetrized(const FiniteGroupTable& T, uint32_t ord);

// Word values over all tuples, symmetrized (values and inverses).  Records
// one defining tuple per value and the value frequency; switches to seeded
// sampling above the tuple budget and marks the result approximate.
struct ValueSet {
  SymSet set;
  // defining tuple (ordinals) for each member ordinal; empty if untouched
  std::vector<std::vector<uint32_t>> tuple_of;
  // +1 when the member is w(tuple), -1 when it is w(tuple)^-1
  std::vector<int8_t> exp_of;
  std::vector<uint64_t> frequency;
  bool approximate = false;
};

ValueSet value_set(const Word& w, const FiniteGroupTable& T,
                   uint64_t tuple_budget = 10000000, uint64_t seed = 1,
                   uint64_t samples_if_over_budget = 200000);

// X^k with the identity adjoined; monotone in k.
SymSet power_product(const SymSet& X, int k);

// BFS depths over <X> using generators X (identity allowed): depth[g] is
// the least number of X-factors producing g, or -1 outside the closure.
struct ClosureInfo {
  std::vector<int32_t> depth;
  size_t closure_size = 0;
  int eccentricity = 0;
};
ClosureInfo closure_bfs(const SymSet& X);

// Least C with power_product(value_set, C) = the generated subgroup;
// 0 when the value set is {I}.
struct WidthResult {
  int width = 0;
  size_t value_count = 0;
  size_t closure_size = 0;
  bool exact = true;
  int lower = 0;  // sampling mode: [lower, width] is the reported interval
};
WidthResult width_of_word(const Word& w, const FiniteGroupTable& T,
                          uint64_t tuple_budget = 10000000, uint64_t seed = 1);

// Least k with X^k = X^{k+1} (then X^k is the closure subgroup).
int closure_exponent(const SymSet& X);

// Greedy translate cover of the whole group by copies of X; the result is
// a valid cover size, an upper bound on the optimum.
int greedy_cover(const SymSet& X);

bool generates(uint32_t a, uint32_t b, const FiniteGroupTable& T);

// Symmetrized closure of the seeds under conjugation by the whole group.
SymSet conjugation_closure(const FiniteGroupTable& T,
                           const std::vector<uint32_t>& seeds);

}  // namespace slnw

#endif
