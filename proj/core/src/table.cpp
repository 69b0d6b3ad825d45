#include "slnw/table.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace slnw {

mpz_class sl_order(int n, uint64_t m) {
  // |SL_n(Z/p^k)| = p^{(k-1)(n^2-1)} |SL_n(F_p)|,
  // |SL_n(F_p)| = p^{n(n-1)/2} prod_{i=2..n} (p^i - 1); multiplicative.
  mpz_class total = 1;
  uint64_t rest = m;
  for (uint64_t p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
    if (rest % p != 0) continue;
    int k = 0;
    while (rest % p == 0) {
      rest /= p;
      ++k;
    }
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class fp;
    mpz_pow_ui(fp.get_mpz_t(), pz.get_mpz_t(),
               static_cast<unsigned long>(n * (n - 1) / 2));
    for (int i = 2; i <= n; ++i) {
      mpz_class pi;
      mpz_pow_ui(pi.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(i));
      fp *= (pi - 1);
    }
    mpz_class lift;
    mpz_pow_ui(lift.get_mpz_t(), pz.get_mpz_t(),
               static_cast<unsigned long>((k - 1) * (n * n - 1)));
    total *= fp * lift;
  }
  if (rest > 1) {
    mpz_class pz(static_cast<unsigned long>(rest));
    mpz_class fp;
    mpz_pow_ui(fp.get_mpz_t(), pz.get_mpz_t(),
               static_cast<unsigned long>(n * (n - 1) / 2));
    for (int i = 2; i <= n; ++i) {
      mpz_class pi;
      mpz_pow_ui(pi.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(i));
      fp *= (pi - 1);
    }
    total *= fp;
  }
  return total;
}

FiniteGroupTable FiniteGroupTable::enumerate(int n, uint64_t m,
                                             uint64_t budget) {
  if (n < 2) throw std::invalid_argument("enumerate: need n >= 2");
  mpz_class expected = sl_order(n, m);
  if (expected > budget)
    throw std::domain_error("enumerate: group order " + expected.get_str() +
                            " exceeds budget");

  FiniteGroupTable T(n, m);
  ModMatrix I = ModMatrix::identity(n, m);
  T.packed_ = I.pack().has_value();
  if (T.packed_) {
    int bits = 1;
    while ((1ull << bits) < m) ++bits;
    T.pack_bits_ = bits;
  }

  std::vector<ModMatrix> gens;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) gens.push_back(ModMatrix::elementary(n, m, i, j, 1));

  auto try_insert = [&](const ModMatrix& g) -> bool {
    uint32_t ord = static_cast<uint32_t>(T.elems_.size());
    if (T.packed_) {
      auto [it, fresh] = T.packed_index_.try_emplace(*g.pack(), ord);
      (void)it;
      if (!fresh) return false;
    } else {
      auto& bucket = T.hashed_index_[g.hash()];
      for (uint32_t o : bucket)
        if (T.elems_[o] == g) return false;
      bucket.push_back(ord);
    }
    T.elems_.push_back(g);
    return true;
  };

  try_insert(I);
  std::deque<uint32_t> queue{0};
  while (!queue.empty()) {
    uint32_t cur = queue.front();
    queue.pop_front();
    for (const auto& gen : gens) {
      ModMatrix next = T.elems_[cur] * gen;
      if (try_insert(next)) {
        if (T.elems_.size() > budget)
          throw std::domain_error("enumerate: budget exceeded during BFS");
        queue.push_back(static_cast<uint32_t>(T.elems_.size() - 1));
      }
    }
  }

  if (mpz_class(static_cast<unsigned long>(T.elems_.size())) != expected)
    throw std::logic_error("enumerate: BFS count disagrees with order formula");

  T.inv_.resize(T.elems_.size());
  for (size_t i = 0; i < T.elems_.size(); ++i)
    T.inv_[i] = T.index_of(T.elems_[i].inverse());
  return T;
}

uint32_t FiniteGroupTable::index_of(const ModMatrix& g) const {
  auto o = try_index_of(g);
  if (!o) throw std::out_of_range("FiniteGroupTable: element not in table");
  return *o;
}

std::optional<uint32_t> FiniteGroupTable::try_index_of(
    const ModMatrix& g) const {
  if (packed_) {
    auto it = packed_index_.find(*g.pack());
    if (it == packed_index_.end()) return std::nullopt;
    return it->second;
  }
  auto it = hashed_index_.find(g.hash());
  if (it == hashed_index_.end()) return std::nullopt;
  for (uint32_t o : it->second)
    if (elems_[o] == g) return o;
  return std::nullopt;
}

uint32_t FiniteGroupTable::mul(uint32_t a, uint32_t b) const {
  return index_of(elems_[a] * elems_[b]);
}

size_t SymSet::count() const {
  size_t c = 0;
  for (uint8_t b : member) c += b;
  return c;
}

bool SymSet::is_symmetric() const {
  for (size_t i = 0; i < member.size(); ++i)
    if (member[i] && !member[table->inv(static_cast<uint32_t>(i))]) return false;
  return true;
}

SymSet whole_group(const FiniteGroupTable& T) {
  SymSet s;
  s.table = &T;
  s.member.assign(T.size(), 1);
  s.conj_invariant = true;
  return s;
}

SymSet singleton_symmetrized(const FiniteGroupTable& T, uint32_t ord) {
  SymSet s;
  s.table = &T;
  s.member.assign(T.size(), 0);
  s.add(ord);
  s.add(T.inv(ord));
  return s;
}

ValueSet value_set(const Word& w, const FiniteGroupTable& T,
                   uint64_t tuple_budget, uint64_t seed,
                   uint64_t samples_if_over_budget) {
  ValueSet out;
  out.set.table = &T;
  out.set.member.assign(T.size(), 0);
  out.set.conj_invariant = true;  // word value sets are conjugation closed
  out.tuple_of.assign(T.size(), {});
  out.exp_of.assign(T.size(), 0);
  out.frequency.assign(T.size(), 0);

  int d = std::max(1, w.arity());
  size_t N = T.size();

  auto record = [&](uint32_t val, const std::vector<uint32_t>& tuple) {
    out.frequency[val] += 1;
    if (!out.set.contains(val)) {
      out.set.add(val);
      out.tuple_of[val] = tuple;
      out.exp_of[val] = 1;
    }
    uint32_t iv = T.inv(val);
    if (!out.set.contains(iv)) {
      out.set.add(iv);
      out.tuple_of[iv] = tuple;  // inverse of the value at this tuple
      out.exp_of[iv] = -1;
    }
  };

  ModMatrix I = ModMatrix::identity(T.dim(), T.modulus());
  auto eval_tuple = [&](const std::vector<uint32_t>& tuple) -> uint32_t {
    std::vector<ModMatrix> mats;
    mats.reserve(tuple.size());
    for (uint32_t o : tuple) mats.push_back(T.element(o));
    ModMatrix v = evaluate_word<ModMatrix>(
        w, std::span<const ModMatrix>(mats.data(), mats.size()), I);
    return T.index_of(v);
  };

  double total_tuples = 1;
  for (int i = 0; i < d; ++i) total_tuples *= static_cast<double>(N);

  if (total_tuples <= static_cast<double>(tuple_budget)) {
    std::vector<uint32_t> tuple(static_cast<size_t>(d), 0);
    while (true) {
      record(eval_tuple(tuple), tuple);
      int pos = d - 1;
      while (pos >= 0) {
        if (++tuple[static_cast<size_t>(pos)] < N) break;
        tuple[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  } else {
    out.approximate = true;
    out.set.approximate = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(N - 1));
    std::vector<uint32_t> tuple(static_cast<size_t>(d), 0);
    for (uint64_t s = 0; s < samples_if_over_budget; ++s) {
      for (auto& t : tuple) t = pick(rng);
      record(eval_tuple(tuple), tuple);
    }
  }
  return out;
}

SymSet power_product(const SymSet& X, int k) {
  if (k < 0) throw std::invalid_argument("power_product: k >= 0");
  const FiniteGroupTable& T = *X.table;
  SymSet acc;
  acc.table = &T;
  acc.member.assign(T.size(), 0);
  acc.add(T.identity_ord());
  std::vector<uint32_t> xs;
  for (size_t i = 0; i < X.member.size(); ++i)
    if (X.member[i]) xs.push_back(static_cast<uint32_t>(i));
  std::vector<uint32_t> frontier{T.identity_ord()};
  for (int layer = 0; layer < k && !frontier.empty(); ++layer) {
    std::vector<uint32_t> next;
    for (uint32_t g : frontier)
      for (uint32_t x : xs) {
        uint32_t h = T.mul(g, x);
        if (!acc.contains(h)) {
          acc.add(h);
          next.push_back(h);
        }
      }
    frontier = std::move(next);
  }
  return acc;
}

ClosureInfo closure_bfs(const SymSet& X) {
  const FiniteGroupTable& T = *X.table;
  ClosureInfo info;
  info.depth.assign(T.size(), -1);
  std::vector<uint32_t> xs;
  for (size_t i = 0; i < X.member.size(); ++i)
    if (X.member[i]) xs.push_back(static_cast<uint32_t>(i));
  info.depth[T.identity_ord()] = 0;
  info.closure_size = 1;
  std::deque<uint32_t> queue{T.identity_ord()};
  while (!queue.empty()) {
    uint32_t g = queue.front();
    queue.pop_front();
    for (uint32_t x : xs) {
      uint32_t h = T.mul(g, x);
      if (info.depth[h] < 0) {
        info.depth[h] = info.depth[g] + 1;
        info.eccentricity = std::max(info.eccentricity, info.depth[h]);
        ++info.closure_size;
        queue.push_back(h);
      }
    }
  }
  return info;
}

WidthResult width_of_word(const Word& w, const FiniteGroupTable& T,
                          uint64_t tuple_budget, uint64_t seed) {
  ValueSet V = value_set(w, T, tuple_budget, seed);
  WidthResult res;
  res.value_count = V.set.count();
  ClosureInfo info = closure_bfs(V.set);
  res.closure_size = info.closure_size;
  res.width = info.eccentricity;
  res.exact = !V.approximate;
  res.lower = res.exact ? res.width : 0;
  if (!res.exact) {
    // Sampling can miss values, which can only overestimate depth; report
    // the sampled eccentricity as the upper end of an interval.
    res.lower = res.width > 0 ? 1 : 0;
  }
  return res;
}

int closure_exponent(const SymSet& X) {
  if (!X.is_symmetric())
    throw std::domain_error("closure_exponent: set is not symmetric");
  return closure_bfs(X).eccentricity;
}

int greedy_cover(const SymSet& X) {
  const FiniteGroupTable& T = *X.table;
  std::vector<uint32_t> xs;
  for (size_t i = 0; i < X.member.size(); ++i)
    if (X.member[i]) xs.push_back(static_cast<uint32_t>(i));
  if (xs.empty()) throw std::domain_error("greedy_cover: empty set");

  std::vector<uint8_t> covered(T.size(), 0);
  size_t covered_count = 0;
  int d = 0;
  bool cheap = static_cast<double>(T.size()) * xs.size() <= 2e7;

  while (covered_count < T.size()) {
    uint32_t best_g = 0;
    size_t best_gain = 0;
    if (cheap) {
      for (uint32_t g = 0; g < T.size(); ++g) {
        size_t gain = 0;
        for (uint32_t x : xs)
          if (!covered[T.mul(g, x)]) ++gain;
        if (gain > best_gain) {
          best_gain = gain;
          best_g = g;
        }
      }
    }
    if (best_gain == 0) {
      // first-uncovered fallback: translate X onto the first gap
      uint32_t u = 0;
      while (covered[u]) ++u;
      best_g = T.mul(u, T.inv(xs[0]));
    }
    for (uint32_t x : xs) {
      uint32_t h = T.mul(best_g, x);
      if (!covered[h]) {
        covered[h] = 1;
        ++covered_count;
      }
    }
    ++d;
  }
  return d;
}

SymSet conjugation_closure(const FiniteGroupTable& T,
                           const std::vector<uint32_t>& seeds) {
  SymSet s;
  s.table = &T;
  s.member.assign(T.size(), 0);
  std::deque<uint32_t> queue;
  auto push = [&](uint32_t o) {
    if (!s.contains(o)) {
      s.add(o);
      queue.push_back(o);
    }
  };
  for (uint32_t o : seeds) {
    push(o);
    push(T.inv(o));
  }
  // closing under the elementary generators closes under everything
  std::vector<uint32_t> gens;
  int n = T.dim();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      gens.push_back(
          T.index_of(ModMatrix::elementary(n, T.modulus(), i, j, 1)));
    }
  while (!queue.empty()) {
    uint32_t g = queue.front();
    queue.pop_front();
    for (uint32_t x : gens) push(T.mul(T.mul(T.inv(x), g), x));
  }
  s.conj_invariant = true;
  return s;
}

bool generates(uint32_t a, uint32_t b, const FiniteGroupTable& T) {
  std::vector<uint8_t> seen(T.size(), 0);
  seen[T.identity_ord()] = 1;
  size_t cnt = 1;
  std::deque<uint32_t> queue{T.identity_ord()};
  while (!queue.empty()) {
    uint32_t g = queue.front();
    queue.pop_front();
    for (uint32_t x : {a, b}) {
      uint32_t h = T.mul(g, x);
      if (!seen[h]) {
        seen[h] = 1;
        ++cnt;
        queue.push_back(h);
      }
    }
  }
  return cnt == T.size();
}

}  // namespace slnw
