#include "slnw/cover.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "slnw/certificate.hpp"  // text_checksum
#include "slnw/lie.hpp"
#include "slnw/padic.hpp"

namespace slnw {

namespace {

uint64_t pow_u64(uint64_t p, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

ModMatrix eval_factor(const Word& w, const WordValueFactor& f, int n,
                      uint64_t m) {
  ModMatrix v = evaluate_word<ModMatrix>(
      w, std::span<const ModMatrix>(f.tuple.data(), f.tuple.size()),
      ModMatrix::identity(n, m));
  return f.exponent >= 0 ? v : v.inverse();
}

int matrix_residual_valuation(const ModMatrix& a, const ModMatrix& b,
                              uint64_t p, int K) {
  ModMatrix d = a - b;
  int best = K;
  for (int i = 1; i <= d.dim(); ++i)
    for (int j = 1; j <= d.dim(); ++j)
      best = std::min(best, val_p(d.entry(i, j), p, K));
  return best;
}

}  // namespace

std::string LiftCertificate::serialize() const {
  std::ostringstream os;
  os << "slnw-lift-certificate v1\n";
  os << "word " << w.to_text() << "\n";
  os << "n " << n << "\n";
  os << "p " << p << "\n";
  os << "K " << K << "\n";
  os << "seed " << seed << "\n";
  os << "status " << status << "\n";
  if (!note.empty()) os << "note " << note << "\n";
  os << "samples " << samples.size() << "\n";
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    os << "sample " << (i + 1) << "\n";
    os << "target " << s.target.to_text() << "\n";
    os << "factors " << s.factors.size() << "\n";
    for (const auto& f : s.factors) {
      os << "factor exp " << f.exponent << " value " << f.value.to_text()
         << " tuple";
      for (const auto& t : f.tuple) os << " " << t.to_text();
      os << "\n";
    }
    os << "residual " << s.residual_valuation << "\n";
  }
  std::string body = os.str();
  std::ostringstream out;
  out << body << "checksum " << std::hex << text_checksum(body) << "\n";
  return out.str();
}

LiftCertificate LiftCertificate::deserialize(const std::string& text) {
  size_t cs = text.rfind("checksum ");
  if (cs == std::string::npos)
    throw std::invalid_argument("lift certificate: missing checksum");
  std::string body = text.substr(0, cs);
  uint64_t stored = std::stoull(text.substr(cs + 9), nullptr, 16);
  if (stored != text_checksum(body))
    throw std::invalid_argument("lift certificate: checksum mismatch");

  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line) || line != "slnw-lift-certificate v1")
    throw std::invalid_argument("lift certificate: bad header");

  LiftCertificate cert;
  size_t nsamples = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "word") {
      std::string rest = line.substr(5);
      cert.w = Word::parse(rest == "1" ? "" : rest);
    } else if (key == "n") {
      ls >> cert.n;
    } else if (key == "p") {
      ls >> cert.p;
    } else if (key == "K") {
      ls >> cert.K;
    } else if (key == "seed") {
      ls >> cert.seed;
    } else if (key == "status") {
      ls >> cert.status;
    } else if (key == "note") {
      cert.note = line.substr(5);
    } else if (key == "samples") {
      ls >> nsamples;
      break;
    }
  }
  uint64_t m = pow_u64(cert.p, cert.K);
  for (size_t i = 0; i < nsamples; ++i) {
    LiftSample s;
    std::string key;
    size_t idx = 0, nfac = 0;
    if (!(in >> key >> idx) || key != "sample")
      throw std::invalid_argument("lift certificate: expected sample");
    if (!(in >> key) || key != "target")
      throw std::invalid_argument("lift certificate: expected target");
    std::string mat;
    in >> mat;
    s.target = ModMatrix::from_text(mat, m);
    if (!(in >> key >> nfac) || key != "factors")
      throw std::invalid_argument("lift certificate: expected factors");
    for (size_t fi = 0; fi < nfac; ++fi) {
      WordValueFactor f;
      std::string tup;
      if (!(in >> key) || key != "factor")
        throw std::invalid_argument("lift certificate: expected factor");
      in >> key >> f.exponent;  // "exp" e
      in >> key >> mat;         // "value" matrix
      f.value = ModMatrix::from_text(mat, m);
      in >> key;  // "tuple"
      int d = std::max(1, cert.w.arity());
      for (int ti = 0; ti < d; ++ti) {
        in >> tup;
        f.tuple.push_back(ModMatrix::from_text(tup, m));
      }
      s.factors.push_back(std::move(f));
    }
    if (!(in >> key >> s.residual_valuation) || key != "residual")
      throw std::invalid_argument("lift certificate: expected residual");
    cert.samples.push_back(std::move(s));
  }
  return cert;
}

LiftVerifyReport verify_lift_certificate(const LiftCertificate& cert) {
  LiftVerifyReport rep;
  uint64_t m = pow_u64(cert.p, cert.K);
  for (size_t i = 0; i < cert.samples.size(); ++i) {
    const auto& s = cert.samples[i];
    if (s.factors.size() > 7) {
      rep.ok = false;
      rep.failed_sample = static_cast<int>(i) + 1;
      rep.detail = "more than 7 factors";
      return rep;
    }
    ModMatrix prod = ModMatrix::identity(cert.n, m);
    for (const auto& f : s.factors) {
      ModMatrix v = eval_factor(cert.w, f, cert.n, m);
      if (!(v == f.value)) {
        rep.ok = false;
        rep.failed_sample = static_cast<int>(i) + 1;
        rep.detail = "stored factor value does not match its tuple";
        return rep;
      }
      prod = prod * v;
    }
    int rv = matrix_residual_valuation(prod, s.target, cert.p, cert.K);
    if (rv < s.residual_valuation) {
      rep.ok = false;
      rep.failed_sample = static_cast<int>(i) + 1;
      rep.detail = "product does not reach the recorded residual valuation";
      return rep;
    }
  }
  return rep;
}

LiftCertificate word_coset_cover(const Word& w, int n, uint64_t p, int K,
                                 int samples, uint64_t seed, uint64_t budget) {
  LiftCertificate cert;
  cert.w = w;
  cert.n = n;
  cert.p = p;
  cert.K = K;
  cert.seed = seed;
  uint64_t m = pow_u64(p, K);
  std::mt19937_64 rng(seed);

  // A single-letter word is its own covering: every target is a value.
  if (w.length() == 1) {
    for (int i = 0; i < samples; ++i) {
      LiftSample s;
      s.target = random_sl(n, p, K, rng);
      WordValueFactor f;
      int g = w.letters()[0].gen;
      f.exponent = w.letters()[0].sign;
      f.tuple.assign(static_cast<size_t>(std::max(1, w.arity())),
                     ModMatrix::identity(n, m));
      f.tuple[static_cast<size_t>(g - 1)] =
          f.exponent > 0 ? s.target : s.target.inverse();
      f.value = s.target;
      s.factors.push_back(std::move(f));
      s.residual_valuation = K;
      cert.samples.push_back(std::move(s));
    }
    cert.status = "PASS";
    return cert;
  }

  FiniteGroupTable Tp = FiniteGroupTable::enumerate(n, p, budget);
  ValueSet V = value_set(w, Tp, budget, seed);

  // Generating pair search: decreasing value frequency, then ordinal.
  std::vector<uint32_t> cands;
  for (uint32_t o = 0; o < Tp.size(); ++o)
    if (V.set.contains(o)) cands.push_back(o);
  std::stable_sort(cands.begin(), cands.end(), [&](uint32_t a, uint32_t b) {
    return V.frequency[a] > V.frequency[b];
  });
  if (cands.size() > 48) cands.resize(48);
  std::optional<std::pair<uint32_t, uint32_t>> pair;
  for (size_t i = 0; i < cands.size() && !pair; ++i)
    for (size_t j = 0; j < cands.size() && !pair; ++j) {
      if (generates(cands[i], cands[j], Tp)) pair = {cands[i], cands[j]};
    }
  if (!pair) {
    cert.status = "INCONCLUSIVE";
    cert.note = "no generating pair among the word values mod p";
    return cert;
  }
  auto [aord, bord] = *pair;

  // Lift the pair to precision K as word values.
  auto lift_value = [&](uint32_t ord) {
    WordValueFactor f;
    f.exponent = V.exp_of[ord];
    for (uint32_t t : V.tuple_of[ord])
      f.tuple.push_back(lift_to_precision(Tp.element(t), K));
    f.value = eval_factor(w, f, n, m);
    return f;
  };
  WordValueFactor gf = lift_value(aord);
  WordValueFactor hf = lift_value(bord);
  ModMatrix g = gf.value;
  ModMatrix h = hf.value;

  // BFS over the value set mod p, depth <= 3, with parents for readback.
  std::vector<int32_t> depth(Tp.size(), -1);
  std::vector<uint32_t> parent(Tp.size(), 0);
  std::vector<uint32_t> via(Tp.size(), 0);
  std::vector<uint32_t> vals;
  for (uint32_t o = 0; o < Tp.size(); ++o)
    if (V.set.contains(o)) vals.push_back(o);
  depth[Tp.identity_ord()] = 0;
  std::deque<uint32_t> queue{Tp.identity_ord()};
  while (!queue.empty()) {
    uint32_t cur = queue.front();
    queue.pop_front();
    if (depth[cur] >= 3) continue;
    for (uint32_t x : vals) {
      uint32_t nx = Tp.mul(cur, x);
      if (depth[nx] < 0) {
        depth[nx] = depth[cur] + 1;
        parent[nx] = cur;
        via[nx] = x;
        queue.push_back(nx);
      }
    }
  }

  uint32_t ghbar = Tp.mul(Tp.index_of(g.reduce(p)), Tp.index_of(h.reduce(p)));
  bool all_ok = true;
  for (int i = 0; i < samples; ++i) {
    LiftSample s;
    s.target = random_sl(n, p, K, rng);
    uint32_t tbar = Tp.index_of(s.target.reduce(p));
    uint32_t cbar = Tp.mul(tbar, Tp.inv(ghbar));
    if (depth[cbar] < 0) {
      all_ok = false;
      cert.note = "mod-p correction outside three value-set layers";
      s.residual_valuation = 0;
      cert.samples.push_back(std::move(s));
      break;
    }
    // correction factors, outermost first
    std::vector<uint32_t> path;
    for (uint32_t cur = cbar; cur != Tp.identity_ord(); cur = parent[cur])
      path.push_back(via[cur]);
    std::reverse(path.begin(), path.end());
    ModMatrix c = ModMatrix::identity(n, m);
    std::vector<WordValueFactor> cfs;
    for (uint32_t v : path) {
      WordValueFactor f = lift_value(v);
      c = c * f.value;
      cfs.push_back(std::move(f));
    }
    ModMatrix tprime = c.inverse() * s.target;
    PhiLiftResult lift = phi_lift(g, h, tprime, p, 0, K);
    if (!lift.ok) {
      all_ok = false;
      cert.note = "lift failed: " + lift.error;
      s.residual_valuation = 0;
      cert.samples.push_back(std::move(s));
      break;
    }
    // factors: corrections, then g^x, then h^y, tuples conjugated in step
    for (auto& f : cfs) s.factors.push_back(std::move(f));
    WordValueFactor fx = gf;
    for (auto& t : fx.tuple) t = t.conjugate_by_inverse(lift.x);
    fx.value = gf.value.conjugate_by_inverse(lift.x);
    WordValueFactor fy = hf;
    for (auto& t : fy.tuple) t = t.conjugate_by_inverse(lift.y);
    fy.value = hf.value.conjugate_by_inverse(lift.y);
    s.factors.push_back(std::move(fx));
    s.factors.push_back(std::move(fy));

    ModMatrix prod = ModMatrix::identity(n, m);
    for (const auto& f : s.factors) prod = prod * f.value;
    s.residual_valuation = matrix_residual_valuation(prod, s.target, p, K);
    if (s.residual_valuation < K) {
      all_ok = false;
      cert.note = "sample product failed exact replay";
      cert.samples.push_back(std::move(s));
      break;
    }
    cert.samples.push_back(std::move(s));
  }
  cert.status = all_ok ? "PASS" : "FAIL";
  return cert;
}

std::optional<int> level_k(const SymSet& X, uint64_t p, int K) {
  const FiniteGroupTable& T = *X.table;
  std::optional<int> best;
  for (uint32_t o = 0; o < T.size(); ++o) {
    if (!X.contains(o)) continue;
    const ModMatrix& g = T.element(o);
    for (int i = 0; i < K; ++i) {
      if (!g.reduce(pow_u64(p, i + 1)).is_scalar()) {
        if (!best || i < *best) best = i;
        break;
      }
    }
    if (best && *best == 0) return 0;
  }
  return best;
}

namespace {

// (x - I) / p^k reduced mod p: the level-k layer as a Lie element.
ModMatrix level_layer(const ModMatrix& x, uint64_t p, int k) {
  uint64_t pk = pow_u64(p, k);
  int n = x.dim();
  ModMatrix out(n, p);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      uint64_t e = (x.entry(i, j) + x.modulus() - (i == j ? 1 : 0)) % x.modulus();
      if (e % pk != 0)
        throw std::logic_error("level_layer: element not at the stated level");
      out.set_entry(i, j, (e / pk) % p);
    }
  return out;
}

int count_scalar_roots(int n, uint64_t m) {
  int z = 0;
  for (uint64_t l = 0; l < m; ++l)
    if (mod_pow(l, static_cast<uint64_t>(n), m) == 1 % m) ++z;
  return z;
}

// Zero target decomposes as the empty sum; everything else goes through
// the full ladder.
ConjSumResult conj_sum_decompose_or_empty(const ModMatrix& A,
                                          const ModMatrix& B, uint64_t p) {
  ModMatrix zero(B.dim(), p);
  if (B == zero) return ConjSumResult{{}, "zero-target"};
  return conj_sum_decompose(A, B, p);
}

}  // namespace

PadicWidthBound padic_width_bound(const SymSet& X, uint64_t p, int K,
                                  uint64_t oracle_budget, int lift_samples,
                                  uint64_t seed) {
  const FiniteGroupTable& T = *X.table;
  int n = T.dim();
  uint64_t m = T.modulus();
  if (n < 3) throw std::invalid_argument("padic_width_bound: need n >= 3");
  if (!X.is_symmetric())
    throw std::domain_error("padic_width_bound: X not symmetric");

  PadicWidthBound out;
  ClosureInfo closure = closure_bfs(X);

  // already a subgroup: one layer suffices
  if (X.count() == closure.closure_size) {
    out.bound = closure.eccentricity;  // 0 for {I}, 1 otherwise
    out.case_tag = "subgroup";
    out.lift_verified = true;
    out.oracle_exponent = closure.eccentricity;
    return out;
  }

  auto kopt = level_k(X, p, K);
  std::mt19937_64 rng(seed);

  if (!kopt) {
    // everything central at this precision; the closure is tiny
    out.bound = closure.eccentricity;
    out.case_tag = "central";
    out.lift_verified = true;
    out.oracle_exponent = closure.eccentricity;
    return out;
  }
  int k = *kopt;
  int z = count_scalar_roots(n, m);

  if (k == 0) {
    // covering mod p, then the coset lift doubles, then one more covering
    FiniteGroupTable Tp = FiniteGroupTable::enumerate(n, p, oracle_budget);
    SymSet Xbar;
    Xbar.table = &Tp;
    Xbar.member.assign(Tp.size(), 0);
    for (uint32_t o = 0; o < T.size(); ++o)
      if (X.contains(o)) Xbar.add(Tp.index_of(T.element(o).reduce(p)));
    ClosureInfo ci = closure_bfs(Xbar);
    if (ci.closure_size != Tp.size()) {
      // reduction does not cover mod p: report the direct exponent
      out.bound = closure.eccentricity;
      out.case_tag = "level0-noncovering";
      out.oracle_exponent = closure.eccentricity;
      return out;
    }
    int C1 = ci.eccentricity;
    out.bound = 3 * C1;
    out.case_tag = "level0-covering";

    // sampled verification of the coset lift through a generating pair
    std::vector<uint32_t> cand;
    for (uint32_t o = 0; o < T.size() && cand.size() < 96; ++o)
      if (closure.depth[o] >= 0 && closure.depth[o] <= C1 &&
          !T.element(o).reduce(p).is_scalar())
        cand.push_back(o);
    bool verified = false;
    for (size_t i = 0; i < cand.size() && !verified; ++i)
      for (size_t j = 0; j < cand.size() && !verified; ++j) {
        uint32_t abar = Tp.index_of(T.element(cand[i]).reduce(p));
        uint32_t bbar = Tp.index_of(T.element(cand[j]).reduce(p));
        if (!generates(abar, bbar, Tp)) continue;
        const ModMatrix& a = T.element(cand[i]);
        const ModMatrix& b = T.element(cand[j]);
        verified = true;
        for (int s = 0; s < lift_samples; ++s) {
          ModMatrix R(n, m);
          std::uniform_int_distribution<uint64_t> pick(0, m - 1);
          for (int r = 1; r <= n; ++r)
            for (int c = 1; c <= n; ++c) R.set_entry(r, c, pick(rng) * p);
          ModMatrix target = a * b * (ModMatrix::identity(n, m) + R);
          if (target.det() != 1) continue;  // stay inside SL for the sample
          PhiLiftResult lift = phi_lift(a, b, target, p, 0, K);
          if (!lift.ok) {
            verified = false;
            break;
          }
        }
      }
    out.lift_verified = verified;
  } else {
    // level split: transport through the Lie layer with conjugate sums
    uint32_t gseed = 0;
    bool found = false;
    for (uint32_t o = 0; o < T.size() && !found; ++o) {
      if (!X.contains(o)) continue;
      const ModMatrix& g = T.element(o);
      if (k + 1 <= K && !g.reduce(pow_u64(p, k + 1)).is_scalar()) {
        gseed = o;
        found = true;
      }
    }
    if (!found)
      throw std::logic_error("padic_width_bound: level witness disappeared");

    // x0 = g^{z-1} (h^-1 g h) lands in the level-k congruence layer with a
    // non-scalar Lie image; it is a product of z members of X.
    bool have_x0 = false;
    ModMatrix A(n, p);
    uint32_t gpow = T.identity_ord();
    for (int e = 0; e < z - 1; ++e) gpow = T.mul(gpow, gseed);
    for (uint32_t h = 0; h < T.size() && !have_x0; ++h) {
      uint32_t conj = T.mul(T.mul(T.inv(h), gseed), h);
      uint32_t x0 = T.mul(gpow, conj);
      try {
        ModMatrix layer = level_layer(T.element(x0), p, k);
        if (layer.is_scalar()) continue;
        A = layer;
        have_x0 = true;
      } catch (const std::logic_error&) {
        continue;
      }
    }
    if (!have_x0)
      throw std::logic_error("padic_width_bound: no usable level element");

    // worst-case conjugate-sum length over the Lie layer
    uint64_t lie_count = 1;
    for (int i = 0; i < n * n - 1; ++i) lie_count *= p;
    int smax = 0;
    if (lie_count <= oracle_budget / 8) {
      std::vector<ModMatrix> basis = sl_basis(n, p);
      std::vector<uint64_t> coeff(basis.size(), 0);
      bool done = false;
      while (!done) {
        ModMatrix Tgt(n, p);
        for (size_t bi = 0; bi < basis.size(); ++bi) {
          if (coeff[bi] == 0) continue;
          for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
              Tgt.set_entry(
                  i, j, (Tgt.entry(i, j) + coeff[bi] * basis[bi].entry(i, j)) % p);
        }
        ConjSumResult cs = conj_sum_decompose_or_empty(A, Tgt, p);
        smax = std::max(smax, static_cast<int>(cs.conjugators.size()));
        int pos = static_cast<int>(basis.size()) - 1;
        while (pos >= 0) {
          if (++coeff[static_cast<size_t>(pos)] < p) break;
          coeff[static_cast<size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) done = true;
      }
    } else {
      smax = (n * n - 1) * static_cast<int>(p - 1);
    }
    int C = z * smax;
    out.bound = 5 * C + z;
    out.case_tag = "level" + std::to_string(k) + "-conjsum";

    // verify the Jordan-pair lift on representatives of the layer classes
    ModMatrix abar(n, p);
    for (int i = 1; i <= n - 1; ++i) abar.set_entry(i, i + 1, 1);
    ModMatrix bbar = abar.transpose();
    auto embed = [&](const ModMatrix& L) {
      // I + p^k L is unipotent triangular for the Jordan pair, so it stays
      // inside SL at full precision.
      ModMatrix e = ModMatrix::identity(n, m);
      uint64_t pk = pow_u64(p, k);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          e.set_entry(i, j, (e.entry(i, j) + L.entry(i, j) * pk) % m);
      return e;
    };
    ModMatrix a = embed(abar);
    ModMatrix b = embed(bbar);
    bool verified = a.det() == 1 && b.det() == 1;
    for (int s = 0; verified && s < lift_samples; ++s) {
      ModMatrix R(n, m);
      std::uniform_int_distribution<uint64_t> pick(0, m - 1);
      uint64_t pk1 = pow_u64(p, std::min(K, k + 1));
      for (int r = 1; r <= n; ++r)
        for (int c = 1; c <= n; ++c) R.set_entry(r, c, pick(rng) * pk1);
      ModMatrix target = a * b * (ModMatrix::identity(n, m) + R);
      if (target.det() != 1) continue;
      PhiLiftResult lift = phi_lift(a, b, target, p, k, K);
      if (!lift.ok) verified = false;
    }
    out.lift_verified = verified;
  }

  out.oracle_exponent = closure.eccentricity;
  if (out.bound < out.oracle_exponent)
    throw std::logic_error("padic_width_bound: bound below the exact exponent");
  return out;
}

}  // namespace slnw
