#include "slnw/padic.hpp"

#include <algorithm>
#include <stdexcept>

#include "slnw/lie.hpp"

namespace slnw {

namespace {

uint64_t pow_u64(uint64_t p, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

int min_valuation(const std::vector<uint64_t>& v, uint64_t p, int K) {
  int best = K;
  for (uint64_t x : v) best = std::min(best, val_p(x, p, K));
  return best;
}

}  // namespace

ModLinearSolution linear_solve_mod(std::vector<uint64_t> M,
                                   std::vector<uint64_t> v, int rows, int cols,
                                   uint64_t p, int K) {
  uint64_t m = pow_u64(p, K);
  auto at = [&](int r, int c) -> uint64_t& {
    return M[static_cast<size_t>(r) * cols + c];
  };
  for (auto& x : M) x %= m;
  for (auto& x : v) x %= m;

  struct Pivot {
    int row, col, val;
  };
  std::vector<Pivot> pivots;
  std::vector<uint8_t> col_used(static_cast<size_t>(cols), 0);
  int r0 = 0;

  while (r0 < rows) {
    int br = -1, bc = -1, bv = K;
    for (int r = r0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (col_used[static_cast<size_t>(c)]) continue;
        int val = val_p(at(r, c), p, K);
        if (val < bv) {
          bv = val;
          br = r;
          bc = c;
        }
      }
    if (br < 0) break;
    if (br != r0) {
      for (int c = 0; c < cols; ++c) std::swap(at(br, c), at(r0, c));
      std::swap(v[static_cast<size_t>(br)], v[static_cast<size_t>(r0)]);
    }
    // normalize the pivot row so the pivot is exactly p^bv
    uint64_t unit = at(r0, bc) / pow_u64(p, bv);
    uint64_t uinv = mod_inverse(unit % m, m);
    for (int c = 0; c < cols; ++c)
      at(r0, c) = static_cast<uint64_t>(
          (static_cast<__uint128_t>(at(r0, c)) * uinv) % m);
    v[static_cast<size_t>(r0)] = static_cast<uint64_t>(
        (static_cast<__uint128_t>(v[static_cast<size_t>(r0)]) * uinv) % m);
    // eliminate below
    for (int r = r0 + 1; r < rows; ++r) {
      uint64_t f = at(r, bc) / pow_u64(p, bv);
      if (at(r, bc) == 0) continue;
      for (int c = 0; c < cols; ++c) {
        uint64_t sub = static_cast<uint64_t>(
            (static_cast<__uint128_t>(f) * at(r0, c)) % m);
        at(r, c) = (at(r, c) + m - sub) % m;
      }
      uint64_t subv = static_cast<uint64_t>(
          (static_cast<__uint128_t>(f) * v[static_cast<size_t>(r0)]) % m);
      v[static_cast<size_t>(r)] = (v[static_cast<size_t>(r)] + m - subv) % m;
    }
    col_used[static_cast<size_t>(bc)] = 1;
    pivots.push_back({r0, bc, bv});
    ++r0;
  }

  ModLinearSolution sol;
  sol.z.assign(static_cast<size_t>(cols), 0);
  sol.achieved = K;
  for (const auto& pv : pivots)
    if (pv.val == 0) ++sol.rank_mod_p;

  // rows below the staircase must be trivially satisfied
  for (int r = r0; r < rows; ++r)
    sol.achieved = std::min(sol.achieved, val_p(v[static_cast<size_t>(r)], p, K));

  // bottom-up substitution
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    __uint128_t acc = 0;
    for (int c = 0; c < cols; ++c) {
      if (c == it->col) continue;
      acc += static_cast<__uint128_t>(at(it->row, c)) *
             sol.z[static_cast<size_t>(c)] % m;
    }
    uint64_t rhs =
        (v[static_cast<size_t>(it->row)] + m - static_cast<uint64_t>(acc % m)) % m;
    int rv = val_p(rhs, p, K);
    if (rv < it->val) {
      sol.achieved = std::min(sol.achieved, rv);
      continue;  // leave z at zero; precision capped
    }
    sol.z[static_cast<size_t>(it->col)] =
        (rhs / pow_u64(p, it->val)) % m;
  }
  return sol;
}

NewtonResult newton_lift(const PolyMap& f, std::vector<uint64_t> start,
                         const std::vector<uint64_t>& target, uint64_t p,
                         int k, int K) {
  NewtonResult out;
  uint64_t m = pow_u64(p, K);
  int s = f.arity_in;
  int t = f.arity_out();
  if (static_cast<int>(start.size()) != s ||
      static_cast<int>(target.size()) != t) {
    out.error = "newton_lift: arity mismatch";
    return out;
  }
  auto fv = pval(f, p);
  if (fv && *fv < k) {
    out.error = "newton_lift: map valuation below k";
    return out;
  }

  std::vector<uint64_t> a = std::move(start);
  int last_l = -1;
  for (int iter = 0; iter <= K + 2; ++iter) {
    std::vector<uint64_t> val = f.evaluate_mod(a, m);
    std::vector<uint64_t> r(static_cast<size_t>(t));
    for (int i = 0; i < t; ++i)
      r[static_cast<size_t>(i)] =
          (target[static_cast<size_t>(i)] + m - val[static_cast<size_t>(i)]) % m;
    int l = min_valuation(r, p, K);
    out.residual_valuations.push_back(l);
    if (l >= K) {
      out.ok = true;
      out.point = a;
      return out;
    }
    if (l <= k) {
      out.error = "newton_lift: residual valuation " + std::to_string(l) +
                  " not above k";
      return out;
    }
    if (l <= last_l) {
      out.error = "newton_lift: residual valuation stalled at " +
                  std::to_string(l);
      return out;
    }
    last_l = l;

    std::vector<uint64_t> J = f.jacobian_mod(a, m);
    // divide the rows by p^k and the residual by p^l, solve at the
    // remaining precision, scale the update back by p^{l-k}
    uint64_t pk = pow_u64(p, k);
    uint64_t pl = pow_u64(p, l);
    for (auto& x : J) {
      if (x % pk != 0) {
        out.error = "newton_lift: differential valuation below k";
        return out;
      }
      x /= pk;
    }
    std::vector<uint64_t> rr = r;
    for (auto& x : rr) x /= pl;
    ModLinearSolution ls = linear_solve_mod(J, rr, t, s, p, K - l);
    if (ls.achieved < K - l) {
      out.error = "newton_lift: differential rank deficiency mod p (rank " +
                  std::to_string(ls.rank_mod_p) + ")";
      return out;
    }
    uint64_t scale = pow_u64(p, l - k);
    for (int i = 0; i < s; ++i)
      a[static_cast<size_t>(i)] =
          (a[static_cast<size_t>(i)] +
           static_cast<uint64_t>(
               (static_cast<__uint128_t>(ls.z[static_cast<size_t>(i)]) * scale) %
               m)) %
          m;
  }
  out.error = "newton_lift: iteration budget exhausted";
  return out;
}

PhiLiftResult phi_lift(const ModMatrix& g, const ModMatrix& h,
                       const ModMatrix& target, uint64_t p, int k, int K) {
  PhiLiftResult out;
  int n = g.dim();
  uint64_t m = pow_u64(p, K);
  if (g.modulus() != m || h.modulus() != m || target.modulus() != m) {
    out.error = "phi_lift: modulus mismatch";
    return out;
  }
  ModMatrix x = ModMatrix::identity(n, m);
  ModMatrix y = ModMatrix::identity(n, m);
  std::vector<ModMatrix> basis = sl_basis(n, m);
  int dim = static_cast<int>(basis.size());

  auto flatten = [&](const ModMatrix& M, std::vector<uint64_t>& dst) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) dst.push_back(M.entry(i, j));
  };

  int last_l = -1;
  for (int iter = 0; iter <= K + 2; ++iter) {
    ModMatrix gx = g.conjugate_by_inverse(x);
    ModMatrix hy = h.conjugate_by_inverse(y);
    ModMatrix v = gx * hy;
    ModMatrix D = target - v;
    std::vector<uint64_t> r;
    flatten(D, r);
    int l = min_valuation(r, p, K);
    out.residual_valuations.push_back(l);
    if (l >= K) {
      out.ok = true;
      out.x = x;
      out.y = y;
      return out;
    }
    if (l <= k) {
      out.error = "phi_lift: target not within p^{-k-1} of the current value";
      return out;
    }
    if (l <= last_l) {
      out.error = "phi_lift: residual valuation stalled at " + std::to_string(l);
      return out;
    }
    last_l = l;

    // columns of the differential: (gx X - X gx) hy for X in sl, then
    // gx (hy Y - Y hy)
    std::vector<uint64_t> J;
    J.reserve(static_cast<size_t>(n * n) * (2 * dim));
    std::vector<std::vector<uint64_t>> cols;
    for (int b = 0; b < dim; ++b) {
      ModMatrix X = basis[static_cast<size_t>(b)];
      ModMatrix col = (gx * X - X * gx) * hy;
      std::vector<uint64_t> cv;
      flatten(col, cv);
      cols.push_back(std::move(cv));
    }
    for (int b = 0; b < dim; ++b) {
      ModMatrix Y = basis[static_cast<size_t>(b)];
      ModMatrix col = gx * (hy * Y - Y * hy);
      std::vector<uint64_t> cv;
      flatten(col, cv);
      cols.push_back(std::move(cv));
    }
    uint64_t pk = pow_u64(p, k);
    uint64_t pl = pow_u64(p, l);
    J.assign(static_cast<size_t>(n * n) * (2 * dim), 0);
    for (int rr = 0; rr < n * n; ++rr)
      for (int c = 0; c < 2 * dim; ++c) {
        uint64_t e = cols[static_cast<size_t>(c)][static_cast<size_t>(rr)];
        if (e % pk != 0) {
          out.error = "phi_lift: differential valuation below k";
          return out;
        }
        J[static_cast<size_t>(rr) * (2 * dim) + c] = e / pk;
      }
    std::vector<uint64_t> rhs = r;
    for (auto& e : rhs) e /= pl;
    ModLinearSolution ls = linear_solve_mod(J, rhs, n * n, 2 * dim, p, K - l);
    if (ls.achieved < K - l) {
      out.error = "phi_lift: differential rank deficiency mod p (rank " +
                  std::to_string(ls.rank_mod_p) + ")";
      return out;
    }
    uint64_t scale = pow_u64(p, l - k);
    ModMatrix xi(n, m), eta(n, m);
    for (int b = 0; b < dim; ++b) {
      uint64_t cx = static_cast<uint64_t>(
          (static_cast<__uint128_t>(ls.z[static_cast<size_t>(b)]) * scale) % m);
      uint64_t cy = static_cast<uint64_t>(
          (static_cast<__uint128_t>(ls.z[static_cast<size_t>(dim + b)]) * scale) %
          m);
      if (cx) {
        ModMatrix t1 = basis[static_cast<size_t>(b)];
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            xi.set_entry(i, j,
                         (xi.entry(i, j) +
                          static_cast<uint64_t>(
                              (static_cast<__uint128_t>(t1.entry(i, j)) * cx) %
                              m)) %
                             m);
      }
      if (cy) {
        ModMatrix t2 = basis[static_cast<size_t>(b)];
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            eta.set_entry(i, j,
                          (eta.entry(i, j) +
                           static_cast<uint64_t>(
                               (static_cast<__uint128_t>(t2.entry(i, j)) * cy) %
                               m)) %
                              m);
      }
    }
    x = x * (ModMatrix::identity(n, m) + xi);
    y = y * (ModMatrix::identity(n, m) + eta);
  }
  out.error = "phi_lift: iteration budget exhausted";
  return out;
}

ModMatrix random_sl(int n, uint64_t p, int K, std::mt19937_64& rng) {
  uint64_t m = pow_u64(p, K);
  std::uniform_int_distribution<uint64_t> pick(0, m - 1);
  while (true) {
    ModMatrix g(n, m);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) g.set_entry(i, j, pick(rng));
    uint64_t d = g.det();
    if (d % p == 0) continue;
    uint64_t dinv = mod_inverse(d, m);
    for (int j = 1; j <= n; ++j)
      g.set_entry(1, j, static_cast<uint64_t>(
                            (static_cast<__uint128_t>(g.entry(1, j)) * dinv) % m));
    return g;
  }
}

ModMatrix lift_to_precision(const ModMatrix& g, int K) {
  uint64_t p = g.modulus();
  uint64_t m = 1;
  for (int i = 0; i < K; ++i) m *= p;
  ModMatrix out(g.dim(), m);
  for (int i = 1; i <= g.dim(); ++i)
    for (int j = 1; j <= g.dim(); ++j) out.set_entry(i, j, g.entry(i, j));
  uint64_t d = out.det();
  uint64_t dinv = mod_inverse(d, m);
  for (int j = 1; j <= g.dim(); ++j)
    out.set_entry(1, j, static_cast<uint64_t>(
                            (static_cast<__uint128_t>(out.entry(1, j)) * dinv) % m));
  return out;
}

}  // namespace slnw
