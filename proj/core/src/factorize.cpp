#include "slnw/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>
#include <sstream>

namespace slnw {

namespace {

// Writes a 3x3 block at block position (bi, bj), 1-based, optionally offset
// by `off` leading rows/columns of identity padding.
void set_block(IntMatrix& big, int bi, int bj, const IntMatrix& blk, int off = 0) {
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      big.set_entry(off + 3 * (bi - 1) + i, off + 3 * (bj - 1) + j,
                    blk.entry(i, j));
}

IntMatrix block_diag(const std::vector<IntMatrix>& blocks, int off, int n) {
  IntMatrix out = IntMatrix::identity(n);
  for (size_t b = 0; b < blocks.size(); ++b)
    set_block(out, static_cast<int>(b) + 1, static_cast<int>(b) + 1, blocks[b], off);
  return out;
}

bool in_sl3_congruence(const IntMatrix& g, long q) {
  return g.dim() == 3 && g.det() == 1 && in_congruence(g, q);
}

mpz_class vec_gcd(const std::vector<mpz_class>& v) {
  mpz_class g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

mpz_class frob2_any(const IntMatrix& M) {
  mpz_class s = 0;
  for (int i = 1; i <= M.dim(); ++i)
    for (int j = 1; j <= M.dim(); ++j) s += M.entry(i, j) * M.entry(i, j);
  return s;
}

// Nearest integer to num/den (den > 0).
mpz_class round_div_any(const mpz_class& num, const mpz_class& den) {
  mpz_class twice = 2 * num + den;
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
  return r;
}

}  // namespace

BlockDiagSplit block_diag_factor(const std::vector<IntMatrix>& blocks, long q) {
  if (blocks.empty()) throw std::invalid_argument("block_diag_factor: no blocks");
  int m = static_cast<int>(blocks.size());
  int n = 3 * m;
  IntMatrix prod = IntMatrix::identity(3);
  for (const auto& b : blocks) {
    if (!in_sl3_congruence(b, q))
      throw std::domain_error("block_diag_factor: block not in SL_3(Z;q)");
    prod = prod * b;
  }
  if (!prod.is_identity())
    throw std::domain_error("block_diag_factor: blocks do not multiply to I");

  // Partial products g_1...g_i and inverses.
  std::vector<IntMatrix> partial;  // partial[i] = g_1 ... g_{i+1}
  IntMatrix acc = IntMatrix::identity(3);
  for (const auto& b : blocks) {
    acc = acc * b;
    partial.push_back(acc);
  }

  IntMatrix l1 = IntMatrix::identity(n);
  IntMatrix l2 = IntMatrix::identity(n);
  IntMatrix u1 = IntMatrix::identity(n);
  IntMatrix u2 = IntMatrix::identity(n);
  IntMatrix I3 = IntMatrix::identity(3);
  for (int i = 1; i <= m - 1; ++i) {
    set_block(l1, i + 1, i, blocks[static_cast<size_t>(i - 1)].inverse());
    set_block(l2, i + 1, i, I3);
    IntMatrix w = I3 - partial[static_cast<size_t>(i - 1)];
    set_block(u1, i, i + 1, w);
    set_block(u2, i, i + 1, w * blocks[static_cast<size_t>(i)]);
  }

  BlockDiagSplit out{l1, u1, l2, u2, FactorCertificate(block_diag(blocks, 0, n), q)};
  out.certificate.factors.push_back(make_L(l1.inverse() * l2));
  out.certificate.factors.push_back(make_Uc(l2.inverse(), u1.inverse()));
  out.certificate.factors.push_back(make_U(u2));
  return out;
}

namespace {

// Shared core of the two corner compressions: certificate for the matrix
// carrying P = g_1...g_m in one corner block, everything else identity.
FactorCertificate corner_core(const std::vector<ULPair>& blocks, long q,
                              int n, bool bottom) {
  if (blocks.empty()) throw std::invalid_argument("corner_factor: no blocks");
  int m = static_cast<int>(blocks.size());
  if (n < 3 * m) throw std::invalid_argument("corner_factor: ambient too small");
  int off = bottom ? n - 3 * m : 0;

  std::vector<IntMatrix> g;
  for (const auto& p : blocks) {
    if (!in_upper_unipotent(p.u, q) || !in_lower_unipotent(p.l, q) ||
        p.u.dim() != 3 || p.l.dim() != 3)
      throw std::domain_error("corner_factor: block pair fails U/L membership");
    g.push_back(p.u * p.l);
  }
  IntMatrix P = IntMatrix::identity(3);
  for (const auto& gi : g) P = P * gi;

  // h interleaves the blocks so that (input) h^-1 has block product I:
  //   corner at top:    h = diag(g_m, ..., g_1)
  //   corner at bottom: h = diag(g_{m-1}, ..., g_1, g_m)
  std::vector<IntMatrix> horder;
  std::vector<const ULPair*> porder;
  if (!bottom) {
    for (int i = m; i >= 1; --i) {
      horder.push_back(g[static_cast<size_t>(i - 1)]);
      porder.push_back(&blocks[static_cast<size_t>(i - 1)]);
    }
  } else {
    for (int i = m - 1; i >= 1; --i) {
      horder.push_back(g[static_cast<size_t>(i - 1)]);
      porder.push_back(&blocks[static_cast<size_t>(i - 1)]);
    }
    horder.push_back(g[static_cast<size_t>(m - 1)]);
    porder.push_back(&blocks[static_cast<size_t>(m - 1)]);
  }

  // Blocks of (input) h^-1, in block order; their product telescopes to I.
  std::vector<IntMatrix> bd;
  if (!bottom) {
    bd.push_back(P * horder[0].inverse());
    for (int i = 1; i < m; ++i) bd.push_back(horder[static_cast<size_t>(i)].inverse());
  } else {
    for (int i = 0; i < m - 1; ++i) bd.push_back(horder[static_cast<size_t>(i)].inverse());
    IntMatrix head = IntMatrix::identity(3);
    for (int i = 1; i <= m - 1; ++i) head = head * g[static_cast<size_t>(i - 1)];
    bd.push_back(head);  // P g_m^-1 = g_1 ... g_{m-1}
  }

  BlockDiagSplit split = block_diag_factor(bd, q);

  auto pad = [&](const IntMatrix& M) {
    if (off == 0) return M;
    return IntMatrix::embed_corner(n, M);
  };

  // U and L parts of h.
  IntMatrix hu = IntMatrix::identity(3 * m);
  IntMatrix hl = IntMatrix::identity(3 * m);
  for (int i = 1; i <= m; ++i) {
    set_block(hu, i, i, porder[static_cast<size_t>(i - 1)]->u);
    set_block(hl, i, i, porder[static_cast<size_t>(i - 1)]->l);
  }

  IntMatrix input(3 * m);
  if (!bottom) {
    input = IntMatrix::identity(3 * m);
    set_block(input, 1, 1, P);
  } else {
    input = IntMatrix::identity(3 * m);
    set_block(input, m, m, P);
  }

  FactorCertificate cert(pad(input), q);
  const auto& sf = split.certificate.factors;
  cert.factors.push_back(make_L(pad(sf[0].matrix)));
  cert.factors.push_back(make_Uc(pad(*sf[1].witness_h), pad(*sf[1].witness_k)));
  cert.factors.push_back(make_U(pad(sf[2].matrix * hu)));
  cert.factors.push_back(make_L(pad(hl)));
  return cert;
}

}  // namespace

FactorCertificate corner_factor(const std::vector<ULPair>& blocks, long q) {
  return corner_core(blocks, q, 3 * static_cast<int>(blocks.size()), false);
}

FactorCertificate corner_factor_bottom(const std::vector<ULPair>& blocks,
                                       long q, int ambient_n) {
  return corner_core(blocks, q, ambient_n, true);
}

namespace {

bool check_stable_range(const std::vector<mpz_class>& a,
                        const std::vector<mpz_class>& t, const mpz_class& d) {
  mpz_class g = 0;
  for (size_t i = 1; i < a.size(); ++i) {
    mpz_class adj = a[i] - t[i - 1] * a[0];
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), adj.get_mpz_t());
  }
  return g == d;
}

}  // namespace

std::vector<mpz_class> stable_range_coeffs(const std::vector<mpz_class>& a) {
  if (a.size() < 3)
    throw std::invalid_argument("stable_range_coeffs: need length >= 3");
  mpz_class d = vec_gcd(a);
  if (d == 0) throw std::invalid_argument("stable_range_coeffs: zero vector");
  size_t m = a.size();
  std::vector<mpz_class> t(m - 1, 0);
  if (a[0] == 0 || check_stable_range(a, t, d)) return t;

  // Small box search: one adjusted coordinate, then two.
  for (long B = 1; B <= 16; B *= 2) {
    for (size_t i = 0; i < m - 1; ++i) {
      for (long v = 1; v <= B; ++v) {
        for (long s : {v, -v}) {
          t[i] = s;
          if (check_stable_range(a, t, d)) return t;
        }
      }
      t[i] = 0;
    }
    for (size_t i = 0; i + 1 < m - 1; ++i) {
      for (size_t j = i + 1; j < m - 1; ++j) {
        for (long vi = -B; vi <= B; ++vi) {
          for (long vj = -B; vj <= B; ++vj) {
            if (vi == 0 && vj == 0) continue;
            t[i] = vi;
            t[j] = vj;
            if (check_stable_range(a, t, d)) return t;
          }
        }
        t[j] = 0;
      }
      t[i] = 0;
    }
  }

  // Guaranteed construction.  Normalize by d; adjust the second entry to a
  // nonzero value A, then pick the third so that no prime of A survives in
  // the adjusted tail.  Primes of A dividing a_1 are already harmless.
  std::fill(t.begin(), t.end(), 0);
  mpz_class a1 = a[0] / d;
  mpz_class a2 = a[1] / d;
  mpz_class a3 = a[2] / d;
  long k = 0;
  while (a2 - k * a1 == 0) ++k;
  t[0] = k;
  mpz_class A = a2 - k * a1;

  // Split |A| into small prime factors and a large cofactor.
  mpz_class R = abs(A);
  std::map<unsigned long, int> small;
  for (unsigned long p = 2; p <= 1000000 && R > 1; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(R.get_mpz_t(), p)) {
      R /= p;
      ++small[p];
    }
  }
  // CRT residue avoiding the bad class for each small prime not dividing a1.
  mpz_class Ms = 1, r = 0;
  for (const auto& [p, e] : small) {
    (void)e;
    if (mpz_divisible_ui_p(a1.get_mpz_t(), p)) continue;
    unsigned long a1p = mpz_fdiv_ui(a1.get_mpz_t(), p);
    unsigned long a3p = mpz_fdiv_ui(a3.get_mpz_t(), p);
    unsigned long bad = 0;
    {
      // bad = a3 / a1 mod p
      unsigned long inv = 1, base = a1p % p, e2 = p - 2, mod = p;
      while (e2) {
        if (e2 & 1) inv = (inv * base) % mod;
        base = (base * base) % mod;
        e2 >>= 1;
      }
      bad = (a3p * inv) % p;
    }
    unsigned long pick = (bad + 1) % p;
    // r := r (mod Ms), pick (mod p)
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class Msi;
    mpz_invert(Msi.get_mpz_t(), Ms.get_mpz_t(), pz.get_mpz_t());
    mpz_class delta = ((mpz_class(pick) - r) * Msi) % pz;
    if (delta < 0) delta += pz;
    r = r + Ms * delta;
    Ms *= pz;
  }
  // Scan the progression; each step can only be blocked by a distinct large
  // prime of the cofactor, so the loop is short.
  for (long step = 0;; ++step) {
    t[1] = r + Ms * step;
    if (check_stable_range(a, t, d)) return t;
    if (step > 4096)
      throw std::logic_error("stable_range_coeffs: construction failed");
  }
}

PeelStep peel_once(const IntMatrix& g, long q) {
  if (!mennicke_in_E(g, q))
    throw std::domain_error("peel_once: input fails the level-q diagonal test");
  int n = g.dim();
  if (n < 4) throw std::invalid_argument("peel_once: need n >= 4");

  // already diag(1, g'): empty prefix
  bool reduced_shape = g.entry(1, 1) == 1;
  for (int i = 2; i <= n && reduced_shape; ++i)
    if (g.entry(i, 1) != 0 || g.entry(1, i) != 0) reduced_shape = false;
  if (reduced_shape) {
    IntMatrix I = IntMatrix::identity(n);
    return PeelStep{I, I, I, I, g.corner_block(n - 1)};
  }

  // Stage 1: stable range on (q g_11, g_21, ..., g_n1).
  std::vector<mpz_class> v;
  v.push_back(q * g.entry(1, 1));
  for (int i = 2; i <= n; ++i) v.push_back(g.entry(i, 1));
  std::vector<mpz_class> t = stable_range_coeffs(v);

  IntMatrix c1m = IntMatrix::identity(n);
  IntMatrix h = g;
  for (int i = 2; i <= n; ++i) {
    mpz_class c = -t[static_cast<size_t>(i - 2)] * q;
    if (c == 0) continue;
    IntMatrix e = IntMatrix::elementary(n, i, 1, c);
    c1m = e * c1m;
    h = e * h;
  }
  std::vector<mpz_class> col;
  for (int i = 2; i <= n; ++i) col.push_back(h.entry(i, 1));
  mpz_class gq = vec_gcd(col);
  if (gq != q && gq != -q)
    throw std::logic_error("peel_once: column gcd is not q after adjustment");

  // Stage 2: drive the (1,1) entry to exactly 1 through row-1 additions
  // with level-q coefficients.  h_11 - 1 lies in q^2 Z and the reachable
  // decrements are exactly q^2 Z, so the entry always lands on 1.  A
  // Euclidean pre-reduction against the column keeps the coefficients at
  // entry scale; the leftover is closed by one small Bezout combination.
  IntMatrix r1m = IntMatrix::identity(n);
  auto row1_add = [&](int i, const mpz_class& c) {
    if (c == 0) return;
    IntMatrix e = IntMatrix::elementary(n, 1, i, c);
    r1m = e * r1m;
    h = e * h;
  };
  bool shrinking = true;
  while (shrinking) {
    shrinking = false;
    mpz_class D = h.entry(1, 1) - 1;
    if (D == 0) break;
    int best_i = -1;
    mpz_class best_c = 0, best_rem = abs(D);
    for (int i = 2; i <= n; ++i) {
      const mpz_class& ci = h.entry(i, 1);
      if (ci == 0) continue;
      mpz_class step = q * ci;
      mpz_class c0 = round_div_any(-D, step);
      for (long d = -1; d <= 1; ++d) {
        mpz_class c = (c0 + d) * q;
        if (c == 0) continue;
        mpz_class rem = abs(D + c * ci);
        if (rem < best_rem) {
          best_rem = rem;
          best_i = i;
          best_c = c;
        }
      }
    }
    if (best_i > 0) {
      row1_add(best_i, best_c);
      shrinking = true;
    }
  }
  if (h.entry(1, 1) != 1) {
    // remaining defect closed by a Bezout combination along the column
    std::vector<mpz_class> cold;
    for (int i = 2; i <= n; ++i) cold.push_back(h.entry(i, 1));
    std::vector<mpz_class> x(cold.size(), 0);
    mpz_class gcur = 0;
    for (size_t i = 0; i < cold.size(); ++i) {
      if (cold[i] == 0) continue;
      if (gcur == 0) {
        gcur = cold[i];
        x[i] = 1;
      } else {
        mpz_class gg, alpha, beta;
        mpz_gcdext(gg.get_mpz_t(), alpha.get_mpz_t(), beta.get_mpz_t(),
                   gcur.get_mpz_t(), cold[i].get_mpz_t());
        for (auto& xi : x) xi *= alpha;
        x[i] = beta;
        gcur = gg;
      }
    }
    if (gcur < 0) {
      for (auto& xi : x) xi = -xi;
      gcur = -gcur;
    }
    // sum x_i col_i = q; scale by -(h_11 - 1)/q^2 * q
    mpz_class s = (h.entry(1, 1) - 1) / (mpz_class(q) * q);
    for (int i = 2; i <= n; ++i)
      row1_add(i, mpz_class(-q * s * x[static_cast<size_t>(i - 2)]));
  }
  if (h.entry(1, 1) != 1)
    throw std::logic_error("peel_once: failed to normalize the corner entry");

  // Stage 3: clear the rest of column 1, then row 1.
  IntMatrix c2m = IntMatrix::identity(n);
  for (int i = 2; i <= n; ++i) {
    mpz_class c = -h.entry(i, 1);
    if (c == 0) continue;
    IntMatrix e = IntMatrix::elementary(n, i, 1, c);
    c2m = e * c2m;
    h = e * h;
  }
  IntMatrix r2m = IntMatrix::identity(n);
  for (int j = 2; j <= n; ++j) {
    mpz_class c = -h.entry(1, j);
    if (c == 0) continue;
    IntMatrix e = IntMatrix::elementary(n, 1, j, c);
    r2m = r2m * e;
    h = h * e;
  }

  IntMatrix reduced(n - 1);
  for (int i = 2; i <= n; ++i)
    for (int j = 2; j <= n; ++j) reduced.set_entry(i - 1, j - 1, h.entry(i, j));
  if (!mennicke_in_E(reduced, q))
    throw std::logic_error("peel_once: reduced block lost the diagonal property");

  PeelStep out{c1m.inverse(), r1m.inverse(), c2m.inverse(), r2m.inverse(),
               reduced};
  return out;
}

namespace {

IntMatrix embed_leading(int n, const IntMatrix& M) {
  // diag(1, M)
  return IntMatrix::embed_corner(n, M);
}

}  // namespace

LUReduction size_reduce_lu(const IntMatrix& g, long q) {
  int n = g.dim();
  LUReduction out{IntMatrix::identity(n), g, IntMatrix::identity(n)};
  mpz_class qz(q);
  bool progressed = true;
  while (progressed) {
    progressed = false;
    // lower row operations on the left: row_i += c row_j, i > j
    for (int i = 2; i <= n; ++i) {
      for (int j = 1; j < i; ++j) {
        mpz_class dot = 0, nj = 0;
        for (int k = 1; k <= n; ++k) {
          dot += out.reduced.entry(i, k) * out.reduced.entry(j, k);
          nj += out.reduced.entry(j, k) * out.reduced.entry(j, k);
        }
        if (nj == 0) continue;
        mpz_class c = round_div_any(-dot, qz * nj) * qz;
        if (c == 0) continue;
        mpz_class ni = 0;
        for (int k = 1; k <= n; ++k)
          ni += out.reduced.entry(i, k) * out.reduced.entry(i, k);
        mpz_class nn = ni + 2 * c * dot + c * c * nj;
        if (nn >= ni) continue;
        IntMatrix e = IntMatrix::elementary(n, i, j, c);
        out.reduced = e * out.reduced;
        out.l = out.l * IntMatrix::elementary(n, i, j, mpz_class(-c));
        progressed = true;
      }
    }
    // upper column operations on the right: col_j += c col_i, i < j
    for (int j = 2; j <= n; ++j) {
      for (int i = 1; i < j; ++i) {
        mpz_class dot = 0, ni = 0;
        for (int k = 1; k <= n; ++k) {
          dot += out.reduced.entry(k, j) * out.reduced.entry(k, i);
          ni += out.reduced.entry(k, i) * out.reduced.entry(k, i);
        }
        if (ni == 0) continue;
        mpz_class c = round_div_any(-dot, qz * ni) * qz;
        if (c == 0) continue;
        mpz_class njj = 0;
        for (int k = 1; k <= n; ++k)
          njj += out.reduced.entry(k, j) * out.reduced.entry(k, j);
        mpz_class nn = njj + 2 * c * dot + c * c * ni;
        if (nn >= njj) continue;
        IntMatrix e = IntMatrix::elementary(n, i, j, c);
        out.reduced = out.reduced * e;
        out.u = IntMatrix::elementary(n, i, j, mpz_class(-c)) * out.u;
        progressed = true;
      }
    }
  }
  return out;
}

FactorCertificate factor_E(const IntMatrix& g, long q, int m) {
  if (m < 3) throw std::invalid_argument("factor_E: block size must be >= 3");
  if (g.dim() < m) throw std::invalid_argument("factor_E: n < m");
  if (!mennicke_in_E(g, q))
    throw std::domain_error("factor_E: input fails the level-q diagonal test");
  int n = g.dim();

  FactorCertificate cert(g, q);
  if (n == m) {
    IntMatrix I = IntMatrix::identity(n);
    cert.factors.push_back(make_L(I));
    cert.factors.push_back(make_U(I));
    cert.factors.push_back(make_L(I));
    cert.factors.push_back(make_Eblock(n, g));
    cert.factors.push_back(make_U(I));
    return cert;
  }

  // strip a free lower/upper pair to keep the entries small through the
  // peeling recursion
  LUReduction red = size_reduce_lu(g, q);
  PeelStep ps = peel_once(red.reduced, q);
  FactorCertificate sub = factor_E(ps.reduced, q, m);

  IntMatrix L1 = embed_leading(n, sub.factors[0].matrix);
  IntMatrix U1 = embed_leading(n, sub.factors[1].matrix);
  IntMatrix L2 = embed_leading(n, sub.factors[2].matrix);
  IntMatrix Eb = embed_leading(n, sub.factors[3].matrix);
  IntMatrix U2 = embed_leading(n, sub.factors[4].matrix);

  // reduced = c1 r1 c2 (L1 U1 L2 Eb U2) r2; push L1 then U1 leftward.  The
  // row and column groups are normalized by the embedded unipotents, so the
  // regrouped factors keep their classes.
  IntMatrix L1i = L1.inverse();
  IntMatrix R1p = L1i * ps.r1 * L1;
  IntMatrix C2p = L1i * ps.c2 * L1;
  IntMatrix C2pp = U1.inverse() * C2p * U1;

  cert.factors.push_back(make_L(red.l * ps.c1 * L1));
  cert.factors.push_back(make_U(R1p * U1));
  cert.factors.push_back(make_L(C2pp * L2));
  cert.factors.push_back(
      ClassifiedFactor{FactorClass::Eblock, Eb, {}, {}, sub.factors[3].block_size});
  cert.factors.push_back(make_U(U2 * ps.r2 * red.u));
  return cert;
}

namespace {

// Greedy reduction state for the 3x3 alternating search.  Left-multiplies
// by level-q triangular transforms; each phase solves for the best full
// triangle (lattice rounding around the least-squares point) rather than
// single entries, so one phase can undo one dense alternating factor.
struct GreedySearch {
  long q;
  IntMatrix cur;

  GreedySearch(const IntMatrix& g, long level) : q(level), cur(g) {}

  mpz_class row_dot(int i, int j) const {
    mpz_class s = 0;
    for (int k = 1; k <= 3; ++k) s += cur.entry(i, k) * cur.entry(j, k);
    return s;
  }

  // Best c in qZ for row_i += c row_j; candidates around the real optimum.
  mpz_class best_single(int i, int j) const {
    mpz_class nj = row_dot(j, j);
    if (nj == 0) return 0;
    mpz_class qz(q);
    mpz_class c0 = round_div_any(-row_dot(i, j), qz * nj);
    mpz_class best_norm = row_dot(i, i);
    mpz_class best_c = 0;
    for (long d = -1; d <= 1; ++d) {
      mpz_class c = (c0 + d) * qz;
      if (c == 0) continue;
      mpz_class nn = row_dot(i, i) + 2 * c * row_dot(i, j) + c * c * nj;
      if (nn < best_norm) {
        best_norm = nn;
        best_c = c;
      }
    }
    return best_c;
  }

  // Best (a, b) in (qZ)^2 for row_i += a row_j + b row_k, by boxing the
  // rational least-squares solution of the 2x2 normal equations.
  std::pair<mpz_class, mpz_class> best_pair(int i, int j, int k) const {
    mpz_class gjj = row_dot(j, j), gkk = row_dot(k, k), gjk = row_dot(j, k);
    mpz_class rj = row_dot(i, j), rk = row_dot(i, k);
    mpz_class qz(q);
    mpz_class det = gjj * gkk - gjk * gjk;  // > 0 for independent rows
    if (det == 0) return {0, 0};
    // real solution of G [a b]^T = -[rj rk]^T, scaled by q
    mpz_class na = -(rj * gkk - rk * gjk);
    mpz_class nb = -(rk * gjj - rj * gjk);
    mpz_class a0 = round_div_any(na, qz * det);
    mpz_class b0 = round_div_any(nb, qz * det);
    mpz_class best_norm = row_dot(i, i);
    mpz_class best_a = 0, best_b = 0;
    for (long da = -1; da <= 1; ++da) {
      for (long db = -1; db <= 1; ++db) {
        mpz_class a = (a0 + da) * qz;
        mpz_class b = (b0 + db) * qz;
        if (a == 0 && b == 0) continue;
        mpz_class nn = row_dot(i, i) + 2 * a * rj + 2 * b * rk + a * a * gjj +
                       2 * a * b * gjk + b * b * gkk;
        if (nn < best_norm) {
          best_norm = nn;
          best_a = a;
          best_b = b;
        }
      }
    }
    return {best_a, best_b};
  }

  void apply(int i, int j, const mpz_class& c, IntMatrix& accum) {
    if (c == 0) return;
    IntMatrix e = IntMatrix::elementary(3, i, j, c);
    accum = e * accum;
    cur = e * cur;
  }

  // One triangular phase: a full triangle solve followed by single-entry
  // polish, repeated while the norm drops.
  IntMatrix run_phase(bool upper) {
    IntMatrix accum = IntMatrix::identity(3);
    bool progressed = true;
    while (progressed) {
      progressed = false;
      mpz_class before = frob2_any(cur);
      if (upper) {
        apply(2, 3, best_single(2, 3), accum);
        auto [a, b] = best_pair(1, 2, 3);
        apply(1, 2, a, accum);
        apply(1, 3, b, accum);
        apply(1, 2, best_single(1, 2), accum);
        apply(1, 3, best_single(1, 3), accum);
        apply(2, 3, best_single(2, 3), accum);
      } else {
        apply(2, 1, best_single(2, 1), accum);
        auto [a, b] = best_pair(3, 1, 2);
        apply(3, 1, a, accum);
        apply(3, 2, b, accum);
        apply(3, 1, best_single(3, 1), accum);
        apply(3, 2, best_single(3, 2), accum);
        apply(2, 1, best_single(2, 1), accum);
      }
      if (frob2_any(cur) < before) progressed = true;
    }
    return accum;
  }

  // Bounded beam search used when both phases stall: looks for any short
  // sequence of level-q elementary row operations that strictly lowers the
  // norm, tolerating plateaus on the way (signed-permutation endgames).
  std::vector<IntMatrix> endgame(int beam_width, int depth_cap) const {
    struct Node {
      IntMatrix m;
      std::vector<IntMatrix> path;
      mpz_class norm;
    };
    mpz_class start_norm = frob2_any(cur);
    std::vector<Node> beam{{cur, {}, start_norm}};
    std::unordered_set<std::string> seen{cur.to_text()};
    const long mults[6] = {1, -1, 2, -2, 3, -3};
    for (int depth = 0; depth < depth_cap; ++depth) {
      std::vector<Node> next;
      for (const auto& node : beam) {
        for (int i = 1; i <= 3; ++i) {
          for (int j = 1; j <= 3; ++j) {
            if (i == j) continue;
            for (long s : mults) {
              IntMatrix e = IntMatrix::elementary(3, i, j, mpz_class(s * q));
              IntMatrix m2 = e * node.m;
              mpz_class nn = frob2_any(m2);
              std::vector<IntMatrix> path = node.path;
              path.push_back(e);
              if (nn < start_norm) return path;
              if (nn > start_norm * 4) continue;
              if (!seen.insert(m2.to_text()).second) continue;
              next.push_back(Node{std::move(m2), std::move(path), nn});
            }
          }
        }
      }
      std::sort(next.begin(), next.end(),
                [](const Node& a, const Node& b) { return a.norm < b.norm; });
      if (static_cast<int>(next.size()) > beam_width)
        next.erase(next.begin() + beam_width, next.end());
      beam = std::move(next);
      if (beam.empty()) break;
    }
    return {};
  }

  // Exact finish when the residual is already a level-q unipotent.
  bool try_finish(bool& upper_out, IntMatrix& accum_out) {
    for (bool upper : {true, false}) {
      if (upper ? in_upper_unipotent(cur, q) : in_lower_unipotent(cur, q)) {
        IntMatrix accum = IntMatrix::identity(3);
        const int order_u[3][2] = {{1, 2}, {2, 3}, {1, 3}};
        const int order_l[3][2] = {{2, 1}, {3, 2}, {3, 1}};
        for (const auto& ij : (upper ? order_u : order_l)) {
          mpz_class c = -cur.entry(ij[0], ij[1]);
          apply(ij[0], ij[1], c, accum);
        }
        if (!cur.is_identity()) continue;
        upper_out = upper;
        accum_out = accum;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

AlternatingResult alternating_factor3(const IntMatrix& g, long q, int max_len) {
  if (g.dim() != 3) throw std::invalid_argument("alternating_factor3: need 3x3");
  if (q < 1) throw std::invalid_argument("alternating_factor3: q >= 1");
  AlternatingResult res;
  if (g.det() != 1) {
    res.residual = g;
    return res;
  }

  GreedySearch gs(g, q);
  std::vector<std::pair<bool, IntMatrix>> phases;  // (upper?, transform)

  auto push_phase = [&](bool upper, const IntMatrix& accum) {
    if (accum.is_identity()) return;
    if (!phases.empty() && phases.back().first == upper)
      phases.back().second = accum * phases.back().second;
    else
      phases.emplace_back(upper, accum);
  };

  bool upper_next = true;
  {
    GreedySearch probe_u = gs, probe_l = gs;
    probe_u.run_phase(true);
    probe_l.run_phase(false);
    upper_next = frob2_any(probe_u.cur) <= frob2_any(probe_l.cur);
  }

  int stall_kicks = 0;
  while (static_cast<int>(phases.size()) < max_len) {
    bool fin_upper;
    IntMatrix fin(3);
    if (gs.try_finish(fin_upper, fin)) {
      push_phase(fin_upper, fin);
      break;
    }
    IntMatrix accum = gs.run_phase(upper_next);
    push_phase(upper_next, accum);
    upper_next = !upper_next;
    if (!accum.is_identity()) continue;
    IntMatrix accum2 = gs.run_phase(upper_next);
    if (!accum2.is_identity()) {
      push_phase(upper_next, accum2);
      upper_next = !upper_next;
      continue;
    }
    // Both phases stalled: bounded beam for a norm-reducing escape path.
    if (stall_kicks >= 24) break;
    ++stall_kicks;
    std::vector<IntMatrix> path = gs.endgame(96, 5);
    if (path.empty()) break;
    for (const auto& e : path) {
      bool upper = false;
      for (int i = 1; i <= 3; ++i)
        for (int j = i + 1; j <= 3; ++j)
          if (e.entry(i, j) != 0) upper = true;
      gs.cur = e * gs.cur;
      push_phase(upper, e);
    }
    upper_next = true;
  }

  if (!gs.cur.is_identity()) {
    res.ok = false;
    res.residual = gs.cur;
    return res;
  }

  // phases applied left-to-right give F_k ... F_1 g = I, so
  // g = F_1^-1 ... F_k^-1 with classes preserved.
  res.ok = true;
  IntMatrix replay = IntMatrix::identity(3);
  for (const auto& [upper, F] : phases) {
    IntMatrix inv = F.inverse();
    if (upper ? !in_upper_unipotent(inv, q) : !in_lower_unipotent(inv, q))
      throw std::logic_error("alternating_factor3: phase class corrupted");
    replay = replay * inv;
    res.factors.push_back(upper ? make_U(inv) : make_L(inv));
  }
  if (!(replay == g))
    throw std::logic_error("alternating_factor3: replay mismatch");
  res.residual = IntMatrix::identity(3);
  return res;
}

IntMatrix reversal_conjugator(int n) {
  IntMatrix J(n);
  for (int i = 1; i <= n; ++i) J.set_entry(i, n + 1 - i, 1);
  // reversal sign: (-1)^{n(n-1)/2}
  if ((static_cast<long>(n) * (n - 1) / 2) % 2 != 0) {
    for (int j = 1; j <= n; ++j) J.set_entry(1, j, -J.entry(1, j));
  }
  return J;
}

LU3UResult factor_LU3U(const IntMatrix& g, long q, int max_len) {
  LU3UResult out;
  int n = g.dim();
  if (n < 3) throw std::invalid_argument("factor_LU3U: need n >= 3");
  if (!mennicke_in_E(g, q))
    throw std::domain_error("factor_LU3U: input fails the level-q diagonal test");

  FactorCertificate base = factor_E(g, q, 3);
  IntMatrix gstar = base.factors[3].matrix.corner_block(3);

  AlternatingResult alt = alternating_factor3(gstar, q, max_len);
  if (!alt.ok) {
    out.status = FactorStatus::SoftFail;
    out.detail = "alternating search exhausted; residual block " +
                 alt.residual.to_text();
    return out;
  }

  // Strip a leading L factor and a trailing U factor; they ride along with
  // the neighbouring certificate factors for free.
  std::vector<ClassifiedFactor> chain = alt.factors;
  IntMatrix l0 = IntMatrix::identity(3);
  IntMatrix u0 = IntMatrix::identity(3);
  if (!chain.empty() && chain.front().cls == FactorClass::L) {
    l0 = chain.front().matrix;
    chain.erase(chain.begin());
  }
  if (!chain.empty() && chain.back().cls == FactorClass::U) {
    u0 = chain.back().matrix;
    chain.pop_back();
  }
  // Remaining chain alternates starting U and ending L: exact pairs.
  std::vector<ULPair> pairs;
  for (size_t i = 0; i < chain.size();) {
    IntMatrix u = IntMatrix::identity(3);
    IntMatrix l = IntMatrix::identity(3);
    if (chain[i].cls == FactorClass::U) {
      u = chain[i].matrix;
      ++i;
      if (i < chain.size() && chain[i].cls == FactorClass::L) {
        l = chain[i].matrix;
        ++i;
      }
    } else {
      l = chain[i].matrix;
      ++i;
    }
    pairs.push_back(ULPair{u, l});
  }
  int m = static_cast<int>(pairs.size());
  if (3 * m > n) {
    out.status = FactorStatus::SoftFail;
    std::ostringstream os;
    os << "alternating factorization needs " << m
       << " corner blocks, ambient dimension " << n << " fits only " << n / 3
       << "; residual block " << gstar.to_text();
    out.detail = os.str();
    return out;
  }

  IntMatrix A_L = base.factors[0].matrix;
  IntMatrix A_U = base.factors[1].matrix;
  IntMatrix L2p = base.factors[2].matrix * IntMatrix::embed_corner(n, l0);
  IntMatrix U2p = IntMatrix::embed_corner(n, u0) * base.factors[4].matrix;

  IntMatrix C_L = IntMatrix::identity(n);
  IntMatrix C_U = IntMatrix::identity(n);
  IntMatrix C_L2 = IntMatrix::identity(n);
  IntMatrix C_Uc_h = IntMatrix::identity(n);
  IntMatrix C_Uc_k = IntMatrix::identity(n);
  if (m > 0) {
    FactorCertificate corner = corner_factor_bottom(pairs, q, n);
    C_L = corner.factors[0].matrix;
    C_Uc_h = *corner.factors[1].witness_h;
    C_Uc_k = *corner.factors[1].witness_k;
    C_U = corner.factors[2].matrix;
    C_L2 = corner.factors[3].matrix;
  }

  // Seven factors  A_L A_U (L2p C_L) C_Uc C_U C_L2 U2p  fold into five:
  //   L U L   ->  L Uc   (conjugate the middle U past the lower factor)
  //   U L U   ->  Uc U   (conjugate the middle L out, rewritten as an
  //                       upper-unipotent witness through the reversal)
  IntMatrix Lmid = L2p * C_L;
  IntMatrix F1 = A_L * Lmid;
  IntMatrix h2 = Lmid.inverse();

  IntMatrix hstar = reversal_conjugator(n);
  IntMatrix k4 = hstar * C_L2 * hstar.inverse();
  IntMatrix h4 = C_U * hstar.inverse();
  IntMatrix F5 = C_U * U2p;

  FactorCertificate cert(g, q);
  cert.factors.push_back(make_L(F1));
  cert.factors.push_back(make_Uc(h2, A_U));
  cert.factors.push_back(make_Uc(C_Uc_h, C_Uc_k));
  cert.factors.push_back(make_Uc(h4, k4));
  cert.factors.push_back(make_U(F5));

  out.status = FactorStatus::Ok;
  out.certificate = std::move(cert);
  out.detail.clear();
  return out;
}

}  // namespace slnw
