#include "slnw/lie.hpp"

#include <algorithm>
#include <stdexcept>

namespace slnw {

bool is_trace_zero(const ModMatrix& A) { return A.trace() == 0; }

bool is_central_lie(const ModMatrix& A) { return A.is_scalar(); }

std::vector<ModMatrix> sl_basis(int n, uint64_t p) {
  std::vector<ModMatrix> basis;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      ModMatrix E(n, p);
      E.set_entry(i, j, 1);
      basis.push_back(E);
    }
  for (int i = 2; i <= n; ++i) {
    ModMatrix E(n, p);
    E.set_entry(1, 1, 1);
    E.set_entry(i, i, p - 1);
    basis.push_back(E);
  }
  return basis;
}

int fp_rank(std::vector<uint64_t> rows, int nrows, int ncols, uint64_t p) {
  int rank = 0;
  for (int col = 0; col < ncols && rank < nrows; ++col) {
    int piv = -1;
    for (int r = rank; r < nrows; ++r)
      if (rows[static_cast<size_t>(r) * ncols + col] % p != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    for (int c = 0; c < ncols; ++c)
      std::swap(rows[static_cast<size_t>(rank) * ncols + c],
                rows[static_cast<size_t>(piv) * ncols + c]);
    uint64_t inv = mod_inverse(rows[static_cast<size_t>(rank) * ncols + col], p);
    for (int r = 0; r < nrows; ++r) {
      if (r == rank) continue;
      uint64_t f = rows[static_cast<size_t>(r) * ncols + col] % p;
      if (f == 0) continue;
      uint64_t scale = (f * inv) % p;
      for (int c = col; c < ncols; ++c) {
        uint64_t sub = (rows[static_cast<size_t>(rank) * ncols + c] * scale) % p;
        uint64_t& cell = rows[static_cast<size_t>(r) * ncols + c];
        cell = (cell + p - sub) % p;
      }
    }
    ++rank;
  }
  return rank;
}

int diff_rank(const ModMatrix& a, const ModMatrix& b) {
  int n = a.dim();
  uint64_t p = a.modulus();
  if (b.dim() != n || b.modulus() != p)
    throw std::invalid_argument("diff_rank: mismatched inputs");
  ModMatrix ai = a.inverse();
  ModMatrix bi = b.inverse();
  std::vector<ModMatrix> basis = sl_basis(n, p);
  int dim = static_cast<int>(basis.size());
  int ncols = n * n;
  std::vector<uint64_t> rows;
  rows.reserve(static_cast<size_t>(2 * dim) * ncols);
  auto push_image = [&](const ModMatrix& M) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) rows.push_back(M.entry(i, j));
  };
  for (const auto& X : basis) {
    ModMatrix Xa = ai * X * a;
    ModMatrix img = bi * (X - Xa) * b;
    push_image(img);
  }
  for (const auto& Y : basis) {
    ModMatrix Yb = bi * Y * b;
    push_image(Y - Yb);
  }
  return fp_rank(std::move(rows), 2 * dim, ncols, p);
}

std::pair<uint64_t, uint64_t> two_squares(uint64_t c, uint64_t p) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("two_squares: need odd p");
  c %= p;
  std::vector<int64_t> sqrt_min(p, -1);
  for (uint64_t y = 0; y < p; ++y) {
    uint64_t s = (y * y) % p;
    if (sqrt_min[s] < 0) sqrt_min[s] = static_cast<int64_t>(y);
  }
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t r = (c + p - (x * x) % p) % p;
    if (sqrt_min[r] >= 0)
      return {x, static_cast<uint64_t>(sqrt_min[r])};
  }
  throw std::logic_error("two_squares: unreachable for prime modulus");
}

std::optional<std::array<uint64_t, 3>> curve_point(uint64_t p) {
  for (uint64_t x = 1; x < p; ++x) {
    for (uint64_t y = 1; y < p; ++y) {
      if ((x * x + y * y + 1) % p != 0) continue;
      uint64_t ix = mod_inverse(x, p);
      uint64_t iy = mod_inverse(y, p);
      if ((ix * ix + iy * iy + 1) % p != 0) return std::array<uint64_t, 3>{x, y, 1};
    }
  }
  return std::nullopt;
}

namespace {

bool is_nilpotent(const ModMatrix& A) {
  ModMatrix acc = A;
  for (int i = 1; i < A.dim(); ++i) acc = acc * A;
  ModMatrix zero(A.dim(), A.modulus());
  return acc == zero;
}

ModMatrix conj(const ModMatrix& A, const ModMatrix& x) { return A.conjugate_by_inverse(x); }

// Incremental F_p row space used to harvest a spanning family of
// conjugates; `reduce` returns true when the vector enlarged the span.
struct SpanBuilder {
  uint64_t p;
  int ncols;
  std::vector<std::vector<uint64_t>> echelon;  // rows with leading pivots
  std::vector<int> pivot_col;

  SpanBuilder(uint64_t prime, int cols) : p(prime), ncols(cols) {}

  static std::vector<uint64_t> flatten(const ModMatrix& M) {
    std::vector<uint64_t> v;
    v.reserve(static_cast<size_t>(M.dim()) * M.dim());
    for (int i = 1; i <= M.dim(); ++i)
      for (int j = 1; j <= M.dim(); ++j) v.push_back(M.entry(i, j));
    return v;
  }

  bool add(const ModMatrix& M) {
    std::vector<uint64_t> v = flatten(M);
    for (size_t r = 0; r < echelon.size(); ++r) {
      uint64_t f = v[static_cast<size_t>(pivot_col[r])] % p;
      if (f == 0) continue;
      for (int c = 0; c < ncols; ++c)
        v[static_cast<size_t>(c)] =
            (v[static_cast<size_t>(c)] + p - (echelon[r][static_cast<size_t>(c)] * f) % p) % p;
    }
    int lead = -1;
    for (int c = 0; c < ncols; ++c)
      if (v[static_cast<size_t>(c)] % p != 0) {
        lead = c;
        break;
      }
    if (lead < 0) return false;
    uint64_t inv = mod_inverse(v[static_cast<size_t>(lead)], p);
    for (int c = 0; c < ncols; ++c) v[static_cast<size_t>(c)] = (v[static_cast<size_t>(c)] * inv) % p;
    echelon.push_back(std::move(v));
    pivot_col.push_back(lead);
    return true;
  }

  int rank() const { return static_cast<int>(echelon.size()); }
};

// Deterministic conjugator stream: identity, elementary generators, then
// short products of them, produced stage by stage on demand.
struct ConjugatorStream {
  std::vector<ModMatrix> gens;
  std::vector<ModMatrix> batch;
  int stage = 0;

  ConjugatorStream(int n, uint64_t p) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        gens.push_back(ModMatrix::elementary(n, p, i, j, 1));
        if (p > 2) gens.push_back(ModMatrix::elementary(n, p, i, j, p - 1));
      }
    batch.push_back(ModMatrix::identity(n, p));
  }

  bool advance() {
    ++stage;
    batch.clear();
    if (stage == 1) {
      batch = gens;
    } else if (stage == 2) {
      for (const auto& g : gens)
        for (const auto& h : gens) batch.push_back(g * h);
    } else if (stage == 3) {
      for (const auto& g : gens)
        for (const auto& h : gens) batch.push_back(g * h * g);
    } else {
      return false;
    }
    return true;
  }
};

// Solves sum lambda_i C_i = B over F_p; the C_i are guaranteed spanning.
std::vector<uint64_t> solve_combo(const std::vector<ModMatrix>& Cs,
                                  const ModMatrix& B, uint64_t p) {
  int n = B.dim();
  int rows_n = n * n;
  int k = static_cast<int>(Cs.size());
  // augmented system, column-major unknowns
  std::vector<uint64_t> M(static_cast<size_t>(rows_n) * (k + 1), 0);
  for (int c = 0; c < k; ++c) {
    auto v = SpanBuilder::flatten(Cs[static_cast<size_t>(c)]);
    for (int r = 0; r < rows_n; ++r)
      M[static_cast<size_t>(r) * (k + 1) + c] = v[static_cast<size_t>(r)];
  }
  auto bv = SpanBuilder::flatten(B);
  for (int r = 0; r < rows_n; ++r)
    M[static_cast<size_t>(r) * (k + 1) + k] = bv[static_cast<size_t>(r)];

  std::vector<int> pivot_of_col(k, -1);
  int rank = 0;
  for (int col = 0; col < k && rank < rows_n; ++col) {
    int piv = -1;
    for (int r = rank; r < rows_n; ++r)
      if (M[static_cast<size_t>(r) * (k + 1) + col] % p != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    for (int c = 0; c <= k; ++c)
      std::swap(M[static_cast<size_t>(rank) * (k + 1) + c],
                M[static_cast<size_t>(piv) * (k + 1) + c]);
    uint64_t inv = mod_inverse(M[static_cast<size_t>(rank) * (k + 1) + col], p);
    for (int c = col; c <= k; ++c)
      M[static_cast<size_t>(rank) * (k + 1) + c] =
          (M[static_cast<size_t>(rank) * (k + 1) + c] * inv) % p;
    for (int r = 0; r < rows_n; ++r) {
      if (r == rank) continue;
      uint64_t f = M[static_cast<size_t>(r) * (k + 1) + col] % p;
      if (f == 0) continue;
      for (int c = col; c <= k; ++c) {
        uint64_t sub = (M[static_cast<size_t>(rank) * (k + 1) + c] * f) % p;
        uint64_t& cell = M[static_cast<size_t>(r) * (k + 1) + c];
        cell = (cell + p - sub) % p;
      }
    }
    pivot_of_col[col] = rank;
    ++rank;
  }
  // consistency
  for (int r = rank; r < rows_n; ++r)
    if (M[static_cast<size_t>(r) * (k + 1) + k] % p != 0)
      throw std::logic_error("conj_sum: target outside the span");
  std::vector<uint64_t> lambda(k, 0);
  for (int col = 0; col < k; ++col)
    if (pivot_of_col[col] >= 0)
      lambda[static_cast<size_t>(col)] =
          M[static_cast<size_t>(pivot_of_col[col]) * (k + 1) + k];
  return lambda;
}

// True when M has a single nonzero entry, off the diagonal.
bool single_entry(const ModMatrix& M, int& oi, int& oj) {
  int cnt = 0;
  for (int i = 1; i <= M.dim(); ++i)
    for (int j = 1; j <= M.dim(); ++j)
      if (M.entry(i, j) != 0) {
        ++cnt;
        oi = i;
        oj = j;
      }
  return cnt == 1 && oi != oj;
}

}  // namespace

ConjSumResult conj_sum_decompose(const ModMatrix& A, const ModMatrix& B,
                                 uint64_t p) {
  int n = A.dim();
  if (B.dim() != n || A.modulus() != p || B.modulus() != p)
    throw std::invalid_argument("conj_sum_decompose: mismatched inputs");
  if (!is_trace_zero(A) || is_central_lie(A))
    throw std::domain_error("conj_sum_decompose: A must be non-central trace zero");
  if (!is_trace_zero(B))
    throw std::domain_error("conj_sum_decompose: B must have trace zero");

  ConjSumResult out;
  if (B == A) {
    out.conjugators.push_back(ModMatrix::identity(n, p));
    out.rung = "identical";
    return out;
  }
  ModMatrix zero(n, p);
  if (B == zero) {
    out.rung = "zero-target";
    return out;
  }

  // Assemble a seed: a short list of conjugators of A whose conjugate-sum
  // is either a single off-diagonal entry (structured rungs) or A itself
  // (generic fallback).
  std::vector<ModMatrix> seed{ModMatrix::identity(n, p)};
  std::string rung = "generic-spanning";

  if (p > 2 && is_nilpotent(A)) {
    // Jordan reduction: for a regular nilpotent, two conjugates add up to
    // a single-entry matrix.
    ModMatrix power = ModMatrix::identity(n, p);
    for (int i = 0; i < n - 1; ++i) power = power * A;
    bool regular = !(power == zero);
    if (regular) {
      // basis v, Av, ..., A^{n-1}v reversed, first column rescaled to det 1
      int pick = -1;
      ModMatrix v(n, p);
      for (int cand = 1; cand <= n && pick < 0; ++cand) {
        ModMatrix e(n, p);
        // represent the candidate basis vector as a column matrix
        for (int i = 1; i <= n; ++i) e.set_entry(i, 1, i == cand ? 1 : 0);
        ModMatrix w = power * e;
        for (int i = 1; i <= n; ++i)
          if (w.entry(i, 1) != 0) pick = cand;
        if (pick >= 0) v = e;
      }
      if (pick >= 0) {
        std::vector<ModMatrix> cols{v};
        for (int i = 1; i < n; ++i) cols.push_back(A * cols.back());
        ModMatrix S1(n, p);
        for (int c = 0; c < n; ++c)
          for (int i = 1; i <= n; ++i)
            S1.set_entry(i, c + 1, cols[static_cast<size_t>(n - 1 - c)].entry(i, 1));
        uint64_t delta = S1.det();
        if (delta != 0) {
          ModMatrix D = ModMatrix::identity(n, p);
          D.set_entry(1, 1, mod_inverse(delta, p));
          ModMatrix S = S1 * D;
          ModMatrix J = conj(A, S);
          if (n == 2) {
            seed = {S};
            rung = "nilpotent-jordan";
          } else {
            // diag(eps,1,-1,...) + E_{2,n}(1) with eps fixing the sign
            ModMatrix Bh = ModMatrix::identity(n, p);
            for (int i = 2; i <= n; ++i)
              Bh.set_entry(i, i, i % 2 == 0 ? 1 : p - 1);
            ModMatrix test = Bh;
            if (test.det() != 1) Bh.set_entry(1, 1, p - 1);
            Bh.set_entry(2, n, 1);
            ModMatrix Ap = J + conj(J, Bh);
            // expect: only row 1 nonzero, last coordinate nonzero
            bool rowform = Ap.entry(1, n) != 0;
            for (int i = 2; i <= n && rowform; ++i)
              for (int j = 1; j <= n; ++j)
                if (Ap.entry(i, j) != 0) rowform = false;
            if (rowform) {
              ModMatrix T = ModMatrix::identity(n, p);
              uint64_t c = Ap.entry(1, n);
              uint64_t cinv = mod_inverse(c, p);
              for (int j = 2; j < n; ++j) {
                uint64_t wj = Ap.entry(1, j);
                if (wj)
                  T = T * ModMatrix::elementary(n, p, n, j,
                                                (p - (wj * cinv) % p) % p);
              }
              seed = {S * T, S * Bh * T};
              rung = "nilpotent-jordan";
            }
          }
        }
      }
    }
  } else if (p > 2 && n == 2) {
    // Antidiagonalize, then kill the upper entry with three diagonal
    // conjugates built from a curve point.
    auto cp = curve_point(p);
    if (cp) {
      // find v with (v, Av) a basis
      for (int cand = 1; cand <= n; ++cand) {
        ModMatrix v(n, p);
        for (int i = 1; i <= n; ++i) v.set_entry(i, 1, i == cand ? 1 : 0);
        ModMatrix Av = A * v;
        uint64_t det = (v.entry(1, 1) * Av.entry(2, 1) + p * p -
                        v.entry(2, 1) * Av.entry(1, 1)) %
                       p;
        if (det == 0) continue;
        uint64_t dinv = mod_inverse(det, p);
        ModMatrix P(n, p);
        P.set_entry(1, 1, v.entry(1, 1));
        P.set_entry(2, 1, v.entry(2, 1));
        P.set_entry(1, 2, (Av.entry(1, 1) * dinv) % p);
        P.set_entry(2, 2, (Av.entry(2, 1) * dinv) % p);
        ModMatrix anti = conj(A, P);
        if (anti.entry(1, 1) != 0 || anti.entry(2, 2) != 0) continue;
        auto [x, y, z] = *cp;
        seed.clear();
        for (uint64_t s : {x, y, z}) {
          ModMatrix Ds(n, p);
          Ds.set_entry(1, 1, s);
          Ds.set_entry(2, 2, mod_inverse(s, p));
          seed.push_back(P * Ds);
        }
        rung = "antidiagonal-curve";
        break;
      }
      if (rung != "antidiagonal-curve") seed = {ModMatrix::identity(n, p)};
    }
  } else if (p > 2 && n > 2 && A.det() != 0) {
    // Nonsingular split: adding the diag(-1,-1,1,...) conjugate produces a
    // singular matrix; profitable when that matrix is a regular nilpotent,
    // otherwise the generic route below handles it.
    ModMatrix Bc = ModMatrix::identity(n, p);
    Bc.set_entry(1, 1, p - 1);
    Bc.set_entry(2, 2, p - 1);
    ModMatrix Ap = A + conj(A, Bc);
    if (!(Ap == zero) && is_nilpotent(Ap)) {
      ModMatrix power = ModMatrix::identity(n, p);
      for (int i = 0; i < n - 1; ++i) power = power * Ap;
      if (!(power == zero)) {
        ConjSumResult inner = conj_sum_decompose(Ap, B, p);
        for (const auto& x : inner.conjugators) {
          out.conjugators.push_back(x);
          out.conjugators.push_back(Bc * x);
        }
        out.rung = "singular-split+" + inner.rung;
        // verify before returning
        ModMatrix sum(n, p);
        for (const auto& x : out.conjugators) sum = sum + conj(A, x);
        if (sum == B) return out;
        out.conjugators.clear();
      }
    }
  }

  // Seed sum M := sum_j conj(A, seed_j).
  ModMatrix M(n, p);
  for (const auto& s : seed) M = M + conj(A, s);
  if (M == zero || is_central_lie(M)) {
    seed = {ModMatrix::identity(n, p)};
    rung = "generic-spanning";
    M = A;
  }

  // Spanning family of conjugates of M, then a linear solve.
  ConjugatorStream stream(n, p);
  SpanBuilder span(p, n * n);
  std::vector<ModMatrix> Cs;
  std::vector<ModMatrix> ys;
  do {
    for (const auto& y : stream.batch) {
      ModMatrix C = conj(M, y);
      if (span.add(C)) {
        Cs.push_back(C);
        ys.push_back(y);
        if (span.rank() == n * n - 1) break;
      }
    }
  } while (span.rank() < n * n - 1 && stream.advance());
  if (span.rank() < n * n - 1)
    throw std::logic_error("conj_sum: conjugates failed to span sl_n");

  std::vector<uint64_t> lambda = solve_combo(Cs, B, p);

  int si = 0, sj = 0;
  bool e_seed = p > 2 && single_entry(M, si, sj);
  for (size_t i = 0; i < lambda.size(); ++i) {
    uint64_t lam = lambda[i];
    if (lam == 0) continue;
    if (e_seed) {
      // lambda * E = E(c s^-2) + E(c t^-2): two diagonal conjugates.
      auto [sq1, sq2] = two_squares(lam, p);
      for (uint64_t s : {sq1, sq2}) {
        if (s == 0) continue;
        ModMatrix Ds = ModMatrix::identity(n, p);
        Ds.set_entry(si, si, mod_inverse(s, p));
        Ds.set_entry(sj, sj, s);
        for (const auto& sd : seed) out.conjugators.push_back(sd * Ds * ys[i]);
      }
    } else {
      for (uint64_t rep = 0; rep < lam; ++rep)
        for (const auto& sd : seed) out.conjugators.push_back(sd * ys[i]);
    }
  }
  out.rung = rung;

  ModMatrix sum(n, p);
  for (const auto& x : out.conjugators) sum = sum + conj(A, x);
  if (!(sum == B))
    throw std::logic_error("conj_sum: reconstruction failed");
  return out;
}

}  // namespace slnw
