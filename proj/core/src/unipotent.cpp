#include "slnw/unipotent.hpp"

#include <stdexcept>

namespace slnw {

std::array<IntMatrix, 3> tridiagonal_cover(long q,
                                           const std::vector<mpz_class>& a,
                                           int n) {
  if (n < 3) throw std::invalid_argument("tridiagonal_cover: need n >= 3");
  if (q < 1) throw std::invalid_argument("tridiagonal_cover: q >= 1");
  if (static_cast<int>(a.size()) != n - 1)
    throw std::invalid_argument("tridiagonal_cover: need n-1 entries");

  std::array<IntMatrix, 3> gs{IntMatrix::identity(n), IntMatrix::identity(n),
                              IntMatrix::identity(n)};
  // g_k covers superdiagonal positions i with i mod 3 == k+1 (mod 3); the
  // carrying 3x3 block starts at row i, truncated at the boundary.
  for (int k = 0; k < 3; ++k) {
    for (int i = k + 1; i <= n - 1; i += 3)
      gs[static_cast<size_t>(k)].set_entry(i, i + 1,
                                           q * a[static_cast<size_t>(i - 1)]);
  }
  return gs;
}

IntMatrix superdiag_conjugator(const IntMatrix& g, const IntMatrix& gp,
                               long q) {
  int n = g.dim();
  if (gp.dim() != n) throw std::invalid_argument("superdiag_conjugator: sizes");
  if (!in_upper_unipotent(g, q) || !in_upper_unipotent(gp, q))
    throw std::domain_error("superdiag_conjugator: inputs not in U_n(Z;q)");
  for (int i = 1; i <= n - 1; ++i)
    if (g.entry(i, i + 1) != q || gp.entry(i, i + 1) != q)
      throw std::domain_error(
          "superdiag_conjugator: superdiagonal must be constant q");

  // Solve (I+S)(I+N) = (I+N')(I+S) diagonal by diagonal:
  //   N - N' = N' S - S N,
  // where on diagonal d the unknown S^(d-1) enters through
  //   q (Z S^(d-1) - S^(d-1) Z),  Z = superdiagonal of ones,
  // i.e. q (x_{i+1} - x_i) telescoping along the diagonal.  Every right
  // hand side is divisible by q, so the sweep stays integral.
  IntMatrix N = g - IntMatrix::identity(n);
  IntMatrix Np = gp - IntMatrix::identity(n);
  IntMatrix S(n);  // strictly upper, filled one diagonal at a time

  for (int d = 2; d <= n - 1; ++d) {
    // known terms on diagonal d of N' S - S N, using S diagonals < d-1
    IntMatrix NpS = Np * S;
    IntMatrix SN = S * N;
    int e = d - 1;  // diagonal being solved, entries x_1..x_{n-e}
    std::vector<mpz_class> x(static_cast<size_t>(n - e), 0);
    for (int i = 1; i <= n - d; ++i) {
      // v_i = (N - N')_{i,i+d} - [known part of (N'S - SN)]_{i,i+d}
      // where the known part excludes the S^(d-1) contribution q(x_{i+1}-x_i).
      mpz_class known = NpS.entry(i, i + d) - SN.entry(i, i + d);
      // Subtract the S^(d-1) terms already implicitly included: none, since
      // S has no diagonal d-1 yet.
      mpz_class v = (N.entry(i, i + d) - Np.entry(i, i + d)) - known;
      if (!mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(q)))
        throw std::logic_error("superdiag_conjugator: non-integral sweep");
      x[static_cast<size_t>(i)] = x[static_cast<size_t>(i - 1)] + v / q;
    }
    for (int i = 1; i <= n - e; ++i)
      S.set_entry(i, i + e, x[static_cast<size_t>(i - 1)]);
  }

  IntMatrix h = IntMatrix::identity(n) + S;
  if (!(h * g == gp * h))
    throw std::logic_error("superdiag_conjugator: conjugation identity failed");
  return h;
}

IntMatrix sanov_a() {
  IntMatrix m = IntMatrix::identity(2);
  m.set_entry(1, 2, 2);
  return m;
}

IntMatrix sanov_b() {
  IntMatrix m = IntMatrix::identity(2);
  m.set_entry(2, 1, 2);
  return m;
}

QWitness q_witness(const Word& w) {
  if (is_trivial_on_free(w))
    throw std::domain_error("q_witness: word is trivial");

  // Word value on the Sanov pair, embedded in the top-left SL_2 block.
  std::vector<IntMatrix> tuple;
  int d = w.arity();
  tuple.push_back(sanov_a());
  if (d >= 2) tuple.push_back(sanov_b());
  for (int i = 3; i <= d; ++i)
    tuple.push_back(i % 2 == 1 ? sanov_a() : sanov_b());
  IntMatrix val2 =
      evaluate_word<IntMatrix>(w, tuple, IntMatrix::identity(2));
  if (val2.is_identity())
    throw std::logic_error("q_witness: free pair collapsed on nontrivial word");

  QWitness out;
  out.w = w;
  IntMatrix g = IntMatrix::identity(3);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) g.set_entry(i, j, val2.entry(i, j));
  out.g = g;

  // h = e_{1,3}(u) e_{2,3}(v): [g,h] = I + ((I - M^-1)(u,v))_1 E13 +
  // ((I - M^-1)(u,v))_2 E23.  Try the two generators, then their product.
  IntMatrix m_inv = val2.inverse();
  auto col_commutator = [&](long u, long v) {
    mpz_class c1 = (1 - m_inv.entry(1, 1)) * u - m_inv.entry(1, 2) * v;
    mpz_class c2 = -m_inv.entry(2, 1) * u + (1 - m_inv.entry(2, 2)) * v;
    return std::pair<mpz_class, mpz_class>(c1, c2);
  };
  long hu = 0, hv = 0;
  for (auto [u, v] : {std::pair<long, long>{1, 0}, {0, 1}, {1, 1}}) {
    auto [c1, c2] = col_commutator(u, v);
    if (c1 != 0 || c2 != 0) {
      hu = u;
      hv = v;
      break;
    }
  }
  IntMatrix h = IntMatrix::identity(3);
  h.set_entry(1, 3, hu);
  h.set_entry(2, 3, hv);
  out.h = h;

  IntMatrix comm = g.inverse() * h.inverse() * g * h;
  out.commutator = comm;
  if (comm.is_identity())
    throw std::logic_error("q_witness: commutator unexpectedly trivial");

  mpz_class u = comm.entry(1, 3);
  mpz_class v = comm.entry(2, 3);
  mpz_class qz;
  mpz_gcd(qz.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
  out.q = mpz_get_si(qz.get_mpz_t());

  // Conjugator through the SL_2 block: S (u/q, v/q)^T = (1, 0)^T.
  mpz_class a = u / qz, b = v / qz;
  mpz_class gg, s, t;
  mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  // gg = 1 = s a + t b; take S = [[s, t], [-b, a]].
  IntMatrix c = IntMatrix::identity(3);
  c.set_entry(1, 1, s);
  c.set_entry(1, 2, t);
  c.set_entry(2, 1, -b);
  c.set_entry(2, 2, a);
  out.conjugator = c;

  IntMatrix target = IntMatrix::elementary(3, 1, 3, qz);
  if (!(c * comm * c.inverse() == target))
    throw std::logic_error("q_witness: conjugation to e_{1,3}(q) failed");
  return out;
}

}  // namespace slnw
