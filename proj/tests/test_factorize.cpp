#include "slnw/factorize.hpp"

#include <random>

#include "doctest.h"

using namespace slnw;

namespace {

IntMatrix e(int n, int i, int j, long x) {
  return IntMatrix::elementary(n, i, j, mpz_class(x));
}

IntMatrix random_level_word(int n, long q, int len, std::mt19937_64& rng,
                            long coef_bound = 3) {
  std::uniform_int_distribution<int> idx(1, n);
  std::uniform_int_distribution<long> coef(-coef_bound, coef_bound);
  IntMatrix acc = IntMatrix::identity(n);
  for (int s = 0; s < len; ++s) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    long c = coef(rng);
    if (c == 0) continue;
    acc = acc * e(n, i, j, q * c);
  }
  return acc;
}

mpz_class vgcd(const std::vector<mpz_class>& v) {
  mpz_class g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

}  // namespace

TEST_CASE("block split identity case") {
  std::vector<IntMatrix> blocks{IntMatrix::identity(3), IntMatrix::identity(3)};
  BlockDiagSplit s = block_diag_factor(blocks, 2);
  // u-parts collapse; the two lower parts agree, so every certificate
  // factor is the identity even though l1 = l2 carry the structural
  // subdiagonal blocks
  CHECK(s.u1.is_identity());
  CHECK(s.u2.is_identity());
  CHECK(s.l1 == s.l2);
  CHECK(s.certificate.input == IntMatrix::identity(6));
  for (const auto& f : s.certificate.factors) CHECK(f.matrix.is_identity());
  CHECK(s.certificate.verify().ok);
}

TEST_CASE("block split two blocks") {
  long q = 2;
  std::vector<IntMatrix> blocks{e(3, 1, 2, 2), e(3, 1, 2, -2)};
  BlockDiagSplit s = block_diag_factor(blocks, q);
  // reconstruction diag(g1, g2) = l1^-1 u1^-1 l2 u2
  IntMatrix diag = IntMatrix::identity(6);
  diag.set_entry(1, 2, 2);
  diag.set_entry(4, 5, -2);
  CHECK(s.l1.inverse() * s.u1.inverse() * s.l2 * s.u2 == diag);
  CHECK(s.certificate.input == diag);
  CHECK(s.certificate.class_sequence() == "L,Uc,U");
  CHECK(s.certificate.verify().ok);
  CHECK(in_upper_unipotent(s.u1, q));
  CHECK(in_upper_unipotent(s.u2, q));
  CHECK(in_lower_unipotent(s.l1.inverse() * s.l2, q));
}

TEST_CASE("block split randomized") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 30; ++t) {
    long q = 3;
    IntMatrix g1 = random_level_word(3, q, 5, rng);
    IntMatrix g2 = random_level_word(3, q, 5, rng);
    IntMatrix g3 = (g1 * g2).inverse();
    BlockDiagSplit s = block_diag_factor({g1, g2, g3}, q);
    CHECK(s.certificate.verify().ok);
  }
  CHECK_THROWS_AS(
      block_diag_factor({e(3, 1, 2, 2), e(3, 1, 2, 2)}, 2),
      std::domain_error);
}

TEST_CASE("corner compression") {
  long q = 2;
  SUBCASE("trivial block") {
    std::vector<ULPair> blocks{{IntMatrix::identity(3), IntMatrix::identity(3)}};
    FactorCertificate cert = corner_factor(blocks, q);
    CHECK(cert.input == IntMatrix::identity(3));
    CHECK(cert.verify().ok);
    CHECK(cert.class_sequence() == "L,Uc,U,L");
  }
  SUBCASE("two nontrivial pairs") {
    std::vector<ULPair> blocks{{e(3, 1, 2, q), e(3, 2, 1, q)},
                               {e(3, 1, 3, q), e(3, 3, 1, q)}};
    FactorCertificate cert = corner_factor(blocks, q);
    IntMatrix P = e(3, 1, 2, q) * e(3, 2, 1, q) * e(3, 1, 3, q) * e(3, 3, 1, q);
    IntMatrix expect = IntMatrix::identity(6);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) expect.set_entry(i, j, P.entry(i, j));
    CHECK(cert.input == expect);
    CHECK(cert.verify().ok);
  }
  SUBCASE("second block inverse of first") {
    IntMatrix u = e(3, 1, 2, q), l = e(3, 2, 1, q);
    IntMatrix g1 = u * l;
    IntMatrix inv = g1.inverse();  // = l^-1 u^-1, lower-upper order
    // present it as a U*L pair via the unique split
    IntMatrix linv = IntMatrix::identity(3);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j < i; ++j) linv.set_entry(i, j, inv.entry(i, j));
    // inv = u2 * l2 requires u2 = inv * l2^-1 upper; check and use
    IntMatrix l2(3), u2(3);
    bool ok = false;
    // unique candidate split: l2 from the strictly-lower part of inv
    l2 = linv;
    u2 = inv * l2.inverse();
    ok = in_upper_unipotent(u2, q) && in_lower_unipotent(l2, q);
    if (ok) {
      FactorCertificate cert = corner_factor({{u, l}, {u2, l2}}, q);
      CHECK(cert.input == IntMatrix::identity(6));
      CHECK(cert.verify().ok);
    } else {
      // the split can legitimately fail; nothing to certify then
      CHECK(!ok);
    }
  }
  SUBCASE("bottom corner variant") {
    std::vector<ULPair> blocks{{e(3, 1, 2, q), e(3, 2, 1, q)},
                               {e(3, 2, 3, q), e(3, 3, 2, q)}};
    FactorCertificate cert = corner_factor_bottom(blocks, q, 9);
    IntMatrix P = e(3, 1, 2, q) * e(3, 2, 1, q) * e(3, 2, 3, q) * e(3, 3, 2, q);
    CHECK(cert.input == IntMatrix::embed_corner(9, P));
    CHECK(cert.verify().ok);
    CHECK(cert.class_sequence() == "L,Uc,U,L");
  }
}

TEST_CASE("stable range coefficients") {
  auto t1 = stable_range_coeffs({mpz_class(6), mpz_class(10), mpz_class(15)});
  CHECK(t1 == std::vector<mpz_class>{mpz_class(1), mpz_class(0)});
  mpz_class g1 = vgcd({mpz_class(10) - t1[0] * 6, mpz_class(15) - t1[1] * 6});
  CHECK(g1 == 1);

  auto t2 = stable_range_coeffs({mpz_class(1), mpz_class(0), mpz_class(0)});
  mpz_class g2 = vgcd({mpz_class(0) - t2[0], mpz_class(0) - t2[1]});
  CHECK(g2 == 1);

  auto t3 = stable_range_coeffs({mpz_class(4), mpz_class(6), mpz_class(9)});
  mpz_class g3 = vgcd({mpz_class(6) - t3[0] * 4, mpz_class(9) - t3[1] * 4});
  CHECK(g3 == 1);

  // randomized postcondition property
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> entry(-4000, 4000);
  std::uniform_int_distribution<int> len(3, 6);
  for (int t = 0; t < 200; ++t) {
    std::vector<mpz_class> a;
    int m = len(rng);
    for (int i = 0; i < m; ++i) a.emplace_back(entry(rng));
    if (vgcd(a) == 0) continue;
    auto tt = stable_range_coeffs(a);
    std::vector<mpz_class> adj;
    for (size_t i = 1; i < a.size(); ++i) adj.push_back(a[i] - tt[i - 1] * a[0]);
    CHECK(vgcd(adj) == vgcd(a));
  }

  CHECK_THROWS_AS(
      stable_range_coeffs({mpz_class(0), mpz_class(0), mpz_class(0)}),
      std::invalid_argument);
}

TEST_CASE("peel step") {
  long q = 2;
  SUBCASE("already reduced input keeps its shape") {
    std::mt19937_64 rng(5);
    IntMatrix inner = random_level_word(3, q, 6, rng);
    IntMatrix g = IntMatrix::embed_corner(4, inner);
    PeelStep ps = peel_once(g, q);
    CHECK(ps.c1 * ps.r1 * ps.c2 * IntMatrix::embed_corner(4, ps.reduced) * ps.r2 ==
          g);
    CHECK(mennicke_in_E(ps.reduced, q));
  }
  SUBCASE("worked example") {
    IntMatrix g = e(4, 2, 1, q) * e(4, 1, 2, q * q);
    PeelStep ps = peel_once(g, q);
    IntMatrix mid = IntMatrix::embed_corner(4, ps.reduced);
    CHECK(ps.c1 * ps.r1 * ps.c2 * mid * ps.r2 == g);
    CHECK(mennicke_in_E(ps.reduced, q));
  }
  SUBCASE("randomized") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
      IntMatrix g = random_level_word(5, 3, 10, rng);
      PeelStep ps = peel_once(g, 3);
      CHECK(ps.c1 * ps.r1 * ps.c2 * IntMatrix::embed_corner(5, ps.reduced) *
                ps.r2 ==
            g);
      CHECK(mennicke_in_E(ps.reduced, 3));
    }
  }
  CHECK_THROWS_AS(peel_once(e(4, 1, 2, 1), 2), std::domain_error);
}

TEST_CASE("factor_E certificates") {
  SUBCASE("identity") {
    FactorCertificate cert = factor_E(IntMatrix::identity(4), 2, 3);
    CHECK(cert.verify().ok);
    CHECK(cert.class_sequence() == "L,U,L,Eblock,U");
    for (const auto& f : cert.factors)
      if (f.cls != FactorClass::Eblock) CHECK(f.matrix.is_identity());
  }
  SUBCASE("worked example n=4") {
    IntMatrix g = e(4, 1, 2, 2) * e(4, 3, 1, 2);
    FactorCertificate cert = factor_E(g, 2, 3);
    CHECK(cert.verify().ok);
    CHECK(cert.class_sequence() == "L,U,L,Eblock,U");
    CHECK(cert.factors[3].block_size == 3);
  }
  SUBCASE("randomized n=6 q=3") {
    std::mt19937_64 rng(301);
    for (int t = 0; t < 8; ++t) {
      IntMatrix g = random_level_word(6, 3, 20, rng, 2);
      FactorCertificate cert = factor_E(g, 3, 3);
      CHECK(cert.verify().ok);
    }
  }
  SUBCASE("nesting: the corner block of a size-n run peels further") {
    std::mt19937_64 rng(99);
    IntMatrix g = random_level_word(5, 2, 12, rng, 2);
    FactorCertificate outer = factor_E(g, 2, 4);
    REQUIRE(outer.verify().ok);
    IntMatrix corner = outer.factors[3].matrix.corner_block(4);
    FactorCertificate inner = factor_E(corner, 2, 3);
    CHECK(inner.verify().ok);
  }
}

TEST_CASE("alternating search on 3x3 candidates") {
  long q = 2;
  SUBCASE("single generator") {
    AlternatingResult r = alternating_factor3(e(3, 1, 2, q), q, 16);
    REQUIRE(r.ok);
    REQUIRE(r.factors.size() == 1);
    CHECK(r.factors[0].cls == FactorClass::U);
    CHECK(r.factors[0].matrix == e(3, 1, 2, q));
  }
  SUBCASE("one pair") {
    IntMatrix g = e(3, 1, 2, q) * e(3, 2, 1, q);
    AlternatingResult r = alternating_factor3(g, q, 16);
    REQUIRE(r.ok);
    IntMatrix prod = IntMatrix::identity(3);
    for (const auto& f : r.factors) prod = prod * f.matrix;
    CHECK(prod == g);
    CHECK(r.factors.size() <= 2);
  }
  SUBCASE("worked power example") {
    IntMatrix base = e(3, 1, 2, 2) * e(3, 2, 1, 2);
    IntMatrix g = base * base * base;
    AlternatingResult r = alternating_factor3(g, 2, 16);
    REQUIRE(r.ok);
    IntMatrix prod = IntMatrix::identity(3);
    int prev = -1;
    for (const auto& f : r.factors) {
      prod = prod * f.matrix;
      int cls = f.cls == FactorClass::U ? 0 : 1;
      CHECK(cls != prev);
      prev = cls;
      if (f.cls == FactorClass::U) CHECK(in_upper_unipotent(f.matrix, 2));
      if (f.cls == FactorClass::L) CHECK(in_lower_unipotent(f.matrix, 2));
    }
    CHECK(prod == g);
    CHECK(r.factors.size() <= 6);
  }
  SUBCASE("randomized alternating products recovered exactly") {
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<long> coef(-3, 3);
    for (int t = 0; t < 30; ++t) {
      IntMatrix g = IntMatrix::identity(3);
      for (int s = 0; s < 4; ++s) {
        g = g * (e(3, 1, 2, 2 * coef(rng)) * e(3, 1, 3, 2 * coef(rng)) *
                 e(3, 2, 3, 2 * coef(rng)));
        g = g * (e(3, 2, 1, 2 * coef(rng)) * e(3, 3, 1, 2 * coef(rng)) *
                 e(3, 3, 2, 2 * coef(rng)));
      }
      AlternatingResult r = alternating_factor3(g, 2, 32);
      REQUIRE(r.ok);
      IntMatrix prod = IntMatrix::identity(3);
      for (const auto& f : r.factors) prod = prod * f.matrix;
      CHECK(prod == g);
    }
  }
}

TEST_CASE("five factor pipeline") {
  SUBCASE("identity input") {
    LU3UResult r = factor_LU3U(IntMatrix::identity(6), 2);
    REQUIRE(r.status == FactorStatus::Ok);
    CHECK(r.certificate.class_sequence() == "L,Uc,Uc,Uc,U");
    CHECK(r.certificate.verify().ok);
  }
  SUBCASE("random words across sizes and levels") {
    std::mt19937_64 rng(2024);
    int soft = 0, total = 0;
    for (long q : {1L, 2L, 3L}) {
      for (int n : {6, 9}) {
        for (int t = 0; t < 4; ++t) {
          IntMatrix g = random_level_word(n, q, 15, rng, 2);
          LU3UResult r = factor_LU3U(g, q);
          ++total;
          if (r.status == FactorStatus::Ok) {
            CHECK(r.certificate.class_sequence() == "L,Uc,Uc,Uc,U");
            CHECK(r.certificate.verify().ok);
            CHECK(r.certificate.input == g);
          } else {
            ++soft;
            CHECK(!r.detail.empty());
          }
        }
      }
    }
    CHECK(soft * 20 <= total);  // soft failures stay under 5%
  }
  SUBCASE("degenerate level q=1") {
    std::mt19937_64 rng(404);
    IntMatrix g = random_level_word(9, 1, 20, rng, 2);
    LU3UResult r = factor_LU3U(g, 1);
    REQUIRE(r.status == FactorStatus::Ok);
    CHECK(r.certificate.verify().ok);
  }
  CHECK_THROWS_AS(factor_LU3U(e(6, 1, 2, 1), 2), std::domain_error);
}

TEST_CASE("reversal conjugator swaps the unipotent triangles") {
  for (int n : {3, 4, 5, 6}) {
    IntMatrix h = reversal_conjugator(n);
    CHECK(h.det() == 1);
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<long> coef(-3, 3);
    IntMatrix l = IntMatrix::identity(n);
    for (int i = 2; i <= n; ++i)
      for (int j = 1; j < i; ++j) l.set_entry(i, j, 2 * coef(rng));
    CHECK(in_lower_unipotent(l, 2));
    CHECK(in_upper_unipotent(h * l * h.inverse(), 2));
  }
}
