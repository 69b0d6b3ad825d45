#include "slnw/matrix.hpp"

#include <random>

#include "doctest.h"
#include "slnw/modmatrix.hpp"

using namespace slnw;

namespace {

IntMatrix e(int n, int i, int j, long x) {
  return IntMatrix::elementary(n, i, j, mpz_class(x));
}

IntMatrix random_unipotent_product(int n, long q, int len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> idx(1, n);
  std::uniform_int_distribution<long> coef(-3, 3);
  IntMatrix acc = IntMatrix::identity(n);
  for (int s = 0; s < len; ++s) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    acc = acc * e(n, i, j, q * coef(rng));
  }
  return acc;
}

}  // namespace

TEST_CASE("product basics") {
  IntMatrix I3 = IntMatrix::identity(3);
  CHECK(I3 * I3 == I3);
  CHECK(e(3, 1, 2, 3) * e(3, 1, 2, -3) == I3);
  // e_{1,2}(1) e_{2,3}(1) = I + E12 + E23 + E13
  IntMatrix prod = e(3, 1, 2, 1) * e(3, 2, 3, 1);
  IntMatrix expect = IntMatrix::identity(3);
  expect.set_entry(1, 2, 1);
  expect.set_entry(2, 3, 1);
  expect.set_entry(1, 3, 1);
  CHECK(prod == expect);
  CHECK_THROWS_AS(IntMatrix::identity(2) * I3, std::invalid_argument);
}

TEST_CASE("inverse via adjugate") {
  CHECK(IntMatrix::identity(4).inverse() == IntMatrix::identity(4));
  CHECK(e(3, 1, 3, 5).inverse() == e(3, 1, 3, -5));
  IntMatrix m = IntMatrix::from_text("2,1;1,1");
  CHECK(m.inverse() == IntMatrix::from_text("1,-1;-1,2"));
  CHECK_THROWS_AS(IntMatrix::from_text("2,0;0,2").inverse(), std::domain_error);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    IntMatrix g = random_unipotent_product(4, 1, 8, rng);
    CHECK(g * g.inverse() == IntMatrix::identity(4));
  }
}

TEST_CASE("determinant by Bareiss matches cofactor expansion on samples") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> entry(-9, 9);
  for (int t = 0; t < 30; ++t) {
    IntMatrix m(3);
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) m.set_entry(i, j, entry(rng));
    mpz_class direct =
        m.entry(1, 1) * (m.entry(2, 2) * m.entry(3, 3) - m.entry(2, 3) * m.entry(3, 2)) -
        m.entry(1, 2) * (m.entry(2, 1) * m.entry(3, 3) - m.entry(2, 3) * m.entry(3, 1)) +
        m.entry(1, 3) * (m.entry(2, 1) * m.entry(3, 2) - m.entry(2, 2) * m.entry(3, 1));
    CHECK(m.det() == direct);
  }
}

TEST_CASE("elementary constructor") {
  CHECK(IntMatrix::elementary(3, 1, 2, mpz_class(0)) == IntMatrix::identity(3));
  IntMatrix m = e(3, 1, 3, 5);
  CHECK(m.entry(1, 3) == 5);
  CHECK(m.entry(3, 1) == 0);
  CHECK(e(2, 2, 1, -7) == IntMatrix::from_text("1,0;-7,1"));
  CHECK_THROWS_AS(IntMatrix::elementary(3, 2, 2, mpz_class(1)),
                  std::invalid_argument);
}

TEST_CASE("congruence membership") {
  CHECK(in_congruence(IntMatrix::identity(3), 5));
  CHECK(in_congruence(e(3, 1, 2, 5), 5));
  CHECK(!in_congruence(e(3, 1, 2, 3), 5));
}

TEST_CASE("triangular unipotent membership") {
  CHECK(in_upper_unipotent(IntMatrix::identity(3), 3));
  CHECK(in_lower_unipotent(IntMatrix::identity(3), 3));
  CHECK(in_upper_unipotent(e(3, 1, 2, 6), 3));
  CHECK(!in_upper_unipotent(e(3, 2, 1, 6), 3));
  CHECK(in_lower_unipotent(e(3, 2, 1, 6), 3));
  CHECK(!in_upper_unipotent(e(3, 1, 2, 4), 3));
}

TEST_CASE("upper unipotent level set is a group on random products") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> row(1, 3);
  std::uniform_int_distribution<long> coef(-4, 4);
  long q = 3;
  for (int t = 0; t < 60; ++t) {
    IntMatrix a = IntMatrix::identity(4);
    IntMatrix b = IntMatrix::identity(4);
    for (int s = 0; s < 6; ++s) {
      int i = row(rng), j = row(rng) + 1;
      if (i >= j) continue;
      a = a * e(4, i, j, q * coef(rng));
      b = b * e(4, i, j, q * coef(rng));
    }
    CHECK(in_upper_unipotent(a * b, q));
    CHECK(in_upper_unipotent(a.inverse(), q));
    CHECK(in_congruence(a, q));
  }
}

TEST_CASE("mennicke diagonal test") {
  long q = 2;
  CHECK(mennicke_in_E(e(3, 1, 2, q), q));
  CHECK(mennicke_in_E(IntMatrix::identity(3), q));
  // e_{1,2}(1) e_{2,1}(q) e_{1,2}(-1) = I + q(E11 - E12 + E21 - E22),
  // whose diagonal entries 1+q, 1-q are not 1 mod q^2
  IntMatrix g3 = e(3, 1, 2, 1) * e(3, 2, 1, q) * e(3, 1, 2, -1);
  IntMatrix expect = IntMatrix::identity(3);
  expect.set_entry(1, 1, 1 + q);
  expect.set_entry(1, 2, -q);
  expect.set_entry(2, 1, q);
  expect.set_entry(2, 2, 1 - q);
  CHECK(g3 == expect);
  CHECK(!mennicke_in_E(g3, q));
  CHECK_THROWS_AS(mennicke_in_E(IntMatrix::identity(2), 2), std::domain_error);
}

TEST_CASE("mennicke set closed under products and inverses on samples") {
  std::mt19937_64 rng(19);
  long q = 3;
  for (int t = 0; t < 40; ++t) {
    IntMatrix a = random_unipotent_product(4, q, 6, rng);
    IntMatrix b = random_unipotent_product(4, q, 6, rng);
    REQUIRE(mennicke_in_E(a, q));
    REQUIRE(mennicke_in_E(b, q));
    CHECK(mennicke_in_E(a * b, q));
    CHECK(mennicke_in_E(a.inverse(), q));
  }
}

TEST_CASE("reduction mod m") {
  CHECK(e(3, 1, 2, 5).reduce_mod(5) == ModMatrix::identity(3, 5));
  CHECK(IntMatrix::identity(3).reduce_mod(7) == ModMatrix::identity(3, 7));
  ModMatrix r = IntMatrix::from_text("2,1;1,1").reduce_mod(2);
  CHECK(r == ModMatrix::from_text("0,1;1,1", 2));

  // homomorphism on random products
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    IntMatrix a = random_unipotent_product(3, 1, 6, rng);
    IntMatrix b = random_unipotent_product(3, 1, 6, rng);
    CHECK((a * b).reduce_mod(6) == a.reduce_mod(6) * b.reduce_mod(6));
  }
}

TEST_CASE("matrix text round trip") {
  IntMatrix m = IntMatrix::from_text("1,2;0,1");
  CHECK(m.to_text() == "1,2;0,1");
  CHECK(IntMatrix::from_text(m.to_text()) == m);
  CHECK_THROWS_AS(IntMatrix::from_text("1,2;3"), std::invalid_argument);
  CHECK_THROWS_AS(IntMatrix::from_text("1,x;0,1"), std::invalid_argument);
}
