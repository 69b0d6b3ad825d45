#include "slnw/relations.hpp"

#include <random>

#include "doctest.h"

using namespace slnw;

namespace {

IntMatrix conjugated_elementary(int n, int r, int s, const mpz_class& b, int i,
                                int j, const mpz_class& a) {
  IntMatrix ers = IntMatrix::elementary(n, r, s, b);
  return ers * IntMatrix::elementary(n, i, j, a) * ers.inverse();
}

}  // namespace

TEST_CASE("case patterns from the relation table") {
  // j = r, i != s
  auto f1 = steinberg_conjugate(3, 2, 3, mpz_class(4), 1, 2, mpz_class(7));
  REQUIRE(f1.size() == 2);
  CHECK(f1[0] == ElementaryFactor{1, 2, mpz_class(7)});
  CHECK(f1[1] == ElementaryFactor{1, 3, mpz_class(-28)});

  // j != r, i != s: commuting pair
  auto f2 = steinberg_conjugate(4, 3, 4, mpz_class(9), 1, 2, mpz_class(5));
  REQUIRE(f2.size() == 1);
  CHECK(f2[0] == ElementaryFactor{1, 2, mpz_class(5)});

  // (j = r, i != s) with lower indices
  auto f3 = steinberg_conjugate(3, 1, 3, mpz_class(2), 2, 1, mpz_class(3));
  REQUIRE(f3.size() == 2);
  CHECK(f3[0] == ElementaryFactor{2, 1, mpz_class(3)});
  CHECK(f3[1] == ElementaryFactor{2, 3, mpz_class(-6)});

  // j != r, i = s
  auto f4 = steinberg_conjugate(3, 1, 2, mpz_class(2), 2, 3, mpz_class(3));
  REQUIRE(f4.size() == 2);
  CHECK(f4[0] == ElementaryFactor{2, 3, mpz_class(3)});
  CHECK(f4[1] == ElementaryFactor{1, 3, mpz_class(6)});

  CHECK_THROWS_AS(steinberg_conjugate(3, 1, 2, mpz_class(1), 2, 1, mpz_class(1)),
                  OutOfRelation);
  CHECK_THROWS_AS(steinberg_conjugate(3, 1, 1, mpz_class(1), 2, 3, mpz_class(1)),
                  std::invalid_argument);
}

TEST_CASE("relation output multiplies to the conjugated elementary") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> dim(3, 5);
  std::uniform_int_distribution<long> coef(-1000000, 1000000);
  int checked = 0;
  for (int t = 0; t < 2000; ++t) {
    int n = dim(rng);
    std::uniform_int_distribution<int> idx(1, n);
    int r = idx(rng), s = idx(rng), i = idx(rng), j = idx(rng);
    if (r == s || i == j) continue;
    mpz_class b(coef(rng)), a(coef(rng));
    if (j == r && i == s) {
      CHECK_THROWS_AS(steinberg_conjugate(n, r, s, b, i, j, a), OutOfRelation);
      continue;
    }
    auto fs = steinberg_conjugate(n, r, s, b, i, j, a);
    CHECK(multiply_factors(n, fs) == conjugated_elementary(n, r, s, b, i, j, a));
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("commutator bridge hits e_{1,n+1}(ab) exactly") {
  auto br = commutator_bridge(2, mpz_class(3), mpz_class(3));
  CHECK(br.dim == 3);
  CHECK(br.target == ElementaryFactor{1, 3, mpz_class(9)});
  CHECK(multiply_factors(br.dim, br.factors) == br.target.to_matrix(br.dim));

  auto z = commutator_bridge(2, mpz_class(0), mpz_class(5));
  CHECK(multiply_factors(z.dim, z.factors) == IntMatrix::identity(3));

  auto b3 = commutator_bridge(3, mpz_class(2), mpz_class(3));
  CHECK(b3.target == ElementaryFactor{1, 4, mpz_class(6)});
  CHECK(multiply_factors(b3.dim, b3.factors) == b3.target.to_matrix(b3.dim));

  // the four factors are g^-1 h^-1 g h
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> coef(-50, 50);
  for (int t = 0; t < 100; ++t) {
    mpz_class a(coef(rng)), b(coef(rng));
    auto br2 = commutator_bridge(3, a, b);
    IntMatrix g = IntMatrix::elementary(4, 1, 2, a);
    IntMatrix h = IntMatrix::elementary(4, 2, 4, b);
    CHECK(multiply_factors(4, br2.factors) ==
          g.inverse() * h.inverse() * g * h);
    CHECK(multiply_factors(4, br2.factors) ==
          IntMatrix::elementary(4, 1, 4, mpz_class(a * b)));
  }
}
