#include "slnw/word.hpp"

#include <random>

#include "doctest.h"
#include "slnw/matrix.hpp"
#include "slnw/unipotent.hpp"

using namespace slnw;

TEST_CASE("parsing") {
  Word w = Word::parse("x1^2");
  REQUIRE(w.length() == 2);
  CHECK(w.letters()[0].gen == 1);
  CHECK(w.letters()[0].sign == 1);
  CHECK(w.to_text() == "x1 x1");

  Word c = Word::parse("[x1,x2]");
  CHECK(c.to_text() == "x1^-1 x2^-1 x1 x2");

  CHECK(Word::parse("x1 x1^-1").empty());
  CHECK(Word::parse("x1^0").empty());
  CHECK(Word::parse("x2^-3").length() == 3);
  CHECK(Word::parse("(x1 x2)^2").to_text() == "x1 x2 x1 x2");
  CHECK(Word::parse("x1x2").arity() == 2);

  CHECK_THROWS_AS(Word::parse("y1"), WordParseError);
  CHECK_THROWS_AS(Word::parse("[x1 x2]"), WordParseError);
  CHECK_THROWS_AS(Word::parse("x1^"), WordParseError);
  try {
    Word::parse("x1 q");
  } catch (const WordParseError& e) {
    CHECK(e.position == 3);
  }
}

TEST_CASE("free reduction and inverse") {
  Word w = Word::parse("x1 x2 x2^-1 x1");
  CHECK(w.to_text() == "x1 x1");
  CHECK((w * w.inverse()).empty());
  CHECK(Word::parse("[x1,x2]").inverse().to_text() == "x2^-1 x1^-1 x2 x1");
  CHECK(is_trivial_on_free(Word::parse("x1 x1^-1")));
  CHECK(!is_trivial_on_free(Word::parse("[x1,x2]")));
  CHECK(!is_trivial_on_free(Word::parse("x1^3")));
}

TEST_CASE("evaluation on integer matrices") {
  IntMatrix A = IntMatrix::elementary(2, 1, 2, mpz_class(1));
  std::vector<IntMatrix> tup{A};
  CHECK(evaluate_word<IntMatrix>(Word::parse("x1^2"),
                                 std::span<const IntMatrix>(tup),
                                 IntMatrix::identity(2)) ==
        IntMatrix::elementary(2, 1, 2, mpz_class(2)));

  // commutator with the identity is trivial
  std::vector<IntMatrix> pair{sanov_a(), IntMatrix::identity(2)};
  CHECK(evaluate_word<IntMatrix>(Word::parse("[x1,x2]"),
                                 std::span<const IntMatrix>(pair),
                                 IntMatrix::identity(2))
            .is_identity());

  // [e_{1,2}(4) embedded, e_{2,3}(1)] = e_{1,3}(4)
  IntMatrix g = IntMatrix::elementary(3, 1, 2, mpz_class(4));
  IntMatrix h = IntMatrix::elementary(3, 2, 3, mpz_class(1));
  std::vector<IntMatrix> t2{g, h};
  CHECK(evaluate_word<IntMatrix>(Word::parse("[x1,x2]"),
                                 std::span<const IntMatrix>(t2),
                                 IntMatrix::identity(3)) ==
        IntMatrix::elementary(3, 1, 3, mpz_class(4)));

  CHECK_THROWS_AS(evaluate_word<IntMatrix>(Word::parse("x2"),
                                           std::span<const IntMatrix>(tup),
                                           IntMatrix::identity(2)),
                  std::invalid_argument);
}

TEST_CASE("evaluation respects concatenation and ignores unused slots") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(1, 6);
  std::uniform_int_distribution<int> gen(1, 2);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<IntMatrix> tup{sanov_a(), sanov_b(), sanov_a()};
  for (int t = 0; t < 40; ++t) {
    Word u, v;
    for (int i = 0; i < len(rng); ++i)
      u = u * Word::generator(gen(rng), sign(rng) ? 1 : -1);
    for (int i = 0; i < len(rng); ++i)
      v = v * Word::generator(gen(rng), sign(rng) ? 1 : -1);
    auto ev = [&](const Word& w, size_t k) {
      return evaluate_word<IntMatrix>(
          w, std::span<const IntMatrix>(tup.data(), k), IntMatrix::identity(2));
    };
    CHECK(ev(u * v, 2) == ev(u, 2) * ev(v, 2));
    CHECK(ev(u, 2) == ev(u, 3));
  }
}

TEST_CASE("Sanov pair detects nontriviality over a word corpus") {
  const char* corpus[] = {"[x1,x2]", "x1^3",          "x1 x2 x1^-1 x2",
                          "x2^2 x1", "[x1,x2] x1",    "[[x1,x2],x2]",
                          "x1 x2",   "x1^-2 x2^3 x1"};
  std::vector<IntMatrix> tup{sanov_a(), sanov_b()};
  for (const char* text : corpus) {
    Word w = Word::parse(text);
    REQUIRE(!w.empty());
    CHECK(!evaluate_word<IntMatrix>(w, std::span<const IntMatrix>(tup),
                                    IntMatrix::identity(2))
               .is_identity());
  }
  CHECK(evaluate_word<IntMatrix>(Word::parse("x1 x2 x2^-1 x1^-1"),
                                 std::span<const IntMatrix>(tup),
                                 IntMatrix::identity(2))
            .is_identity());
}
