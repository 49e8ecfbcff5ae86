#include <random>

#include <doctest.h>

#include "geqlab/errors.hpp"
#include "geqlab/ordered.hpp"

using namespace geqlab;

TEST_CASE("right-lexicographic order compares the highest component first") {
  // [5,0] < [0,1]: the second component dominates.
  CHECK(LambdaScalar::parse("[5,0]") < LambdaScalar::parse("[0,1]"));
  CHECK(LambdaScalar::parse("[-3,1]") > LambdaScalar::parse("[100,0]"));
  CHECK(LambdaScalar::parse("[1,2,3]") < LambdaScalar::parse("[0,0,4]"));
  CHECK(LambdaScalar::parse("[2,1]") > LambdaScalar::parse("[1,1]"));
  // (1,0,...,0) is positive but smaller than any element of positive height 2.
  CHECK(LambdaScalar::unit(3).positive());
  CHECK(LambdaScalar::unit(3) < LambdaScalar::level(3, 2, 1));
}

TEST_CASE("constructors and accessors") {
  LambdaScalar zero(4);
  CHECK(zero.rank() == 4);
  CHECK(zero.is_zero());
  CHECK_FALSE(zero.positive());
  CHECK(zero.height() == 0);

  LambdaScalar k = LambdaScalar::integer(3, 7);
  CHECK(k.coord(1) == 7);
  CHECK(k.coord(2) == 0);
  CHECK(k.height() == 1);

  LambdaScalar lv = LambdaScalar::level(3, 2, -5);
  CHECK(lv.coord(2) == -5);
  CHECK(lv.height() == 2);
  CHECK_FALSE(lv.positive());
}

TEST_CASE("arithmetic and scalar multiple") {
  LambdaScalar a = LambdaScalar::parse("[1,2]");
  LambdaScalar b = LambdaScalar::parse("[3,-1]");
  CHECK((a + b).str() == "[4,1]");
  CHECK((a - b).str() == "[-2,3]");
  CHECK((-a).str() == "[-1,-2]");
  CHECK((a * BigInt(3)).str() == "[3,6]");
  LambdaScalar c = a;
  c += b;
  c -= a;
  CHECK(c == b);
}

TEST_CASE("rank mismatch is rejected") {
  LambdaScalar a(2), b(3);
  CHECK_THROWS_AS((void)(a + b), RankMismatch);
  CHECK_THROWS_AS((void)(a < b), RankMismatch);
}

TEST_CASE("parse/str round trip") {
  for (const char* text : {"[0]", "[-7]", "[1,0]", "[0,1]", "[12,-3,400]"}) {
    LambdaScalar v = LambdaScalar::parse(text);
    CHECK(v.str() == text);
    CHECK(LambdaScalar::parse(v.str()) == v);
  }
  CHECK_THROWS_AS(LambdaScalar::parse("[1,2", -1), ParseError);
  CHECK_THROWS_AS(LambdaScalar::parse("[1,2]", 3), RankMismatch);
}

TEST_CASE("height and projection") {
  LambdaScalar v = LambdaScalar::parse("[4,5,0]");
  CHECK(v.height() == 2);
  CHECK(v.project(1).str() == "[0,5,0]");
  CHECK(v.project(2).is_zero());
  // Projection preserves order on elements of distinct archimedean class.
  LambdaScalar w = LambdaScalar::parse("[9,0,1]");
  CHECK(v < w);
  CHECK(v.project(2) < w.project(2));
}

TEST_CASE("halving into the rational companion") {
  LambdaScalar even = LambdaScalar::parse("[4,-2]");
  LambdaRational h = even.halved();
  CHECK(h.integral());
  CHECK(h.doubled() == even);

  LambdaScalar odd = LambdaScalar::parse("[3,0]");
  CHECK_FALSE(odd.halved().integral());
  CHECK(odd.halved().doubled() == odd);
  CHECK(LambdaRational::of(odd) > odd.halved());
}

TEST_CASE("division with bounded remainder") {
  LambdaScalar q;
  long r = 0;
  CHECK(LambdaScalar::parse("[7,6]").split_by(3, q, r));
  CHECK(q.str() == "[2,2]");
  CHECK(r == 1);
  CHECK(q * BigInt(3) + LambdaScalar::integer(2, r) ==
        LambdaScalar::parse("[7,6]"));
  // A higher component not divisible by m cannot be split.
  CHECK_FALSE(LambdaScalar::parse("[0,5]").split_by(3, q, r));
}

TEST_CASE("ordered abelian group laws hold on random samples") {
  std::mt19937 rng(2026);
  auto rnd = [&rng](int rank) {
    std::vector<BigInt> c(static_cast<size_t>(rank));
    for (auto& x : c) x = static_cast<int>(rng() % 41) - 20;
    return LambdaScalar(std::move(c));
  };
  for (int trial = 0; trial < 2000; ++trial) {
    int rank = 1 + static_cast<int>(rng() % 4);
    LambdaScalar a = rnd(rank), b = rnd(rank), c = rnd(rank);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
    CHECK(a - a == LambdaScalar(rank));
    // Translation invariance of the order.
    if (a < b) CHECK(a + c < b + c);
    // Trichotomy.
    int cmp = (a < b) + (a == b) + (a > b);
    CHECK(cmp == 1);
    // split_by round trip whenever it succeeds.
    LambdaScalar q;
    long r = 0;
    long m = 1 + static_cast<long>(rng() % 7);
    if (a.split_by(m, q, r)) {
      CHECK(r >= 0);
      CHECK(r < m);
      CHECK(q * BigInt(m) + LambdaScalar::integer(rank, r) == a);
    }
  }
}

TEST_CASE("rational companion ordering is compatible") {
  LambdaRational a = LambdaRational::of(LambdaScalar::parse("[1,1]"));
  LambdaRational b = LambdaScalar::parse("[3,1]").halved();  // (3/2, 1/2)
  CHECK(b < a);
  CHECK(a - b == a - b);
  CHECK((a - b) + b == a);
}
