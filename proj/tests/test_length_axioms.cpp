#include <vector>

#include <doctest.h>

#include "geqlab/length_axioms.hpp"

using namespace geqlab;

namespace {

// Non-identity elements of the radius-`r` ball of the free group on {x, y}.
std::vector<LambdaWord> free_ball(int radius) {
  std::vector<Letter> gens = {{"x", 1}, {"x", -1}, {"y", 1}, {"y", -1}};
  std::vector<std::vector<Letter>> frontier = {{}};
  std::vector<LambdaWord> ball;
  for (int d = 1; d <= radius; ++d) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) {
        if (!w.empty() && w.back() == g.inverse()) continue;
        auto w2 = w;
        w2.push_back(g);
        next.push_back(w2);
      }
    for (const auto& w : next) ball.push_back(LambdaWord::letters(1, w));
    frontier = std::move(next);
  }
  return ball;
}

}  // namespace

TEST_CASE("gromov product of free-group words is the cancellation length") {
  LambdaWord g = LambdaWord::parse(1, "x y");
  LambdaWord f = LambdaWord::parse(1, "x x");
  // c(g,f) = (2 + 2 - l(y^-1 x^-1 x x)) / 2 = (4 - 2) / 2 = 1.
  CHECK(gromov(g, f) == LambdaRational::of(LambdaScalar::integer(1, 1)));
  CHECK(gromov(g, g) == LambdaRational::of(g.length()));
  // Half-integral product: c(xy, yx) = (2 + 2 - 4) / 2 = 0.
  CHECK(gromov(g, LambdaWord::parse(1, "y x")).is_zero());
}

TEST_CASE("axioms pass on the radius-4 free ball") {
  GroupSample s{1, free_ball(4), 0};
  AxiomReport rep = check_axioms(s, {"L1", "L2", "L3", "L4", "L5", "L6"});
  CHECK(rep.closure_size == 160);
  CHECK(rep.undefined_products == 0);
  CHECK(rep.all_pass());
  CHECK_FALSE(rep.any_fail());
  CHECK(rep.results.at("L6").status == AxiomStatus::Pass);
  CHECK(subadditivity_check(s).all_pass());
}

TEST_CASE("axioms pass on the Z^2 block sample at closure depth 3") {
  std::vector<LambdaWord> gens = {LambdaWord::parse(2, "(z)^[1,0]"),
                                  LambdaWord::parse(2, "(z)^[0,1]")};
  GroupSample s{2, gens, 3};
  AxiomReport rep = check_axioms(s, {"L1", "L2", "L3", "L4", "L5", "L6"});
  CHECK(rep.closure_size == 144);
  CHECK(rep.all_pass());
  // Every partial product of commuting powers of z is defined.
  CHECK(rep.undefined_products == 0);
}

TEST_CASE("closure enumerates inverses and partial products") {
  GroupSample s{1, {LambdaWord::parse(1, "x")}, 2};
  long undef = 0;
  std::vector<LambdaWord> cl = sample_closure(s, &undef);
  // x, x^-1 and depth-2 products x^k for |k| <= 4, excluding identity.
  CHECK(cl.size() == 8);
  CHECK(undef == 0);
}

TEST_CASE("edited length table is caught by the axioms") {
  TableOracle bad({{"x y", LambdaScalar::integer(1, 7)}});
  std::vector<LambdaWord> words = {LambdaWord::parse(1, "x"),
                                   LambdaWord::parse(1, "y"),
                                   LambdaWord::parse(1, "x y")};
  GroupSample s{1, words, 0};
  AxiomReport rep = check_axioms(s, {"L1", "L2", "L3", "L4", "L5"}, bad);
  CHECK(rep.any_fail());
  CHECK_FALSE(rep.all_pass());
  // Inflating l(xy) leaves l((xy)^-1) behind: L2 must fail.
  CHECK(rep.results.at("L2").status == AxiomStatus::Fail);
  CHECK(rep.results.at("L2").witness.find("x y") != std::string::npos);
  // L4 (lattice membership of Gromov products) breaks as well.
  CHECK(rep.results.at("L4").status == AxiomStatus::Fail);
  // L1 only concerns the identity and survives the edit.
  CHECK(rep.results.at("L1").status == AxiomStatus::Pass);
}

TEST_CASE("L6 reports NotWitnessed instead of failing on thin samples") {
  // Two elements with no common prefix witness in a depth-0 closure.
  std::vector<LambdaWord> words = {LambdaWord::parse(1, "x"),
                                   LambdaWord::parse(1, "y")};
  GroupSample s{1, words, 0};
  AxiomReport rep = check_axioms(s, {"L6"});
  AxiomStatus st = rep.results.at("L6").status;
  CHECK(st != AxiomStatus::Fail);
  CHECK(rep.all_pass());
}
