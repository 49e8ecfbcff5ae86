#include <doctest.h>

#include "geqlab/builder.hpp"
#include "geqlab/io.hpp"

using namespace geqlab;

namespace {

PresentationInput comm_input() {
  PresentationInput p;
  p.rank = 2;
  p.generators = {"x", "y"};
  p.relators = {{Letter("x", 1), Letter("y", 1), Letter("x", -1),
                 Letter("y", -1)}};
  p.embedding["x"] = LambdaWord::parse(2, "z^[1,0]");
  p.embedding["y"] = LambdaWord::parse(2, "z^[0,1]");
  return p;
}

}  // namespace

TEST_CASE("matched pair from a single inverse-cancelling relator") {
  PresentationInput p;
  p.rank = 2;
  p.generators = {"x"};
  p.relators = {{Letter("x", 1), Letter("x", -1)}};
  p.embedding["x"] = LambdaWord::parse(2, "z^[0,1]");
  AssembledDiagram d = build_diagram(p);
  CHECK(d.eq.rho == 1);
  REQUIRE(d.eq.bases.size() == 2);
  CHECK(d.eq.bases[0].alpha == 1);
  CHECK(d.eq.bases[0].beta == 2);
  CHECK(d.eq.bases[1].alpha == 1);
  CHECK(d.eq.bases[1].beta == 2);
  CHECK(verify_solution(d.eq, d.planted).ok);
}

TEST_CASE("commutation relator assembles the four-item diagram") {
  AssembledDiagram d = build_diagram(comm_input());
  CHECK(d.eq.rho == 4);
  CHECK(d.eq.bases.size() == 6);
  CHECK(d.eq.connections.empty());
  CHECK(complexity(d.eq).tau == 4);
  CHECK(verify_solution(d.eq, d.planted).ok);

  // Planted item values follow the boundary monomials of the relator.
  CHECK(d.planted.at(1).str() == "z");
  CHECK(d.planted.at(2).str() == "z");
  CHECK(d.planted.at(3).str() == "(z)^[-2,1]");
  CHECK(d.planted.at(4).str() == "z");

  // The coordinate group abelianizes to Z^2, as for F(x,y) mod [x,y].
  AbelianInfo ab = presentation_abelianization(presentation(d.eq));
  CHECK(ab.free_rank == 2);
  CHECK(ab.torsion.empty());

  // Generators are recoverable as item words.
  CHECK(d.generator_words.count("x") == 1);
  CHECK(d.generator_words.count("y") == 1);
}

TEST_CASE("tripod relator in a free group") {
  PresentationInput p;
  p.rank = 1;
  p.generators = {"x", "y", "z"};
  p.relators = {{Letter("x", 1), Letter("y", 1), Letter("z", 1)}};
  p.embedding["x"] = LambdaWord::parse(1, "a b");
  p.embedding["y"] = LambdaWord::parse(1, "b^-1 c");
  p.embedding["z"] = LambdaWord::parse(1, "c^-1 a^-1");
  AssembledDiagram d = build_diagram(p);
  CHECK(d.eq.rho == 6);
  CHECK(d.eq.bases.size() == 6);
  AbelianInfo ab = presentation_abelianization(presentation(d.eq));
  CHECK(ab.free_rank == 3);
  CHECK(verify_solution(d.eq, d.planted).ok);
}

TEST_CASE("long relators triangulate through auxiliary generators") {
  PresentationInput p;
  p.rank = 1;
  p.generators = {"w", "x", "y", "z"};
  p.relators = {{Letter("w", 1), Letter("x", 1), Letter("y", 1),
                 Letter("z", 1)}};
  p.embedding["w"] = LambdaWord::parse(1, "a");
  p.embedding["x"] = LambdaWord::parse(1, "b");
  p.embedding["y"] = LambdaWord::parse(1, "b^-1");
  p.embedding["z"] = LambdaWord::parse(1, "a^-1");
  PresentationInput t = triangulate(p);
  CHECK(t.generators.size() == 5);
  CHECK(t.relators.size() == 2);
  CHECK(t.relators[0].size() == 3);
  CHECK(t.relators[0][2].sym == "a1");
  CHECK(t.relators[0][2].sign == -1);
  CHECK(t.embedding.at("a1") == LambdaWord::parse(1, "a b"));

  AssembledDiagram d = build_diagram(p);
  CHECK(verify_solution(d.eq, d.planted).ok);
}

TEST_CASE("free presentations assemble with no bases") {
  PresentationInput p;
  p.rank = 2;
  p.generators = {"x", "y"};
  p.embedding["x"] = LambdaWord::parse(2, "z^[1,0]");
  p.embedding["y"] = LambdaWord::parse(2, "z^[0,1]");
  AssembledDiagram d = build_diagram(p);
  CHECK(d.eq.bases.empty());
  CHECK(d.eq.rho == 2);
  CHECK(verify_solution(d.eq, d.planted).ok);
}

TEST_CASE("presentation file format round trip") {
  std::string text =
      "rank 2\n"
      "generators x y\n"
      "relator x y x^-1 y^-1\n"
      "embed x = (z)^[1,0]\n"
      "embed y = (z)^[0,1]\n";
  PresentationInput p = parse_presentation(text);
  CHECK(p.rank == 2);
  CHECK(p.generators == std::vector<std::string>{"x", "y"});
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0].size() == 4);
  CHECK(p.embedding.at("y") == LambdaWord::parse(2, "(z)^[0,1]"));
  CHECK(parse_presentation(format_presentation(p)).embedding ==
        p.embedding);

  AssembledDiagram d = build_diagram(p);
  CHECK(d.eq.rho == 4);
  CHECK(verify_solution(d.eq, d.planted).ok);
}
