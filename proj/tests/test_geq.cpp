#include <doctest.h>

#include "geqlab/errors.hpp"
#include "geqlab/geq.hpp"
#include "geqlab/io.hpp"
#include "geqlab/smith.hpp"

using namespace geqlab;

namespace {

GenEq comm_eq() {
  // The four-item commutation shape: h1 h2 = h2 h3 h4 h3^-1 wired through
  // three base pairs.
  GenEq eq;
  eq.rank = 2;
  eq.rho = 4;
  eq.bases = {{"p1", 1, 1, 2, "p1d"},  {"p1d", 1, 2, 3, "p1"},
              {"p2", 1, 2, 4, "p2d"},  {"p2d", 1, 3, 5, "p2"},
              {"p3", 1, 4, 5, "p3d"},  {"p3d", 1, 1, 2, "p3"}};
  eq.sections.push_back({1, 5, true});
  eq.check();
  return eq;
}

Solution comm_sol() {
  Solution u;
  u.rank = 2;
  u.items[1] = LambdaWord::parse(2, "z");
  u.items[2] = LambdaWord::parse(2, "z");
  u.items[3] = LambdaWord::parse(2, "(z)^[-2,1]");
  u.items[4] = LambdaWord::parse(2, "z");
  return u;
}

}  // namespace

TEST_CASE("structural validation accepts the commutation shape") {
  GenEq eq = comm_eq();
  CHECK(eq.validate().empty());
  CHECK(eq.base("p2") != nullptr);
  CHECK(eq.dual_of("p2")->id == "p2d");
  CHECK(eq.gamma(2) == 2);
  CHECK(eq.item_active(1));
  CHECK(eq.section_of(1, 5) != nullptr);
  CHECK(eq.section_of(2, 5) == eq.section_of(1, 5));  // containing section
  CHECK(eq.section_of(1, 6) == nullptr);
}

TEST_CASE("validation reports violations") {
  GenEq eq = comm_eq();
  eq.bases[0].beta = 9;  // outside [1, rho+1]
  CHECK_FALSE(eq.validate().empty());

  GenEq eq2 = comm_eq();
  eq2.bases[1].dual = "p2";  // dual links must be mutual
  CHECK_FALSE(eq2.validate().empty());

  GenEq eq3 = comm_eq();
  eq3.connections.push_back({3, "p2", 9});  // q outside the dual
  CHECK_FALSE(eq3.validate().empty());
}

TEST_CASE("base words and prefixes respect orientation") {
  BaseRec fwd{"m", 1, 2, 4, "md"};
  CHECK(item_word_str(base_word(fwd)) == "h2 h3");
  CHECK(item_word_str(base_prefix(fwd, 3)) == "h2");

  BaseRec rev{"m", -1, 4, 2, "md"};
  CHECK(item_word_str(base_word(rev)) == "h3^-1 h2^-1");
  CHECK(item_word_str(base_prefix(rev, 3)) == "h3^-1");
}

TEST_CASE("derived equations of the commutation shape") {
  std::vector<DerivedEquation> ds = derive(comm_eq());
  // One basic equation per base pair plus none from connections.
  CHECK(ds.size() == 3);
  CHECK(ds[0].kind == DerivedEquation::Basic);
  CHECK(item_word_str(ds[0].left) == "h1");
  CHECK(item_word_str(ds[0].right) == "h2");
  CHECK(item_word_str(ds[1].left) == "h2 h3");
  CHECK(item_word_str(ds[1].right) == "h3 h4");
  CHECK(item_word_str(ds[2].left) == "h4");
  CHECK(item_word_str(ds[2].right) == "h1");
}

TEST_CASE("presentation and abelianization") {
  Presentation p = presentation(comm_eq());
  CHECK(p.generators == 4);
  CHECK(p.relators.size() == 3);
  AbelianInfo ab = presentation_abelianization(p);
  // h1 = h2 = h4 and h2 h3 = h3 h4 leave two independent generators.
  CHECK(ab.free_rank == 2);
  CHECK(ab.torsion.empty());
}

TEST_CASE("solution verification") {
  GenEq eq = comm_eq();
  Solution u = comm_sol();
  VerifyResult ok = verify_solution(eq, u);
  CHECK(ok.ok);
  CHECK(ok.violation.empty());

  Solution bad = comm_sol();
  bad.items[4] = LambdaWord::parse(2, "w");
  VerifyResult fail = verify_solution(eq, bad);
  CHECK_FALSE(fail.ok);
  CHECK_FALSE(fail.violation.empty());

  // eval maps item words through the solution.
  LambdaWord w = u.eval(base_word(*eq.base("p2")));
  CHECK(w == u.eval(base_word(*eq.base("p2d"))));
}

TEST_CASE("cancellation table refinement") {
  Solution u = comm_sol();
  CancellationTable t = cancellation_table(u);
  // Some product cancels: z * z^[-2,1] shares no prefix, but z^-1 * z does.
  CHECK(consistent(t, t));
  CancellationTable empty;
  CHECK(consistent(empty, t));
  if (!t.pairs.empty()) CHECK_FALSE(consistent(t, empty));
}

TEST_CASE("complexity of the commutation shape") {
  Complexity c = complexity(comm_eq());
  CHECK(c.tau == 4);
  CHECK(c.rho_active == 4);
  CHECK(c.n_active == 6);
  CHECK(c.gamma.at(2) == 2);
  CHECK(c.section_base_count.size() == 1);
}

TEST_CASE("linear system evaluation and substitution") {
  LinearSystem sys;
  sys.vars = 3;
  sys.add_row({1, 0, -1}, "|h1| = |h3|");
  std::vector<LambdaScalar> good = {LambdaScalar::parse("[1,0]"),
                                    LambdaScalar::parse("[5,5]"),
                                    LambdaScalar::parse("[1,0]")};
  CHECK(sys.satisfied_by(good));
  std::vector<LambdaScalar> badv = {LambdaScalar::parse("[1,0]"),
                                    LambdaScalar::parse("[5,5]"),
                                    LambdaScalar::parse("[2,0]")};
  CHECK_FALSE(sys.satisfied_by(badv));

  // Substitute h1 -> h1' h2', h3 -> h1'.
  std::map<long, ItemWord> m;
  m[1] = ItemWord{{1, 1}, {2, 1}};
  m[2] = ItemWord{{2, 1}};
  m[3] = ItemWord{{1, 1}};
  LinearSystem sub = sys.substituted(2, m);
  CHECK(sub.vars == 2);
  REQUIRE(sub.rows.size() == 1);
  CHECK(sub.rows[0] == std::vector<BigInt>{0, 1});

  std::map<long, ItemWord> missing;
  CHECK_THROWS_AS(sys.substituted(2, missing), DomainError);
}

TEST_CASE("text and JSON serialization round trip") {
  GenEq eq = comm_eq();
  std::string text = format_geq(eq);
  GenEq back = parse_geq(text);
  CHECK(format_geq(back) == text);

  std::string js = geq_to_json(eq);
  GenEq back2 = geq_from_json(js);
  CHECK(format_geq(back2) == text);

  CHECK_THROWS_AS(parse_geq("geq rank=x"), ParseError);
}

TEST_CASE("solution serialization round trip") {
  Solution u = comm_sol();
  std::string text = format_solution(u);
  Solution back = parse_solution(text, 2);
  CHECK(back.items.size() == u.items.size());
  for (const auto& [i, w] : u.items) CHECK(back.at(i) == w);
}

TEST_CASE("free reduction of item words") {
  ItemWord w{{1, 1}, {2, 1}, {2, -1}, {3, 1}};
  CHECK((free_reduce_item_word(w) == ItemWord{{1, 1}, {3, 1}}));
  CHECK((invert_item_word(ItemWord{{1, 1}, {2, -1}}) ==
         ItemWord{{2, 1}, {1, -1}}));
}
