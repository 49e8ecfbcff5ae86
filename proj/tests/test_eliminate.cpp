#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "geqlab/builder.hpp"
#include "geqlab/eliminate.hpp"

using namespace geqlab;

namespace {

GenEq simple_eq(int rank, long rho, std::vector<BaseRec> bases,
                std::vector<Connection> conns) {
  GenEq eq;
  eq.rank = rank;
  eq.rho = rho;
  eq.bases = std::move(bases);
  eq.connections = std::move(conns);
  eq.sections.push_back({1, rho + 1, true});
  eq.check();
  return eq;
}

Solution mk_sol(int rank, std::vector<std::string> words) {
  Solution u;
  u.rank = rank;
  for (size_t i = 0; i < words.size(); ++i)
    u.items[static_cast<long>(i) + 1] = LambdaWord::parse(rank, words[i]);
  return u;
}

GenEq comm_shape() {
  return simple_eq(2, 3,
                   {{"p2", 1, 1, 3, "p2d"},
                    {"p2d", 1, 2, 4, "p2"},
                    {"p3", 1, 3, 4, "p3d"},
                    {"p3d", 1, 1, 2, "p3"}},
                   {});
}

PresentationInput comm_input(const char* y_embed) {
  PresentationInput p;
  p.rank = 2;
  p.generators = {"x", "y"};
  p.relators = {{Letter("x", 1), Letter("y", 1), Letter("x", -1),
                 Letter("y", -1)}};
  p.embedding["x"] = LambdaWord::parse(2, "z^[1,0]");
  p.embedding["y"] = LambdaWord::parse(2, y_embed);
  return p;
}

}  // namespace

TEST_CASE("standard form of the commutation shape: genus 1, orientable") {
  GenEq eq = comm_shape();
  QuadraticForm qf = standard_form(eq, eq.sections[0]);
  CHECK(qf.orientable);
  CHECK(qf.genus == 1);
  CHECK(qf.coeff_count == 0);
  CHECK(qf.kappa() == 3);
  CHECK(qf.regular());
}

TEST_CASE("standard form of the octagon: genus 2, kappa 5") {
  GenEq eq = simple_eq(2, 8,
                       {{"a", 1, 1, 3, "ad"},
                        {"b", 1, 3, 5, "bd"},
                        {"c", 1, 5, 7, "cd"},
                        {"d", 1, 7, 9, "dd"},
                        {"bd", 1, 1, 3, "b"},
                        {"ad", 1, 3, 5, "a"},
                        {"dd", 1, 5, 7, "d"},
                        {"cd", 1, 7, 9, "c"}},
                       {});
  QuadraticForm qf = standard_form(eq, eq.sections[0]);
  CHECK(qf.orientable);
  CHECK(qf.genus == 2);
  CHECK(qf.coeff_count == 0);
  CHECK(qf.kappa() == 5);
  CHECK(qf.regular());
}

TEST_CASE("standard form of aabb: non-orientable, not regular") {
  GenEq eq = simple_eq(2, 2,
                       {{"n1", 1, 1, 2, "n1d"},
                        {"n1d", -1, 2, 1, "n1"},
                        {"n2", 1, 2, 3, "n2d"},
                        {"n2d", -1, 3, 2, "n2"}},
                       {});
  QuadraticForm qf = standard_form(eq, eq.sections[0]);
  CHECK_FALSE(qf.orientable);
  CHECK(qf.genus == 2);
  CHECK(qf.kappa() == 3);
  CHECK_FALSE(qf.regular());
}

TEST_CASE("periodic structure and centralizer splitting on the v1 shape") {
  GenEq eq = comm_shape();
  Solution u = mk_sol(2, {"z", "z^[-2,1]", "z"});
  REQUIRE(verify_solution(eq, u).ok);

  std::string carrier;
  CHECK(overlap_condition(eq, lengths_of(u), &carrier));

  LambdaWord period = LambdaWord::parse(2, "z");
  PeriodicStructure ps = build_periodic_structure(eq, &u, period);
  CHECK(ps.items == std::set<long>({1, 2, 3}));
  CHECK(ps.base_ids.size() == 4);
  CHECK(ps.class_count == 1);

  StructureCheck chk = check_periodic_structure(eq, ps);
  CHECK(chk.ok);

  SplittingReport sp = split_by_periodic_structure(eq, ps, &u);
  CHECK(sp.kind == SplittingReport::CentralizerExtension);
  CHECK(sp.graph.vertex_count == 1);
  CHECK(sp.graph.edges.size() == 3);
  CHECK(sp.graph.non_tree.size() == 3);
  CHECK(sp.z_rank == 3);
  CHECK(sp.z1_rank == 1);
  CHECK(sp.z2_rank == 2);
  REQUIRE(sp.snf_diagonal.size() == 1);
  CHECK(sp.snf_diagonal[0] == 1);  // index [Z1-tilde : B-tilde] is finite
  CHECK(sp.c1.size() == 1);
  CHECK(sp.c2.size() == 2);
  REQUIRE(sp.sigma_rows.size() == 2);
  CHECK((sp.sigma_rows[0] == std::vector<long>{1, 1, -1, -1} ||
         sp.sigma_rows[0] == std::vector<long>{1, 0, -1}));
}

TEST_CASE("case classification") {
  CHECK(classify(comm_shape()) == CaseKind::Quadratic);
  GenEq lin =
      simple_eq(1, 2, {{"l", 1, 1, 2, "ld"}, {"ld", 1, 2, 3, "l"}}, {});
  CHECK(classify(lin) == CaseKind::Linear);
  GenEq leaf;
  leaf.rank = 1;
  leaf.rho = 0;
  leaf.check();
  CHECK(classify(leaf) == CaseKind::Leaf);
}

TEST_CASE("full elimination of the commutation equation") {
  AssembledDiagram d = build_diagram(comm_input("z^[0,30]"));
  DecompositionReport rep = run(d.eq, &d.planted);
  CHECK(rep.complete);
  CHECK(rep.free_rank == 1);
  bool has_cent = false;
  for (const auto& e : rep.events)
    if (e.kind == "CentralizerExtension") has_cent = true;
  CHECK(has_cent);
  CHECK(rep.chain.size() >= 2);
  CHECK_FALSE(rep.sigma_complete.rows.empty());
}

TEST_CASE("elimination chain for the short commutation instance") {
  // The planted periods z and z^[0,1] have incomparable lengths, so the
  // splitting must identify a single centralizer extension whose complete
  // constraint system forces the two associated item lengths to be equal.
  AssembledDiagram d = build_diagram(comm_input("z^[0,1]"));
  DecompositionReport rep = run(d.eq, &d.planted);
  CHECK(rep.complete);
  CHECK(rep.free_rank == 1);
  REQUIRE(rep.chain.size() == 2);
  CHECK(rep.chain[0].find("free group of rank 1") != std::string::npos);
  long cent_events = 0;
  for (const auto& e : rep.events)
    if (e.kind == "CentralizerExtension") ++cent_events;
  CHECK(cent_events == 1);

  // One homogeneous row with coefficients +1 and -1: equal lengths.
  REQUIRE(rep.sigma_complete.rows.size() == 1);
  long pos = 0, neg = 0, other = 0;
  for (const BigInt& c : rep.sigma_complete.rows[0]) {
    if (c == 1)
      ++pos;
    else if (c == -1)
      ++neg;
    else if (c != 0)
      ++other;
  }
  CHECK(pos == 1);
  CHECK(neg == 1);
  CHECK(other == 0);
}

TEST_CASE("elimination of a free presentation is a single free step") {
  PresentationInput p;
  p.rank = 2;
  p.generators = {"x", "y"};
  p.embedding["x"] = LambdaWord::parse(2, "z^[1,0]");
  p.embedding["y"] = LambdaWord::parse(2, "z^[0,1]");
  AssembledDiagram d = build_diagram(p);
  DecompositionReport rep = run(d.eq, &d.planted);
  CHECK(rep.complete);
  CHECK(rep.free_rank == 2);
  CHECK(rep.chain.size() == 1);
}

TEST_CASE("excess is constant zero along the entire-transformation loop") {
  AssembledDiagram d = build_diagram(comm_input("z^[0,30]"));
  GenEq cur = d.eq;
  Solution u = d.planted;
  std::set<std::string> omega = {"p1", "p2"}, omega_t = {"p3"};
  for (int step = 0; step < 20; ++step) {
    ExcessReport ex = excess(cur, u, omega, omega_t);
    CHECK(ex.psi.is_zero());
    TransformResult r = d8_entire_step(cur, lengths_of(u), &u);
    cur = r.target;
    u = *r.pushed;
  }
}

TEST_CASE("path classification: repeated carrier vs long corridor") {
  GenEq dummy =
      simple_eq(1, 2, {{"m", 1, 1, 2, "md"}, {"md", 1, 2, 3, "m"}}, {});
  Solution du = mk_sol(1, {"a", "a"});
  std::vector<PathStep> steps;
  for (int i = 0; i < 4; ++i) {
    PathStep s;
    s.eq = dummy;
    s.u = du;
    s.carrier = i < 3 ? "m" : "";
    s.dual_overlap = false;
    steps.push_back(s);
  }
  PathVerdict v = classify_path(steps);
  CHECK(v.cls == PathClass::MuReducing);
  CHECK(v.mu == "m");

  AssembledDiagram d = build_diagram(comm_input("z^[0,30]"));
  GenEq cur = d.eq;
  Solution u = d.planted;
  std::vector<PathStep> real;
  for (int i = 0; i < 8; ++i) {
    PathStep s;
    s.eq = cur;
    s.u = u;
    s.carrier = d8_carrier(cur);
    const BaseRec* mu = cur.base(s.carrier);
    const BaseRec* mud = cur.dual_of(s.carrier);
    s.dual_overlap = mu->lo() <= mud->lo() && mud->lo() < mu->hi();
    real.push_back(s);
    TransformResult r = d8_entire_step(cur, lengths_of(u), &u);
    cur = r.target;
    u = *r.pushed;
  }
  PathStep last;
  last.eq = cur;
  last.u = u;
  real.push_back(last);
  CHECK(classify_path(real).cls == PathClass::Neither);
}
