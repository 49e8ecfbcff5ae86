// Acceptance harness: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Each criterion is self-contained and seeds its own
// randomness, so the lines are reproducible in isolation.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "geq.h"
#include "geqlab/builder.hpp"
#include "geqlab/eliminate.hpp"
#include "geqlab/length_axioms.hpp"
#include "support/instance_gen.hpp"

using namespace geqlab;
using json = nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

LambdaWord rand_reduced(std::mt19937& rng, int len) {
  static const char* syms[4] = {"a", "b", "c", "d"};
  std::vector<Letter> ls;
  while (static_cast<int>(ls.size()) < len) {
    Letter g(syms[rng() % 4], rng() % 2 ? 1 : -1);
    if (!ls.empty() && ls.back() == g.inverse()) continue;
    ls.push_back(g);
  }
  return LambdaWord::letters(1, ls);
}

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

PresentationInput comm_input(const char* y_embed, bool with_relator = true) {
  PresentationInput p;
  p.rank = 2;
  p.generators = {"x", "y"};
  if (with_relator)
    p.relators = {{Letter("x", 1), Letter("y", 1), Letter("x", -1),
                   Letter("y", -1)}};
  p.embedding["x"] = LambdaWord::parse(2, "z^[1,0]");
  p.embedding["y"] = LambdaWord::parse(2, y_embed);
  return p;
}

LambdaScalar span_len(const Solution& u, long lo, long hi) {
  LambdaScalar s(u.rank);
  for (long i = lo; i < hi; ++i) s += u.at(i).length();
  return s;
}

// Shared instance sweep feeding criteria 3 and 4.
struct SweepTotals {
  long instances = 0;
  geqtest::SweepStats stats;
  bool done = false;
};
SweepTotals g_sweep;

void run_sweep() {
  if (g_sweep.done) return;
  std::mt19937 rng(20260823);
  for (int i = 0; i < 500; ++i) {
    geqtest::PlantedInstance inst = geqtest::random_planted(rng);
    geqtest::SweepStats st = geqtest::sweep_all_ops(inst);
    g_sweep.stats.applied += st.applied;
    g_sweep.stats.transport_failures += st.transport_failures;
    g_sweep.stats.d7d8_steps += st.d7d8_steps;
    g_sweep.stats.tau_violations += st.tau_violations;
    g_sweep.stats.episodes += st.episodes;
    g_sweep.stats.episode_net_increases += st.episode_net_increases;
    ++g_sweep.instances;
  }
  g_sweep.done = true;
}

// --------------------------------------------------------------------------
// Criteria
// --------------------------------------------------------------------------

bool c1_word_arithmetic(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> len(1, 40);
  const int triples = 50000;  // 150000 random words
  long checks = 0, failures = 0;
  for (int i = 0; i < triples; ++i) {
    LambdaWord u = rand_reduced(rng, len(rng));
    LambdaWord v = rand_reduced(rng, len(rng));
    LambdaWord w = rand_reduced(rng, len(rng));
    for (const auto* pr :
         {new std::pair<const LambdaWord*, const LambdaWord*>(&u, &v),
          new std::pair<const LambdaWord*, const LambdaWord*>(&v, &w)}) {
      auto m = LambdaWord::mult(*pr->first, *pr->second);
      auto c = LambdaWord::com(pr->first->inverse(), *pr->second);
      ++checks;
      if (!m || !c ||
          !(m->length() ==
            pr->first->length() + pr->second->length() -
                c->c.length() * BigInt(2)))
        ++failures;
      delete pr;
    }
    auto uv = LambdaWord::mult(u, v);
    auto vw = LambdaWord::mult(v, w);
    ++checks;
    if (!uv || !vw || !(*LambdaWord::mult(*uv, w) == *LambdaWord::mult(u, *vw)))
      ++failures;
  }
  double el = seconds_since(t0);
  std::ostringstream os;
  os << 3 * triples << " words, " << checks << " checks, " << failures
     << " failures, " << el << "s";
  detail = os.str();
  return failures == 0 && el < 30.0;
}

bool c2_length_axioms(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  std::set<std::string> all = {"L1", "L2", "L3", "L4", "L5", "L6"};

  GroupSample ball{1, free_ball(6), 0};
  AxiomReport fr = check_axioms(ball, all);
  bool ok_free = fr.closure_size == 1456 && fr.all_pass() && !fr.any_fail() &&
                 fr.results.at("L6").status == AxiomStatus::Pass &&
                 fr.results.at("L6").checked > 0;

  std::vector<LambdaWord> gens = {LambdaWord::parse(2, "(z)^[1,0]"),
                                  LambdaWord::parse(2, "(z)^[0,1]")};
  GroupSample block{2, gens, 3};
  AxiomReport br = check_axioms(block, all);
  bool ok_block = br.closure_size == 144 && br.all_pass() && !br.any_fail() &&
                  br.results.at("L6").status == AxiomStatus::Pass &&
                  br.results.at("L6").checked > 0;

  double el = seconds_since(t0);
  std::ostringstream os;
  os << "free ball |B|=" << fr.closure_size << (ok_free ? " ok" : " FAIL")
     << "; Z^2 block |B|=" << br.closure_size << (ok_block ? " ok" : " FAIL")
     << ", " << el << "s";
  detail = os.str();
  return ok_free && ok_block && el < 60.0;
}

bool c3_transport(std::string& detail) {
  run_sweep();
  std::ostringstream os;
  os << g_sweep.instances << " instances, " << g_sweep.stats.applied
     << " applicable steps, " << g_sweep.stats.transport_failures
     << " transport failures";
  detail = os.str();
  return g_sweep.instances >= 500 && g_sweep.stats.applied > 0 &&
         g_sweep.stats.transport_failures == 0;
}

bool c4_monotonicity(std::string& detail) {
  run_sweep();
  std::ostringstream os;
  os << g_sweep.stats.d7d8_steps << " D7/D8 steps, "
     << g_sweep.stats.tau_violations << " tau increases; "
     << g_sweep.stats.episodes << " episodes, "
     << g_sweep.stats.episode_net_increases << " with net increase";
  detail = os.str();
  return g_sweep.stats.d7d8_steps > 0 && g_sweep.stats.tau_violations == 0 &&
         g_sweep.stats.episode_net_increases == 0;
}

bool c5_kernel(std::string& detail) {
  std::vector<GenEq> gram = geqtest::small_equation_grammar();
  long orders = 0, confluence_failures = 0, rank_failures = 0;
  for (const GenEq& eq : gram) {
    geqtest::KernelOrbit orbit = geqtest::explore_kernel_orders(eq);
    orders += orbit.orders;
    if (orbit.kernels.size() != 1 || orbit.free_ranks.size() != 1)
      ++confluence_failures;

    KernelResult kr = d5_kernel(eq);
    long r_eq = presentation_abelianization(presentation(eq)).free_rank;
    long r_full =
        presentation_abelianization(presentation(kr.kernel)).free_rank;
    long uncovered = 0;
    for (long h = 1; h <= kr.kernel.rho; ++h)
      if (kr.kernel.gamma(h) == 0) ++uncovered;
    if (r_eq != (r_full - uncovered) + kr.free_rank) ++rank_failures;
  }
  std::ostringstream os;
  os << gram.size() << " grammar instances, " << orders << " orders, "
     << confluence_failures << " confluence failures, " << rank_failures
     << " rank-additivity failures";
  detail = os.str();
  return gram.size() >= 200 && confluence_failures == 0 && rank_failures == 0;
}

bool c6_quadratic(std::string& detail) {
  GenEq comm;
  comm.rank = 2;
  comm.rho = 3;
  comm.bases = {{"p2", 1, 1, 3, "p2d"},
                {"p2d", 1, 2, 4, "p2"},
                {"p3", 1, 3, 4, "p3d"},
                {"p3d", 1, 1, 2, "p3"}};
  comm.sections.push_back({1, 4, true});
  comm.check();
  QuadraticForm qa = standard_form(comm, comm.sections[0]);
  bool ok_a = qa.orientable && qa.genus == 1 && qa.coeff_count == 0 &&
              qa.kappa() == 3 && qa.regular();

  GenEq oct;
  oct.rank = 2;
  oct.rho = 8;
  oct.bases = {{"a", 1, 1, 3, "ad"},  {"b", 1, 3, 5, "bd"},
               {"c", 1, 5, 7, "cd"},  {"d", 1, 7, 9, "dd"},
               {"bd", 1, 1, 3, "b"},  {"ad", 1, 3, 5, "a"},
               {"dd", 1, 5, 7, "d"},  {"cd", 1, 7, 9, "c"}};
  oct.sections.push_back({1, 9, true});
  oct.check();
  QuadraticForm qb = standard_form(oct, oct.sections[0]);
  bool ok_b = qb.orientable && qb.genus == 2 && qb.coeff_count == 0 &&
              qb.kappa() == 5 && qb.regular();

  std::ostringstream os;
  os << "commutation (n=" << qa.genus << ", m=" << qa.coeff_count
     << ", kappa=" << qa.kappa() << ")" << (ok_a ? " ok" : " FAIL")
     << "; genus-2 (n=" << qb.genus << ", m=" << qb.coeff_count
     << ", kappa=" << qb.kappa() << ")" << (ok_b ? " ok" : " FAIL");
  detail = os.str();
  return ok_a && ok_b;
}

bool c7_periodic(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  AssembledDiagram d = build_diagram(comm_input("z^[0,1]"));

  // Drive the commutation equation to the overlapping state.
  GenEq cur = d.eq;
  Solution u = d.planted;
  std::string carrier;
  int drive = 0;
  while (!overlap_condition(cur, lengths_of(u), &carrier) && drive < 50) {
    TransformResult r = d8_entire_step(cur, lengths_of(u), &u);
    cur = r.target;
    u = *r.pushed;
    ++drive;
  }

  LambdaWord z = LambdaWord::parse(2, "z");
  PeriodicStructure ps = build_periodic_structure(cur, &u, z);
  StructureCheck chk = check_periodic_structure(cur, ps);

  SplittingReport sp = split_by_periodic_structure(cur, ps, &u);

  // Cycle images at the basepoint must pairwise commute as words.
  long commute_failures = 0;
  std::vector<LambdaWord> imgs;
  for (size_t k : sp.graph.non_tree) imgs.push_back(u.eval(sp.graph.cycles.at(k)));
  for (size_t a = 0; a < imgs.size(); ++a)
    for (size_t b = a + 1; b < imgs.size(); ++b) {
      auto ab = LambdaWord::mult(imgs[a], imgs[b]);
      auto ba = LambdaWord::mult(imgs[b], imgs[a]);
      if (!(ab && ba && *ab == *ba)) ++commute_failures;
    }

  // Finite index of B~ in Z1~: every invariant factor nonzero.
  bool finite_index = !sp.snf_diagonal.empty();
  for (const BigInt& di : sp.snf_diagonal)
    if (di == 0) finite_index = false;

  DecompositionReport rep = run(d.eq, &d.planted);
  long cent_events = 0;
  for (const auto& e : rep.events)
    if (e.kind == "CentralizerExtension") ++cent_events;

  double el = seconds_since(t0);
  std::ostringstream os;
  os << "checker " << (chk.ok ? "ok" : "FAIL") << ", " << imgs.size()
     << " cycles commute (" << commute_failures << " failures), index "
     << (finite_index ? "finite" : "INFINITE") << ", " << cent_events
     << " centralizer-extension event(s), " << el << "s";
  detail = os.str();
  return chk.ok && commute_failures == 0 &&
         imgs.size() == sp.graph.non_tree.size() && finite_index &&
         sp.kind == SplittingReport::CentralizerExtension && cent_events == 1 &&
         el < 10.0;
}

bool c8_end_to_end(std::string& detail) {
  const char* pres =
      "rank 2\n"
      "generators x y\n"
      "relator x y x^-1 y^-1\n"
      "embed x = (z)^[1,0]\n"
      "embed y = (z)^[0,1]\n";
  geq_eq* eq = nullptr;
  geq_solution* planted = nullptr;
  if (geq_build(pres, &eq, &planted) != GEQ_OK) {
    detail = std::string("build failed: ") + geq_last_error();
    return false;
  }
  char* rep = nullptr;
  geq_status st = geq_eliminate(eq, planted, 10000, -1, &rep);
  bool ok = st == GEQ_OK && rep != nullptr;
  long steps = -1;
  bool chain_ok = false, sigma_ok = false;
  long nontrivial = 0;
  if (ok) {
    json j = json::parse(rep);
    steps = j["steps"].get<long>();
    ok = j["complete"] == true && steps <= 10000;
    auto chain = j["chain"];
    chain_ok = chain.size() >= 2 &&
               chain[0].get<std::string>().find("free group") !=
                   std::string::npos;
    for (const auto& e : j["events"]) {
      std::string k = e["kind"].get<std::string>();
      if (k == "CentralizerExtension" || k == "HNNEdge" || k == "QHVertex" ||
          k == "AbelianVertex")
        ++nontrivial;
    }
    // Sigma_complete must force two equal lengths: one +1/-1 row.
    auto rows = j["sigma_complete"]["rows"];
    if (rows.size() == 1) {
      long pos = 0, neg = 0, other = 0;
      for (const auto& c : rows[0]) {
        long v = c.get<long>();
        if (v == 1)
          ++pos;
        else if (v == -1)
          ++neg;
        else if (v != 0)
          ++other;
      }
      sigma_ok = pos == 1 && neg == 1 && other == 0;
    }
  }
  geq_str_free(rep);
  geq_eq_free(eq);
  geq_solution_free(planted);

  // The relator-free presentation decomposes in a single free step.
  const char* pres_free =
      "rank 2\n"
      "generators x y\n"
      "embed x = (z)^[1,0]\n"
      "embed y = (z)^[0,1]\n";
  geq_eq* feq = nullptr;
  geq_solution* fsol = nullptr;
  bool free_ok = false;
  long free_chain = -1;
  if (geq_build(pres_free, &feq, &fsol) == GEQ_OK) {
    char* frep = nullptr;
    if (geq_eliminate(feq, fsol, 10000, -1, &frep) == GEQ_OK) {
      json j = json::parse(frep);
      free_chain = static_cast<long>(j["chain"].size());
      free_ok = j["complete"] == true && free_chain == 1 &&
                j["free_rank"] == 2 &&
                j["chain"][0].get<std::string>().find("free group") !=
                    std::string::npos;
    }
    geq_str_free(frep);
  }
  geq_eq_free(feq);
  geq_solution_free(fsol);

  std::ostringstream os;
  os << "[x,y]: " << steps << " steps, chain "
     << (chain_ok ? "free-first ok" : "FAIL") << ", " << nontrivial
     << " nontrivial step(s), sigma " << (sigma_ok ? "ties lengths" : "FAIL")
     << "; free case chain=" << free_chain;
  detail = os.str();
  return ok && chain_ok && nontrivial == 1 && sigma_ok && free_ok;
}

bool c9_excess(std::string& detail) {
  AssembledDiagram d = build_diagram(comm_input("z^[0,30]"));
  GenEq cur = d.eq;
  Solution u = d.planted;
  std::set<std::string> omega = {"p1", "p2"}, omega_t = {"p3"};
  ExcessReport first = excess(cur, u, omega, omega_t);
  long psi_failures = 0, eq322_failures = 0;
  for (int step = 0; step < 20; ++step) {
    ExcessReport before = excess(cur, u, omega, omega_t);
    if (!(before.psi == first.psi)) ++psi_failures;

    std::string c = d8_carrier(cur);
    const BaseRec* cb = cur.base(c);
    LambdaScalar x_before = span_len(u, cb->lo(), cb->hi());
    LambdaScalar tot_before = span_len(u, 1, cur.rho + 1);

    TransformResult r = d8_entire_step(cur, lengths_of(u), &u);
    cur = r.target;
    u = *r.pushed;

    ExcessReport after = excess(cur, u, omega, omega_t);
    LambdaScalar x_after(cur.rank);
    const BaseRec* ca = cur.base(c + ".2");  // remnant of the carrier
    if (!ca) ca = cur.base(c);
    if (ca) x_after = span_len(u, ca->lo(), ca->hi());
    LambdaScalar tot_after = span_len(u, 1, cur.rho + 1);

    LambdaScalar d_omega = before.u_len - after.u_len;
    if (!(d_omega == tot_before - tot_after &&
          d_omega == x_before - x_after))
      ++eq322_failures;
  }
  ExcessReport last = excess(cur, u, omega, omega_t);
  if (!(last.psi == first.psi)) ++psi_failures;

  std::ostringstream os;
  os << "20 steps, psi = " << first.psi.str() << " constant ("
     << psi_failures << " drifts), stepwise balance exact ("
     << eq322_failures << " failures)";
  detail = os.str();
  return psi_failures == 0 && eq322_failures == 0;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"word arithmetic soundness", c1_word_arithmetic},
      {"length-function axioms", c2_length_axioms},
      {"transformation solution transport", c3_transport},
      {"complexity monotonicity", c4_monotonicity},
      {"kernel confluence and rank additivity", c5_kernel},
      {"quadratic standard forms", c6_quadratic},
      {"periodic structure splitting", c7_periodic},
      {"end-to-end decomposition shape", c8_end_to_end},
      {"excess invariance", c9_excess},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("%s  criterion %zu: %s — %s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
