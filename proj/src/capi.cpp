/*
 * Copyright (c) 2026 the geqlab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "geq.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "geqlab/builder.hpp"
#include "geqlab/eliminate.hpp"
#include "geqlab/errors.hpp"
#include "geqlab/io.hpp"
#include "geqlab/length_axioms.hpp"
#include "geqlab/render.hpp"
#include "geqlab/transform.hpp"

using json = nlohmann::json;

struct geq_word {
  geqlab::LambdaWord w;
};
struct geq_eq {
  geqlab::GenEq eq;
};
struct geq_solution {
  geqlab::Solution u;
};

namespace {

thread_local std::string g_last_error;

geq_status fail(geq_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

char* dup_str(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

geq_status put_str(char** dst, const std::string& s) {
  if (dst == nullptr) return GEQ_OK;
  *dst = dup_str(s);
  if (*dst == nullptr) return fail(GEQ_ERR_NOMEM, "out of memory");
  return GEQ_OK;
}

// Runs `body` under the uniform exception-to-status mapping.
template <typename F>
geq_status guarded(F&& body) {
  try {
    return body();
  } catch (const geqlab::ParseError& e) {
    return fail(GEQ_ERR_USAGE, e.what());
  } catch (const geqlab::NotApplicable& e) {
    return fail(GEQ_ERR_DOMAIN, e.what());
  } catch (const geqlab::Error& e) {
    return fail(GEQ_ERR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GEQ_ERR_NOMEM, "out of memory");
  } catch (const std::exception& e) {
    return fail(GEQ_ERR_DOMAIN, e.what());
  }
}

geq_status need(bool cond, const char* what) {
  if (cond) return GEQ_OK;
  return fail(GEQ_ERR_USAGE, std::string("missing or null ") + what);
}

long long small(const geqlab::BigInt& v) { return v.convert_to<long long>(); }

json sigma_json(const geqlab::LinearSystem& sys) {
  json rows = json::array();
  for (const auto& row : sys.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(small(c));
    rows.push_back(r);
  }
  return json{{"vars", sys.vars}, {"rows", rows}, {"labels", sys.labels}};
}

std::map<std::string, std::string> parse_kv(std::istringstream& in) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw geqlab::ParseError("expected key=value, got '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

std::string kv_str(const std::map<std::string, std::string>& kv,
                   const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw geqlab::ParseError("missing parameter '" + key + "'");
  return it->second;
}

long kv_long(const std::map<std::string, std::string>& kv,
             const std::string& key) {
  try {
    return std::stol(kv_str(kv, key));
  } catch (const std::invalid_argument&) {
    throw geqlab::ParseError("parameter '" + key + "' is not an integer");
  }
}

}  // namespace

extern "C" {

const char* geq_last_error(void) { return g_last_error.c_str(); }

void geq_str_free(char* s) { std::free(s); }

/* ----------------------------- words ---------------------------------- */

geq_status geq_word_parse(int rank, const char* text, geq_word** out) {
  if (geq_status s = need(text != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    auto* h = new geq_word{geqlab::LambdaWord::parse(rank, text, nullptr)};
    *out = h;
    return GEQ_OK;
  });
}

void geq_word_free(geq_word* w) { delete w; }

geq_status geq_word_str(const geq_word* w, char** out) {
  if (geq_status s = need(w != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] { return put_str(out, w->w.str()); });
}

geq_status geq_word_length(const geq_word* w, char** out) {
  if (geq_status s = need(w != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] { return put_str(out, w->w.length().str()); });
}

geq_status geq_word_inverse(const geq_word* w, geq_word** out) {
  if (geq_status s = need(w != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    *out = new geq_word{w->w.inverse()};
    return GEQ_OK;
  });
}

geq_status geq_word_mult(const geq_word* u, const geq_word* v, geq_word** out) {
  if (geq_status s =
          need(u != nullptr && v != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&]() -> geq_status {
    auto m = geqlab::LambdaWord::mult(u->w, v->w);
    if (!m) return fail(GEQ_ERR_UNDEFINED, "partial product undefined");
    *out = new geq_word{*m};
    return GEQ_OK;
  });
}

geq_status geq_word_com(const geq_word* u, const geq_word* v, geq_word** c,
                        geq_word** u_rest, geq_word** v_rest) {
  if (geq_status s = need(u != nullptr && v != nullptr, "argument")) return s;
  return guarded([&]() -> geq_status {
    auto r = geqlab::LambdaWord::com(u->w, v->w);
    if (!r) return fail(GEQ_ERR_UNDEFINED, "common prefix undefined");
    if (c != nullptr) *c = new geq_word{r->c};
    if (u_rest != nullptr) *u_rest = new geq_word{r->u_rest};
    if (v_rest != nullptr) *v_rest = new geq_word{r->v_rest};
    return GEQ_OK;
  });
}

/* --------------------------- equations --------------------------------- */

geq_status geq_eq_parse(const char* text, geq_eq** out) {
  if (geq_status s = need(text != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    *out = new geq_eq{geqlab::parse_geq(text)};
    return GEQ_OK;
  });
}

geq_status geq_eq_from_json(const char* text, geq_eq** out) {
  if (geq_status s = need(text != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    *out = new geq_eq{geqlab::geq_from_json(text)};
    return GEQ_OK;
  });
}

void geq_eq_free(geq_eq* eq) { delete eq; }

geq_status geq_eq_format(const geq_eq* eq, char** out) {
  if (geq_status s = need(eq != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] { return put_str(out, geqlab::format_geq(eq->eq)); });
}

geq_status geq_eq_to_json(const geq_eq* eq, char** out) {
  if (geq_status s = need(eq != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] { return put_str(out, geqlab::geq_to_json(eq->eq)); });
}

geq_status geq_eq_validate(const geq_eq* eq, char** violations) {
  if (geq_status s = need(eq != nullptr, "equation")) return s;
  return guarded([&] {
    std::string text;
    for (const auto& v : eq->eq.validate()) {
      text += v;
      text += '\n';
    }
    return put_str(violations, text);
  });
}

geq_status geq_eq_tau(const geq_eq* eq, long* tau) {
  if (geq_status s = need(eq != nullptr && tau != nullptr, "argument"))
    return s;
  return guarded([&] {
    *tau = geqlab::complexity(eq->eq).tau;
    return GEQ_OK;
  });
}

geq_status geq_eq_complexity(const geq_eq* eq, int as_json, char** out) {
  if (geq_status s = need(eq != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    geqlab::Complexity c = geqlab::complexity(eq->eq);
    if (as_json) {
      json j{{"schema", 1},
             {"tau", c.tau},
             {"rho_active", c.rho_active},
             {"n_active", c.n_active},
             {"gamma", json::object()},
             {"sections", json::object()}};
      for (const auto& [i, g] : c.gamma) j["gamma"]["h" + std::to_string(i)] = g;
      for (const auto& [k, n] : c.section_base_count) j["sections"][k] = n;
      return put_str(out, j.dump(2));
    }
    std::ostringstream os;
    os << "tau = " << c.tau << "\n";
    os << "active items = " << c.rho_active
       << ", active bases = " << c.n_active << "\n";
    for (const auto& [k, n] : c.section_base_count)
      os << "section [" << k << "): n = " << n << "\n";
    for (const auto& [i, g] : c.gamma)
      os << "gamma(h" << i << ") = " << g << "\n";
    return put_str(out, os.str());
  });
}

geq_status geq_eq_derive(const geq_eq* eq, int as_json, char** out) {
  if (geq_status s = need(eq != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    auto list = geqlab::derive(eq->eq);
    if (as_json) {
      json arr = json::array();
      for (const auto& d : list)
        arr.push_back(
            {{"kind", d.kind == geqlab::DerivedEquation::Basic ? "basic"
                                                               : "boundary"},
             {"label", d.label},
             {"left", geqlab::item_word_str(d.left)},
             {"right", geqlab::item_word_str(d.right)}});
      return put_str(out, json{{"schema", 1}, {"equations", arr}}.dump(2));
    }
    std::ostringstream os;
    for (const auto& d : list)
      os << (d.kind == geqlab::DerivedEquation::Basic ? "basic " : "boundary ")
         << d.label << ": " << geqlab::item_word_str(d.left) << " = "
         << geqlab::item_word_str(d.right) << "\n";
    return put_str(out, os.str());
  });
}

geq_status geq_eq_present(const geq_eq* eq, int as_json, char** out) {
  if (geq_status s = need(eq != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    geqlab::Presentation p = geqlab::presentation(eq->eq);
    geqlab::AbelianInfo ab = geqlab::presentation_abelianization(p);
    if (as_json) {
      json rel = json::array();
      for (const auto& r : p.relators)
        rel.push_back(geqlab::item_word_str(r));
      json tor = json::array();
      for (const auto& t : ab.torsion) tor.push_back(small(t));
      return put_str(out, json{{"schema", 1},
                               {"generators", p.generators},
                               {"relators", rel},
                               {"abelianization",
                                {{"free_rank", ab.free_rank},
                                 {"torsion", tor}}}}
                              .dump(2));
    }
    std::ostringstream os;
    os << "<h1..h" << p.generators << " | ";
    for (size_t i = 0; i < p.relators.size(); ++i)
      os << (i ? ", " : "") << geqlab::item_word_str(p.relators[i]);
    os << ">\n";
    os << "abelianization: free rank " << ab.free_rank;
    if (!ab.torsion.empty()) {
      os << ", torsion";
      for (const auto& t : ab.torsion) os << " Z/" << t.str();
    }
    os << "\n";
    return put_str(out, os.str());
  });
}

geq_status geq_eq_render_svg(const geq_eq* eq, char** out) {
  if (geq_status s = need(eq != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] { return put_str(out, geqlab::render_svg(eq->eq)); });
}

/* --------------------------- solutions --------------------------------- */

geq_status geq_solution_parse(int rank, const char* text, geq_solution** out) {
  if (geq_status s = need(text != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] {
    *out = new geq_solution{geqlab::parse_solution(text, rank)};
    return GEQ_OK;
  });
}

void geq_solution_free(geq_solution* u) { delete u; }

geq_status geq_solution_format(const geq_solution* u, char** out) {
  if (geq_status s = need(u != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&] { return put_str(out, geqlab::format_solution(u->u)); });
}

geq_status geq_verify(const geq_eq* eq, const geq_solution* u, int* ok,
                      char** violation) {
  if (geq_status s =
          need(eq != nullptr && u != nullptr && ok != nullptr, "argument"))
    return s;
  return guarded([&] {
    geqlab::VerifyResult r = geqlab::verify_solution(eq->eq, u->u);
    *ok = r.ok ? 1 : 0;
    return put_str(violation, r.violation);
  });
}

/* ----------------------------- builder --------------------------------- */

geq_status geq_build(const char* presentation_text, geq_eq** eq_out,
                     geq_solution** planted_out) {
  if (geq_status s = need(presentation_text != nullptr, "presentation text"))
    return s;
  return guarded([&] {
    geqlab::PresentationInput p = geqlab::parse_presentation(presentation_text);
    geqlab::AssembledDiagram d = geqlab::build_diagram(p);
    if (eq_out != nullptr) *eq_out = new geq_eq{d.eq};
    if (planted_out != nullptr) *planted_out = new geq_solution{d.planted};
    return GEQ_OK;
  });
}

/* ------------------------- transformations ----------------------------- */

geq_status geq_xform(const geq_eq* eq, const char* spec, const geq_solution* u,
                     geq_eq** out, geq_solution** pushed, char** trace) {
  if (geq_status s =
          need(eq != nullptr && spec != nullptr && out != nullptr, "argument"))
    return s;
  return guarded([&]() -> geq_status {
    std::istringstream in(spec);
    std::string op;
    if (!(in >> op)) throw geqlab::ParseError("empty transformation spec");
    auto kv = parse_kv(in);
    const geqlab::Solution* up = u != nullptr ? &u->u : nullptr;
    geqlab::LengthMap lengths =
        up != nullptr ? geqlab::lengths_of(*up) : geqlab::lengths_of(eq->eq);

    geqlab::TransformResult r;
    std::string extra;
    if (op == "et1") {
      r = geqlab::et1_cut(eq->eq, kv_str(kv, "lambda"), kv_long(kv, "p"), up);
    } else if (op == "et2") {
      r = geqlab::et2_transfer(eq->eq, kv_str(kv, "lambda"), kv_str(kv, "mu"),
                               up);
    } else if (op == "et3") {
      r = geqlab::et3_remove_matched(eq->eq, kv_str(kv, "lambda"), up);
    } else if (op == "et4") {
      r = geqlab::et4_remove_lone(eq->eq, kv_str(kv, "lambda"), up);
    } else if (op == "et5") {
      r = geqlab::et5_introduce_boundary(eq->eq, kv_str(kv, "lambda"),
                                         kv_long(kv, "p"), lengths, up);
    } else if (op == "d1") {
      r = geqlab::d1_close(eq->eq, kv_long(kv, "lo"), kv_long(kv, "hi"),
                           lengths, up);
    } else if (op == "d2") {
      r = geqlab::d2_transport(eq->eq, kv_long(kv, "lo"), kv_long(kv, "hi"),
                               up);
    } else if (op == "d3") {
      r = geqlab::d3_move_free(eq->eq, kv_long(kv, "q"), up);
    } else if (op == "d4") {
      r = geqlab::d4_delete_complete(eq->eq, kv_str(kv, "mu"), lengths, up);
    } else if (op == "d5") {
      geqlab::KernelResult kr = geqlab::d5_kernel(eq->eq);
      *out = new geq_eq{kr.kernel};
      std::ostringstream os;
      os << "free_rank = " << kr.free_rank << "\n";
      for (const auto& t : kr.trace) os << "eliminated " << t << "\n";
      if (pushed != nullptr) *pushed = nullptr;
      return put_str(trace, os.str());
    } else if (op == "d6") {
      r = geqlab::d6_linear_step(eq->eq, lengths, up);
    } else if (op == "d7") {
      geqlab::D7Result d7 = geqlab::d7_tietze(eq->eq, lengths, up);
      r = d7.result;
      std::ostringstream os;
      if (d7.loop_detected)
        os << "loop detected, period " << d7.loop_period << "\n";
      if (d7.free_rank_split > 0)
        os << "free factor of rank " << d7.free_rank_split << " split off\n";
      extra = os.str();
    } else if (op == "d8") {
      r = geqlab::d8_entire_step(eq->eq, lengths, up);
    } else {
      throw geqlab::ParseError("unknown transformation '" + op + "'");
    }

    *out = new geq_eq{r.target};
    if (pushed != nullptr)
      *pushed = r.pushed.has_value() ? new geq_solution{*r.pushed} : nullptr;
    std::ostringstream os;
    if (!r.note.empty()) os << "# " << r.note << "\n";
    os << extra << r.morphism.str();
    return put_str(trace, os.str());
  });
}

/* ---------------------------- elimination ------------------------------ */

geq_status geq_eliminate(const geq_eq* eq, const geq_solution* u,
                         long max_steps, long f1, char** report_json) {
  if (geq_status s = need(eq != nullptr, "equation")) return s;
  return guarded([&]() -> geq_status {
    geqlab::RunConfig cfg;
    if (max_steps >= 0) cfg.max_steps = max_steps;
    cfg.f1 = f1;
    geqlab::DecompositionReport rep =
        geqlab::run(eq->eq, u != nullptr ? &u->u : nullptr, cfg);

    json events = json::array();
    for (const auto& e : rep.events) {
      json rows = json::array();
      for (const auto& row : e.sigma_rows) rows.push_back(row);
      events.push_back({{"kind", e.kind},
                        {"detail", e.detail},
                        {"step", e.step},
                        {"sigma_rows", rows}});
    }
    json trace = json::array();
    for (const auto& n : rep.trace)
      trace.push_back({{"case", geqlab::case_name(n.kind)},
                       {"rho", n.omega.rho},
                       {"bases", n.omega.bases.size()},
                       {"morphism_in", n.edge_in.str()}});
    json j{{"schema", 1},
           {"complete", rep.complete},
           {"steps", rep.steps},
           {"note", rep.note},
           {"free_rank", rep.free_rank},
           {"chain", rep.chain},
           {"events", events},
           {"sigma_complete", sigma_json(rep.sigma_complete)},
           {"trace", trace}};
    if (geq_status s = put_str(report_json, j.dump(2))) return s;
    if (!rep.complete) return fail(GEQ_ERR_DOMAIN, rep.note);
    return GEQ_OK;
  });
}

/* ------------------------------ axioms --------------------------------- */

geq_status geq_check_axioms(int rank, const char* words_text,
                            const char* axioms, int closure_depth, int* ok,
                            char** report) {
  if (geq_status s =
          need(words_text != nullptr && ok != nullptr, "argument"))
    return s;
  return guarded([&] {
    geqlab::GroupSample sample;
    sample.rank = rank;
    sample.closure_depth = closure_depth;
    std::istringstream in(words_text);
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      sample.elements.push_back(geqlab::LambdaWord::parse(rank, line, nullptr));
    }
    std::set<std::string> names;
    std::string ax = axioms != nullptr ? axioms : "all";
    if (ax == "all" || ax.empty() || ax == "L1..L6") {
      names = {"L1", "L2", "L3", "L4", "L5", "L6"};
    } else {
      std::string cur;
      for (char c : ax + ",") {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
          if (!cur.empty()) names.insert(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
    }
    geqlab::AxiomReport rep = geqlab::check_axioms(sample, names);
    *ok = rep.any_fail() ? 0 : 1;
    return put_str(report, rep.str());
  });
}

}  // extern "C"
