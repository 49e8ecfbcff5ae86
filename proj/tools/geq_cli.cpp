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

// Command-line front end.  Links only the public C API (geq.h); all file
// handling and argument parsing lives here.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geq.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int exit_code(geq_status s) {
  switch (s) {
    case GEQ_OK:
      return kExitOk;
    case GEQ_ERR_USAGE:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

[[noreturn]] void die(geq_status s) {
  std::cerr << "error: " << geq_last_error() << "\n";
  std::exit(exit_code(s));
}

void check(geq_status s) {
  if (s != GEQ_OK) die(s);
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    std::exit(kExitUsage);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    std::exit(kExitUsage);
  }
  out << text;
}

// Owns a heap string returned by the library.
struct CStr {
  char* p = nullptr;
  ~CStr() { geq_str_free(p); }
  std::string str() const { return p != nullptr ? std::string(p) : std::string(); }
};

struct EqHandle {
  geq_eq* p = nullptr;
  ~EqHandle() { geq_eq_free(p); }
};

struct SolHandle {
  geq_solution* p = nullptr;
  ~SolHandle() { geq_solution_free(p); }
};

int env_rank() {
  const char* v = std::getenv("GEQ_RANK");
  if (v == nullptr) return 1;
  try {
    int r = std::stoi(v);
    return r >= 1 ? r : 1;
  } catch (...) {
    return 1;
  }
}

// Text format starts with the "geq" keyword; JSON export starts with '{'.
void load_eq(const std::string& path, EqHandle& eq) {
  std::string text = read_file(path);
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && text[i] == '{')
    check(geq_eq_from_json(text.c_str(), &eq.p));
  else
    check(geq_eq_parse(text.c_str(), &eq.p));
}

void load_solution(const std::string& path, int rank, SolHandle& sol) {
  std::string text = read_file(path);
  check(geq_solution_parse(rank, text.c_str(), &sol.p));
}

// The rank of the equation's coefficient group, needed to parse solution
// files.  Recovered from the serialized header line "geq rank=N items=M".
int rank_of(const EqHandle& eq) {
  CStr text;
  check(geq_eq_format(eq.p, &text.p));
  std::istringstream in(text.str());
  std::string kw, field;
  in >> kw >> field;
  auto pos = field.find('=');
  if (kw == "geq" && pos != std::string::npos)
    return std::stoi(field.substr(pos + 1));
  return env_rank();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized-equation toolkit"};
  app.require_subcommand(1);
  long seed = 0;
  app.add_option("--seed", seed, "seed for randomized operations (accepted everywhere)");

  // ---- lenfun check ----
  auto* lenfun = app.add_subcommand("lenfun", "length-function analysis");
  lenfun->require_subcommand(1);
  auto* lf_check = lenfun->add_subcommand("check", "verify length axioms on a word sample");
  std::string lf_file, lf_axioms = "all";
  int lf_rank = env_rank(), lf_depth = 2;
  lf_check->add_option("file", lf_file, "words file, one word per line")->required();
  lf_check->add_option("--axioms", lf_axioms, "comma list L1..L6, or 'all'");
  lf_check->add_option("--closure-depth", lf_depth, "product-closure depth");
  lf_check->add_option("--rank", lf_rank, "ambient rank (default: GEQ_RANK or 1)");

  // ---- geq build ----
  auto* build = app.add_subcommand("build", "assemble a generalized equation from a presentation");
  std::string b_file, b_out, b_planted;
  build->add_option("file", b_file, "presentation file")->required();
  build->add_option("-o,--output", b_out, "output path for the equation");
  build->add_option("--planted", b_planted, "also write the planted solution here");

  // ---- geq validate ----
  auto* validate = app.add_subcommand("validate", "check structural invariants");
  std::string v_file;
  validate->add_option("file", v_file, "equation file")->required();

  // ---- geq derive ----
  auto* derive = app.add_subcommand("derive", "print the derived basic and boundary equations");
  std::string dv_file, dv_format = "text";
  derive->add_option("file", dv_file, "equation file")->required();
  derive->add_option("--format", dv_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  // ---- geq present ----
  auto* present = app.add_subcommand("present", "print the presentation of the coordinate group");
  std::string pr_file, pr_format = "text";
  present->add_option("file", pr_file, "equation file")->required();
  present->add_option("--format", pr_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  // ---- geq verify ----
  auto* verify = app.add_subcommand("verify", "verify a candidate solution");
  std::string vf_file, vf_sol;
  verify->add_option("file", vf_file, "equation file")->required();
  verify->add_option("--solution", vf_sol, "solution file")->required();

  // ---- geq tau ----
  auto* tau = app.add_subcommand("tau", "print the complexity measure");
  std::string t_file, t_format = "text";
  tau->add_option("file", t_file, "equation file")->required();
  tau->add_option("--format", t_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  // ---- geq xform ----
  auto* xform = app.add_subcommand("xform", "apply one elementary or derived transformation");
  std::vector<std::string> x_args;
  std::string x_out, x_sol;
  bool x_trace = false;
  xform->add_option("op-params-file", x_args,
                    "operation name, key=value parameters, then the equation file")
      ->required()
      ->expected(-2);
  xform->add_option("-o,--output", x_out, "output path for the transformed equation");
  xform->add_option("--solution", x_sol, "solution to transport");
  xform->add_flag("--trace", x_trace, "emit the morphism as item substitution lines");

  // ---- geq eliminate ----
  auto* eliminate = app.add_subcommand("eliminate", "run the elimination process");
  std::string e_file, e_sol, e_report;
  long e_max = 10000, e_f1 = -1;
  eliminate->add_option("file", e_file, "equation file");
  eliminate->add_option("--solution", e_sol, "solution file");
  eliminate->add_option("--max-steps", e_max, "step budget");
  eliminate->add_option("--f1", e_f1, "path-length parameter override");
  eliminate->add_option("--report", e_report, "write the JSON report here");

  // ---- geq render ----
  auto* render = app.add_subcommand("render", "render the interval picture as SVG");
  std::string r_file, r_out;
  render->add_option("file", r_file, "equation file")->required();
  render->add_option("-o,--output", r_out, "output SVG path");

  // A copy of the binary installed under the name `lenfun` behaves as if the
  // subcommand were given.
  std::vector<const char*> args;
  args.push_back(argv[0]);
  {
    std::string base = argv[0];
    auto slash = base.find_last_of('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);
    if (base == "lenfun") args.push_back("lenfun");
  }
  for (int i = 1; i < argc; ++i) args.push_back(argv[i]);

  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*lf_check) {
    std::string words = read_file(lf_file);
    int ok = 0;
    CStr report;
    check(geq_check_axioms(lf_rank, words.c_str(), lf_axioms.c_str(), lf_depth,
                           &ok, &report.p));
    std::cout << report.str();
    return ok ? kExitOk : kExitDomain;
  }

  if (*build) {
    std::string text = read_file(b_file);
    EqHandle eq;
    SolHandle planted;
    check(geq_build(text.c_str(), &eq.p, &planted.p));
    CStr out;
    check(geq_eq_format(eq.p, &out.p));
    write_file(b_out, out.str());
    if (!b_planted.empty()) {
      CStr sol;
      check(geq_solution_format(planted.p, &sol.p));
      write_file(b_planted, sol.str());
    }
    return kExitOk;
  }

  if (*validate) {
    EqHandle eq;
    load_eq(v_file, eq);
    CStr violations;
    check(geq_eq_validate(eq.p, &violations.p));
    std::string text = violations.str();
    if (text.empty()) {
      std::cout << "ok\n";
      return kExitOk;
    }
    std::cout << text;
    return kExitDomain;
  }

  if (*derive) {
    EqHandle eq;
    load_eq(dv_file, eq);
    CStr out;
    check(geq_eq_derive(eq.p, dv_format == "json" ? 1 : 0, &out.p));
    std::cout << out.str();
    return kExitOk;
  }

  if (*present) {
    EqHandle eq;
    load_eq(pr_file, eq);
    CStr out;
    check(geq_eq_present(eq.p, pr_format == "json" ? 1 : 0, &out.p));
    std::cout << out.str();
    return kExitOk;
  }

  if (*verify) {
    EqHandle eq;
    load_eq(vf_file, eq);
    SolHandle sol;
    load_solution(vf_sol, rank_of(eq), sol);
    int ok = 0;
    CStr violation;
    check(geq_verify(eq.p, sol.p, &ok, &violation.p));
    if (ok) {
      std::cout << "solution verified\n";
      return kExitOk;
    }
    std::cout << "not a solution: " << violation.str() << "\n";
    return kExitDomain;
  }

  if (*tau) {
    EqHandle eq;
    load_eq(t_file, eq);
    CStr out;
    check(geq_eq_complexity(eq.p, t_format == "json" ? 1 : 0, &out.p));
    std::cout << out.str();
    return kExitOk;
  }

  if (*xform) {
    // Last positional is the file; everything before it forms the spec.
    std::string file = x_args.back();
    std::string spec;
    for (size_t i = 0; i + 1 < x_args.size(); ++i) {
      if (i) spec += ' ';
      spec += x_args[i];
    }
    EqHandle eq;
    load_eq(file, eq);
    SolHandle sol;
    if (!x_sol.empty()) load_solution(x_sol, rank_of(eq), sol);
    EqHandle target;
    SolHandle pushed;
    CStr trace;
    check(geq_xform(eq.p, spec.c_str(), sol.p, &target.p, &pushed.p, &trace.p));
    if (x_trace) std::cerr << trace.str();
    CStr out;
    check(geq_eq_format(target.p, &out.p));
    write_file(x_out, out.str());
    return kExitOk;
  }

  if (*eliminate) {
    EqHandle eq;
    if (!e_file.empty()) {
      load_eq(e_file, eq);
    } else {
      // Degenerate invocation without an input: an empty equation.
      std::string empty = "geq rank=" + std::to_string(env_rank()) + " items=0\n";
      check(geq_eq_parse(empty.c_str(), &eq.p));
    }
    SolHandle sol;
    if (!e_sol.empty()) load_solution(e_sol, rank_of(eq), sol);
    CStr report;
    geq_status st = geq_eliminate(eq.p, sol.p, e_max, e_f1, &report.p);
    if (!e_report.empty() && report.p != nullptr)
      write_file(e_report, report.str());
    if (st != GEQ_OK) {
      std::cerr << "error: " << geq_last_error() << "\n";
      return exit_code(st);
    }
    if (e_report.empty()) std::cout << report.str() << "\n";
    return kExitOk;
  }

  if (*render) {
    EqHandle eq;
    load_eq(r_file, eq);
    CStr svg;
    check(geq_eq_render_svg(eq.p, &svg.p));
    write_file(r_out, svg.str());
    return kExitOk;
  }

  std::cerr << "error: no subcommand\n";
  return kExitUsage;
}
