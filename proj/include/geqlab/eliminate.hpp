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

#ifndef GEQLAB_ELIMINATE_HPP
#define GEQLAB_ELIMINATE_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geqlab/transform.hpp"

namespace geqlab {

// ---------------------------------------------------------------------------
// Case classification
// ---------------------------------------------------------------------------

enum class CaseKind { Linear, Quadratic, AlmostQuadratic, GeneralJSJ, Leaf };

std::string case_name(CaseKind k);

// Classify by the covering numbers of the active items whose height is
// comparable with (equals) the maximal active height. With no height
// annotations every active item counts as comparable.
CaseKind classify(const GenEq& eq);

// ---------------------------------------------------------------------------
// Homogeneous length systems (Sigma)
// ---------------------------------------------------------------------------

// Sigma is a LinearSystem over the item lengths |h_1|..|h_rho|.

// Append a row given as plain integers; zero rows and duplicates (up to a
// global sign) are dropped.
void sigma_add(LinearSystem& sys, const std::vector<long>& row,
               const std::string& label);

// Rewrite every row through a morphism: |h_i| = sum of |h_j| over the image
// word of h_i (sign-independent); items the morphism kills contribute 0.
void sigma_rewrite(LinearSystem& sys, const Morphism& m);

// Check against a length oracle (missing items make rows fail).
bool sigma_satisfied(const LinearSystem& sys, const LengthMap& lengths);

// ---------------------------------------------------------------------------
// Path nodes
// ---------------------------------------------------------------------------

struct PathNode {
  GenEq omega;
  LinearSystem sigma;
  CaseKind kind = CaseKind::Leaf;
  Morphism edge_in;  // identity at the root
};

// ---------------------------------------------------------------------------
// Quadratic standard forms
// ---------------------------------------------------------------------------

// Result of rewriting the relation of a quadratic closed section in a basis
// X (quadratic variables), T (cancelled, relation-free variables) and C
// (quadratic-coefficient variables).
struct QuadraticForm {
  bool orientable = true;
  long genus = 0;        // n
  long coeff_count = 0;  // m (conjugated coefficient letters)
  bool trivial_d = true;
  std::vector<std::string> x_vars;  // X, after normalization 2n or n names
  std::vector<std::string> t_vars;  // T, cancelled from the relation
  std::vector<std::string> c_vars;  // C, quadratic-coefficient pairs
  // The reduced relation W before normalization, as (pair id, sign).
  std::vector<std::pair<std::string, int>> relation;

  long kappa() const;   // |X| + 1
  bool regular() const;
};

// Extract the standard quadratic form of a closed section: every item must
// be covered exactly twice, the covering bases must split into two tilings.
QuadraticForm standard_form(const GenEq& eq, const Section& sec);

// ---------------------------------------------------------------------------
// Periodic structures
// ---------------------------------------------------------------------------

// Boundary copies: a boundary shared by two member sections appears once per
// section, keyed by (section index, boundary).
using BoundaryCopy = std::pair<size_t, long>;

struct PeriodicStructure {
  std::set<long> items;              // long items
  std::set<std::string> base_ids;    // long bases
  std::set<size_t> section_idx;      // long sections (index into eq.sections)
  std::map<size_t, int> x_sign;      // section -> +-1 (condition 1(d))
  std::map<BoundaryCopy, long> r_class;  // boundary copy -> R-class id
  long class_count = 0;
  LambdaWord period;          // P
  LambdaScalar period_len;    // |P|
};

// Carrier/dual overlap precondition of the short-shift case: the carrier
// base overlaps its dual and is at least twice longer than the shift.
bool overlap_condition(const GenEq& eq, const LengthMap& lengths,
                       std::string* carrier_out = nullptr);

// Build P(U, P) by the closure chain; without a solution, membership falls
// back to every item of the carrier section (assumption mode).
PeriodicStructure build_periodic_structure(const GenEq& eq, const Solution* u,
                                           const LambdaWord& period);

struct StructureCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

// Definition checker: closure 1(a)-(d) and the generation rules for R.
StructureCheck check_periodic_structure(const GenEq& eq,
                                        const PeriodicStructure& ps);

// ---------------------------------------------------------------------------
// The period graph and the splitting it certifies
// ---------------------------------------------------------------------------

struct PeriodEdge {
  long item = 0;  // label h_item
  long from = 0, to = 0;
  bool long_label = false;  // item in P
  bool in_t0 = false, in_t = false;
};

struct PeriodGraph {
  long vertex_count = 0;
  std::vector<PeriodEdge> edges;
  long basepoint = 0;
  bool connected = true;
  // Cycle labels c_e for every non-tree edge, as item words.
  std::map<size_t, ItemWord> cycles;
  std::vector<size_t> non_tree;   // indices into edges
  std::vector<size_t> hnn_edges;  // edges of T - T0 (long tree edges)
};

struct SplittingReport {
  enum Kind { FreeProduct, QHVertex, AbelianVertex, HNNEdge, CentralizerExtension };
  Kind kind = CentralizerExtension;
  PeriodGraph graph;
  // Z~ lives on the non-tree edges; B~ rows are expressed in that basis.
  std::vector<std::vector<BigInt>> b_rows;
  std::vector<BigInt> snf_diagonal;  // nonzero invariant factors of B~ in Z~
  long z_rank = 0, z1_rank = 0, z2_rank = 0;
  // Bases of Z1 (c^(1)) and Z2 (c^(2)) as integer vectors over the c_e.
  std::vector<std::vector<BigInt>> c1, c2;
  std::vector<std::string> y0;             // generators of the K vertex
  std::vector<std::string> abelian_gens;   // h(c^(2)), h(c^(1))
  std::vector<std::string> edge_gens;      // h(c^(1))
  std::vector<std::string> stable_letters; // h(e_i)
  std::vector<std::string> relations;      // rendered u_ie / z_ie relations
  std::vector<std::vector<long>> sigma_rows;  // length ties over eq items
};

// Requires the structure to be connected (throws DomainError otherwise).
// With a solution, verifies that same-vertex cycle images commute; without
// one, periodized-ness is an input assumption.
SplittingReport split_by_periodic_structure(const GenEq& eq,
                                            const PeriodicStructure& ps,
                                            const Solution* u,
                                            bool assume_periodized = false);

// ---------------------------------------------------------------------------
// Excess diagnostics along entire-transformation paths
// ---------------------------------------------------------------------------

struct ExcessReport {
  std::set<std::string> omega1, omega2;  // base ids of the current equation
  long alpha_omega = 0;
  LambdaScalar u_len;  // |U_omega|
  LambdaScalar psi;    // psi_omega(U)
};

// omega: carrier names (root ids), omega_t: transfer names (root ids); base
// ids descend by suffixing, so membership tests strip ".1"/".2" suffixes.
ExcessReport excess(const GenEq& eq, const Solution& u,
                    const std::set<std::string>& omega,
                    const std::set<std::string>& omega_t);

struct PathStep {
  GenEq eq;             // equation at this node
  Solution u;           // transported solution
  std::string carrier;  // carrier chosen at this node (empty at the last)
  std::set<std::string> transfers;
  bool dual_overlap = false;        // carrier overlaps its dual here
  bool short_overlap = false;       // and |mu| <= 2|alpha shift|
};

enum class PathClass { MuReducing, Prohibited, Neither };

struct PathVerdict {
  PathClass cls = PathClass::Neither;
  std::string mu;  // witness for MuReducing
  std::string detail;
};

// Applies the mu-reducing / prohibited path definitions; f1 < 0 selects the
// default f1 = number of base pairs of the second equation.
PathVerdict classify_path(const std::vector<PathStep>& steps, long f1 = -1);

// ---------------------------------------------------------------------------
// The elimination driver
// ---------------------------------------------------------------------------

struct RunConfig {
  long max_steps = 10000;
  long f1 = -1;  // default: number of base pairs
  bool verbose = false;
};

struct Event {
  std::string kind;    // FreeProduct | QHVertex | AbelianVertex | HNNEdge |
                       // CentralizerExtension | Leaf | MatchedPair
  std::string detail;
  long step = 0;
  std::vector<std::vector<long>> sigma_rows;  // rows added at this event
};

struct DecompositionReport {
  bool complete = false;
  long steps = 0;
  long free_rank = 0;  // rank of the leading free group G_1
  std::vector<std::string> chain;  // G_1 < G_2 < ... tags
  std::vector<Event> events;
  LinearSystem sigma_complete;
  std::vector<PathNode> trace;  // one node per driver iteration
  std::string note;
};

DecompositionReport run(const GenEq& eq, const Solution* u,
                        const RunConfig& cfg = {});

}  // namespace geqlab

#endif  // GEQLAB_ELIMINATE_HPP
