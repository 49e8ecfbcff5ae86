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

#ifndef GEQLAB_LENGTH_AXIOMS_HPP
#define GEQLAB_LENGTH_AXIOMS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "geqlab/words.hpp"

namespace geqlab {

// Length assignment used by the axiom checker. The default is the intrinsic
// word length; tests substitute edited tables to force violations.
class LengthOracle {
 public:
  virtual ~LengthOracle() = default;
  virtual LambdaScalar length(const LambdaWord& g) const { return g.length(); }
  // True when length() is exactly the intrinsic word length, which lets the
  // checker use com-based shortcuts for Gromov products.
  virtual bool word_length() const { return true; }
};

const LengthOracle& default_oracle();

// Overrides the length of the words whose canonical text appears in the
// table; everything else falls back to word length.
class TableOracle : public LengthOracle {
 public:
  explicit TableOracle(std::map<std::string, LambdaScalar> overrides)
      : tab_(std::move(overrides)) {}
  LambdaScalar length(const LambdaWord& g) const override {
    auto it = tab_.find(g.str());
    return it != tab_.end() ? it->second : g.length();
  }
  bool word_length() const override { return false; }

 private:
  std::map<std::string, LambdaScalar> tab_;
};

// Finite stand-in for a subgroup: the listed elements plus closure_depth
// rounds of pairwise partial products and inverses.
struct GroupSample {
  int rank = 1;
  std::vector<LambdaWord> elements;
  int closure_depth = 0;
};

enum class AxiomStatus { Pass, Fail, NotWitnessed };

struct AxiomResult {
  AxiomStatus status = AxiomStatus::Pass;
  long checked = 0;
  long skipped = 0;     // instances skipped for undefined partial products
  std::string witness;  // first counterexample / first unwitnessed instance
};

struct AxiomReport {
  std::map<std::string, AxiomResult> results;
  long closure_size = 0;
  long undefined_products = 0;
  bool all_pass() const;  // NotWitnessed does not count as a failure
  bool any_fail() const;
  std::string str() const;
};

// c(g,f) = (l(g) + l(f) - l(g^-1 f)) / 2, computed in the divisible hull.
LambdaRational gromov(const LambdaWord& g, const LambdaWord& f,
                      const LengthOracle& o = default_oracle());

// Axiom names: "L1".."L6". L1-L5 are exhaustive over the closure; L6 looks
// for a common-prefix witness in the closure and reports NotWitnessed when
// none exists at this depth.
AxiomReport check_axioms(const GroupSample& s,
                         const std::set<std::string>& axioms,
                         const LengthOracle& o = default_oracle());

// l(gf) <= l(g) + l(f) over all defined products; reported under key "SUB".
AxiomReport subadditivity_check(const GroupSample& s,
                                const LengthOracle& o = default_oracle());

// The closure the checkers run on (elements, inverses, closure_depth rounds
// of partial products), deduplicated in canonical text order of discovery.
std::vector<LambdaWord> sample_closure(const GroupSample& s,
                                       long* undefined_out = nullptr);

}  // namespace geqlab

#endif
