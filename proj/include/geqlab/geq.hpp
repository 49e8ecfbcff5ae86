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

#ifndef GEQLAB_GEQ_HPP
#define GEQLAB_GEQ_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "geqlab/smith.hpp"
#include "geqlab/words.hpp"

namespace geqlab {

// A base occupies the boundaries between alpha and beta; alpha < beta
// exactly when eps = +1. Items are h_1..h_rho, boundaries 1..rho+1.
struct BaseRec {
  std::string id;
  int eps = 1;
  long alpha = 0;
  long beta = 0;
  std::string dual;

  long lo() const { return std::min(alpha, beta); }
  long hi() const { return std::max(alpha, beta); }
  bool covers_item(long i) const { return lo() <= i && i < hi(); }
  long len() const { return hi() - lo(); }
  bool operator==(const BaseRec&) const = default;
};

// Boundary p of lambda is tied to boundary q of its dual; the mirrored
// record (q, dual(lambda), p) is always stored too.
struct Connection {
  long p = 0;
  std::string lambda;
  long q = 0;
  bool operator==(const Connection&) const = default;
};

struct Section {
  long lo = 0;
  long hi = 0;
  bool active = false;
  bool operator==(const Section&) const = default;
};

struct SignedItem {
  long item = 0;
  int sign = 1;
  bool operator==(const SignedItem&) const = default;
};
using ItemWord = std::vector<SignedItem>;

ItemWord invert_item_word(const ItemWord& w);
ItemWord free_reduce_item_word(const ItemWord& w);
std::string item_word_str(const ItemWord& w);

struct DerivedEquation {
  enum Kind { Basic, Boundary };
  Kind kind = Basic;
  std::string label;
  ItemWord left, right;
};

struct GenEq {
  int rank = 1;
  long rho = 0;
  std::vector<BaseRec> bases;
  std::vector<Connection> connections;
  std::vector<Section> sections;
  std::map<long, int> item_heights;            // declared ht(h_i)
  std::map<long, LambdaScalar> item_lengths;   // declared |h_i|

  const BaseRec* base(const std::string& id) const;
  BaseRec* base(const std::string& id);
  const BaseRec* dual_of(const std::string& id) const;
  bool has_connection(long p, const std::string& lambda, long q) const;

  // Empty list means the equation is well-formed.
  std::vector<std::string> validate() const;
  void check() const;  // throws DomainError on the first violation

  // The section containing boundary range [lo, hi], if any single one does.
  const Section* section_of(long lo, long hi) const;
  std::vector<std::string> bases_in(const Section& s) const;
  long gamma(long item) const;  // number of bases covering h_item
  bool item_active(long item) const;
};

// Oriented word of a base: eps=+1 reads h_alpha .. h_{beta-1}; eps=-1 reads
// the inverse of the span, h_{alpha-1}^-1 .. h_beta^-1.
ItemWord base_word(const BaseRec& b);
// Leading part of base_word up to boundary p (p inside [lo, hi]).
ItemWord base_prefix(const BaseRec& b, long p);

std::vector<DerivedEquation> derive(const GenEq& eq);

struct Presentation {
  long generators = 0;  // h_1..h_generators
  std::vector<ItemWord> relators;
};

Presentation presentation(const GenEq& eq);
AbelianInfo presentation_abelianization(const Presentation& p);

struct Solution {
  int rank = 1;
  std::map<long, LambdaWord> items;

  const LambdaWord& at(long i) const;
  LambdaWord word(const SignedItem& s) const;
  // Plain concatenation of the item words; may be unreduced.
  LambdaWord eval(const ItemWord& w) const;
  LambdaScalar length(const ItemWord& w) const;  // sum of item lengths
};

struct VerifyResult {
  bool ok = true;
  std::string violation;
};

VerifyResult verify_solution(const GenEq& eq, const Solution& u);

struct CancellationTable {
  // (i, ei, j, ej): the product u_i^ei * u_j^ej cancels
  std::set<std::tuple<long, int, long, int>> pairs;
  std::vector<std::string> undefined;  // pairs with undefined products
};

CancellationTable cancellation_table(const Solution& u);
bool consistent(const CancellationTable& refined, const CancellationTable& base);

struct Complexity {
  long tau = 0;
  long rho_active = 0;  // items inside active sections
  long n_active = 0;    // bases inside active sections
  std::map<long, long> gamma;
  std::map<std::string, long> section_base_count;  // "lo-hi" -> n(sigma)
};

Complexity complexity(const GenEq& eq);

// Homogeneous linear constraints over item-length variables |h_1|..|h_rho|.
struct LinearSystem {
  long vars = 0;
  std::vector<std::vector<BigInt>> rows;
  std::vector<std::string> labels;  // one per row

  void add_row(std::vector<BigInt> row, std::string label);
  bool satisfied_by(const std::vector<LambdaScalar>& lengths) const;
  // Rewrite variables through a substitution |h_i| = sum_j |h_{m(i,j)}|.
  LinearSystem substituted(long new_vars,
                           const std::map<long, ItemWord>& item_map) const;
  std::string str() const;
};

}  // namespace geqlab

#endif
