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

#include "geqlab/geq.hpp"

#include <algorithm>
#include <sstream>

#include "geqlab/errors.hpp"

namespace geqlab {

ItemWord invert_item_word(const ItemWord& w) {
  ItemWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->item, -it->sign});
  return out;
}

ItemWord free_reduce_item_word(const ItemWord& w) {
  ItemWord out;
  for (const SignedItem& s : w) {
    if (!out.empty() && out.back().item == s.item &&
        out.back().sign == -s.sign)
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

std::string item_word_str(const ItemWord& w) {
  std::ostringstream os;
  bool first = true;
  for (const SignedItem& s : w) {
    if (!first) os << ' ';
    first = false;
    os << 'h' << s.item;
    if (s.sign < 0) os << "^-1";
  }
  return os.str();
}

const BaseRec* GenEq::base(const std::string& id) const {
  for (const BaseRec& b : bases)
    if (b.id == id) return &b;
  return nullptr;
}

BaseRec* GenEq::base(const std::string& id) {
  for (BaseRec& b : bases)
    if (b.id == id) return &b;
  return nullptr;
}

const BaseRec* GenEq::dual_of(const std::string& id) const {
  const BaseRec* b = base(id);
  return b ? base(b->dual) : nullptr;
}

bool GenEq::has_connection(long p, const std::string& lambda, long q) const {
  for (const Connection& c : connections)
    if (c.p == p && c.lambda == lambda && c.q == q) return true;
  return false;
}

std::vector<std::string> GenEq::validate() const {
  std::vector<std::string> out;
  auto bad = [&](const std::string& m) { out.push_back(m); };
  if (rank < 1) bad("rank must be >= 1");
  if (rho < 0) bad("item count must be >= 0");

  std::set<std::string> ids;
  for (const BaseRec& b : bases) {
    if (b.id.empty()) bad("base with empty id");
    if (!ids.insert(b.id).second) bad("duplicate base id " + b.id);
  }
  for (const BaseRec& b : bases) {
    if (b.eps != 1 && b.eps != -1) bad("base " + b.id + ": eps must be +-1");
    if (b.alpha < 1 || b.alpha > rho + 1 || b.beta < 1 || b.beta > rho + 1)
      bad("base " + b.id + ": boundary out of range");
    if (b.alpha == b.beta) bad("base " + b.id + ": empty span");
    if ((b.alpha < b.beta) != (b.eps == 1))
      bad("base " + b.id + ": alpha < beta must hold exactly when eps = +1");
    const BaseRec* d = base(b.dual);
    if (d == nullptr) {
      bad("base " + b.id + ": dual " + b.dual + " missing");
    } else {
      if (d->id == b.id) bad("base " + b.id + ": dual fixed point");
      if (d->dual != b.id) bad("base " + b.id + ": dual is not an involution");
    }
  }

  std::set<std::tuple<long, std::string, long>> cset;
  for (const Connection& c : connections) {
    const BaseRec* b = base(c.lambda);
    if (b == nullptr) {
      bad("connection references missing base " + c.lambda);
      continue;
    }
    if (!(b->lo() < c.p && c.p < b->hi()))
      bad("connection (" + std::to_string(c.p) + "," + c.lambda + "," +
          std::to_string(c.q) + "): p not strictly inside " + c.lambda);
    const BaseRec* d = base(b->dual);
    if (d != nullptr && !(d->lo() < c.q && c.q < d->hi()))
      bad("connection (" + std::to_string(c.p) + "," + c.lambda + "," +
          std::to_string(c.q) + "): q not strictly inside " + b->dual);
    if (!cset.emplace(c.p, c.lambda, c.q).second)
      bad("duplicate connection (" + std::to_string(c.p) + "," + c.lambda +
          "," + std::to_string(c.q) + ")");
  }
  for (const Connection& c : connections) {
    const BaseRec* b = base(c.lambda);
    if (b == nullptr) continue;
    if (cset.count({c.q, b->dual, c.p}) == 0)
      bad("connection (" + std::to_string(c.p) + "," + c.lambda + "," +
          std::to_string(c.q) + "): mirror missing");
  }

  if (rho > 0) {
    if (sections.empty()) {
      bad("sections must cover [1," + std::to_string(rho + 1) + "]");
    } else {
      long at = 1;
      for (const Section& s : sections) {
        if (s.lo != at) bad("sections must be contiguous from boundary 1");
        if (!(s.lo < s.hi)) bad("section with empty span");
        at = s.hi;
      }
      if (at != rho + 1) bad("sections must end at boundary rho+1");
    }
  } else if (!sections.empty()) {
    bad("empty equation cannot carry sections");
  }

  for (const auto& [i, h] : item_heights) {
    if (i < 1 || i > rho) bad("height annotation for unknown item");
    if (h < 0 || h > rank) bad("height annotation out of range");
  }
  for (const auto& [i, l] : item_lengths) {
    if (i < 1 || i > rho) bad("length annotation for unknown item");
    if (l.rank() != rank) bad("length annotation rank mismatch");
    if (!l.positive()) bad("length annotation must be positive");
    auto hit = item_heights.find(i);
    if (hit != item_heights.end() && hit->second != l.height())
      bad("length and height annotations disagree for item " +
          std::to_string(i));
  }
  return out;
}

void GenEq::check() const {
  auto v = validate();
  if (!v.empty()) throw DomainError("invalid generalized equation: " + v[0]);
}

const Section* GenEq::section_of(long lo, long hi) const {
  for (const Section& s : sections)
    if (s.lo <= lo && hi <= s.hi) return &s;
  return nullptr;
}

std::vector<std::string> GenEq::bases_in(const Section& s) const {
  std::vector<std::string> out;
  for (const BaseRec& b : bases)
    if (s.lo <= b.lo() && b.hi() <= s.hi) out.push_back(b.id);
  return out;
}

long GenEq::gamma(long item) const {
  long g = 0;
  for (const BaseRec& b : bases)
    if (b.covers_item(item)) ++g;
  return g;
}

bool GenEq::item_active(long item) const {
  for (const Section& s : sections)
    if (s.lo <= item && item < s.hi) return s.active;
  return false;
}

ItemWord base_word(const BaseRec& b) {
  ItemWord out;
  if (b.eps == 1) {
    for (long i = b.alpha; i < b.beta; ++i) out.push_back({i, 1});
  } else {
    for (long i = b.alpha - 1; i >= b.beta; --i) out.push_back({i, -1});
  }
  return out;
}

ItemWord base_prefix(const BaseRec& b, long p) {
  if (p < b.lo() || p > b.hi())
    throw DomainError("base_prefix: boundary outside base " + b.id);
  ItemWord out;
  if (b.eps == 1) {
    for (long i = b.alpha; i < p; ++i) out.push_back({i, 1});
  } else {
    for (long i = b.alpha - 1; i >= p; --i) out.push_back({i, -1});
  }
  return out;
}

std::vector<DerivedEquation> derive(const GenEq& eq) {
  eq.check();
  std::vector<DerivedEquation> out;
  std::set<std::string> done;
  for (const BaseRec& b : eq.bases) {
    if (done.count(b.id)) continue;
    done.insert(b.id);
    done.insert(b.dual);
    const BaseRec* d = eq.base(b.dual);
    DerivedEquation de;
    de.kind = DerivedEquation::Basic;
    de.label = "basic " + b.id + "/" + b.dual;
    de.left = base_word(b);
    de.right = base_word(*d);
    out.push_back(std::move(de));
  }
  std::set<std::tuple<long, std::string, long>> cdone;
  for (const Connection& c : eq.connections) {
    if (cdone.count({c.p, c.lambda, c.q})) continue;
    const BaseRec* b = eq.base(c.lambda);
    cdone.emplace(c.p, c.lambda, c.q);
    cdone.emplace(c.q, b->dual, c.p);
    DerivedEquation de;
    de.kind = DerivedEquation::Boundary;
    de.label = "boundary (" + std::to_string(c.p) + "," + c.lambda + "," +
               std::to_string(c.q) + ")";
    de.left = base_prefix(*b, c.p);
    de.right = base_prefix(*eq.base(b->dual), c.q);
    out.push_back(std::move(de));
  }
  return out;
}

Presentation presentation(const GenEq& eq) {
  Presentation p;
  p.generators = eq.rho;
  for (const DerivedEquation& de : derive(eq)) {
    ItemWord rel = de.left;
    ItemWord ri = invert_item_word(de.right);
    rel.insert(rel.end(), ri.begin(), ri.end());
    p.relators.push_back(std::move(rel));
  }
  return p;
}

AbelianInfo presentation_abelianization(const Presentation& p) {
  IntMatrix rows;
  for (const ItemWord& rel : p.relators) {
    std::vector<BigInt> row(static_cast<size_t>(p.generators), 0);
    for (const SignedItem& s : rel)
      row[static_cast<size_t>(s.item - 1)] += s.sign;
    rows.push_back(std::move(row));
  }
  return abelian_quotient(rows, static_cast<size_t>(p.generators));
}

const LambdaWord& Solution::at(long i) const {
  auto it = items.find(i);
  if (it == items.end())
    throw DomainError("solution does not assign item h" + std::to_string(i));
  return it->second;
}

LambdaWord Solution::word(const SignedItem& s) const {
  const LambdaWord& w = at(s.item);
  return s.sign > 0 ? w : w.inverse();
}

LambdaWord Solution::eval(const ItemWord& w) const {
  WordBuilder b(rank);
  for (const SignedItem& s : w) b.push_word(word(s));
  return b.take();
}

LambdaScalar Solution::length(const ItemWord& w) const {
  LambdaScalar out(rank);
  for (const SignedItem& s : w) out += at(s.item).length();
  return out;
}

VerifyResult verify_solution(const GenEq& eq, const Solution& u) {
  eq.check();
  VerifyResult r;
  auto fail = [&](const std::string& m) {
    r.ok = false;
    r.violation = m;
    return r;
  };
  if (u.rank != eq.rank) return fail("solution rank differs from equation");
  for (long i = 1; i <= eq.rho; ++i) {
    auto it = u.items.find(i);
    if (it == u.items.end())
      return fail("item h" + std::to_string(i) + " unassigned");
    if (it->second.is_empty())
      return fail("item h" + std::to_string(i) + " assigned the empty word");
    if (!it->second.reduced())
      return fail("item h" + std::to_string(i) + " assigned an unreduced word");
  }
  for (const auto& [i, w] : u.items)
    if (i < 1 || i > eq.rho)
      return fail("solution assigns unknown item h" + std::to_string(i));
  for (const DerivedEquation& de : derive(eq)) {
    LambdaWord L = u.eval(de.left);
    LambdaWord R = u.eval(de.right);
    if (!L.reduced())
      return fail(de.label + ": left side evaluates to an unreduced word");
    if (!R.reduced())
      return fail(de.label + ": right side evaluates to an unreduced word");
    if (!(L == R)) return fail(de.label + ": sides differ");
  }
  return r;
}

CancellationTable cancellation_table(const Solution& u) {
  CancellationTable t;
  for (const auto& [i, ui] : u.items) {
    for (const auto& [j, uj] : u.items) {
      for (int ei : {1, -1}) {
        for (int ej : {1, -1}) {
          LambdaWord a = (ei > 0) ? ui : ui.inverse();
          LambdaWord b = (ej > 0) ? uj : uj.inverse();
          auto cm = LambdaWord::com(a.inverse(), b);
          if (!cm) {
            std::ostringstream os;
            os << 'h' << i << '^' << ei << " * h" << j << '^' << ej;
            t.undefined.push_back(os.str());
            continue;
          }
          if (!cm->c.is_empty()) t.pairs.emplace(i, ei, j, ej);
        }
      }
    }
  }
  return t;
}

bool consistent(const CancellationTable& refined,
                const CancellationTable& base) {
  return std::includes(base.pairs.begin(), base.pairs.end(),
                       refined.pairs.begin(), refined.pairs.end());
}

Complexity complexity(const GenEq& eq) {
  eq.check();
  Complexity c;
  for (long i = 1; i <= eq.rho; ++i) {
    c.gamma[i] = eq.gamma(i);
    if (eq.item_active(i)) ++c.rho_active;
  }
  for (const Section& s : eq.sections) {
    long n = static_cast<long>(eq.bases_in(s).size());
    std::string key = std::to_string(s.lo) + "-" + std::to_string(s.hi);
    c.section_base_count[key] = n;
    if (s.active) {
      c.n_active += n;
      c.tau += std::max(0L, n - 2);
    }
  }
  return c;
}

void LinearSystem::add_row(std::vector<BigInt> row, std::string label) {
  if (static_cast<long>(row.size()) != vars)
    throw DomainError("linear system row width mismatch");
  rows.push_back(std::move(row));
  labels.push_back(std::move(label));
}

bool LinearSystem::satisfied_by(const std::vector<LambdaScalar>& lengths) const {
  if (static_cast<long>(lengths.size()) != vars)
    throw DomainError("length vector width mismatch");
  for (const auto& row : rows) {
    if (lengths.empty()) continue;
    LambdaScalar acc(lengths[0].rank());
    for (long i = 0; i < vars; ++i)
      acc += lengths[static_cast<size_t>(i)] * row[static_cast<size_t>(i)];
    if (!acc.is_zero()) return false;
  }
  return true;
}

LinearSystem LinearSystem::substituted(
    long new_vars, const std::map<long, ItemWord>& item_map) const {
  LinearSystem out;
  out.vars = new_vars;
  for (size_t r = 0; r < rows.size(); ++r) {
    std::vector<BigInt> row(static_cast<size_t>(new_vars), 0);
    for (long i = 0; i < vars; ++i) {
      const BigInt& coef = rows[r][static_cast<size_t>(i)];
      if (coef == 0) continue;
      auto it = item_map.find(i + 1);
      if (it == item_map.end())
        throw DomainError("substitution misses item h" + std::to_string(i + 1));
      for (const SignedItem& s : it->second) {
        if (s.item < 1 || s.item > new_vars)
          throw DomainError("substitution target out of range");
        row[static_cast<size_t>(s.item - 1)] += coef;  // lengths ignore sign
      }
    }
    out.add_row(std::move(row), labels[r]);
  }
  return out;
}

std::string LinearSystem::str() const {
  std::ostringstream os;
  for (size_t r = 0; r < rows.size(); ++r) {
    bool first = true;
    for (long i = 0; i < vars; ++i) {
      const BigInt& c = rows[r][static_cast<size_t>(i)];
      if (c == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (c != 1) os << c << "*";
      os << "|h" << (i + 1) << "|";
    }
    if (first) os << "0";
    os << " = 0";
    if (!labels[r].empty()) os << "   # " << labels[r];
    os << "\n";
  }
  return os.str();
}

}  // namespace geqlab
