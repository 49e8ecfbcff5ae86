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

#include "geqlab/transform.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "geqlab/errors.hpp"

namespace geqlab {

// ---------------------------------------------------------------------------
// Morphism
// ---------------------------------------------------------------------------

Morphism Morphism::identity(long n) {
  Morphism m;
  m.kind = Isomorphism;
  m.source_items = n;
  m.target_items = n;
  for (long i = 1; i <= n; ++i) m.item_map[i] = {{i, 1}};
  return m;
}

ItemWord Morphism::apply(const ItemWord& w) const {
  ItemWord out;
  for (const SignedItem& s : w) {
    auto it = item_map.find(s.item);
    if (it == item_map.end())
      throw Error("morphism has no image for item " + std::to_string(s.item));
    if (s.sign > 0) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    } else {
      ItemWord inv = invert_item_word(it->second);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return free_reduce_item_word(out);
}

Morphism Morphism::compose(const Morphism& first, const Morphism& second) {
  if (first.target_items != second.source_items)
    throw Error("morphism composition: item counts disagree");
  Morphism m;
  m.kind = (first.kind == Isomorphism && second.kind == Isomorphism)
               ? Isomorphism
               : Epimorphism;
  m.source_items = first.source_items;
  m.target_items = second.target_items;
  for (const auto& [i, w] : first.item_map) m.item_map[i] = second.apply(w);
  return m;
}

std::string Morphism::str() const {
  std::ostringstream os;
  for (const auto& [i, w] : item_map) {
    ItemWord id = {{i, 1}};
    if (w == id) continue;
    os << "h" << i << " -> " << (w.empty() ? "1" : item_word_str(w)) << "\n";
  }
  std::string s = os.str();
  return s.empty() ? "(identity)\n" : s;
}

LengthMap lengths_of(const Solution& u) {
  LengthMap m;
  for (const auto& [i, w] : u.items) m[i] = w.length();
  return m;
}

LengthMap lengths_of(const GenEq& eq) { return eq.item_lengths; }

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace {

const BaseRec& need_base(const GenEq& eq, const std::string& id) {
  const BaseRec* b = eq.base(id);
  if (b == nullptr) throw NotApplicable("no base " + id);
  return *b;
}

// Position of boundary r along the word of base b (0 .. len).
long word_pos(const BaseRec& b, long r) {
  return b.eps > 0 ? r - b.alpha : b.alpha - r;
}

long boundary_at(const BaseRec& b, long k) {
  return b.eps > 0 ? b.alpha + k : b.alpha - k;
}

// Image of boundary r of lambda on the dual, via endpoints or a connection.
std::optional<long> tie_image(const GenEq& eq, const BaseRec& lam, long r) {
  const BaseRec& dual = *eq.base(lam.dual);
  if (r == lam.alpha) return dual.alpha;
  if (r == lam.beta) return dual.beta;
  for (const Connection& c : eq.connections)
    if (c.lambda == lam.id && c.p == r) return c.q;
  return std::nullopt;
}

// Apply a boundary renumbering f to every structural field. Sections that
// collapse to an empty span are dropped. Item annotations are remapped with
// `item_f` (return -1 to drop an item).
void remap_structure(GenEq& eq, const std::function<long(long)>& f,
                     const std::function<long(long)>& item_f) {
  for (BaseRec& b : eq.bases) {
    b.alpha = f(b.alpha);
    b.beta = f(b.beta);
  }
  for (Connection& c : eq.connections) {
    c.p = f(c.p);
    c.q = f(c.q);
  }
  std::vector<Section> secs;
  for (const Section& s : eq.sections) {
    Section ns{f(s.lo), f(s.hi), s.active};
    if (ns.lo < ns.hi) secs.push_back(ns);
  }
  eq.sections = std::move(secs);
  std::map<long, int> hh;
  for (const auto& [i, h] : eq.item_heights) {
    long ni = item_f(i);
    if (ni > 0) hh[ni] = h;
  }
  eq.item_heights = std::move(hh);
  std::map<long, LambdaScalar> ll;
  for (const auto& [i, l] : eq.item_lengths) {
    long ni = item_f(i);
    if (ni > 0) ll[ni] = l;
  }
  eq.item_lengths = std::move(ll);
}

Solution remap_solution(const Solution& u, long rho_old,
                        const std::function<long(long)>& item_f) {
  Solution out;
  out.rank = u.rank;
  for (long i = 1; i <= rho_old; ++i) {
    auto it = u.items.find(i);
    if (it == u.items.end()) continue;
    long ni = item_f(i);
    if (ni > 0) out.items[ni] = it->second;
  }
  return out;
}

TransformResult finish(GenEq target, Morphism m, std::string note,
                       std::optional<Solution> pushed) {
  target.check();
  TransformResult r;
  r.target = std::move(target);
  r.morphism = std::move(m);
  r.note = std::move(note);
  r.pushed = std::move(pushed);
  return r;
}

// Sum of oracle lengths over an item word (signs ignored: all occur +1 here).
LambdaScalar oracle_length(const GenEq& eq, const LengthMap& lens,
                           const ItemWord& w) {
  LambdaScalar total(eq.rank);
  for (const SignedItem& s : w) {
    auto it = lens.find(s.item);
    if (it == lens.end())
      throw DomainError("no length available for item h" +
                        std::to_string(s.item));
    if (!it->second.positive())
      throw DomainError("non-positive length for item h" +
                        std::to_string(s.item));
    total += it->second;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// ET1 -- cutting a base at a tied boundary
// ---------------------------------------------------------------------------

TransformResult et1_cut(const GenEq& eq, const std::string& lambda, long p,
                        const Solution* u) {
  const BaseRec lam = need_base(eq, lambda);
  const BaseRec dual = need_base(eq, lam.dual);
  long lp = word_pos(lam, p);
  if (lp <= 0 || lp >= lam.len())
    throw NotApplicable("ET1: boundary " + std::to_string(p) +
                        " is not internal to " + lambda);
  std::optional<long> qo;
  for (const Connection& c : eq.connections)
    if (c.lambda == lam.id && c.p == p) qo = c.q;
  if (!qo)
    throw NotApplicable("ET1: boundary " + std::to_string(p) +
                        " is not tied through " + lambda);
  long q = *qo;
  long qp = word_pos(dual, q);

  GenEq out = eq;
  out.bases.clear();
  auto make = [](const BaseRec& src, const std::string& id, long a, long b,
                 const std::string& dualid) {
    BaseRec n;
    n.id = id;
    n.eps = src.eps;
    n.alpha = a;
    n.beta = b;
    n.dual = dualid;
    return n;
  };
  for (const BaseRec& b : eq.bases) {
    if (b.id == lam.id) {
      out.bases.push_back(
          make(lam, lam.id + ".1", lam.alpha, p, dual.id + ".1"));
      out.bases.push_back(make(lam, lam.id + ".2", p, lam.beta, dual.id + ".2"));
    } else if (b.id == dual.id) {
      out.bases.push_back(
          make(dual, dual.id + ".1", dual.alpha, q, lam.id + ".1"));
      out.bases.push_back(
          make(dual, dual.id + ".2", q, dual.beta, lam.id + ".2"));
    } else {
      out.bases.push_back(b);
    }
  }
  out.connections.clear();
  for (const Connection& c : eq.connections) {
    if (c.lambda == lam.id) {
      if (c.p == p) continue;  // consumed by the cut
      bool first = word_pos(lam, c.p) < lp;
      bool dual_first = word_pos(dual, c.q) < qp;
      if (first != dual_first)
        throw DomainError("ET1: crossed boundary connection at (" +
                          std::to_string(c.p) + "," + c.lambda + "," +
                          std::to_string(c.q) + ")");
      out.connections.push_back({c.p, lam.id + (first ? ".1" : ".2"), c.q});
    } else if (c.lambda == dual.id) {
      if (c.p == q && c.q == p) continue;  // mirror of the consumed tie
      bool first = word_pos(dual, c.p) < qp;
      bool lam_first = word_pos(lam, c.q) < lp;
      if (first != lam_first)
        throw DomainError("ET1: crossed boundary connection at (" +
                          std::to_string(c.p) + "," + c.lambda + "," +
                          std::to_string(c.q) + ")");
      out.connections.push_back({c.p, dual.id + (first ? ".1" : ".2"), c.q});
    } else {
      out.connections.push_back(c);
    }
  }
  return finish(std::move(out), Morphism::identity(eq.rho),
                "ET1 cut " + lambda + " at " + std::to_string(p) + " (dual at " +
                    std::to_string(q) + ")",
                u ? std::optional<Solution>(*u) : std::nullopt);
}

// ---------------------------------------------------------------------------
// ET2 -- transferring a carried base onto the dual
// ---------------------------------------------------------------------------

TransformResult et2_transfer(const GenEq& eq, const std::string& lambda,
                             const std::string& mu, const Solution* u) {
  const BaseRec lam = need_base(eq, lambda);
  const BaseRec dual = need_base(eq, lam.dual);
  const BaseRec m = need_base(eq, mu);
  if (!(lam.lo() <= m.lo() && m.hi() <= lam.hi()))
    throw NotApplicable("ET2: " + mu + " is not inside " + lambda);

  std::map<long, long> img;
  for (long b = m.lo(); b <= m.hi(); ++b) {
    auto io = tie_image(eq, lam, b);
    if (!io)
      throw NotApplicable("ET2: boundary " + std::to_string(b) +
                          " is not tied through " + lambda);
    img[b] = *io;
  }
  BaseRec moved = m;
  moved.alpha = img[m.alpha];
  moved.beta = img[m.beta];
  moved.eps = m.eps * lam.eps * dual.eps;
  if (moved.alpha == moved.beta)
    throw DomainError("ET2: degenerate image of " + mu);
  if ((moved.alpha < moved.beta) != (moved.eps == 1))
    throw DomainError("ET2: ties are not monotone along " + lambda);

  GenEq out = eq;
  for (BaseRec& b : out.bases)
    if (b.id == m.id) b = moved;
  for (Connection& c : out.connections) {
    if (c.lambda == m.id) c.p = img.at(c.p);
    if (c.lambda == m.dual) c.q = img.at(c.q);
  }
  return finish(std::move(out), Morphism::identity(eq.rho),
                "ET2 transfer " + mu + " onto " + lam.dual,
                u ? std::optional<Solution>(*u) : std::nullopt);
}

// ---------------------------------------------------------------------------
// ET3 -- removal of a matched pair
// ---------------------------------------------------------------------------

TransformResult et3_remove_matched(const GenEq& eq, const std::string& lambda,
                                   const Solution* u) {
  const BaseRec lam = need_base(eq, lambda);
  const BaseRec dual = need_base(eq, lam.dual);
  if (!(lam.alpha == dual.alpha && lam.beta == dual.beta))
    throw NotApplicable("ET3: " + lambda + " and " + lam.dual +
                        " are not matched");
  GenEq out = eq;
  std::erase_if(out.bases, [&](const BaseRec& b) {
    return b.id == lam.id || b.id == dual.id;
  });
  std::erase_if(out.connections, [&](const Connection& c) {
    return c.lambda == lam.id || c.lambda == dual.id;
  });
  return finish(std::move(out), Morphism::identity(eq.rho),
                "ET3 remove matched pair " + lambda + "/" + lam.dual,
                u ? std::optional<Solution>(*u) : std::nullopt);
}

// ---------------------------------------------------------------------------
// ET4 -- removal of a lone base together with its span
// ---------------------------------------------------------------------------

TransformResult et4_remove_lone(const GenEq& eq, const std::string& lambda,
                                const Solution* u) {
  const BaseRec lam = need_base(eq, lambda);
  const BaseRec dual = need_base(eq, lam.dual);
  long lo = lam.lo(), hi = lam.hi();
  for (const BaseRec& b : eq.bases) {
    if (b.id == lam.id) continue;
    for (long i = lo; i < hi; ++i)
      if (b.covers_item(i))
        throw NotApplicable("ET4: " + lambda + " intersects " + b.id);
  }
  // Tie images, extended to the endpoints.
  std::map<long, long> b_of;
  for (long r = lo; r <= hi; ++r) {
    auto io = tie_image(eq, lam, r);
    if (!io)
      throw NotApplicable("ET4: boundary " + std::to_string(r) +
                          " is not tied through " + lambda);
    b_of[r] = *io;
  }
  // Fragments of the dual word between consecutive tie images.
  ItemWord dual_word = base_word(dual);
  long len = lam.len();
  std::vector<long> qpos(static_cast<size_t>(len) + 1);
  for (long k = 0; k <= len; ++k) {
    long r = boundary_at(lam, k);
    qpos[static_cast<size_t>(k)] = word_pos(dual, b_of.at(r));
  }
  for (long k = 0; k < len; ++k) {
    if (!(qpos[static_cast<size_t>(k)] < qpos[static_cast<size_t>(k + 1)]))
      throw DomainError("ET4: ties along " + lambda +
                        " are not strictly monotone on the dual");
  }
  std::map<long, ItemWord> fragment;  // old item -> old-numbering word
  for (long k = 0; k < len; ++k) {
    ItemWord f(dual_word.begin() + qpos[static_cast<size_t>(k)],
               dual_word.begin() + qpos[static_cast<size_t>(k + 1)]);
    long item = lam.eps > 0 ? lo + k : hi - 1 - k;
    fragment[item] = lam.eps > 0 ? f : invert_item_word(f);
  }

  long m = hi - lo;
  auto fb = [&](long r) { return r <= lo ? r : r - m; };  // boundaries
  auto fi = [&](long i) {                                  // items
    if (i >= lo && i < hi) return -1L;
    return i < lo ? i : i - m;
  };
  GenEq out = eq;
  std::erase_if(out.bases, [&](const BaseRec& b) {
    return b.id == lam.id || b.id == dual.id;
  });
  std::erase_if(out.connections, [&](const Connection& c) {
    return c.lambda == lam.id || c.lambda == dual.id;
  });
  remap_structure(out, fb, fi);
  out.rho = eq.rho - m;

  Morphism mo;
  mo.kind = Morphism::Isomorphism;
  mo.source_items = eq.rho;
  mo.target_items = out.rho;
  for (long i = 1; i <= eq.rho; ++i) {
    if (fi(i) > 0) {
      mo.item_map[i] = {{fi(i), 1}};
    } else {
      ItemWord w;
      for (const SignedItem& s : fragment.at(i)) w.push_back({fi(s.item), s.sign});
      mo.item_map[i] = w;
    }
  }
  std::optional<Solution> pushed;
  if (u) pushed = remap_solution(*u, eq.rho, fi);
  return finish(std::move(out), std::move(mo),
                "ET4 remove lone " + lambda + " with span [" +
                    std::to_string(lo) + "," + std::to_string(hi) + "]",
                std::move(pushed));
}

// ---------------------------------------------------------------------------
// ET5 -- introduction of a boundary
// ---------------------------------------------------------------------------

TransformResult et5_introduce_boundary(const GenEq& eq,
                                       const std::string& lambda, long p,
                                       const LengthMap& lens,
                                       const Solution* u) {
  const BaseRec lam = need_base(eq, lambda);
  const BaseRec dual = need_base(eq, lam.dual);
  long lp = word_pos(lam, p);
  if (lp <= 0 || lp >= lam.len())
    throw NotApplicable("ET5: boundary " + std::to_string(p) +
                        " is not internal to " + lambda);
  for (const Connection& c : eq.connections)
    if (c.lambda == lam.id && c.p == p)
      throw NotApplicable("ET5: boundary " + std::to_string(p) +
                          " is already tied through " + lambda);

  LambdaScalar want = oracle_length(eq, lens, base_prefix(lam, p));
  LambdaScalar cum(eq.rank);
  long dlen = dual.len();
  for (long k = 0; k <= dlen; ++k) {
    if (cum == want) {
      long q = boundary_at(dual, k);
      if (!(dual.lo() < q && q < dual.hi()))
        throw DomainError("ET5: image of boundary " + std::to_string(p) +
                          " falls on an endpoint of " + dual.id);
      GenEq out = eq;
      out.connections.push_back({p, lam.id, q});
      out.connections.push_back({q, dual.id, p});
      return finish(std::move(out), Morphism::identity(eq.rho),
                    "ET5(a) tie (" + std::to_string(p) + "," + lambda + "," +
                        std::to_string(q) + ")",
                    u ? std::optional<Solution>(*u) : std::nullopt);
    }
    if (k == dlen) break;
    long item = dual.eps > 0 ? dual.alpha + k : dual.alpha - k - 1;
    auto it = lens.find(item);
    if (it == lens.end())
      throw DomainError("ET5: no length available for item h" +
                        std::to_string(item));
    LambdaScalar nxt = cum + it->second;
    if (cum < want && want < nxt) {
      // Case (b): the image falls strictly inside h_item. Split it.
      LambdaScalar from_left =
          dual.eps > 0 ? want - cum : it->second - (want - cum);
      if (!from_left.positive() || !(it->second - from_left).positive())
        throw DomainError("ET5: degenerate split of item h" +
                          std::to_string(item));
      long t = item;
      auto fb = [&](long r) { return r <= t ? r : r + 1; };
      auto fi = [&](long i) { return i <= t ? i : i + 1; };
      GenEq out = eq;
      remap_structure(out, fb, fi);
      out.rho = eq.rho + 1;
      if (eq.item_lengths.count(t)) {
        out.item_lengths[t] = from_left;
        out.item_lengths[t + 1] = eq.item_lengths.at(t) - from_left;
      }
      if (eq.item_heights.count(t)) {
        out.item_heights[t] = from_left.height();
        out.item_heights[t + 1] = (it->second - from_left).height();
      }
      long q = t + 1;
      long pp = fb(p);
      out.connections.push_back({pp, lam.id, q});
      out.connections.push_back({q, eq.base(lambda)->dual, pp});

      Morphism mo;
      mo.kind = Morphism::Isomorphism;
      mo.source_items = eq.rho;
      mo.target_items = out.rho;
      for (long i = 1; i <= eq.rho; ++i) {
        if (i == t)
          mo.item_map[i] = {{t, 1}, {t + 1, 1}};
        else
          mo.item_map[i] = {{fi(i), 1}};
      }
      std::optional<Solution> pushed;
      if (u) {
        LambdaWord val = u->at(t);
        LambdaScalar one = LambdaScalar::unit(eq.rank);
        auto left = val.subword(one, from_left + one);
        auto right = val.subword(from_left + one, val.length() + one);
        if (!left || !right)
          throw DomainError("ET5: solution value of h" + std::to_string(t) +
                            " cannot be split at the image boundary");
        Solution np = remap_solution(*u, eq.rho, fi);
        np.items[t] = *left;
        np.items[t + 1] = *right;
        pushed = np;
      }
      return finish(std::move(out), std::move(mo),
                    "ET5(b) split h" + std::to_string(t) + ", tie (" +
                        std::to_string(pp) + "," + lambda + "," +
                        std::to_string(q) + ")",
                    std::move(pushed));
    }
    cum = nxt;
  }
  throw DomainError("ET5: image of boundary " + std::to_string(p) + " on " +
                    dual.id + " is beyond the dual span");
}

// ---------------------------------------------------------------------------
// Composite-step runner
// ---------------------------------------------------------------------------

namespace {

struct Chain {
  GenEq cur;
  Morphism m;
  std::optional<Solution> u;

  Chain(const GenEq& eq, const Solution* us)
      : cur(eq), m(Morphism::identity(eq.rho)) {
    if (us) u = *us;
  }
  void step(TransformResult&& r) {
    m = Morphism::compose(m, r.morphism);
    u = std::move(r.pushed);
    cur = std::move(r.target);
  }
  const Solution* sol() const { return u ? &*u : nullptr; }
  LengthMap lengths(const LengthMap& given) const {
    if (u) return lengths_of(*u);
    if (!cur.item_lengths.empty()) return lengths_of(cur);
    return given;
  }
  TransformResult take(std::string note) {
    TransformResult r;
    r.target = std::move(cur);
    r.morphism = std::move(m);
    r.note = std::move(note);
    r.pushed = std::move(u);
    return r;
  }
};

LambdaScalar cumlen_to(const GenEq& eq, const LengthMap& lens, long b) {
  LambdaScalar total(eq.rank);
  for (long i = 1; i < b; ++i) {
    auto it = lens.find(i);
    if (it == lens.end())
      throw DomainError("no length available for item h" + std::to_string(i));
    total += it->second;
  }
  return total;
}

long boundary_with_cumlen(const GenEq& eq, const LengthMap& lens,
                          const LambdaScalar& want) {
  LambdaScalar total(eq.rank);
  for (long b = 1; b <= eq.rho + 1; ++b) {
    if (total == want) return b;
    if (b <= eq.rho) {
      auto it = lens.find(b);
      if (it == lens.end())
        throw DomainError("no length available for item h" + std::to_string(b));
      total += it->second;
    }
  }
  throw DomainError("no boundary at the requested cumulative length");
}

bool boundary_open(const GenEq& eq, long b) {
  for (const BaseRec& base : eq.bases)
    if (base.lo() < b && b < base.hi()) return true;
  return false;
}

// Split the section partition at boundary x (no-op if already a section end).
void split_sections_at(GenEq& eq, long x) {
  std::vector<Section> out;
  for (const Section& s : eq.sections) {
    if (s.lo < x && x < s.hi) {
      out.push_back({s.lo, x, s.active});
      out.push_back({x, s.hi, s.active});
    } else {
      out.push_back(s);
    }
  }
  eq.sections = std::move(out);
}

// Tie boundary-by-cumulative-length through every base it is internal to,
// then cut those bases there. Leaves the boundary closed.
void close_boundary(Chain& ch, const LambdaScalar& at_len,
                    const LengthMap& given) {
  for (;;) {
    LengthMap lens = ch.lengths(given);
    long x = boundary_with_cumlen(ch.cur, lens, at_len);
    const BaseRec* hit = nullptr;
    for (const BaseRec& b : ch.cur.bases)
      if (b.lo() < x && x < b.hi() && (hit == nullptr || b.id < hit->id))
        hit = &b;
    if (hit == nullptr) return;
    std::string id = hit->id;
    bool tied = false;
    for (const Connection& c : ch.cur.connections)
      if (c.lambda == id && c.p == x) tied = true;
    if (!tied) {
      ch.step(et5_introduce_boundary(ch.cur, id, x, lens, ch.sol()));
      lens = ch.lengths(given);
      x = boundary_with_cumlen(ch.cur, lens, at_len);
    }
    ch.step(et1_cut(ch.cur, id, x, ch.sol()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// D1 -- closing a section
// ---------------------------------------------------------------------------

TransformResult d1_close(const GenEq& eq, long lo, long hi,
                         const LengthMap& lengths, const Solution* u) {
  if (!(1 <= lo && lo < hi && hi <= eq.rho + 1))
    throw NotApplicable("D1: bad section bounds");
  Chain ch(eq, u);
  LengthMap l0 = ch.lengths(lengths);
  LambdaScalar at_lo = cumlen_to(eq, l0, lo);
  LambdaScalar at_hi = cumlen_to(eq, l0, hi);
  close_boundary(ch, at_lo, lengths);
  close_boundary(ch, at_hi, lengths);
  LengthMap lf = ch.lengths(lengths);
  split_sections_at(ch.cur, boundary_with_cumlen(ch.cur, lf, at_lo));
  split_sections_at(ch.cur, boundary_with_cumlen(ch.cur, lf, at_hi));
  ch.cur.check();
  return ch.take("D1 close [" + std::to_string(lo) + "," + std::to_string(hi) +
                 "]");
}

// ---------------------------------------------------------------------------
// D2 -- transporting a closed section to the end
// ---------------------------------------------------------------------------

TransformResult d2_transport(const GenEq& eq, long lo, long hi,
                             const Solution* u) {
  if (!(1 <= lo && lo < hi && hi <= eq.rho + 1))
    throw NotApplicable("D2: bad section bounds");
  if (boundary_open(eq, lo) || boundary_open(eq, hi))
    throw NotApplicable("D2: section ends are not closed");
  bool seen_lo = false, seen_hi = (hi == eq.rho + 1);
  for (const Section& s : eq.sections) {
    if (s.lo == lo) seen_lo = true;
    if (s.hi == hi) seen_hi = true;
  }
  if (lo == 1) seen_lo = true;
  if (!seen_lo || !seen_hi)
    throw NotApplicable("D2: [" + std::to_string(lo) + "," +
                        std::to_string(hi) + "] is not a union of sections");
  for (const BaseRec& b : eq.bases) {
    bool inside = lo <= b.lo() && b.hi() <= hi;
    bool outside = b.hi() <= lo || hi <= b.lo();
    if (!inside && !outside)
      throw NotApplicable("D2: base " + b.id + " crosses the section");
  }

  long m = hi - lo;
  long shift = eq.rho + 1 - hi;  // how far the block moves right
  auto inside_b = [&](long r) { return r + shift; };
  auto outside_b = [&](long r) { return r < hi ? r : r - m; };
  auto item_f = [&](long i) {
    if (i >= lo && i < hi) return i + shift;
    return i < lo ? i : i - m;
  };

  GenEq out = eq;
  for (BaseRec& b : out.bases) {
    bool inside = lo <= b.lo() && b.hi() <= hi;
    b.alpha = inside ? inside_b(b.alpha) : outside_b(b.alpha);
    b.beta = inside ? inside_b(b.beta) : outside_b(b.beta);
  }
  for (Connection& c : out.connections) {
    const BaseRec* b = eq.base(c.lambda);
    bool p_in = lo <= b->lo() && b->hi() <= hi;
    const BaseRec* d = eq.base(b->dual);
    bool q_in = lo <= d->lo() && d->hi() <= hi;
    c.p = p_in ? inside_b(c.p) : outside_b(c.p);
    c.q = q_in ? inside_b(c.q) : outside_b(c.q);
  }
  std::vector<Section> secs;
  for (const Section& s : eq.sections) {
    bool inside = lo <= s.lo && s.hi <= hi;
    secs.push_back({inside ? inside_b(s.lo) : outside_b(s.lo),
                    inside ? inside_b(s.hi) : outside_b(s.hi), s.active});
  }
  std::sort(secs.begin(), secs.end(),
            [](const Section& a, const Section& b) { return a.lo < b.lo; });
  out.sections = std::move(secs);
  std::map<long, int> hh;
  for (const auto& [i, h] : eq.item_heights) hh[item_f(i)] = h;
  out.item_heights = std::move(hh);
  std::map<long, LambdaScalar> ll;
  for (const auto& [i, l] : eq.item_lengths) ll[item_f(i)] = l;
  out.item_lengths = std::move(ll);

  Morphism mo;
  mo.kind = Morphism::Isomorphism;
  mo.source_items = eq.rho;
  mo.target_items = eq.rho;
  for (long i = 1; i <= eq.rho; ++i) mo.item_map[i] = {{item_f(i), 1}};
  std::optional<Solution> pushed;
  if (u) pushed = remap_solution(*u, eq.rho, item_f);
  return finish(std::move(out), std::move(mo),
                "D2 transport [" + std::to_string(lo) + "," +
                    std::to_string(hi) + "] to the end",
                std::move(pushed));
}

// ---------------------------------------------------------------------------
// D3 -- moving a free variable to the right
// ---------------------------------------------------------------------------

TransformResult d3_move_free(const GenEq& eq, long q, const Solution* u) {
  if (q < 1 || q > eq.rho) throw NotApplicable("D3: no item " + std::to_string(q));
  if (eq.gamma(q) != 0)
    throw NotApplicable("D3: item h" + std::to_string(q) + " is not free");
  if (!eq.item_active(q))
    throw NotApplicable("D3: item h" + std::to_string(q) +
                        " is not in an active section");
  GenEq pre = eq;
  split_sections_at(pre, q);
  split_sections_at(pre, q + 1);
  TransformResult moved = d2_transport(pre, q, q + 1, u);
  for (Section& s : moved.target.sections)
    if (s.lo == moved.target.rho) s.active = false;
  moved.target.check();
  moved.note = "D3 move free h" + std::to_string(q) + " to the end";
  return moved;
}

// ---------------------------------------------------------------------------
// D4 -- deleting a complete base
// ---------------------------------------------------------------------------

TransformResult d4_delete_complete(const GenEq& eq, const std::string& mu,
                                   const LengthMap& lengths, const Solution* u) {
  {
    const BaseRec& m0 = need_base(eq, mu);
    const Section* s = eq.section_of(m0.lo(), m0.hi());
    if (s == nullptr || s->lo != m0.lo() || s->hi != m0.hi())
      throw NotApplicable("D4: " + mu + " is not complete");
    if (boundary_open(eq, s->lo) || boundary_open(eq, s->hi))
      throw NotApplicable("D4: section of " + mu + " is not closed");
    const BaseRec& md = need_base(eq, m0.dual);
    if (m0.lo() <= md.lo() && md.hi() <= m0.hi())
      throw NotApplicable("D4: dual of " + mu + " lies inside its section");
  }
  Chain ch(eq, u);
  for (int guard = 0; guard < 10000; ++guard) {
    const BaseRec m = need_base(ch.cur, mu);
    const BaseRec* pick = nullptr;
    for (const BaseRec& b : ch.cur.bases) {
      if (b.id == m.id) continue;
      if (m.lo() <= b.lo() && b.hi() <= m.hi()) {
        if (pick == nullptr ||
            std::tuple(b.lo(), b.hi(), b.id) <
                std::tuple(pick->lo(), pick->hi(), pick->id))
          pick = &b;
      }
    }
    if (pick == nullptr) break;
    std::string nid = pick->id;
    // Tie every boundary of the carried base's span through mu, then move it.
    for (;;) {
      const BaseRec mm = need_base(ch.cur, mu);
      const BaseRec nn = need_base(ch.cur, nid);
      long untied = -1;
      for (long b = nn.lo(); b <= nn.hi(); ++b) {
        if (!(mm.lo() < b && b < mm.hi())) continue;
        if (!tie_image(ch.cur, mm, b)) {
          untied = b;
          break;
        }
      }
      if (untied < 0) break;
      ch.step(et5_introduce_boundary(ch.cur, mu, untied, ch.lengths(lengths),
                                     ch.sol()));
    }
    ch.step(et2_transfer(ch.cur, mu, nid, ch.sol()));
  }
  // Tie any remaining internal boundaries of mu, then remove it.
  for (;;) {
    const BaseRec mm = need_base(ch.cur, mu);
    long untied = -1;
    for (long b = mm.lo() + 1; b < mm.hi(); ++b)
      if (!tie_image(ch.cur, mm, b)) {
        untied = b;
        break;
      }
    if (untied < 0) break;
    ch.step(et5_introduce_boundary(ch.cur, mu, untied, ch.lengths(lengths),
                                   ch.sol()));
  }
  ch.step(et4_remove_lone(ch.cur, mu, ch.sol()));
  return ch.take("D4 delete complete base " + mu);
}

// ---------------------------------------------------------------------------
// D5 -- kernel
// ---------------------------------------------------------------------------

namespace {

bool endpoint_touches(const BaseRec& b, long i) {
  return b.alpha == i || b.beta == i;
}

// Eliminability in an equation without boundary connections.
std::optional<char> eliminable_case(const GenEq& eq, const BaseRec& m) {
  if (!eq.item_active(m.lo())) return std::nullopt;
  for (long i = m.lo(); i < m.hi(); ++i)
    if (eq.gamma(i) == 1) return 'a';
  for (long i : {m.alpha, m.beta}) {
    if (i == 1 || i == eq.rho + 1) continue;
    bool touched = false;
    for (const BaseRec& b : eq.bases)
      if (b.id != m.id && endpoint_touches(b, i)) touched = true;
    if (!touched) return 'b';
  }
  return std::nullopt;
}

}  // namespace

KernelResult d5_kernel(
    const GenEq& eq,
    const std::function<size_t(const std::vector<std::string>&)>& choose) {
  KernelResult kr;
  GenEq work = eq;
  while (!work.connections.empty()) {
    Connection c = work.connections.front();
    work = et1_cut(work, c.lambda, c.p).target;
  }
  kr.cut = work;
  long eliminations = 0;
  for (;;) {
    std::vector<std::string> ids;
    std::vector<char> cases;
    for (const BaseRec& b : work.bases) {
      auto c = eliminable_case(work, b);
      if (c) {
        ids.push_back(b.id);
        cases.push_back(*c);
      }
    }
    if (ids.empty()) break;
    size_t at = choose(ids);
    if (at >= ids.size())
      throw DomainError("kernel order chooser returned an invalid index");
    kr.trace.push_back(ids[at] + ":" + cases[at]);
    std::string id = ids[at];
    std::string dual = work.base(id)->dual;
    std::erase_if(work.bases, [&](const BaseRec& b) {
      return b.id == id || b.id == dual;
    });
    ++eliminations;
  }
  kr.kernel = work;
  std::set<long> covered;
  for (const BaseRec& b : work.bases)
    for (long i = b.lo(); i < b.hi(); ++i) covered.insert(i);
  kr.free_rank = work.rho - eliminations - static_cast<long>(covered.size());
  return kr;
}

KernelResult d5_kernel(const GenEq& eq) {
  return d5_kernel(eq, [](const std::vector<std::string>& ids) {
    size_t best = 0;
    for (size_t i = 1; i < ids.size(); ++i)
      if (ids[i] < ids[best]) best = i;
    return best;
  });
}

// ---------------------------------------------------------------------------
// D6 -- linear elimination step
// ---------------------------------------------------------------------------

namespace {

bool height_comparable(const GenEq& eq, long item) {
  if (eq.item_heights.empty()) return true;
  const Section* sec = nullptr;
  for (const Section& s : eq.sections)
    if (s.lo <= item && item < s.hi) sec = &s;
  if (sec == nullptr) return false;
  int maxh = 0;
  for (long i = sec->lo; i < sec->hi; ++i) {
    auto it = eq.item_heights.find(i);
    if (it != eq.item_heights.end()) maxh = std::max(maxh, it->second);
  }
  auto it = eq.item_heights.find(item);
  return it != eq.item_heights.end() && it->second == maxh;
}

std::vector<long> linear_items(const GenEq& eq) {
  std::vector<long> out;
  for (long i = 1; i <= eq.rho; ++i)
    if (eq.item_active(i) && eq.gamma(i) == 1 && height_comparable(eq, i))
      out.push_back(i);
  return out;
}

const BaseRec& covering_base(const GenEq& eq, long item) {
  for (const BaseRec& b : eq.bases)
    if (b.covers_item(item)) return b;
  throw Error("internal: no covering base for item h" + std::to_string(item));
}

bool descends_from(const std::string& id, const std::string& root) {
  return id == root ||
         (id.size() > root.size() && id.compare(0, root.size(), root) == 0 &&
          id[root.size()] == '.');
}

}  // namespace

TransformResult d6_linear_step(const GenEq& eq, const LengthMap& lengths,
                               const Solution* u) {
  std::vector<long> lin = linear_items(eq);
  if (lin.empty()) throw NotApplicable("D6: no linear item");

  // Case 1: a linear item with both boundaries closed.
  for (long i : lin) {
    if (boundary_open(eq, i) || boundary_open(eq, i + 1)) continue;
    const BaseRec& m = covering_base(eq, i);
    Chain ch(eq, u);
    ch.step(et4_remove_lone(ch.cur, m.id, ch.sol()));
    return ch.take("D6 case 1 on h" + std::to_string(i));
  }
  // Case 2: one boundary open, the other closed.
  for (long i : lin) {
    bool o1 = boundary_open(eq, i), o2 = boundary_open(eq, i + 1);
    if (o1 == o2) continue;
    long open_b = o1 ? i : i + 1;
    Chain ch(eq, u);
    LengthMap l0 = ch.lengths(lengths);
    LambdaScalar at = cumlen_to(eq, l0, open_b);
    close_boundary(ch, at, lengths);
    // The one-item half over the linear item is now lone; find and remove it.
    LengthMap lf = ch.lengths(lengths);
    long lo = boundary_with_cumlen(ch.cur, lf, cumlen_to(eq, l0, i));
    const BaseRec& half = covering_base(ch.cur, lo);
    ch.step(et4_remove_lone(ch.cur, half.id, ch.sol()));
    return ch.take("D6 case 2 on h" + std::to_string(i));
  }
  // Cases 3 and 4: both boundaries open.
  for (long i : lin) {
    // Case 3: a closed section carried by exactly two unmatched spanning
    // bases, none of whose cut-descendants survive into the kernel.
    for (const Section& s : eq.sections) {
      if (!s.active) continue;
      std::vector<std::string> in = eq.bases_in(s);
      if (in.size() != 2) continue;
      const BaseRec& m1 = *eq.base(in[0]);
      const BaseRec& m2 = *eq.base(in[1]);
      if (!(m1.lo() == s.lo && m1.hi() == s.hi && m2.lo() == s.lo &&
            m2.hi() == s.hi))
        continue;
      if (m1.dual == m2.id) continue;  // a dual pair: matched or reversed
      if (boundary_open(eq, s.lo) || boundary_open(eq, s.hi)) continue;
      KernelResult kr = d5_kernel(eq);
      bool in_kernel = false;
      for (const BaseRec& b : kr.kernel.bases)
        if (descends_from(b.id, m1.id) || descends_from(b.id, m2.id))
          in_kernel = true;
      if (in_kernel) continue;
      Chain ch(eq, u);
      std::string a = m1.id, b = m2.id;
      if (b < a) std::swap(a, b);
      for (;;) {
        const BaseRec mm = need_base(ch.cur, a);
        long untied = -1;
        for (long r = mm.lo() + 1; r < mm.hi(); ++r)
          if (!tie_image(ch.cur, mm, r)) {
            untied = r;
            break;
          }
        if (untied < 0) break;
        ch.step(et5_introduce_boundary(ch.cur, a, untied, ch.lengths(lengths),
                                       ch.sol()));
      }
      ch.step(et2_transfer(ch.cur, a, b, ch.sol()));
      ch.step(et4_remove_lone(ch.cur, a, ch.sol()));
      return ch.take("D6 case 3 via section [" + std::to_string(s.lo) + "," +
                     std::to_string(s.hi) + "]");
    }
    // Case 4: close [i, i+1] and remove it.
    Chain ch(eq, u);
    LengthMap l0 = ch.lengths(lengths);
    LambdaScalar at_i = cumlen_to(eq, l0, i);
    LambdaScalar at_j = cumlen_to(eq, l0, i + 1);
    close_boundary(ch, at_i, lengths);
    close_boundary(ch, at_j, lengths);
    LengthMap lf = ch.lengths(lengths);
    long lo = boundary_with_cumlen(ch.cur, lf, at_i);
    const BaseRec& half = covering_base(ch.cur, lo);
    ch.step(et4_remove_lone(ch.cur, half.id, ch.sol()));
    return ch.take("D6 case 4 on h" + std::to_string(i));
  }
  throw NotApplicable("D6: no applicable case");
}

// ---------------------------------------------------------------------------
// D7 -- Tietze cleaning
// ---------------------------------------------------------------------------

namespace {

std::string canonical_form(const GenEq& eq) {
  // Rename bases by sorted (alpha, beta, eps, id) order; ids only break ties.
  std::vector<const BaseRec*> bs;
  for (const BaseRec& b : eq.bases) bs.push_back(&b);
  std::sort(bs.begin(), bs.end(), [](const BaseRec* a, const BaseRec* b) {
    return std::tuple(a->alpha, a->beta, a->eps, a->id) <
           std::tuple(b->alpha, b->beta, b->eps, b->id);
  });
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < bs.size(); ++i) index[bs[i]->id] = i;
  std::ostringstream os;
  os << eq.rho << ";";
  for (const BaseRec* b : bs)
    os << b->alpha << "," << b->beta << "," << b->eps << ",d"
       << index.at(b->dual) << ";";
  std::vector<std::tuple<long, size_t, long>> conns;
  for (const Connection& c : eq.connections)
    conns.emplace_back(c.p, index.at(c.lambda), c.q);
  std::sort(conns.begin(), conns.end());
  for (auto& [p, l, q] : conns) os << "c" << p << "," << l << "," << q << ";";
  for (const Section& s : eq.sections)
    os << "s" << s.lo << "," << s.hi << "," << (s.active ? 1 : 0) << ";";
  return os.str();
}

}  // namespace

D7Result d7_tietze(const GenEq& eq, const LengthMap& lengths,
                   const Solution* u) {
  D7Result res;
  Chain ch(eq, u);
  // (a) linear elimination until exhaustion or a recurring canonical form.
  std::map<std::string, long> seen;
  seen[canonical_form(ch.cur)] = 0;
  for (;;) {
    if (res.steps > 10000)
      throw BudgetExceeded("D7: linear elimination exceeded 10000 steps");
    TransformResult r;
    try {
      r = d6_linear_step(ch.cur, ch.lengths(lengths), ch.sol());
    } catch (const NotApplicable&) {
      break;
    }
    ch.step(std::move(r));
    ++res.steps;
    std::string cf = canonical_form(ch.cur);
    auto it = seen.find(cf);
    if (it != seen.end()) {
      res.loop_detected = true;
      res.loop_period = res.steps - it->second;
      KernelResult kr = d5_kernel(ch.cur);
      std::set<long> covered;
      for (const BaseRec& b : kr.kernel.bases)
        for (long i = b.lo(); i < b.hi(); ++i) covered.insert(i);
      Morphism mo;
      mo.kind = Morphism::Epimorphism;
      mo.source_items = ch.cur.rho;
      mo.target_items = kr.kernel.rho;
      for (long i = 1; i <= ch.cur.rho; ++i)
        mo.item_map[i] = covered.count(i) ? ItemWord{{i, 1}} : ItemWord{};
      res.free_rank_split = kr.free_rank;
      ch.m = Morphism::compose(ch.m, mo);
      ch.cur = kr.kernel;
      // A solution of the original still solves the kernel equation.
      break;
    }
    seen.emplace(std::move(cf), res.steps);
  }
  // (b) delete matched pairs.
  for (;;) {
    const BaseRec* hit = nullptr;
    for (const BaseRec& b : ch.cur.bases) {
      const BaseRec* d = ch.cur.base(b.dual);
      if (d && b.alpha == d->alpha && b.beta == d->beta &&
          (hit == nullptr || b.id < hit->id))
        hit = &b;
    }
    if (hit == nullptr) break;
    ch.step(et3_remove_matched(ch.cur, hit->id, ch.sol()));
  }
  // (c) delete complete bases.
  for (;;) {
    std::string pick;
    for (const BaseRec& b : ch.cur.bases) {
      if (!ch.cur.item_active(b.lo())) continue;
      const Section* s = ch.cur.section_of(b.lo(), b.hi());
      if (s == nullptr || s->lo != b.lo() || s->hi != b.hi()) continue;
      if (boundary_open(ch.cur, s->lo) || boundary_open(ch.cur, s->hi))
        continue;
      const BaseRec* d = ch.cur.base(b.dual);
      if (b.lo() <= d->lo() && d->hi() <= b.hi()) continue;
      if (pick.empty() || b.id < pick) pick = b.id;
    }
    if (pick.empty()) break;
    ch.step(d4_delete_complete(ch.cur, pick, ch.lengths(lengths), ch.sol()));
  }
  // (d) move free variables right.
  for (;;) {
    long q = -1;
    for (long i = 1; i <= ch.cur.rho; ++i)
      if (ch.cur.item_active(i) && ch.cur.gamma(i) == 0) {
        q = i;
        break;
      }
    if (q < 0) break;
    ch.step(d3_move_free(ch.cur, q, ch.sol()));
  }
  res.result = ch.take("D7 Tietze cleaning");
  return res;
}

// ---------------------------------------------------------------------------
// D8 -- entire transformation
// ---------------------------------------------------------------------------

namespace {

long active_start(const GenEq& eq) {
  long lo = -1;
  for (const Section& s : eq.sections)
    if (s.active && (lo < 0 || s.lo < lo)) lo = s.lo;
  if (lo < 0) throw NotApplicable("no active section");
  return lo;
}

}  // namespace

std::string d8_carrier(const GenEq& eq) {
  long start = active_start(eq);
  const BaseRec* carrier = nullptr;
  for (const BaseRec& b : eq.bases) {
    if (b.alpha != start) continue;
    if (!eq.item_active(b.lo())) continue;
    if (carrier == nullptr || b.beta > carrier->beta ||
        (b.beta == carrier->beta && b.id < carrier->id))
      carrier = &b;
  }
  if (carrier == nullptr) throw NotApplicable("D8: no leading base");
  return carrier->id;
}

TransformResult d8_entire_step(const GenEq& eq, const LengthMap& lengths,
                               const Solution* u) {
  long start = active_start(eq);
  for (long i = 1; i <= eq.rho; ++i)
    if (eq.item_active(i) && height_comparable(eq, i) && eq.gamma(i) < 2)
      throw NotApplicable("D8: item h" + std::to_string(i) +
                          " has gamma < 2; clean with D6/D7 first");
  std::string mu = d8_carrier(eq);

  Chain ch(eq, u);
  // Collect the transfer set once, then process each base with re-lookup.
  std::vector<std::string> transfers;
  {
    const BaseRec& m = *eq.base(mu);
    std::vector<const BaseRec*> list;
    for (const BaseRec& b : eq.bases) {
      if (b.id == mu) continue;
      if (!eq.item_active(b.lo())) continue;
      if (b.hi() <= m.beta && b.lo() >= start) list.push_back(&b);
    }
    std::sort(list.begin(), list.end(), [](const BaseRec* a, const BaseRec* b) {
      return std::tuple(a->lo(), a->hi(), a->id) <
             std::tuple(b->lo(), b->hi(), b->id);
    });
    for (const BaseRec* b : list) transfers.push_back(b->id);
  }
  for (const std::string& nid : transfers) {
    for (;;) {
      const BaseRec mm = need_base(ch.cur, mu);
      const BaseRec nn = need_base(ch.cur, nid);
      long untied = -1;
      for (long b = nn.lo(); b <= nn.hi(); ++b) {
        if (!(mm.lo() < b && b < mm.hi())) continue;
        if (!tie_image(ch.cur, mm, b)) {
          untied = b;
          break;
        }
      }
      if (untied < 0) break;
      ch.step(et5_introduce_boundary(ch.cur, mu, untied, ch.lengths(lengths),
                                     ch.sol()));
    }
    ch.step(et2_transfer(ch.cur, mu, nid, ch.sol()));
  }
  // Find the end of the carrier-only initial run.
  const BaseRec m_now = need_base(ch.cur, mu);
  long s_now = active_start(ch.cur);
  if (ch.cur.gamma(s_now) != 1)
    throw NotApplicable("D8: no carrier-only initial segment after transfers");
  long t = s_now;
  while (t < m_now.beta && ch.cur.gamma(t) == 1) ++t;
  if (t == m_now.beta) {
    // The whole carrier is the initial segment.
    for (;;) {
      const BaseRec mm = need_base(ch.cur, mu);
      long untied = -1;
      for (long b = mm.lo() + 1; b < mm.hi(); ++b)
        if (!tie_image(ch.cur, mm, b)) {
          untied = b;
          break;
        }
      if (untied < 0) break;
      ch.step(et5_introduce_boundary(ch.cur, mu, untied, ch.lengths(lengths),
                                     ch.sol()));
    }
    ch.step(et4_remove_lone(ch.cur, mu, ch.sol()));
    return ch.take("D8 entire transformation (carrier " + mu +
                   " consumed whole)");
  }
  // Tie every boundary of [start, t] through the carrier, cut at t, delete.
  LengthMap l0 = ch.lengths(lengths);
  LambdaScalar at_t = cumlen_to(ch.cur, l0, t);
  for (;;) {
    const BaseRec mm = need_base(ch.cur, mu);
    LengthMap lens = ch.lengths(lengths);
    long t_now = boundary_with_cumlen(ch.cur, lens, at_t);
    long untied = -1;
    for (long b = active_start(ch.cur) + 1; b <= t_now; ++b)
      if (mm.lo() < b && b < mm.hi() && !tie_image(ch.cur, mm, b)) {
        untied = b;
        break;
      }
    if (untied < 0) break;
    ch.step(et5_introduce_boundary(ch.cur, mu, untied, lens, ch.sol()));
  }
  {
    LengthMap lens = ch.lengths(lengths);
    long t_now = boundary_with_cumlen(ch.cur, lens, at_t);
    ch.step(et1_cut(ch.cur, mu, t_now, ch.sol()));
    ch.step(et4_remove_lone(ch.cur, mu + ".1", ch.sol()));
  }
  return ch.take("D8 entire transformation (carrier " + mu + ")");
}

}  // namespace geqlab
