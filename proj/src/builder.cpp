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

#include "geqlab/builder.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geqlab/errors.hpp"

namespace geqlab {

namespace {

const LambdaWord& xi_of(const std::map<std::string, LambdaWord>& xi,
                        const std::string& sym) {
  auto it = xi.find(sym);
  if (it == xi.end()) throw DomainError("no embedding for generator " + sym);
  return it->second;
}

LambdaWord xi_of_letter(const std::map<std::string, LambdaWord>& xi,
                        const Letter& l) {
  const LambdaWord& w = xi_of(xi, l.sym);
  return l.sign > 0 ? w : w.inverse();
}

std::string letters_str(const std::vector<Letter>& ls) {
  std::string out;
  for (const Letter& l : ls) {
    if (!out.empty()) out += ' ';
    out += l.str();
  }
  return out;
}

int distinct_syms(const std::vector<Letter>& r) {
  std::set<std::string> s;
  for (const Letter& l : r) s.insert(l.sym);
  return static_cast<int>(s.size());
}

// ---------------------------------------------------------------------------
// Cancellation-tree construction.
//
// The embedded relator letters w_1 .. w_k multiply out to the identity. We
// fold left to right, keeping the running reduced product as a path of signed
// pieces. Each new w_i first cancels a suffix of the accumulator; pieces that
// cancel only partially are split in two (rewriting every recorded path), and
// whatever remains of w_i joins the accumulator as a fresh piece. When the
// fold ends the accumulator must be empty, and every surviving piece has been
// used exactly twice.
// ---------------------------------------------------------------------------

struct FoldState {
  int rank = 1;
  std::vector<LambdaWord> vals;            // piece values by raw id
  std::vector<char> dead;                  // split parents
  std::vector<std::vector<TreeOcc>> paths; // per relator letter, raw ids
  std::vector<TreeOcc> acc;
};

void replace_everywhere(FoldState& st, int old_id, int left_id, int right_id) {
  auto rewrite = [&](std::vector<TreeOcc>& path) {
    std::vector<TreeOcc> out;
    out.reserve(path.size() + 1);
    for (const TreeOcc& o : path) {
      if (o.piece != old_id) {
        out.push_back(o);
      } else if (o.sign > 0) {
        out.push_back({left_id, 1});
        out.push_back({right_id, 1});
      } else {
        out.push_back({right_id, -1});
        out.push_back({left_id, -1});
      }
    }
    path = std::move(out);
  };
  for (auto& p : st.paths) rewrite(p);
  rewrite(st.acc);
}

// Split piece `id` at offset t from its start (0 < t < |val|).
void split_piece(FoldState& st, int id, const LambdaScalar& t) {
  const LambdaWord& v = st.vals[static_cast<size_t>(id)];
  LambdaScalar one = LambdaScalar::unit(st.rank);
  auto left = v.subword(one, t + one);
  auto right = v.subword(t + one, v.length() + one);
  if (!left || !right)
    throw DomainError(
        "cancellation tree needs a piece cut that is not representable");
  int left_id = static_cast<int>(st.vals.size());
  st.vals.push_back(*left);
  st.dead.push_back(0);
  int right_id = static_cast<int>(st.vals.size());
  st.vals.push_back(*right);
  st.dead.push_back(0);
  st.dead[static_cast<size_t>(id)] = 1;
  replace_everywhere(st, id, left_id, right_id);
}

LambdaWord acc_value(const FoldState& st) {
  WordBuilder b(st.rank);
  for (const TreeOcc& o : st.acc) {
    const LambdaWord& v = st.vals[static_cast<size_t>(o.piece)];
    b.push_word(o.sign > 0 ? v : v.inverse());
  }
  return b.take();
}

}  // namespace

PresentationInput triangulate(const PresentationInput& p) {
  PresentationInput out;
  out.rank = p.rank;
  out.generators = p.generators;
  out.embedding = p.embedding;
  std::set<std::string> taken(p.generators.begin(), p.generators.end());
  int counter = 0;
  auto fresh = [&]() {
    std::string name;
    do {
      name = "a" + std::to_string(++counter);
    } while (taken.count(name));
    taken.insert(name);
    return name;
  };

  for (const auto& rel : p.relators) {
    std::vector<Letter> cur = rel;
    while (distinct_syms(cur) > 3) {
      Letter l1 = cur[0], l2 = cur[1];
      LambdaWord v1 = xi_of_letter(out.embedding, l1);
      LambdaWord v2 = xi_of_letter(out.embedding, l2);
      auto prod = LambdaWord::mult(v1, v2);
      if (!prod)
        throw DomainError("triangulation product " + l1.str() + " " + l2.str() +
                          " is not representable");
      if (prod->is_empty())
        throw DomainError("triangulation product " + l1.str() + " " + l2.str() +
                          " is trivial; reduce the relator first");
      std::string a = fresh();
      out.generators.push_back(a);
      out.embedding[a] = *prod;
      out.relators.push_back({l1, l2, Letter(a, -1)});
      std::vector<Letter> rest;
      rest.push_back(Letter(a, 1));
      rest.insert(rest.end(), cur.begin() + 2, cur.end());
      cur = std::move(rest);
    }
    out.relators.push_back(cur);
  }
  return out;
}

CancellationTree build_tree(const std::vector<Letter>& relator,
                            const std::map<std::string, LambdaWord>& xi,
                            int rank) {
  if (relator.empty()) throw DomainError("empty relator");
  FoldState st;
  st.rank = rank;
  st.paths.resize(relator.size());

  LambdaScalar zero(rank);
  for (size_t li = 0; li < relator.size(); ++li) {
    LambdaWord w = xi_of_letter(xi, relator[li]);
    // Cancel against the accumulator suffix.
    LambdaWord acc = acc_value(st);
    auto cm = LambdaWord::com(acc.inverse(), w);
    if (!cm)
      throw DomainError("relator " + letters_str(relator) +
                        ": cancellation not representable at letter " +
                        std::to_string(li + 1));
    LambdaScalar need = cm->c.length();
    std::vector<TreeOcc> path;
    while (!(need == zero)) {
      if (st.acc.empty())
        throw Error("internal: cancellation exceeded accumulator");
      TreeOcc last = st.acc.back();
      LambdaScalar plen = st.vals[static_cast<size_t>(last.piece)].length();
      if (plen <= need) {
        st.acc.pop_back();
        path.push_back({last.piece, -last.sign});
        need = need - plen;
      } else {
        // Only a suffix of `last` cancels; cut it and retry. For a positive
        // occurrence the cancelled suffix is the right part, for a negative
        // one it is (the inverse of) the left part.
        LambdaScalar t = last.sign > 0 ? plen - need : need;
        split_piece(st, last.piece, t);
      }
    }
    // Remainder of w becomes a fresh piece.
    if (!cm->v_rest.is_empty()) {
      if (!cm->v_rest.reduced())
        throw Error("internal: unreduced remainder in cancellation fold");
      int id = static_cast<int>(st.vals.size());
      st.vals.push_back(cm->v_rest);
      st.dead.push_back(0);
      path.push_back({id, 1});
      st.acc.push_back({id, 1});
    }
    st.paths[li] = std::move(path);
  }

  if (!st.acc.empty())
    throw DomainError("relator " + letters_str(relator) +
                      " does not cancel; residual " + acc_value(st).str());

  // Compact to dense ids in order of first use.
  std::map<int, int> remap;
  CancellationTree tree;
  tree.relator = relator;
  tree.paths.resize(relator.size());
  for (size_t li = 0; li < relator.size(); ++li) {
    for (const TreeOcc& o : st.paths[li]) {
      if (st.dead[static_cast<size_t>(o.piece)])
        throw Error("internal: dead piece survived in path");
      auto it = remap.find(o.piece);
      int id;
      if (it == remap.end()) {
        id = static_cast<int>(tree.pieces.size());
        remap.emplace(o.piece, id);
        tree.pieces.push_back(st.vals[static_cast<size_t>(o.piece)]);
      } else {
        id = it->second;
      }
      tree.paths[li].push_back({id, o.sign});
    }
  }
  // Every piece occurs exactly twice.
  std::vector<int> uses(tree.pieces.size(), 0);
  for (const auto& path : tree.paths)
    for (const TreeOcc& o : path) ++uses[static_cast<size_t>(o.piece)];
  for (size_t i = 0; i < uses.size(); ++i)
    if (uses[i] != 2)
      throw Error("internal: piece " + std::to_string(i + 1) + " used " +
                  std::to_string(uses[i]) + " times");
  return tree;
}

namespace {

struct PieceOcc {
  std::string gen;
  LambdaScalar start;  // offsets within xi(gen), forward orientation
  LambdaScalar end;
  int sign = 1;  // reading the generator interval left-to-right gives P^sign
};

void seed_connections(GenEq& eq, const Solution& u) {
  for (const BaseRec& b : eq.bases) {
    for (long p = b.lo() + 1; p < b.hi(); ++p) {
      LambdaScalar want = u.length(base_prefix(b, p));
      const BaseRec* dual = eq.dual_of(b.id);
      LambdaScalar run(eq.rank);
      long q = dual->alpha;
      int step = dual->eps;
      bool hit = run == want;
      while (!hit && q != dual->beta) {
        long item = step > 0 ? q : q - 1;
        run = run + u.at(item).length();
        q += step;
        if (run == want) hit = true;
      }
      if (hit && q > dual->lo() && q < dual->hi() &&
          !eq.has_connection(p, b.id, q))
        eq.connections.push_back({p, b.id, q});
    }
  }
}

}  // namespace

AssembledDiagram assemble(const PresentationInput& pin,
                          const std::vector<CancellationTree>& trees) {
  int rank = pin.rank;
  if (pin.generators.empty()) throw DomainError("no generators");
  for (const std::string& g : pin.generators) {
    const LambdaWord& w = xi_of(pin.embedding, g);
    if (w.rank() != rank) throw RankMismatch("embedding rank mismatch for " + g);
    if (w.is_empty()) throw DomainError("embedding of " + g + " is empty");
    if (!w.reduced()) throw DomainError("embedding of " + g + " is unreduced");
    if (!w.cyclic_decomposition())
      throw DomainError("embedding of " + g +
                        " has no representable cyclic decomposition");
  }

  // Collect the two located occurrences of every piece, in generator
  // coordinates (positions within xi(g) read forward).
  std::vector<std::vector<PieceOcc>> occs;  // [tree piece global index]
  std::vector<LambdaWord> piece_vals;
  for (const CancellationTree& tree : trees) {
    size_t base_idx = piece_vals.size();
    for (const LambdaWord& v : tree.pieces) piece_vals.push_back(v);
    occs.resize(piece_vals.size());
    for (size_t li = 0; li < tree.relator.size(); ++li) {
      const Letter& l = tree.relator[li];
      const LambdaWord& gw = xi_of(pin.embedding, l.sym);
      LambdaScalar glen = gw.length();
      LambdaScalar pos(rank);
      for (const TreeOcc& o : tree.paths[li]) {
        const LambdaWord& v = piece_vals[base_idx + static_cast<size_t>(o.piece)];
        LambdaScalar nxt = pos + v.length();
        PieceOcc po;
        po.gen = l.sym;
        if (l.sign > 0) {
          po.start = pos;
          po.end = nxt;
          po.sign = o.sign;
        } else {
          po.start = glen - nxt;
          po.end = glen - pos;
          po.sign = -o.sign;
        }
        occs[base_idx + static_cast<size_t>(o.piece)].push_back(po);
        pos = nxt;
      }
    }
  }
  for (size_t i = 0; i < occs.size(); ++i)
    if (occs[i].size() != 2)
      throw Error("internal: piece with " + std::to_string(occs[i].size()) +
                  " occurrences");

  // Subdivide each generator interval by every occurrence endpoint.
  std::map<std::string, std::set<LambdaScalar>> cuts;
  for (const std::string& g : pin.generators) {
    cuts[g].insert(LambdaScalar(rank));
    cuts[g].insert(xi_of(pin.embedding, g).length());
  }
  for (const auto& pair : occs)
    for (const PieceOcc& po : pair) {
      cuts[po.gen].insert(po.start);
      cuts[po.gen].insert(po.end);
    }

  AssembledDiagram out;
  out.eq.rank = rank;
  out.planted.rank = rank;
  std::map<std::string, long> interval_first;  // first boundary of g's interval
  std::map<std::string, std::map<LambdaScalar, long>> boundary_of;
  long next_boundary = 1;
  LambdaScalar one = LambdaScalar::unit(rank);
  for (const std::string& g : pin.generators) {
    const LambdaWord& gw = xi_of(pin.embedding, g);
    interval_first[g] = next_boundary;
    std::vector<LambdaScalar> offs(cuts[g].begin(), cuts[g].end());
    std::sort(offs.begin(), offs.end());
    for (size_t j = 0; j < offs.size(); ++j)
      boundary_of[g][offs[j]] = next_boundary + static_cast<long>(j);
    ItemWord gen_word;
    for (size_t j = 0; j + 1 < offs.size(); ++j) {
      long item = next_boundary + static_cast<long>(j);
      auto piece = gw.subword(offs[j] + one, offs[j + 1] + one);
      if (!piece || piece->is_empty())
        throw DomainError("inconsistent subdivision of generator " + g +
                          " at offset " + offs[j].str());
      out.planted.items[item] = *piece;
      out.eq.item_lengths[item] = piece->length();
      out.eq.item_heights[item] = piece->length().height();
      gen_word.push_back({item, 1});
    }
    out.generator_words[g] = gen_word;
    next_boundary = interval_first[g] + static_cast<long>(offs.size()) - 1;
  }
  out.eq.rho = next_boundary - 1;

  // One dual base pair per piece.
  for (size_t i = 0; i < occs.size(); ++i) {
    std::string id = "p" + std::to_string(i + 1);
    std::string did = id + "d";
    std::array<std::string, 2> ids = {id, did};
    for (int k = 0; k < 2; ++k) {
      const PieceOcc& po = occs[i][static_cast<size_t>(k)];
      long lo = boundary_of[po.gen][po.start];
      long hi = boundary_of[po.gen][po.end];
      BaseRec b;
      b.id = ids[static_cast<size_t>(k)];
      b.dual = ids[static_cast<size_t>(1 - k)];
      b.eps = po.sign;
      if (po.sign > 0) {
        b.alpha = lo;
        b.beta = hi;
      } else {
        b.alpha = hi;
        b.beta = lo;
      }
      out.eq.bases.push_back(b);
    }
  }

  out.eq.sections.push_back({1, out.eq.rho + 1, true});
  seed_connections(out.eq, out.planted);
  out.eq.check();
  VerifyResult vr = verify_solution(out.eq, out.planted);
  if (!vr.ok)
    throw Error("internal: planted solution rejected: " + vr.violation);
  return out;
}

AssembledDiagram build_diagram(const PresentationInput& pin) {
  PresentationInput tri = triangulate(pin);
  std::vector<CancellationTree> trees;
  trees.reserve(tri.relators.size());
  for (const auto& rel : tri.relators)
    trees.push_back(build_tree(rel, tri.embedding, tri.rank));
  return assemble(tri, trees);
}

}  // namespace geqlab
