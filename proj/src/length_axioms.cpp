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

#include "geqlab/length_axioms.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "geqlab/errors.hpp"

namespace geqlab {

namespace {

constexpr long kClosureCap = 100000;

struct ScalarLess {
  bool operator()(const LambdaScalar& a, const LambdaScalar& b) const {
    return a < b;
  }
};

std::string pair_witness(const LambdaWord& g, const LambdaWord& f,
                         const std::string& detail) {
  return "g = \"" + g.str() + "\", f = \"" + f.str() + "\": " + detail;
}

}  // namespace

const LengthOracle& default_oracle() {
  static const LengthOracle o;
  return o;
}

bool AxiomReport::all_pass() const {
  for (const auto& [k, r] : results)
    if (r.status != AxiomStatus::Pass) return false;
  return true;
}

bool AxiomReport::any_fail() const {
  for (const auto& [k, r] : results)
    if (r.status == AxiomStatus::Fail) return true;
  return false;
}

std::string AxiomReport::str() const {
  std::ostringstream os;
  os << "closure " << closure_size << " element(s), " << undefined_products
     << " undefined product(s)\n";
  for (const auto& [k, r] : results) {
    os << k << ": ";
    switch (r.status) {
      case AxiomStatus::Pass:
        os << "pass";
        break;
      case AxiomStatus::Fail:
        os << "FAIL " << r.witness;
        break;
      case AxiomStatus::NotWitnessed:
        os << "not witnessed at this depth " << r.witness;
        break;
    }
    os << " (checked " << r.checked;
    if (r.skipped > 0) os << ", skipped " << r.skipped;
    os << ")\n";
  }
  return os.str();
}

LambdaRational gromov(const LambdaWord& g, const LambdaWord& f,
                      const LengthOracle& o) {
  auto p = LambdaWord::mult(g.inverse(), f);
  if (!p) throw DomainError("gromov: partial product g^-1 * f is undefined");
  LambdaScalar twoc = o.length(g) + o.length(f) - o.length(*p);
  return twoc.halved();
}

std::vector<LambdaWord> sample_closure(const GroupSample& s,
                                       long* undefined_out) {
  std::vector<LambdaWord> out;
  std::unordered_map<std::string, size_t> seen;
  long undefined = 0;
  auto add = [&](const LambdaWord& w) {
    if (w.is_empty()) return;  // the identity is handled implicitly
    std::string key = w.str();
    if (seen.emplace(key, out.size()).second) {
      out.push_back(w);
      if (static_cast<long>(out.size()) > kClosureCap)
        throw BudgetExceeded("sample closure exceeds budget");
    }
  };
  for (const LambdaWord& w : s.elements) {
    if (!w.reduced()) throw DomainError("sample elements must be reduced");
    add(w);
    add(w.inverse());
  }
  for (int round = 0; round < s.closure_depth; ++round) {
    size_t n = out.size();
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        auto p = LambdaWord::mult(out[i], out[j]);
        if (!p) {
          ++undefined;
          continue;
        }
        if (!p->is_empty()) {
          add(*p);
          add(p->inverse());
        }
      }
    }
  }
  if (undefined_out) *undefined_out = undefined;
  return out;
}

namespace {

// Pairwise doubled Gromov products, interned to order-preserving ids.
struct GromovMatrix {
  long n = 0;
  std::vector<int32_t> m;       // n*n, -1 = undefined
  std::vector<LambdaScalar> vals;  // id -> value, ascending
  long undefined = 0;

  int32_t at(long i, long j) const { return m[i * n + j]; }
};

GromovMatrix build_matrix(const std::vector<LambdaWord>& cl,
                          const std::vector<LambdaScalar>& len,
                          const std::vector<std::optional<std::vector<Letter>>>& flat,
                          const LengthOracle& o, int rank) {
  GromovMatrix gm;
  long n = gm.n = static_cast<long>(cl.size());
  gm.m.assign(static_cast<size_t>(n) * n, -1);
  std::map<LambdaScalar, std::vector<size_t>, ScalarLess> raw;  // value -> cells
  bool fast = o.word_length();
  for (long i = 0; i < n; ++i) {
    long jend = fast ? i + 1 : n;
    for (long j = 0; j < jend; ++j) {
      std::optional<LambdaScalar> twoc;
      if (fast && flat[i].has_value() && flat[j].has_value()) {
        const auto& a = *flat[i];
        const auto& b = *flat[j];
        size_t k = 0;
        while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
        twoc = LambdaScalar::integer(rank, 2 * static_cast<long>(k));
      } else if (fast) {
        auto cm = LambdaWord::com(cl[i], cl[j]);
        if (cm) twoc = cm->c.length() * BigInt(2);
      } else {
        auto p = LambdaWord::mult(cl[i].inverse(), cl[j]);
        if (p) twoc = len[i] + len[j] - o.length(*p);
      }
      if (!twoc) {
        ++gm.undefined;
        continue;
      }
      raw[*twoc].push_back(static_cast<size_t>(i * n + j));
      if (fast && i != j) raw[*twoc].push_back(static_cast<size_t>(j * n + i));
    }
  }
  int32_t id = 0;
  for (auto& [val, cells] : raw) {
    gm.vals.push_back(val);
    for (size_t c : cells) gm.m[c] = id;
    ++id;
  }
  return gm;
}

}  // namespace

AxiomReport check_axioms(const GroupSample& s,
                         const std::set<std::string>& axioms,
                         const LengthOracle& o) {
  AxiomReport rep;
  long closure_undone = 0;
  std::vector<LambdaWord> cl = sample_closure(s, &closure_undone);
  rep.closure_size = static_cast<long>(cl.size());
  rep.undefined_products = closure_undone;
  long n = static_cast<long>(cl.size());
  int rank = s.rank;
  LambdaScalar zero(rank);

  std::vector<LambdaScalar> len;
  len.reserve(cl.size());
  for (const auto& w : cl) len.push_back(o.length(w));
  std::vector<std::optional<std::vector<Letter>>> flat;
  flat.reserve(cl.size());
  for (const auto& w : cl) {
    std::vector<Letter> ls;
    bool ok = true;
    for (const Block& b : w.blocks()) {
      if (const auto* f = std::get_if<FiniteSeg>(&b))
        ls.insert(ls.end(), f->letters.begin(), f->letters.end());
      else
        ok = false;
    }
    if (ok)
      flat.emplace_back(std::move(ls));
    else
      flat.emplace_back(std::nullopt);
  }

  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < cl.size(); ++i) index.emplace(cl[i].str(), i);

  bool need_matrix = axioms.count("L3") || axioms.count("L4") ||
                     axioms.count("L6");
  GromovMatrix gm;
  if (need_matrix) gm = build_matrix(cl, len, flat, o, rank);

  if (axioms.count("L1")) {
    AxiomResult r;
    r.checked = n + 1;
    if (!(o.length(LambdaWord::empty(rank)) == zero)) {
      r.status = AxiomStatus::Fail;
      r.witness = "l(1) != 0";
    }
    for (long i = 0; i < n && r.status == AxiomStatus::Pass; ++i) {
      if (len[i] < zero) {
        r.status = AxiomStatus::Fail;
        r.witness = pair_witness(cl[i], cl[i], "l(g) < 0");
      }
    }
    rep.results["L1"] = r;
  }

  if (axioms.count("L2")) {
    AxiomResult r;
    for (long i = 0; i < n; ++i) {
      ++r.checked;
      LambdaWord inv = cl[i].inverse();
      auto it = index.find(inv.str());
      LambdaScalar linv = (it != index.end()) ? len[it->second] : o.length(inv);
      if (!(len[i] == linv)) {
        r.status = AxiomStatus::Fail;
        r.witness = pair_witness(cl[i], inv, "l(g) != l(g^-1)");
        break;
      }
    }
    rep.results["L2"] = r;
  }

  if (axioms.count("L3")) {
    AxiomResult r;
    std::vector<int32_t> mt(static_cast<size_t>(n) * n);  // transpose
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) mt[j * n + i] = gm.m[i * n + j];
    bool done = false;
    for (long g = 0; g < n && !done; ++g) {
      const int32_t* rowg = &gm.m[g * n];
      for (long h = 0; h < n && !done; ++h) {
        int32_t cgh = rowg[h];
        if (cgh < 0) {
          r.skipped += n;
          continue;
        }
        const int32_t* colh = &mt[h * n];
        for (long f = 0; f < n; ++f) {
          int32_t cgf = rowg[f];
          if (cgf > cgh) {
            int32_t cfh = colh[f];
            if (cfh != cgh) {
              if (cfh < 0) {
                ++r.skipped;
                continue;
              }
              r.status = AxiomStatus::Fail;
              r.witness = "g = \"" + cl[g].str() + "\", f = \"" + cl[f].str() +
                          "\", h = \"" + cl[h].str() +
                          "\": c(g,f) > c(g,h) but c(g,h) != c(f,h)";
              done = true;
              break;
            }
          }
        }
        r.checked += n;
      }
    }
    rep.results["L3"] = r;
  }

  if (axioms.count("L4")) {
    AxiomResult r;
    bool done = false;
    for (long i = 0; i < n && !done; ++i) {
      for (long j = 0; j < n; ++j) {
        int32_t id = gm.at(i, j);
        if (id < 0) {
          ++r.skipped;
          continue;
        }
        ++r.checked;
        const LambdaScalar& twoc = gm.vals[static_cast<size_t>(id)];
        for (int k = 1; k <= rank; ++k) {
          if (twoc.coord(k) % 2 != 0) {
            r.status = AxiomStatus::Fail;
            r.witness = pair_witness(cl[i], cl[j], "c(g,f) not in the lattice");
            done = true;
            break;
          }
        }
        if (done) break;
      }
    }
    rep.results["L4"] = r;
  }

  if (axioms.count("L5")) {
    AxiomResult r;
    for (long i = 0; i < n; ++i) {
      auto sq = LambdaWord::mult(cl[i], cl[i]);
      if (!sq) {
        ++r.skipped;
        continue;
      }
      ++r.checked;
      if (!(len[i] < o.length(*sq))) {
        r.status = AxiomStatus::Fail;
        r.witness = pair_witness(cl[i], cl[i], "l(g^2) <= l(g)");
        break;
      }
    }
    rep.results["L5"] = r;
  }

  if (axioms.count("L6")) {
    AxiomResult r;
    // candidate buckets by doubled length
    std::map<LambdaScalar, std::vector<long>, ScalarLess> bucket;
    for (long i = 0; i < n; ++i) bucket[len[i] * BigInt(2)].push_back(i);
    bool fast = o.word_length();
    bool done = false;
    for (long i = 0; i < n && !done; ++i) {
      for (long j = 0; j < n; ++j) {
        int32_t id = gm.at(i, j);
        if (id < 0) {
          ++r.skipped;
          continue;
        }
        ++r.checked;
        const LambdaScalar& twoc = gm.vals[static_cast<size_t>(id)];
        if (twoc.is_zero()) continue;  // u = 1 witnesses c = 0
        bool witnessed = false;
        if (fast) {
          // the only possible witness is com(g,f) itself
          auto cm = LambdaWord::com(cl[i], cl[j]);
          if (cm && index.count(cm->c.str()) > 0) witnessed = true;
        } else {
          auto it = bucket.find(twoc);
          if (it != bucket.end()) {
            for (long u : it->second) {
              auto pg = LambdaWord::mult(cl[u].inverse(), cl[i]);
              auto pf = LambdaWord::mult(cl[u].inverse(), cl[j]);
              if (!pg || !pf) continue;
              if (len[i] == len[u] + o.length(*pg) &&
                  len[j] == len[u] + o.length(*pf)) {
                witnessed = true;
                break;
              }
            }
          }
        }
        if (!witnessed) {
          r.status = AxiomStatus::NotWitnessed;
          r.witness = pair_witness(cl[i], cl[j], "no u in closure");
          done = true;
          break;
        }
      }
    }
    rep.results["L6"] = r;
  }

  return rep;
}

AxiomReport subadditivity_check(const GroupSample& s, const LengthOracle& o) {
  AxiomReport rep;
  long undef = 0;
  std::vector<LambdaWord> cl = sample_closure(s, &undef);
  rep.closure_size = static_cast<long>(cl.size());
  rep.undefined_products = undef;
  std::vector<LambdaScalar> len;
  for (const auto& w : cl) len.push_back(o.length(w));
  AxiomResult r;
  long n = static_cast<long>(cl.size());
  bool done = false;
  for (long i = 0; i < n && !done; ++i) {
    for (long j = 0; j < n; ++j) {
      auto p = LambdaWord::mult(cl[i], cl[j]);
      if (!p) {
        ++r.skipped;
        continue;
      }
      ++r.checked;
      if (len[i] + len[j] < o.length(*p)) {
        r.status = AxiomStatus::Fail;
        r.witness = pair_witness(cl[i], cl[j], "l(gf) > l(g) + l(f)");
        done = true;
        break;
      }
    }
  }
  rep.results["SUB"] = r;
  return rep;
}

}  // namespace geqlab
