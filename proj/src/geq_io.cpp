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

#include "geqlab/io.hpp"

#include <fstream>
#include <sstream>

#include "geqlab/errors.hpp"
#include "nlohmann/json.hpp"

namespace geqlab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string t;
  while (is >> t) {
    if (t[0] == '#') break;
    out.push_back(t);
  }
  return out;
}

long to_long_tok(const std::string& t, const std::string& what) {
  try {
    size_t pos = 0;
    long v = std::stol(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trail");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected integer for " + what + ", got \"" + t + "\"");
  }
}

long item_index(const std::string& t) {
  if (t.size() < 2 || t[0] != 'h')
    throw ParseError("expected item name hN, got \"" + t + "\"");
  return to_long_tok(t.substr(1), "item index");
}

int parse_height_tok(const std::string& t) {
  std::string s = t;
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']')
    s = s.substr(1, s.size() - 2);
  return static_cast<int>(to_long_tok(s, "height"));
}

}  // namespace

std::string format_geq(const GenEq& eq) {
  std::ostringstream os;
  os << "geq rank=" << eq.rank << " items=" << eq.rho << "\n";
  for (const BaseRec& b : eq.bases)
    os << "base " << b.id << " " << b.alpha << " " << b.beta << " "
       << (b.eps > 0 ? "+1" : "-1") << " dual " << b.dual << "\n";
  for (const Connection& c : eq.connections)
    os << "conn " << c.p << " " << c.lambda << " " << c.q << "\n";
  for (const Section& s : eq.sections)
    os << "section " << s.lo << " " << s.hi << " "
       << (s.active ? "active" : "inactive") << "\n";
  for (const auto& [i, h] : eq.item_heights)
    os << "height h" << i << " [" << h << "]\n";
  for (const auto& [i, l] : eq.item_lengths)
    os << "length h" << i << " " << l.str() << "\n";
  return os.str();
}

GenEq parse_geq(const std::string& text) {
  GenEq eq;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks[0] != "geq" || toks.size() != 3)
        throw ParseError("first line must be: geq rank=N items=M");
      for (size_t i = 1; i <= 2; ++i) {
        const std::string& t = toks[i];
        auto pos = t.find('=');
        if (pos == std::string::npos)
          throw ParseError("malformed header field \"" + t + "\"");
        std::string key = t.substr(0, pos);
        long val = to_long_tok(t.substr(pos + 1), key);
        if (key == "rank")
          eq.rank = static_cast<int>(val);
        else if (key == "items")
          eq.rho = val;
        else
          throw ParseError("unknown header field \"" + key + "\"");
      }
      header = true;
      continue;
    }
    const std::string& kw = toks[0];
    if (kw == "base") {
      if (toks.size() != 7 || toks[5] != "dual")
        throw ParseError("base line: base ID alpha beta eps dual ID");
      BaseRec b;
      b.id = toks[1];
      b.alpha = to_long_tok(toks[2], "alpha");
      b.beta = to_long_tok(toks[3], "beta");
      long e = to_long_tok(toks[4], "eps");
      b.eps = static_cast<int>(e);
      b.dual = toks[6];
      eq.bases.push_back(std::move(b));
    } else if (kw == "conn") {
      if (toks.size() != 4) throw ParseError("conn line: conn p base q");
      Connection c;
      c.p = to_long_tok(toks[1], "p");
      c.lambda = toks[2];
      c.q = to_long_tok(toks[3], "q");
      eq.connections.push_back(std::move(c));
    } else if (kw == "section") {
      if (toks.size() != 4)
        throw ParseError("section line: section lo hi active|inactive");
      Section s;
      s.lo = to_long_tok(toks[1], "lo");
      s.hi = to_long_tok(toks[2], "hi");
      if (toks[3] == "active")
        s.active = true;
      else if (toks[3] == "inactive")
        s.active = false;
      else
        throw ParseError("section flag must be active or inactive");
      eq.sections.push_back(s);
    } else if (kw == "height") {
      if (toks.size() != 3) throw ParseError("height line: height hN [k]");
      eq.item_heights[item_index(toks[1])] = parse_height_tok(toks[2]);
    } else if (kw == "length") {
      if (toks.size() != 3) throw ParseError("length line: length hN [v]");
      eq.item_lengths.emplace(item_index(toks[1]),
                              LambdaScalar::parse(toks[2], eq.rank));
    } else {
      throw ParseError("unknown keyword \"" + kw + "\"");
    }
  }
  if (!header) throw ParseError("empty generalized-equation file");
  return eq;
}

std::string geq_to_json(const GenEq& eq) {
  ordered_json j;
  j["format"] = "geq";
  j["rank"] = eq.rank;
  j["items"] = eq.rho;
  j["bases"] = ordered_json::array();
  for (const BaseRec& b : eq.bases)
    j["bases"].push_back(ordered_json{{"id", b.id},
                                      {"alpha", b.alpha},
                                      {"beta", b.beta},
                                      {"eps", b.eps},
                                      {"dual", b.dual}});
  j["connections"] = ordered_json::array();
  for (const Connection& c : eq.connections)
    j["connections"].push_back(
        ordered_json{{"p", c.p}, {"lambda", c.lambda}, {"q", c.q}});
  j["sections"] = ordered_json::array();
  for (const Section& s : eq.sections)
    j["sections"].push_back(
        ordered_json{{"lo", s.lo}, {"hi", s.hi}, {"active", s.active}});
  j["heights"] = ordered_json::object();
  for (const auto& [i, h] : eq.item_heights)
    j["heights"]["h" + std::to_string(i)] = h;
  j["lengths"] = ordered_json::object();
  for (const auto& [i, l] : eq.item_lengths) {
    ordered_json v = ordered_json::array();
    for (int k = 1; k <= l.rank(); ++k)
      v.push_back(static_cast<long long>(l.coord(k)));
    j["lengths"]["h" + std::to_string(i)] = v;
  }
  return j.dump(2) + "\n";
}

GenEq geq_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  try {
    GenEq eq;
    eq.rank = j.at("rank").get<int>();
    eq.rho = j.at("items").get<long>();
    for (const auto& b : j.at("bases")) {
      BaseRec r;
      r.id = b.at("id").get<std::string>();
      r.alpha = b.at("alpha").get<long>();
      r.beta = b.at("beta").get<long>();
      r.eps = b.at("eps").get<int>();
      r.dual = b.at("dual").get<std::string>();
      eq.bases.push_back(std::move(r));
    }
    for (const auto& c : j.at("connections")) {
      Connection r;
      r.p = c.at("p").get<long>();
      r.lambda = c.at("lambda").get<std::string>();
      r.q = c.at("q").get<long>();
      eq.connections.push_back(std::move(r));
    }
    for (const auto& s : j.at("sections")) {
      Section r;
      r.lo = s.at("lo").get<long>();
      r.hi = s.at("hi").get<long>();
      r.active = s.at("active").get<bool>();
      eq.sections.push_back(r);
    }
    if (j.contains("heights"))
      for (const auto& [k, v] : j.at("heights").items())
        eq.item_heights[item_index(k)] = v.get<int>();
    if (j.contains("lengths"))
      for (const auto& [k, v] : j.at("lengths").items()) {
        LambdaScalar l(eq.rank);
        if (static_cast<int>(v.size()) != eq.rank)
          throw ParseError("length vector width differs from rank");
        for (int t = 1; t <= eq.rank; ++t)
          l.coord(t) = BigInt(v.at(static_cast<size_t>(t - 1)).get<long long>());
        eq.item_lengths.emplace(item_index(k), std::move(l));
      }
    return eq;
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("bad geq JSON: ") + e.what());
  }
}

std::string format_solution(const Solution& u) {
  std::ostringstream os;
  for (const auto& [i, w] : u.items) os << 'h' << i << " = " << w.str() << "\n";
  return os.str();
}

Solution parse_solution(const std::string& text, int rank) {
  Solution u;
  u.rank = rank;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eqpos = line.find('=');
    if (eqpos == std::string::npos) {
      if (!tokens_of(line).empty())
        throw ParseError("solution line must be: hN = word");
      continue;
    }
    std::istringstream head(line.substr(0, eqpos));
    std::string name;
    head >> name;
    std::string rest;
    if (head >> rest) throw ParseError("solution line must be: hN = word");
    long idx = item_index(name);
    if (u.items.count(idx))
      throw ParseError("item h" + std::to_string(idx) + " assigned twice");
    u.items.emplace(idx, LambdaWord::parse(rank, line.substr(eqpos + 1)));
  }
  return u;
}

PresentationInput parse_presentation(const std::string& text) {
  PresentationInput p;
  std::istringstream is(text);
  std::string line;
  bool have_rank = false;
  std::set<std::string> gens;
  std::vector<std::pair<std::string, std::string>> embeds;  // parsed at end
  std::vector<std::string> relator_lines;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "rank") {
      std::string t;
      if (!(ls >> t)) throw ParseError("rank line: rank N");
      p.rank = static_cast<int>(to_long_tok(t, "rank"));
      have_rank = true;
    } else if (kw == "generators") {
      std::string g;
      while (ls >> g) {
        if (!gens.insert(g).second)
          throw ParseError("duplicate generator " + g);
        p.generators.push_back(g);
      }
    } else if (kw == "relator") {
      std::string rest;
      std::getline(ls, rest);
      relator_lines.push_back(rest);
    } else if (kw == "embed") {
      std::string g, eqsign;
      if (!(ls >> g >> eqsign) || eqsign != "=")
        throw ParseError("embed line: embed x = word");
      std::string rest;
      std::getline(ls, rest);
      embeds.emplace_back(g, rest);
    } else {
      throw ParseError("unknown presentation keyword \"" + kw + "\"");
    }
  }
  if (!have_rank) throw ParseError("presentation needs a rank line");
  if (p.generators.empty()) throw ParseError("presentation has no generators");
  for (const auto& rl : relator_lines) {
    LambdaWord w = LambdaWord::parse(p.rank, rl, &gens);
    std::vector<Letter> ls;
    for (const Block& b : w.blocks()) {
      const auto* f = std::get_if<FiniteSeg>(&b);
      if (f == nullptr)
        throw ParseError("relators must be finite words over the generators");
      ls.insert(ls.end(), f->letters.begin(), f->letters.end());
    }
    if (ls.empty()) throw ParseError("empty relator");
    p.relators.push_back(std::move(ls));
  }
  for (const auto& [g, wtext] : embeds) {
    if (gens.count(g) == 0)
      throw ParseError("embedding for unknown generator " + g);
    if (p.embedding.count(g))
      throw ParseError("generator " + g + " embedded twice");
    p.embedding.emplace(g, LambdaWord::parse(p.rank, wtext));
  }
  for (const std::string& g : p.generators)
    if (p.embedding.count(g) == 0)
      throw ParseError("generator " + g + " has no embedding");
  return p;
}

std::string format_presentation(const PresentationInput& p) {
  std::ostringstream os;
  os << "rank " << p.rank << "\n";
  os << "generators";
  for (const auto& g : p.generators) os << ' ' << g;
  os << "\n";
  for (const auto& r : p.relators) {
    os << "relator";
    for (const Letter& l : r) os << ' ' << l.str();
    os << "\n";
  }
  for (const auto& g : p.generators) {
    auto it = p.embedding.find(g);
    if (it != p.embedding.end())
      os << "embed " << g << " = " << it->second.str() << "\n";
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("failed writing " + path);
}

}  // namespace geqlab
