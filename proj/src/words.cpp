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

#include "geqlab/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "geqlab/errors.hpp"

namespace geqlab {

namespace {

constexpr long kMaxExpandLetters = 200000;

long to_long(const BigInt& v) {
  if (v > BigInt(kMaxExpandLetters) || v < BigInt(-kMaxExpandLetters))
    throw BudgetExceeded("letter-scale quantity exceeds budget");
  return static_cast<long>(v);
}

long floor_mod(const BigInt& v, long n) {
  BigInt r = v % n;
  if (r < 0) r += n;
  return static_cast<long>(r);
}

std::vector<Letter> rotate_letters(const std::vector<Letter>& ls, long r) {
  long n = static_cast<long>(ls.size());
  r = ((r % n) + n) % n;
  std::vector<Letter> out;
  out.reserve(ls.size());
  for (long i = 0; i < n; ++i) out.push_back(ls[(i + r) % n]);
  return out;
}

std::vector<Letter> effective_base(const PowerSeg& p) {
  if (p.phases.empty()) return p.base;
  return rotate_letters(p.base, p.phases[0]);
}

// (primitive root, multiplier)
std::pair<std::vector<Letter>, long> primitive_root(
    const std::vector<Letter>& w) {
  size_t n = w.size();
  for (size_t d = 1; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (size_t i = d; i < n && ok; ++i) ok = (w[i] == w[i - d]);
    if (ok)
      return {std::vector<Letter>(w.begin(), w.begin() + d),
              static_cast<long>(n / d)};
  }
  return {w, 1};
}

Letter block_last_letter(const Block& b) {
  if (const auto* f = std::get_if<FiniteSeg>(&b)) return f->letters.back();
  const auto& p = std::get<PowerSeg>(b);
  return effective_base(p).back();
}

Letter block_first_letter(const Block& b) {
  if (const auto* f = std::get_if<FiniteSeg>(&b)) return f->letters.front();
  const auto& p = std::get<PowerSeg>(b);
  return effective_base(p).front();
}

std::optional<std::vector<Letter>> flatten(const LambdaWord& w) {
  std::vector<Letter> out;
  for (const Block& b : w.blocks()) {
    const auto* f = std::get_if<FiniteSeg>(&b);
    if (f == nullptr) return std::nullopt;
    out.insert(out.end(), f->letters.begin(), f->letters.end());
  }
  return out;
}

}  // namespace

LambdaScalar block_length(const Block& b, int rank) {
  if (const auto* f = std::get_if<FiniteSeg>(&b))
    return LambdaScalar::integer(rank, static_cast<long>(f->letters.size()));
  const auto& p = std::get<PowerSeg>(b);
  return p.exp * BigInt(p.base.size());
}

std::vector<Letter> invert_letters(const std::vector<Letter>& ls) {
  std::vector<Letter> out;
  out.reserve(ls.size());
  for (auto it = ls.rbegin(); it != ls.rend(); ++it)
    out.push_back(it->inverse());
  return out;
}

bool letters_reduced(const std::vector<Letter>& ls) {
  for (size_t i = 1; i < ls.size(); ++i)
    if (ls[i] == ls[i - 1].inverse()) return false;
  return true;
}

std::vector<Letter> least_rotation(const std::vector<Letter>& ls,
                                   size_t* start_out) {
  size_t n = ls.size();
  size_t best = 0;
  for (size_t s = 1; s < n; ++s) {
    for (size_t i = 0; i < n; ++i) {
      const Letter& a = ls[(s + i) % n];
      const Letter& b = ls[(best + i) % n];
      if (a < b) {
        best = s;
        break;
      }
      if (b < a) break;
    }
  }
  if (start_out) *start_out = best;
  return rotate_letters(ls, static_cast<long>(best));
}

// ---------------------------------------------------------------------------
// WordBuilder

void WordBuilder::push_letter(const Letter& l) {
  if (!blocks_.empty()) {
    Letter lst = block_last_letter(blocks_.back());
    bool clean = !(lst == l.inverse());
    if (!clean) reduced_ = false;
    if (auto* p = std::get_if<PowerSeg>(&blocks_.back());
        p != nullptr && clean && p->phases.empty() && p->base.size() == 1 &&
        p->base[0] == l) {
      p->exp += LambdaScalar::unit(rank_);
      return;
    }
    if (auto* f = std::get_if<FiniteSeg>(&blocks_.back())) {
      f->letters.push_back(l);
      if (clean) absorb_back();
      return;
    }
  }
  blocks_.push_back(FiniteSeg{{l}});
}

// Fold full periods at a [Power][Finite] junction into the exponent.
void WordBuilder::absorb_back() {
  if (blocks_.size() < 2) return;
  auto* f = std::get_if<FiniteSeg>(&blocks_.back());
  auto* p = std::get_if<PowerSeg>(&blocks_[blocks_.size() - 2]);
  if (f == nullptr || p == nullptr || !p->phases.empty()) return;
  size_t n = p->base.size();
  while (f->letters.size() >= n &&
         std::equal(f->letters.begin(), f->letters.begin() + n,
                    p->base.begin())) {
    f->letters.erase(f->letters.begin(), f->letters.begin() + n);
    p->exp += LambdaScalar::unit(rank_);
  }
  if (f->letters.empty()) blocks_.pop_back();
}

void WordBuilder::push_letters(const std::vector<Letter>& ls) {
  for (const Letter& l : ls) push_letter(l);
}

void WordBuilder::push_power(std::vector<Letter> base, LambdaScalar exp) {
  if (base.empty() || exp.is_zero()) return;
  LambdaScalar zero(rank_);
  if (exp < zero) {
    base = invert_letters(base);
    exp = -exp;
  }
  if (!letters_reduced(base) || base.front() == base.back().inverse())
    throw DomainError("power base must be freely and cyclically reduced");
  auto [root, mul] = primitive_root(base);
  base = std::move(root);
  if (mul != 1) exp = exp * BigInt(mul);
  long n = static_cast<long>(base.size());
  if (exp.height() <= 1) {
    long e = to_long(exp.coord(1));
    if (e * n > kMaxExpandLetters)
      throw BudgetExceeded("finite power expansion exceeds budget");
    for (long i = 0; i < e; ++i) push_letters(base);
    return;
  }
  size_t start = 0;
  std::vector<Letter> canon = least_rotation(base, &start);
  if (start == 0) {
    push_power_block_(std::move(canon), std::move(exp));
    return;
  }
  // base^exp = canon[n-start..) o canon^(exp-1) o canon[..n-start)
  std::vector<Letter> head(canon.end() - static_cast<long>(start), canon.end());
  std::vector<Letter> tail(canon.begin(),
                           canon.end() - static_cast<long>(start));
  push_letters(head);
  push_power_block_(std::move(canon), exp - LambdaScalar::unit(rank_));
  push_letters(tail);
}

void WordBuilder::push_power_block_(std::vector<Letter> q, LambdaScalar exp) {
  while (!blocks_.empty()) {
    Letter lst = block_last_letter(blocks_.back());
    if (lst == q.front().inverse()) {
      reduced_ = false;
      break;
    }
    if (auto* p = std::get_if<PowerSeg>(&blocks_.back())) {
      if (p->phases.empty() && p->base == q) {
        p->exp += exp;
        return;
      }
      break;
    }
    auto* f = std::get_if<FiniteSeg>(&blocks_.back());
    size_t n = q.size();
    while (f->letters.size() >= n &&
           std::equal(f->letters.end() - static_cast<long>(n),
                      f->letters.end(), q.begin())) {
      f->letters.erase(f->letters.end() - static_cast<long>(n),
                       f->letters.end());
      exp += LambdaScalar::unit(rank_);
    }
    if (f->letters.empty()) {
      blocks_.pop_back();
      continue;  // re-examine junction with the new last block
    }
    break;
  }
  blocks_.push_back(PowerSeg{std::move(q), std::move(exp), {}});
}

void WordBuilder::push_block(const Block& b) {
  if (const auto* f = std::get_if<FiniteSeg>(&b)) {
    push_letters(f->letters);
    return;
  }
  const auto& p = std::get<PowerSeg>(b);
  push_power(effective_base(p), p.exp);
}

void WordBuilder::push_word(const LambdaWord& w) {
  if (!w.reduced()) reduced_ = false;
  for (const Block& b : w.blocks()) push_block(b);
}

LambdaWord WordBuilder::take() {
  LambdaWord w;
  w.rank_ = rank_;
  LambdaScalar len(rank_);
  for (const Block& b : blocks_) len += block_length(b, rank_);
  w.len_ = std::move(len);
  w.blocks_ = std::move(blocks_);
  w.reduced_ = reduced_;
  blocks_.clear();
  reduced_ = true;
  return w;
}

// ---------------------------------------------------------------------------
// LambdaWord constructors and simple accessors

LambdaWord LambdaWord::empty(int rank) {
  LambdaWord w;
  w.rank_ = rank;
  w.len_ = LambdaScalar(rank);
  return w;
}

LambdaWord LambdaWord::letters(int rank, std::vector<Letter> ls) {
  WordBuilder b(rank);
  b.push_letters(ls);
  return b.take();
}

LambdaWord LambdaWord::single(int rank, const std::string& sym, int sign) {
  return letters(rank, {Letter(sym, sign)});
}

LambdaWord LambdaWord::power(int rank, std::vector<Letter> base,
                             const LambdaScalar& exp) {
  WordBuilder b(rank);
  b.push_power(std::move(base), exp);
  return b.take();
}

bool LambdaWord::cyclically_reduced() const {
  if (!reduced_) return false;
  if (blocks_.empty()) return true;
  return !(block_first_letter(blocks_.front()) ==
           block_last_letter(blocks_.back()).inverse());
}

std::optional<Letter> LambdaWord::first_letter() const {
  if (blocks_.empty()) return std::nullopt;
  return block_first_letter(blocks_.front());
}

std::optional<Letter> LambdaWord::last_letter() const {
  if (blocks_.empty()) return std::nullopt;
  return block_last_letter(blocks_.back());
}

Letter LambdaWord::letter_at(const LambdaScalar& pos) const {
  LambdaScalar one = LambdaScalar::unit(rank_);
  if (pos < one || len_ < pos)
    throw DomainError("letter position out of range");
  LambdaScalar o = pos;  // 1-based offset within remaining suffix
  for (const Block& b : blocks_) {
    LambdaScalar bl = block_length(b, rank_);
    if (!(bl < o)) {
      if (const auto* f = std::get_if<FiniteSeg>(&b)) {
        long idx = to_long(o.coord(1));
        return f->letters[static_cast<size_t>(idx - 1)];
      }
      const auto& p = std::get<PowerSeg>(b);
      std::vector<Letter> eff = effective_base(p);
      long n = static_cast<long>(eff.size());
      return eff[floor_mod(o.coord(1) - 1, n)];
    }
    o -= bl;
  }
  throw DomainError("letter position out of range");
}

LambdaWord LambdaWord::inverse() const {
  WordBuilder b(rank_);
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
    if (const auto* f = std::get_if<FiniteSeg>(&*it)) {
      b.push_letters(invert_letters(f->letters));
    } else {
      const auto& p = std::get<PowerSeg>(*it);
      b.push_power(invert_letters(effective_base(p)), p.exp);
    }
  }
  LambdaWord w = b.take();
  if (!reduced_) w.reduced_ = false;
  return w;
}

LambdaWord LambdaWord::concat(const LambdaWord& u, const LambdaWord& v) {
  if (u.rank_ != v.rank_ && !u.is_empty() && !v.is_empty())
    throw RankMismatch("concat of words of different rank");
  WordBuilder b(u.is_empty() ? v.rank_ : u.rank_);
  b.push_word(u);
  b.push_word(v);
  return b.take();
}

// ---------------------------------------------------------------------------
// Cursor walk shared by com / subword

namespace {

struct Walk {
  const LambdaWord* w;
  size_t bi = 0;
  LambdaScalar off;  // 0-based offset within current block

  explicit Walk(const LambdaWord& ww) : w(&ww), off(LambdaScalar(ww.rank())) {}
  bool done() const { return bi >= w->blocks().size(); }
  const Block& blk() const { return w->blocks()[bi]; }
  LambdaScalar rem() const {
    return block_length(blk(), w->rank()) - off;
  }
  void advance(const LambdaScalar& d) {
    off += d;
    if (!(off < block_length(blk(), w->rank()))) {
      ++bi;
      off = LambdaScalar(w->rank());
    }
  }
  void advance_long(long d) { advance(LambdaScalar::integer(w->rank(), d)); }
};

// Emit the first m letters of the tail of a power block whose (effective)
// base starts at phase `start1 mod n`. Fails when m does not split by n.
bool take_from_power(const std::vector<Letter>& base, const BigInt& start1,
                     const LambdaScalar& m, WordBuilder& b) {
  long n = static_cast<long>(base.size());
  std::vector<Letter> rotb = rotate_letters(base, floor_mod(start1, n));
  LambdaScalar q(m.rank());
  long s = 0;
  if (!m.split_by(n, q, s)) return false;
  if (!q.is_zero()) b.push_power(rotb, q);
  b.push_letters(std::vector<Letter>(rotb.begin(), rotb.begin() + s));
  return true;
}

// Append the tail of `cur` (from its offset to the end of the word).
bool take_rest(Walk cur, WordBuilder& b) {
  if (!cur.done() && !cur.off.is_zero()) {
    const Block& blk = cur.blk();
    if (const auto* f = std::get_if<FiniteSeg>(&blk)) {
      long idx = static_cast<long>(cur.off.coord(1));
      b.push_letters(std::vector<Letter>(f->letters.begin() + idx,
                                         f->letters.end()));
    } else {
      const auto& p = std::get<PowerSeg>(blk);
      if (!take_from_power(effective_base(p), cur.off.coord(1), cur.rem(), b))
        return false;
    }
    ++cur.bi;
    cur.off = LambdaScalar(cur.w->rank());
  }
  for (; cur.bi < cur.w->blocks().size(); ++cur.bi)
    b.push_block(cur.w->blocks()[cur.bi]);
  return true;
}

long capped_scan_limit(long want, const Walk& a) {
  LambdaScalar r = a.rem();
  if (r < LambdaScalar::integer(a.w->rank(), want))
    return static_cast<long>(r.coord(1));
  return want;
}

Letter periodic_letter(const std::vector<Letter>& eff, long r0, long t) {
  long n = static_cast<long>(eff.size());
  return eff[((r0 + t) % n + n) % n];
}

}  // namespace

std::optional<ComResult> LambdaWord::com(const LambdaWord& u,
                                         const LambdaWord& v) {
  if (!u.reduced_ || !v.reduced_)
    throw DomainError("com requires reduced words");
  if (u.rank_ != v.rank_) throw RankMismatch("com of words of different rank");
  int rank = u.rank_;

  WordBuilder cb(rank);
  Walk a(u), b(v);
  bool mismatch = false;
  while (!a.done() && !b.done() && !mismatch) {
    const auto* fa = std::get_if<FiniteSeg>(&a.blk());
    const auto* fb = std::get_if<FiniteSeg>(&b.blk());
    if (fa != nullptr && fb != nullptr) {
      long ia = static_cast<long>(a.off.coord(1));
      long ib = static_cast<long>(b.off.coord(1));
      long m = std::min(static_cast<long>(fa->letters.size()) - ia,
                        static_cast<long>(fb->letters.size()) - ib);
      long t = 0;
      while (t < m && fa->letters[ia + t] == fb->letters[ib + t]) {
        cb.push_letter(fa->letters[ia + t]);
        ++t;
      }
      a.advance_long(t);
      b.advance_long(t);
      if (t < m) mismatch = true;
    } else if (fa != nullptr || fb != nullptr) {
      // one finite, one power: letter scan bounded by the finite side
      const Walk& pw = (fa != nullptr) ? b : a;
      const auto* fin = (fa != nullptr) ? fa : fb;
      long fi = static_cast<long>(((fa != nullptr) ? a : b).off.coord(1));
      const auto& p = std::get<PowerSeg>(pw.blk());
      std::vector<Letter> eff = effective_base(p);
      long r0 = floor_mod(pw.off.coord(1), static_cast<long>(eff.size()));
      long m = static_cast<long>(fin->letters.size()) - fi;
      m = capped_scan_limit(m, pw);
      long t = 0;
      while (t < m && fin->letters[fi + t] == periodic_letter(eff, r0, t)) {
        cb.push_letter(fin->letters[fi + t]);
        ++t;
      }
      a.advance_long(t);
      b.advance_long(t);
      if (t < m) mismatch = true;
    } else {
      const auto& pa = std::get<PowerSeg>(a.blk());
      const auto& pb = std::get<PowerSeg>(b.blk());
      std::vector<Letter> ea = effective_base(pa);
      std::vector<Letter> eb = effective_base(pb);
      long na = static_cast<long>(ea.size());
      long nb = static_cast<long>(eb.size());
      long ra = floor_mod(a.off.coord(1), na);
      long rb = floor_mod(b.off.coord(1), nb);
      if (na == nb && rotate_letters(ea, ra) == rotate_letters(eb, rb)) {
        LambdaScalar ra_len = a.rem();
        LambdaScalar rb_len = b.rem();
        LambdaScalar m = (ra_len < rb_len) ? ra_len : rb_len;
        if (!take_from_power(ea, a.off.coord(1), m, cb)) return std::nullopt;
        a.advance(m);
        b.advance(m);
      } else {
        long limit = na + nb;
        limit = capped_scan_limit(limit, a);
        limit = capped_scan_limit(limit, b);
        long t = 0;
        while (t < limit &&
               periodic_letter(ea, ra, t) == periodic_letter(eb, rb, t)) {
          cb.push_letter(periodic_letter(ea, ra, t));
          ++t;
        }
        size_t abi = a.bi, bbi = b.bi;
        a.advance_long(t);
        b.advance_long(t);
        if (t < limit) {
          mismatch = true;
        } else if (a.bi == abi && b.bi == bbi) {
          // distinct primitive periods cannot agree this long
          throw Error("internal: periodic agreement exceeded its finite bound");
        }
        // else: a block boundary was reached first; keep walking
      }
    }
  }

  WordBuilder ub(rank), vb(rank);
  if (!take_rest(a, ub) || !take_rest(b, vb)) return std::nullopt;
  return ComResult{cb.take(), ub.take(), vb.take()};
}

std::optional<LambdaWord> LambdaWord::mult(const LambdaWord& u,
                                           const LambdaWord& v) {
  auto cm = com(u.inverse(), v);
  if (!cm) return std::nullopt;
  return concat(cm->u_rest.inverse(), cm->v_rest);
}

std::optional<LambdaWord> LambdaWord::subword(const LambdaScalar& from,
                                              const LambdaScalar& to) const {
  if (!reduced_) throw DomainError("subword requires a reduced word");
  LambdaScalar one = LambdaScalar::unit(rank_);
  if (from < one || to < from || len_ + one < to)
    throw DomainError("subword range out of bounds");
  Walk cur(*this);
  LambdaScalar skip = from - one;
  while (!skip.is_zero()) {
    LambdaScalar r = cur.rem();
    if (r < skip || r == skip) {
      skip -= r;
      cur.advance(r);
    } else {
      cur.off += skip;
      break;
    }
  }
  WordBuilder b(rank_);
  LambdaScalar need = to - from;
  while (!need.is_zero()) {
    LambdaScalar r = cur.rem();
    LambdaScalar m = (r < need) ? r : need;
    const Block& blk = cur.blk();
    if (const auto* f = std::get_if<FiniteSeg>(&blk)) {
      long idx = static_cast<long>(cur.off.coord(1));
      long mm = to_long(m.coord(1));
      b.push_letters(std::vector<Letter>(f->letters.begin() + idx,
                                         f->letters.begin() + idx + mm));
    } else {
      const auto& p = std::get<PowerSeg>(blk);
      if (!take_from_power(effective_base(p), cur.off.coord(1), m, b))
        return std::nullopt;
    }
    need -= m;
    cur.advance(m);
  }
  return b.take();
}

std::optional<CyclicDecomposition> LambdaWord::cyclic_decomposition() const {
  if (!reduced_) throw DomainError("cyclic decomposition of unreduced word");
  if (is_empty()) return CyclicDecomposition{*this, *this};
  auto m = com(*this, inverse());
  if (!m) return std::nullopt;
  LambdaWord c = m->c.inverse();
  auto core = mult(m->u_rest, c.inverse());
  if (!core) return std::nullopt;
  if (!core->cyclically_reduced() || core->is_empty())
    throw Error("internal: cyclic core is not cyclically reduced");
  return CyclicDecomposition{std::move(c), std::move(*core)};
}

PeriodicityResult::Kind LambdaWord::periodicity(const LambdaWord& u,
                                                long* k_out,
                                                LambdaWord* u1_out) const {
  if (!reduced_) throw DomainError("periodicity of unreduced word");
  if (u.is_empty() || !u.cyclically_reduced())
    throw DomainError("period must be nonempty and cyclically reduced");
  if (is_empty()) return PeriodicityResult::None;
  auto t1 = mult(inverse(), u);
  if (!t1) return PeriodicityResult::None;
  auto v = mult(*t1, *this);
  if (!v) return PeriodicityResult::None;
  if (!(v->length() == u.length())) return PeriodicityResult::None;
  if (height() > u.height()) return PeriodicityResult::Unbounded;
  if (height() < u.height()) return PeriodicityResult::None;
  // equal heights: count whole copies of u at the front
  long k = 0;
  LambdaWord r = *this;
  while (!(r.length() < u.length())) {
    auto cm = com(r, u);
    if (!cm || !cm->v_rest.is_empty()) break;
    r = cm->u_rest;
    ++k;
    if (k > kMaxExpandLetters)
      throw BudgetExceeded("periodicity stripping exceeded budget");
  }
  auto pf = com(u, r);
  if (!pf || !pf->v_rest.is_empty()) return PeriodicityResult::None;
  if (k < 2) return PeriodicityResult::None;
  if (k_out) *k_out = k;
  if (u1_out) *u1_out = r;
  return PeriodicityResult::Bounded;
}

std::set<std::string> LambdaWord::symbols() const {
  std::set<std::string> out;
  for (const Block& b : blocks_) {
    if (const auto* f = std::get_if<FiniteSeg>(&b)) {
      for (const Letter& l : f->letters) out.insert(l.sym);
    } else {
      for (const Letter& l : std::get<PowerSeg>(b).base) out.insert(l.sym);
    }
  }
  return out;
}

std::string LambdaWord::str() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << ' ';
    first = false;
  };
  for (const Block& b : blocks_) {
    if (const auto* f = std::get_if<FiniteSeg>(&b)) {
      for (const Letter& l : f->letters) {
        sep();
        os << l.str();
      }
    } else {
      const auto& p = std::get<PowerSeg>(b);
      sep();
      os << '(';
      bool bf = true;
      for (const Letter& l : effective_base(p)) {
        if (!bf) os << ' ';
        bf = false;
        os << l.str();
      }
      os << ")^" << p.exp.str();
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser for the word grammar:
//   word   := atom*
//   atom   := ident | ident^-1 | ident^int | ident^vector | (word)^exponent
//   vector := [a1,...,an]
// Integer exponents are sugar for the corresponding height-one vector.

namespace {

struct WordParser {
  const std::string& s;
  size_t i = 0;
  int rank;
  const std::set<std::string>* alpha;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    ws();
    return i >= s.size();
  }
  [[noreturn]] void fail(const std::string& m) const {
    throw ParseError("word parse: " + m + " (offset " + std::to_string(i) +
                     " in \"" + s + "\")");
  }
  char peek() const { return s[i]; }

  std::string ident() {
    size_t j = i;
    auto ok_first = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto ok_rest = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (j >= s.size() || !ok_first(s[j])) fail("expected identifier");
    ++j;
    while (j < s.size() && ok_rest(s[j])) ++j;
    std::string out = s.substr(i, j - i);
    i = j;
    return out;
  }

  BigInt integer() {
    size_t j = i;
    if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
    size_t d0 = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == d0) fail("expected integer");
    BigInt v(s.substr(i, j - i));
    i = j;
    return v;
  }

  LambdaScalar vector_lit() {
    if (i >= s.size() || s[i] != '[') fail("expected vector literal");
    size_t close = s.find(']', i);
    if (close == std::string::npos) fail("unterminated vector literal");
    std::string lit = s.substr(i, close - i + 1);
    i = close + 1;
    return LambdaScalar::parse(lit, rank);
  }

  LambdaScalar exponent() {
    ws();
    if (i < s.size() && s[i] == '[') return vector_lit();
    return LambdaScalar::integer(rank, integer());
  }

  void check_symbol(const std::string& sym) const {
    if (alpha != nullptr && alpha->count(sym) == 0)
      throw ParseError("word parse: unknown symbol \"" + sym + "\"");
  }

  void atom(WordBuilder& b) {
    ws();
    if (s[i] == '(') {
      ++i;
      WordBuilder inner(rank);
      while (!eof() && peek() != ')') atom(inner);
      if (eof()) fail("unterminated parenthesis");
      ++i;  // ')'
      ws();
      if (i >= s.size() || s[i] != '^') fail("parenthesized word needs ^exp");
      ++i;
      LambdaScalar e = exponent();
      LambdaWord w = inner.take();
      if (!w.reduced())
        fail("power of an unreduced word");
      auto fl = flatten(w);
      if (fl.has_value()) {
        if (fl->empty()) return;  // ()^e is empty
        try {
          b.push_power(*fl, e);
        } catch (const DomainError& err) {
          fail(err.what());
        }
        return;
      }
      // base itself contains limit powers: only integer exponents stay
      // representable by plain repetition
      if (e.height() > 1) fail("nested limit power is not representable");
      long k = to_long(e.coord(1));
      LambdaWord base = (k < 0) ? w.inverse() : w;
      for (long t = 0; t < std::abs(k); ++t) b.push_word(base);
      return;
    }
    std::string sym = ident();
    check_symbol(sym);
    ws();
    if (i < s.size() && s[i] == '^') {
      ++i;
      LambdaScalar e = exponent();
      try {
        b.push_power({Letter(sym, 1)}, e);
      } catch (const DomainError& err) {
        fail(err.what());
      }
      return;
    }
    b.push_letter(Letter(sym, 1));
  }
};

}  // namespace

LambdaWord LambdaWord::parse(int rank, const std::string& text,
                             const std::set<std::string>* alphabet) {
  WordParser p{text, 0, rank, alphabet};
  WordBuilder b(rank);
  while (!p.eof()) {
    if (p.peek() == ')') p.fail("unbalanced ')'");
    p.atom(b);
  }
  return b.take();
}

}  // namespace geqlab
