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

#ifndef GEQLAB_WORDS_HPP
#define GEQLAB_WORDS_HPP

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "geqlab/ordered.hpp"

namespace geqlab {

struct Letter {
  std::string sym;
  int sign = 1;  // +1 or -1

  Letter() = default;
  Letter(std::string s, int sg) : sym(std::move(s)), sign(sg) {}
  Letter inverse() const { return Letter(sym, -sign); }
  bool operator==(const Letter& o) const = default;
  bool operator<(const Letter& o) const {
    return sym != o.sym ? sym < o.sym : sign > o.sign;
  }
  std::string str() const { return sign > 0 ? sym : sym + "^-1"; }
};

struct FiniteSeg {
  std::vector<Letter> letters;
  bool operator==(const FiniteSeg&) const = default;
};

// A p-periodic stretch of non-Archimedean length exp*|base|. Blocks are kept
// aligned: the letter at offset o from the block start depends only on the
// lowest component of o, letter = base[(o_1) mod |base|]. The phases list can
// override the alignment of interior limit components; every operation here
// emits aligned blocks (empty list), folding alignment into base rotations at
// cut points, so a nonempty list only survives direct construction.
struct PowerSeg {
  std::vector<Letter> base;  // freely and cyclically reduced, primitive
  LambdaScalar exp;          // positive, height >= 2
  std::vector<long> phases;
  bool operator==(const PowerSeg&) const = default;
};

using Block = std::variant<FiniteSeg, PowerSeg>;

struct ComResult;
struct CyclicDecomposition;

struct PeriodicityResult {
  enum Kind { None, Bounded, Unbounded };
};

// Reduced word over X^{+-} with values in [1, alpha_w] for alpha_w in Z^n,
// stored in block form. Words built by concat may be unreduced; they keep
// their blocks verbatim and are rejected by the reduced-only operations.
class LambdaWord {
 public:
  LambdaWord() = default;
  static LambdaWord empty(int rank);
  static LambdaWord letters(int rank, std::vector<Letter> ls);
  static LambdaWord single(int rank, const std::string& sym, int sign = 1);
  // (base)^exp; base must be freely and cyclically reduced. Negative exp
  // inverts the base, height-1 exp expands to letters.
  static LambdaWord power(int rank, std::vector<Letter> base,
                          const LambdaScalar& exp);

  int rank() const { return rank_; }
  const LambdaScalar& length() const { return len_; }
  int height() const { return len_.height(); }
  bool is_empty() const { return blocks_.empty(); }
  bool reduced() const { return reduced_; }
  bool cyclically_reduced() const;
  const std::vector<Block>& blocks() const { return blocks_; }

  std::optional<Letter> first_letter() const;
  std::optional<Letter> last_letter() const;
  // 1-based position, 1 <= pos <= |w|.
  Letter letter_at(const LambdaScalar& pos) const;

  LambdaWord inverse() const;
  // Plain concatenation: |uv| = |u| + |v|; the result is reduced (and
  // canonical) only when the junction is reduced.
  static LambdaWord concat(const LambdaWord& u, const LambdaWord& v);

  // Longest common initial segment c with u = c o u', v = c o v'. Empty when
  // a residual piece leaves the block-representable fragment.
  static std::optional<ComResult> com(const LambdaWord& u, const LambdaWord& v);
  // Partial product u * v = u'^-1 o v' where com(u^-1, v) = (c, u', v').
  static std::optional<LambdaWord> mult(const LambdaWord& u,
                                        const LambdaWord& v);
  // Letters of positions [from, to), 1 <= from <= to <= |w|+1.
  std::optional<LambdaWord> subword(const LambdaScalar& from,
                                    const LambdaScalar& to) const;
  // v = c^-1 o core o c with core cyclically reduced; empty when the word has
  // no representable decomposition.
  std::optional<CyclicDecomposition> cyclic_decomposition() const;
  PeriodicityResult::Kind periodicity(const LambdaWord& u, long* k_out = nullptr,
                                      LambdaWord* u1_out = nullptr) const;

  std::set<std::string> symbols() const;
  std::string str() const;
  static LambdaWord parse(int rank, const std::string& text,
                          const std::set<std::string>* alphabet = nullptr);

  bool operator==(const LambdaWord& o) const {
    return rank_ == o.rank_ && reduced_ == o.reduced_ && blocks_ == o.blocks_;
  }

 private:
  friend class WordBuilder;
  int rank_ = 0;
  std::vector<Block> blocks_;
  LambdaScalar len_;
  bool reduced_ = true;
};

struct ComResult {
  LambdaWord c;       // common initial segment
  LambdaWord u_rest;  // u = c o u_rest
  LambdaWord v_rest;  // v = c o v_rest
};

struct CyclicDecomposition {
  LambdaWord c;
  LambdaWord core;
};

// Incremental canonical-form assembler for reduced words.
class WordBuilder {
 public:
  explicit WordBuilder(int rank) : rank_(rank) {}
  void push_letter(const Letter& l);
  void push_letters(const std::vector<Letter>& ls);
  // base arbitrary rotation of a primitive cyclically reduced word; exp any
  // sign/height, normalized here.
  void push_power(std::vector<Letter> base, LambdaScalar exp);
  void push_block(const Block& b);
  void push_word(const LambdaWord& w);
  LambdaWord take();

 private:
  void absorb_back();
  void push_power_block_(std::vector<Letter> q, LambdaScalar exp);
  int rank_;
  std::vector<Block> blocks_;
  bool reduced_ = true;
};

LambdaScalar block_length(const Block& b, int rank);
std::vector<Letter> invert_letters(const std::vector<Letter>& ls);
bool letters_reduced(const std::vector<Letter>& ls);
std::vector<Letter> least_rotation(const std::vector<Letter>& ls, size_t* shift);

}  // namespace geqlab

#endif
