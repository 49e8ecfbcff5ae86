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

#ifndef GEQLAB_ORDERED_HPP
#define GEQLAB_ORDERED_HPP

#include <compare>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "geqlab/errors.hpp"

namespace geqlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class LambdaRational;

// Element of Lambda = Z^n under the right-lexicographic order: the highest
// nonzero component decides comparisons, so (1,0,...,0) is the minimal
// positive element. Component indices are 1-based in the API, matching the
// vector literal [a1,...,an].
class LambdaScalar {
 public:
  LambdaScalar() = default;
  explicit LambdaScalar(int rank) : c_(static_cast<size_t>(rank)) {}
  explicit LambdaScalar(std::vector<BigInt> coords) : c_(std::move(coords)) {}

  static LambdaScalar unit(int rank);
  static LambdaScalar integer(int rank, const BigInt& k);
  static LambdaScalar level(int rank, int lev, const BigInt& k);

  int rank() const { return static_cast<int>(c_.size()); }
  const BigInt& coord(int i) const { return c_.at(static_cast<size_t>(i - 1)); }
  BigInt& coord(int i) { return c_.at(static_cast<size_t>(i - 1)); }
  const std::vector<BigInt>& coords() const { return c_; }

  // Largest index with a nonzero component; 0 for the zero vector.
  int height() const;
  // Zeroes the components 1..k, keeping the ones above the convex subgroup.
  LambdaScalar project(int k) const;
  LambdaRational halved() const;

  bool is_zero() const;
  bool positive() const;

  LambdaScalar operator+(const LambdaScalar& o) const;
  LambdaScalar operator-(const LambdaScalar& o) const;
  LambdaScalar operator-() const;
  LambdaScalar operator*(const BigInt& k) const;
  LambdaScalar& operator+=(const LambdaScalar& o);
  LambdaScalar& operator-=(const LambdaScalar& o);

  std::strong_ordering operator<=>(const LambdaScalar& o) const;
  bool operator==(const LambdaScalar& o) const;

  // Writes t = q*m + r with integer vector q and remainder 0 <= r < m carried
  // entirely by the lowest component. Fails when a component above the first
  // is not divisible by m.
  bool split_by(long m, LambdaScalar& q, long& r) const;

  std::string str() const;
  static LambdaScalar parse(const std::string& text, int expect_rank = -1);

 private:
  void check_rank(const LambdaScalar& o) const;
  std::vector<BigInt> c_;
};

// Q^n companion for Gromov products.
class LambdaRational {
 public:
  LambdaRational() = default;
  explicit LambdaRational(int rank) : c_(static_cast<size_t>(rank)) {}
  explicit LambdaRational(std::vector<BigRat> coords) : c_(std::move(coords)) {}
  static LambdaRational of(const LambdaScalar& a);

  int rank() const { return static_cast<int>(c_.size()); }
  const BigRat& coord(int i) const { return c_.at(static_cast<size_t>(i - 1)); }

  int height() const;
  bool is_zero() const;
  // True when every component is an integer, i.e. the value lies in Lambda.
  bool integral() const;
  LambdaScalar doubled() const;

  LambdaRational operator+(const LambdaRational& o) const;
  LambdaRational operator-(const LambdaRational& o) const;
  std::strong_ordering operator<=>(const LambdaRational& o) const;
  bool operator==(const LambdaRational& o) const;

  std::string str() const;

 private:
  void check_rank(const LambdaRational& o) const;
  std::vector<BigRat> c_;
};

}  // namespace geqlab

#endif
