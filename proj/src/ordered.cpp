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

#include "geqlab/ordered.hpp"

#include <sstream>

namespace geqlab {

LambdaScalar LambdaScalar::unit(int rank) { return integer(rank, 1); }

LambdaScalar LambdaScalar::integer(int rank, const BigInt& k) {
  return level(rank, 1, k);
}

LambdaScalar LambdaScalar::level(int rank, int lev, const BigInt& k) {
  if (lev < 1 || lev > rank) throw DomainError("level out of range");
  LambdaScalar a(rank);
  a.c_[static_cast<size_t>(lev - 1)] = k;
  return a;
}

void LambdaScalar::check_rank(const LambdaScalar& o) const {
  if (rank() != o.rank())
    throw RankMismatch("rank mismatch: " + std::to_string(rank()) + " vs " +
                       std::to_string(o.rank()));
}

int LambdaScalar::height() const {
  for (int i = rank(); i >= 1; --i)
    if (coord(i) != 0) return i;
  return 0;
}

LambdaScalar LambdaScalar::project(int k) const {
  if (k < 0 || k > rank()) throw DomainError("projection level out of range");
  LambdaScalar a = *this;
  for (int i = 1; i <= k; ++i) a.coord(i) = 0;
  return a;
}

LambdaRational LambdaScalar::halved() const {
  std::vector<BigRat> h;
  h.reserve(c_.size());
  for (const BigInt& x : c_) h.emplace_back(BigRat(x) / 2);
  return LambdaRational(std::move(h));
}

bool LambdaScalar::is_zero() const {
  for (const BigInt& x : c_)
    if (x != 0) return false;
  return true;
}

bool LambdaScalar::positive() const {
  int h = height();
  return h > 0 && coord(h) > 0;
}

LambdaScalar LambdaScalar::operator+(const LambdaScalar& o) const {
  LambdaScalar a = *this;
  a += o;
  return a;
}

LambdaScalar LambdaScalar::operator-(const LambdaScalar& o) const {
  LambdaScalar a = *this;
  a -= o;
  return a;
}

LambdaScalar LambdaScalar::operator-() const {
  LambdaScalar a = *this;
  for (BigInt& x : a.c_) x = -x;
  return a;
}

LambdaScalar LambdaScalar::operator*(const BigInt& k) const {
  LambdaScalar a = *this;
  for (BigInt& x : a.c_) x *= k;
  return a;
}

LambdaScalar& LambdaScalar::operator+=(const LambdaScalar& o) {
  check_rank(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

LambdaScalar& LambdaScalar::operator-=(const LambdaScalar& o) {
  check_rank(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

std::strong_ordering LambdaScalar::operator<=>(const LambdaScalar& o) const {
  check_rank(o);
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] < o.c_[i]) return std::strong_ordering::less;
    if (c_[i] > o.c_[i]) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

bool LambdaScalar::operator==(const LambdaScalar& o) const {
  return rank() == o.rank() && c_ == o.c_;
}

bool LambdaScalar::split_by(long m, LambdaScalar& q, long& r) const {
  if (m <= 0) throw DomainError("split_by needs a positive modulus");
  LambdaScalar out(rank());
  for (int i = 2; i <= rank(); ++i) {
    BigInt qi = coord(i) / m;
    if (qi * m != coord(i)) return false;
    out.coord(i) = qi;
  }
  BigInt rem = coord(1) % m;
  if (rem < 0) rem += m;
  out.coord(1) = (coord(1) - rem) / m;
  q = out;
  r = static_cast<long>(rem);
  return true;
}

std::string LambdaScalar::str() const {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ',';
    os << c_[i];
  }
  os << ']';
  return os.str();
}

LambdaScalar LambdaScalar::parse(const std::string& text, int expect_rank) {
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip();
  if (i >= text.size() || text[i] != '[')
    throw ParseError("vector literal must start with '[': " + text);
  ++i;
  std::vector<BigInt> coords;
  while (true) {
    skip();
    size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
      throw ParseError("bad integer in vector literal: " + text);
    coords.emplace_back(text.substr(start, i - start));
    skip();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    if (i < text.size() && text[i] == ']') {
      ++i;
      break;
    }
    throw ParseError("expected ',' or ']' in vector literal: " + text);
  }
  skip();
  if (i != text.size()) throw ParseError("trailing input after vector: " + text);
  if (expect_rank >= 0 && static_cast<int>(coords.size()) != expect_rank)
    throw RankMismatch("vector " + text + " has rank " +
                       std::to_string(coords.size()) + ", expected " +
                       std::to_string(expect_rank));
  return LambdaScalar(std::move(coords));
}

LambdaRational LambdaRational::of(const LambdaScalar& a) {
  std::vector<BigRat> h;
  h.reserve(static_cast<size_t>(a.rank()));
  for (const BigInt& x : a.coords()) h.emplace_back(x);
  return LambdaRational(std::move(h));
}

void LambdaRational::check_rank(const LambdaRational& o) const {
  if (rank() != o.rank())
    throw RankMismatch("rank mismatch: " + std::to_string(rank()) + " vs " +
                       std::to_string(o.rank()));
}

int LambdaRational::height() const {
  for (int i = rank(); i >= 1; --i)
    if (coord(i) != 0) return i;
  return 0;
}

bool LambdaRational::is_zero() const {
  for (const BigRat& x : c_)
    if (x != 0) return false;
  return true;
}

bool LambdaRational::integral() const {
  for (const BigRat& x : c_)
    if (boost::multiprecision::denominator(x) != 1) return false;
  return true;
}

LambdaScalar LambdaRational::doubled() const {
  std::vector<BigInt> d;
  d.reserve(c_.size());
  for (const BigRat& x : c_) {
    BigRat t = x * 2;
    if (boost::multiprecision::denominator(t) != 1)
      throw DomainError("doubled value is not integral: " + str());
    d.push_back(boost::multiprecision::numerator(t));
  }
  return LambdaScalar(std::move(d));
}

LambdaRational LambdaRational::operator+(const LambdaRational& o) const {
  check_rank(o);
  LambdaRational a = *this;
  for (size_t i = 0; i < c_.size(); ++i) a.c_[i] += o.c_[i];
  return a;
}

LambdaRational LambdaRational::operator-(const LambdaRational& o) const {
  check_rank(o);
  LambdaRational a = *this;
  for (size_t i = 0; i < c_.size(); ++i) a.c_[i] -= o.c_[i];
  return a;
}

std::strong_ordering LambdaRational::operator<=>(const LambdaRational& o) const {
  check_rank(o);
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] < o.c_[i]) return std::strong_ordering::less;
    if (c_[i] > o.c_[i]) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

bool LambdaRational::operator==(const LambdaRational& o) const {
  return rank() == o.rank() && c_ == o.c_;
}

std::string LambdaRational::str() const {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ',';
    os << c_[i];
  }
  os << ']';
  return os.str();
}

}  // namespace geqlab
