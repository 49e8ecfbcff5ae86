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

#ifndef GEQLAB_ERRORS_HPP
#define GEQLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace geqlab {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class RankMismatch : public Error {
 public:
  explicit RankMismatch(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

class NotApplicable : public Error {
 public:
  explicit NotApplicable(const std::string& msg) : Error(msg) {}
};

class OracleError : public Error {
 public:
  explicit OracleError(const std::string& msg) : Error(msg) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

}  // namespace geqlab

#endif
