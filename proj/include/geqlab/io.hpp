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

#ifndef GEQLAB_IO_HPP
#define GEQLAB_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "geqlab/geq.hpp"

namespace geqlab {

// Text format:
//   geq rank=2 items=4
//   base mu  1 3 +1 dual mub
//   conn 2 mu 4
//   section 1 5 active
//   height h1 [1]
//   length h1 [1,0]
// '#' starts a comment; blank lines are skipped.
std::string format_geq(const GenEq& eq);
GenEq parse_geq(const std::string& text);

// JSON mirror of the same fields.
std::string geq_to_json(const GenEq& eq);
GenEq geq_from_json(const std::string& text);

// Solution files: one "hN = word" line per item.
std::string format_solution(const Solution& u);
Solution parse_solution(const std::string& text, int rank);

// Presentation files:
//   rank 2
//   generators x y
//   relator x y x^-1 y^-1
//   embed x = (z)^[1,0]
struct PresentationInput {
  int rank = 1;
  std::vector<std::string> generators;
  std::vector<std::vector<Letter>> relators;
  std::map<std::string, LambdaWord> embedding;
};

PresentationInput parse_presentation(const std::string& text);
std::string format_presentation(const PresentationInput& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace geqlab

#endif
