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

#ifndef GEQLAB_BUILDER_HPP
#define GEQLAB_BUILDER_HPP

#include <map>
#include <string>
#include <vector>

#include "geqlab/geq.hpp"
#include "geqlab/io.hpp"

namespace geqlab {

// Cancellation tree of one relator: the relator's embedded letters fully
// cancel, and the cancellation pattern partitions each embedded letter into
// pieces, each piece appearing exactly twice across the occurrence paths.
struct TreeOcc {
  int piece = 0;
  int sign = 1;
};

struct CancellationTree {
  std::vector<Letter> relator;
  std::vector<LambdaWord> pieces;
  std::vector<std::vector<TreeOcc>> paths;  // one path per relator letter
};

// Split off auxiliary generators until every relator involves at most three
// distinct generators; the group is unchanged up to Tietze moves.
PresentationInput triangulate(const PresentationInput& p);

CancellationTree build_tree(const std::vector<Letter>& relator,
                            const std::map<std::string, LambdaWord>& xi,
                            int rank);

struct AssembledDiagram {
  GenEq eq;
  Solution planted;  // piece values assigned to items
  std::map<std::string, ItemWord> generator_words;
};

// Lay one subinterval per generator, subdivide by all piece endpoints, and
// emit one dual base pair per piece. Boundary connections are pre-seeded
// wherever the planted solution carries an existing boundary of a base onto
// an existing boundary of its dual.
AssembledDiagram assemble(const PresentationInput& p,
                          const std::vector<CancellationTree>& trees);

// triangulate + build_tree per relator + assemble.
AssembledDiagram build_diagram(const PresentationInput& p);

}  // namespace geqlab

#endif
