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

#ifndef GEQLAB_RENDER_HPP
#define GEQLAB_RENDER_HPP

#include <string>

#include "geqlab/geq.hpp"

namespace geqlab {

struct RenderOptions {
  long item_width = 70;   // horizontal pixels per item
  long arc_step = 26;     // vertical pixels per nesting level
  bool show_connections = true;
  bool show_sections = true;
};

// Static SVG picture of a generalized equation: the items laid out on a
// horizontal interval with boundaries ticked 1..rho+1, the bases as labeled
// arcs above it, boundary connections as dashed verticals below, and the
// section partition along the bottom. Output bytes are deterministic for a
// fixed input.
std::string render_svg(const GenEq& eq, const RenderOptions& opt = {});

}  // namespace geqlab

#endif  // GEQLAB_RENDER_HPP
