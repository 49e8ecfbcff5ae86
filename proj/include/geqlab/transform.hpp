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

#ifndef GEQLAB_TRANSFORM_HPP
#define GEQLAB_TRANSFORM_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geqlab/geq.hpp"

namespace geqlab {

// Group morphism induced by a transformation, described on items: each source
// item maps to a word in target items. Applying it to every relator of the
// source presentation yields a consequence of the target presentation.
struct Morphism {
  enum Kind { Isomorphism, Epimorphism };
  Kind kind = Isomorphism;
  long source_items = 0;
  long target_items = 0;
  std::map<long, ItemWord> item_map;

  static Morphism identity(long n);
  // Apply `first`, then `second`.
  static Morphism compose(const Morphism& first, const Morphism& second);
  ItemWord apply(const ItemWord& w) const;
  std::string str() const;
};

struct TransformResult {
  GenEq target;
  Morphism morphism;
  std::string note;
  // Transported solution, present when the transformation was given one.
  std::optional<Solution> pushed;
};

using LengthMap = std::map<long, LambdaScalar>;

// Item-length oracles for ET5-style boundary location.
LengthMap lengths_of(const Solution& u);
LengthMap lengths_of(const GenEq& eq);  // from item_lengths annotations

// ET1: cut base `lambda` and its dual along the boundary connection at p.
TransformResult et1_cut(const GenEq& eq, const std::string& lambda, long p,
                        const Solution* u = nullptr);

// ET2: transfer `mu` from its position on `lambda` to the image position on
// the dual of `lambda`; every boundary of mu's span must be lambda-tied.
TransformResult et2_transfer(const GenEq& eq, const std::string& lambda,
                             const std::string& mu, const Solution* u = nullptr);

// ET3: delete a matched pair.
TransformResult et3_remove_matched(const GenEq& eq, const std::string& lambda,
                                   const Solution* u = nullptr);

// ET4: delete a lone, fully tied base together with its span.
TransformResult et4_remove_lone(const GenEq& eq, const std::string& lambda,
                                const Solution* u = nullptr);

// ET5: tie boundary p of `lambda`, adding a connection (case a) or inserting
// and tying a new boundary on the dual side (case b).
TransformResult et5_introduce_boundary(const GenEq& eq,
                                       const std::string& lambda, long p,
                                       const LengthMap& lengths,
                                       const Solution* u = nullptr);

// D1: make [lo, hi] a union of closed sections by tying and cutting every
// base through lo and hi, then splitting the section partition there.
TransformResult d1_close(const GenEq& eq, long lo, long hi,
                         const LengthMap& lengths, const Solution* u = nullptr);

// D2: move the closed section [lo, hi] to the end of the interval.
TransformResult d2_transport(const GenEq& eq, long lo, long hi,
                             const Solution* u = nullptr);

// D3: close [q, q+1] around a free item and move it to the end, non-active.
TransformResult d3_move_free(const GenEq& eq, long q,
                             const Solution* u = nullptr);

// D4: delete a complete base (span = a closed section), transferring every
// base it carries onto the dual first.
TransformResult d4_delete_complete(const GenEq& eq, const std::string& mu,
                                   const LengthMap& lengths,
                                   const Solution* u = nullptr);

struct KernelResult {
  GenEq cut;     // eq after cutting along all boundary connections
  GenEq kernel;  // cut equation restricted to non-eliminable bases
  long free_rank = 0;
  std::vector<std::string> trace;  // "id:a" / "id:b" elimination events
};

// D5: cut along all connections, then remove eliminable bases; the result is
// independent of the removal order.
KernelResult d5_kernel(const GenEq& eq);
// D5 under an explicit removal order: `choose` receives the ids of the bases
// currently eliminable and returns the index of the one to remove next.
KernelResult d5_kernel(
    const GenEq& eq,
    const std::function<size_t(const std::vector<std::string>&)>& choose);

// D6: one linear-elimination step on a linear item (gamma = 1, height
// comparable with its section). Throws NotApplicable when no case fits.
TransformResult d6_linear_step(const GenEq& eq, const LengthMap& lengths,
                               const Solution* u = nullptr);

struct D7Result {
  TransformResult result;
  bool loop_detected = false;
  long loop_period = 0;
  long free_rank_split = 0;  // free factor recorded when replacing by kernel
  long steps = 0;
};

// D7: Tietze cleaning -- linear elimination to exhaustion (kernel replacement
// on a detected loop), matched-pair removal, complete-base deletion, moving
// free variables right.
D7Result d7_tietze(const GenEq& eq, const LengthMap& lengths,
                   const Solution* u = nullptr);

// D8: one entire transformation: pick the carrier, transfer all transfer
// bases onto its dual, cut at the end of the carrier-only initial run, and
// delete the initial section.
TransformResult d8_entire_step(const GenEq& eq, const LengthMap& lengths,
                               const Solution* u = nullptr);
std::string d8_carrier(const GenEq& eq);  // carrier id (throws if none)

}  // namespace geqlab

#endif
