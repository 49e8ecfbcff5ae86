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

#ifndef GEQLAB_SMITH_HPP
#define GEQLAB_SMITH_HPP

#include <vector>

#include "geqlab/ordered.hpp"

namespace geqlab {

using IntMatrix = std::vector<std::vector<BigInt>>;

IntMatrix identity_matrix(size_t n);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
bool mat_eq(const IntMatrix& a, const IntMatrix& b);

// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ... | dr > 0.
struct SmithResult {
  IntMatrix d;
  IntMatrix u;
  IntMatrix v;
  IntMatrix vinv;
  std::vector<BigInt> diagonals;  // the nonzero d1..dr
  int rank = 0;
};

SmithResult smith(const IntMatrix& a);

// The sublattice of Z^n generated by the rows of `rows`, certified by the
// Smith form: its rank, the index inside its saturation, a basis of the
// saturation and a basis of a direct complement (Z^n = sat (+) comp).
struct LatticeReport {
  int ambient = 0;
  int rank = 0;
  BigInt index = 1;  // [saturation : lattice], finite iff rank matches
  IntMatrix sat_basis;
  IntMatrix comp_basis;
};

LatticeReport lattice_report(const IntMatrix& rows, size_t ambient);

// Z^n modulo the row lattice: free rank and nontrivial torsion invariants.
struct AbelianInfo {
  long free_rank = 0;
  std::vector<BigInt> torsion;
};

AbelianInfo abelian_quotient(const IntMatrix& relation_rows, size_t n);

}  // namespace geqlab

#endif
