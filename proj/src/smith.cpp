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

#include "geqlab/smith.hpp"

#include <algorithm>

#include "geqlab/errors.hpp"

namespace geqlab {

IntMatrix identity_matrix(size_t n) {
  IntMatrix m(n, std::vector<BigInt>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  size_t n = a.size();
  size_t k = b.size();
  size_t m = k > 0 ? b[0].size() : 0;
  IntMatrix out(n, std::vector<BigInt>(m, 0));
  for (size_t i = 0; i < n; ++i) {
    if (a[i].size() != k) throw DomainError("mat_mul: shape mismatch");
    for (size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  }
  return out;
}

bool mat_eq(const IntMatrix& a, const IntMatrix& b) { return a == b; }

namespace {

struct Worker {
  IntMatrix d, u, v, vinv;
  size_t m, n;

  explicit Worker(const IntMatrix& a) : d(a) {
    m = d.size();
    n = m > 0 ? d[0].size() : 0;
    for (const auto& row : d)
      if (row.size() != n) throw DomainError("smith: ragged matrix");
    u = identity_matrix(m);
    v = identity_matrix(n);
    vinv = identity_matrix(n);
  }

  void swap_rows(size_t i, size_t j) {
    if (i == j) return;
    std::swap(d[i], d[j]);
    std::swap(u[i], u[j]);
  }
  void add_row(size_t i, size_t j, const BigInt& k) {  // row i += k * row j
    for (size_t t = 0; t < n; ++t) d[i][t] += k * d[j][t];
    for (size_t t = 0; t < m; ++t) u[i][t] += k * u[j][t];
  }
  void neg_row(size_t i) {
    for (auto& x : d[i]) x = -x;
    for (auto& x : u[i]) x = -x;
  }
  void swap_cols(size_t i, size_t j) {
    if (i == j) return;
    for (auto& row : d) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
    std::swap(vinv[i], vinv[j]);
  }
  void add_col(size_t i, size_t j, const BigInt& k) {  // col i += k * col j
    for (auto& row : d) row[i] += k * row[j];
    for (auto& row : v) row[i] += k * row[j];
    // inverse op on vinv: row j -= k * row i
    for (size_t t = 0; t < n; ++t) vinv[j][t] -= k * vinv[i][t];
  }
  void neg_col(size_t i) {
    for (auto& row : d) row[i] = -row[i];
    for (auto& row : v) row[i] = -row[i];
    for (auto& x : vinv[i]) x = -x;
  }

  bool find_pivot(size_t t, size_t* pi, size_t* pj) {
    bool found = false;
    BigInt best = 0;
    for (size_t i = t; i < m; ++i) {
      for (size_t j = t; j < n; ++j) {
        if (d[i][j] == 0) continue;
        BigInt a = abs(d[i][j]);
        if (!found || a < best) {
          best = a;
          *pi = i;
          *pj = j;
          found = true;
        }
      }
    }
    return found;
  }

  void run() {
    size_t t = 0;
    while (t < m && t < n) {
      size_t pi = t, pj = t;
      if (!find_pivot(t, &pi, &pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (size_t i = t + 1; i < m; ++i) {
          if (d[i][t] == 0) continue;
          BigInt q = d[i][t] / d[t][t];
          add_row(i, t, -q);
          if (d[i][t] != 0) {  // remainder became the smaller pivot
            swap_rows(t, i);
            dirty = true;
          }
        }
        for (size_t j = t + 1; j < n; ++j) {
          if (d[t][j] == 0) continue;
          BigInt q = d[t][j] / d[t][t];
          add_col(j, t, -q);
          if (d[t][j] != 0) {
            swap_cols(t, j);
            dirty = true;
          }
        }
      }
      // make the pivot divide everything that remains
      bool fixed = false;
      for (size_t i = t + 1; i < m && !fixed; ++i) {
        for (size_t j = t + 1; j < n && !fixed; ++j) {
          if (d[i][j] % d[t][t] != 0) {
            add_row(t, i, 1);
            fixed = true;
          }
        }
      }
      if (fixed) continue;  // redo this position
      if (d[t][t] < 0) neg_row(t);
      ++t;
    }
  }
};

}  // namespace

SmithResult smith(const IntMatrix& a) {
  Worker w(a);
  w.run();
  SmithResult r;
  r.d = std::move(w.d);
  r.u = std::move(w.u);
  r.v = std::move(w.v);
  r.vinv = std::move(w.vinv);
  size_t lim = std::min(w.m, w.n);
  for (size_t t = 0; t < lim; ++t) {
    if (r.d[t][t] == 0) break;
    r.diagonals.push_back(r.d[t][t]);
  }
  r.rank = static_cast<int>(r.diagonals.size());
  return r;
}

LatticeReport lattice_report(const IntMatrix& rows, size_t ambient) {
  for (const auto& row : rows)
    if (row.size() != ambient)
      throw DomainError("lattice_report: row width differs from ambient rank");
  LatticeReport rep;
  rep.ambient = static_cast<int>(ambient);
  if (rows.empty()) {
    // The zero lattice: a complement of its saturation is the whole space.
    for (size_t i = 0; i < ambient; ++i) {
      std::vector<BigInt> e(ambient, 0);
      e[i] = 1;
      rep.comp_basis.push_back(std::move(e));
    }
    return rep;
  }
  SmithResult s = smith(rows);
  rep.rank = s.rank;
  for (const BigInt& di : s.diagonals) rep.index *= abs(di);
  // In the V-coordinates the lattice is d1 Z x ... x dr Z x 0; pulling back
  // e_i gives row i of V^-1.
  for (int i = 0; i < s.rank; ++i) rep.sat_basis.push_back(s.vinv[i]);
  for (size_t i = s.rank; i < ambient; ++i) rep.comp_basis.push_back(s.vinv[i]);
  return rep;
}

AbelianInfo abelian_quotient(const IntMatrix& relation_rows, size_t n) {
  AbelianInfo info;
  if (relation_rows.empty()) {
    info.free_rank = static_cast<long>(n);
    return info;
  }
  SmithResult s = smith(relation_rows);
  info.free_rank = static_cast<long>(n) - s.rank;
  for (const BigInt& di : s.diagonals)
    if (di > 1) info.torsion.push_back(di);
  return info;
}

}  // namespace geqlab
