#include <random>

#include <doctest.h>

#include "geqlab/smith.hpp"

using namespace geqlab;

TEST_CASE("smith normal form on a textbook matrix") {
  SmithResult s = smith({{2, 4}, {6, 8}});
  REQUIRE(s.diagonals.size() == 2);
  CHECK(s.diagonals[0] == 2);
  CHECK(s.diagonals[1] == 4);
  CHECK(s.rank == 2);
  CHECK(mat_eq(mat_mul(mat_mul(s.u, {{2, 4}, {6, 8}}), s.v), s.d));
}

TEST_CASE("U A V = D with unimodular transforms, randomized") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    IntMatrix a(m, std::vector<BigInt>(n));
    for (auto& row : a)
      for (auto& x : row) x = static_cast<int>(rng() % 21) - 10;
    SmithResult s = smith(a);
    CHECK(mat_eq(mat_mul(mat_mul(s.u, a), s.v), s.d));
    CHECK(mat_eq(mat_mul(s.v, s.vinv), identity_matrix(n)));
    for (size_t i = 0; i < s.d.size(); ++i)
      for (size_t j = 0; j < s.d[i].size(); ++j)
        if (i != j) CHECK(s.d[i][j] == 0);
    for (size_t i = 0; i + 1 < s.diagonals.size(); ++i) {
      CHECK(s.diagonals[i] > 0);
      CHECK(s.diagonals[i + 1] % s.diagonals[i] == 0);
    }
  }
}

TEST_CASE("lattice report: rank, saturation index, complement") {
  // Rows span a rank-2 sublattice of Z^3 of index 6 in its saturation.
  LatticeReport rep = lattice_report({{2, 0, -2}, {0, 3, -3}}, 3);
  CHECK(rep.ambient == 3);
  CHECK(rep.rank == 2);
  CHECK(rep.index == 6);
  CHECK(rep.sat_basis.size() == 2);
  CHECK(rep.comp_basis.size() == 1);

  // A saturated lattice has index 1.
  LatticeReport full = lattice_report({{1, 0}, {0, 1}}, 2);
  CHECK(full.rank == 2);
  CHECK(full.index == 1);
  CHECK(full.comp_basis.empty());

  // The zero lattice.
  LatticeReport zero = lattice_report({}, 2);
  CHECK(zero.rank == 0);
  CHECK(zero.index == 1);
  CHECK(zero.comp_basis.size() == 2);
}

TEST_CASE("abelian quotient structure") {
  AbelianInfo ab = abelian_quotient({{1, -1, 0}, {0, 2, 0}}, 3);
  CHECK(ab.free_rank == 1);
  REQUIRE(ab.torsion.size() == 1);
  CHECK(ab.torsion[0] == 2);

  AbelianInfo free3 = abelian_quotient({}, 3);
  CHECK(free3.free_rank == 3);
  CHECK(free3.torsion.empty());
}
