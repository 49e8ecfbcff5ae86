// Shared test fixtures: random generalized equations with planted solutions,
// and a deterministic enumeration of small equations for exhaustive checks.
#pragma once

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "geqlab/geq.hpp"

namespace geqtest {

struct PlantedInstance {
  geqlab::GenEq eq;
  geqlab::Solution u;
};

// A structurally valid equation together with a solution that satisfies it by
// construction.  Item words are powers of free generators chosen so that every
// base relation and boundary connection holds exactly.
PlantedInstance random_planted(std::mt19937& rng, long max_items = 10,
                               std::size_t max_bases = 8);

// Exhaustive enumeration over a constrained shape grammar: one or two base
// pairs on up to four items, both orientations for the dual.  Every returned
// equation passes structural validation and has at most `max_bases` bases.
std::vector<geqlab::GenEq> small_equation_grammar(std::size_t max_bases = 6);

// Applies every applicable elementary and derived transformation to the
// instance and verifies that the transported solution still solves the
// target.  Consecutive entire transformations are additionally tracked as one
// episode for the net complexity comparison.
struct SweepStats {
  long applied = 0;
  long transport_failures = 0;
  long d7d8_steps = 0;
  long tau_violations = 0;
  long episodes = 0;
  long episode_net_increases = 0;
};
SweepStats sweep_all_ops(const PlantedInstance& inst);

// Runs the kernel computation under every elimination order (depth-first over
// the per-round choice points, capped) and collects the distinct outcomes.
struct KernelOrbit {
  std::set<std::string> kernels;  // serialized kernel equations
  std::set<long> free_ranks;
  long orders = 0;
};
KernelOrbit explore_kernel_orders(const geqlab::GenEq& eq,
                                  long order_cap = 400);

}  // namespace geqtest
