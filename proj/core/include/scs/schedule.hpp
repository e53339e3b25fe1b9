#pragma once

#include <vector>

#include "scs/scenario.hpp"
#include "scs/trajectory.hpp"

namespace scs::sched {

// Ordered sensing-slot sets per target. Slot indices are 1-based and the
// per-target sets are pairwise disjoint.
struct SlotAssignment {
  std::vector<std::vector<int>> slots_per_target;

  std::vector<int> all_slots() const;  // sorted union
  int target_of(int slot) const;       // -1 when the slot is not assigned
  bool valid(int num_slots, int slots_per_target_count) const;
};

// tau * (d_alice_target + d_jack_target) + (1 - tau) * d_alice_bob, using
// slant distances at the given slot. The jamming term is dropped when the
// jack path is empty (single-UAV missions).
double weighted_distance(int slot, int target, const traj::Trajectory& alice,
                         const traj::Trajectory& jack,
                         const std::vector<Vec2>& targets, const Vec2& bob,
                         double tau);

// table[k][n-1] = weighted distance of slot n for target k.
using DistanceTable = std::vector<std::vector<double>>;
DistanceTable distance_table(const Scenario& s, const traj::Trajectory& alice,
                             const traj::Trajectory& jack);

// Targets claim slots in index order; each takes its cheapest remaining
// slots. Ties break toward the lower slot index.
SlotAssignment greedy_select(const DistanceTable& distances,
                             int slots_per_target);

// Exact minimizer by enumeration; a test oracle, guarded against blowup
// (throws std::invalid_argument beyond 12 slots or ~2e7 combinations).
SlotAssignment brute_force_select(const DistanceTable& distances,
                                  int slots_per_target);

double assignment_cost(const DistanceTable& distances, const SlotAssignment& a);

}  // namespace scs::sched
