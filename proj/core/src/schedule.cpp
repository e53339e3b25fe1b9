#include "scs/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scs/geometry.hpp"

namespace scs::sched {

std::vector<int> SlotAssignment::all_slots() const {
  std::vector<int> v;
  for (const auto& s : slots_per_target) v.insert(v.end(), s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

int SlotAssignment::target_of(int slot) const {
  for (size_t k = 0; k < slots_per_target.size(); ++k) {
    for (int n : slots_per_target[k]) {
      if (n == slot) return int(k);
    }
  }
  return -1;
}

bool SlotAssignment::valid(int num_slots, int slots_per_target_count) const {
  std::vector<int> seen;
  for (const auto& s : slots_per_target) {
    if (int(s.size()) != slots_per_target_count) return false;
    for (int n : s) {
      if (n < 1 || n > num_slots) return false;
      seen.push_back(n);
    }
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

double weighted_distance(int slot, int target, const traj::Trajectory& alice,
                         const traj::Trajectory& jack,
                         const std::vector<Vec2>& targets, const Vec2& bob,
                         double tau) {
  const Vec2& g = targets[size_t(target)];
  const double d_ak = geom::slant_distance(alice.at(slot), alice.altitude, g);
  const double d_ab = geom::slant_distance(alice.at(slot), alice.altitude, bob);
  double sensing = d_ak;
  if (!jack.empty()) {
    sensing += geom::slant_distance(jack.at(slot), jack.altitude, g);
  }
  return tau * sensing + (1.0 - tau) * d_ab;
}

DistanceTable distance_table(const Scenario& s, const traj::Trajectory& alice,
                             const traj::Trajectory& jack) {
  const int n_slots = alice.slots();
  DistanceTable table(s.targets.size(), std::vector<double>(size_t(n_slots)));
  for (size_t k = 0; k < s.targets.size(); ++k) {
    for (int n = 1; n <= n_slots; ++n) {
      table[k][size_t(n - 1)] =
          weighted_distance(n, int(k), alice, jack, s.targets, s.bob_pos,
                            s.tau_weight);
    }
  }
  return table;
}

SlotAssignment greedy_select(const DistanceTable& distances,
                             int slots_per_target) {
  const int num_targets = int(distances.size());
  const int num_slots = num_targets ? int(distances[0].size()) : 0;
  if (slots_per_target * num_targets > num_slots) {
    throw std::invalid_argument("greedy_select: not enough slots");
  }
  SlotAssignment out;
  out.slots_per_target.resize(size_t(num_targets));
  std::vector<bool> taken(size_t(num_slots), false);
  for (int k = 0; k < num_targets; ++k) {
    std::vector<int> order;
    for (int i = 0; i < num_slots; ++i) {
      if (!taken[size_t(i)]) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = distances[size_t(k)][size_t(a)];
      const double db = distances[size_t(k)][size_t(b)];
      return da != db ? da < db : a < b;
    });
    for (int j = 0; j < slots_per_target; ++j) {
      taken[size_t(order[size_t(j)])] = true;
      out.slots_per_target[size_t(k)].push_back(order[size_t(j)] + 1);
    }
    std::sort(out.slots_per_target[size_t(k)].begin(),
              out.slots_per_target[size_t(k)].end());
  }
  return out;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return r;
}

void enumerate(const DistanceTable& d, int slots_per_target, int target,
               std::vector<bool>& taken, std::vector<std::vector<int>>& pick,
               double cost, double& best_cost,
               std::vector<std::vector<int>>& best) {
  const int num_targets = int(d.size());
  if (target == num_targets) {
    if (cost < best_cost) {
      best_cost = cost;
      best = pick;
    }
    return;
  }
  const int num_slots = int(d[0].size());
  // choose slots_per_target untaken slots in increasing index order
  std::vector<int> chosen;
  auto recurse = [&](auto&& self, int start, double acc) -> void {
    if (int(chosen.size()) == slots_per_target) {
      pick[size_t(target)] = chosen;
      enumerate(d, slots_per_target, target + 1, taken, pick, cost + acc,
                best_cost, best);
      return;
    }
    for (int i = start; i < num_slots; ++i) {
      if (taken[size_t(i)]) continue;
      taken[size_t(i)] = true;
      chosen.push_back(i + 1);
      self(self, i + 1, acc + d[size_t(target)][size_t(i)]);
      chosen.pop_back();
      taken[size_t(i)] = false;
    }
  };
  recurse(recurse, 0, 0.0);
}

}  // namespace

SlotAssignment brute_force_select(const DistanceTable& distances,
                                  int slots_per_target) {
  const int num_targets = int(distances.size());
  const int num_slots = num_targets ? int(distances[0].size()) : 0;
  if (slots_per_target * num_targets > num_slots) {
    throw std::invalid_argument("brute_force_select: not enough slots");
  }
  if (num_slots > 12) {
    throw std::invalid_argument("brute_force_select: instance too large");
  }
  double combos = 1.0;
  for (int k = 0; k < num_targets; ++k) {
    combos *= binomial(num_slots - k * slots_per_target, slots_per_target);
    if (combos > 2e7) {
      throw std::invalid_argument("brute_force_select: instance too large");
    }
  }

  SlotAssignment out;
  out.slots_per_target.assign(size_t(num_targets), {});
  if (num_targets == 0) return out;
  std::vector<bool> taken(size_t(num_slots), false);
  std::vector<std::vector<int>> pick(static_cast<size_t>(num_targets));
  double best_cost = std::numeric_limits<double>::infinity();
  enumerate(distances, slots_per_target, 0, taken, pick, 0.0, best_cost,
            out.slots_per_target);
  return out;
}

double assignment_cost(const DistanceTable& distances, const SlotAssignment& a) {
  double cost = 0.0;
  for (size_t k = 0; k < a.slots_per_target.size(); ++k) {
    for (int slot : a.slots_per_target[k]) {
      cost += distances[k][size_t(slot - 1)];
    }
  }
  return cost;
}

}  // namespace scs::sched
