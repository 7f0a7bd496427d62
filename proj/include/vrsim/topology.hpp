#pragma once

#include <cstdint>
#include <vector>

#include "vrsim/rng.hpp"

namespace vrsim {

struct Point {
  double x = 0.0;  // m
  double y = 0.0;  // m
};

double distance(const Point& a, const Point& b);

// Random network layout: SBS and user positions on a disc plus the
// nearest-SBS user association. Immutable once built; shared read-only
// across parallel runs.
struct Topology {
  std::vector<Point> sbs_positions;
  std::vector<Point> user_positions;
  double coverage_radius_m = 0.0;
  std::vector<int> association;  // user -> SBS index

  int num_sbs() const { return static_cast<int>(sbs_positions.size()); }
  int num_users() const { return static_cast<int>(user_positions.size()); }

  double user_sbs_distance(int user, int sbs) const {
    return distance(user_positions[user], sbs_positions[sbs]);
  }
  double user_user_distance(int a, int b) const {
    return distance(user_positions[a], user_positions[b]);
  }

  // Users attached to each SBS, in ascending user order.
  std::vector<std::vector<int>> users_per_sbs() const;
};

// Positions i.i.d. uniform on the disc of the given radius (polar
// inverse-CDF sampling), deterministic per seed. Throws
// std::invalid_argument on zero counts or non-positive radius.
Topology generate_topology(int num_sbs, int num_users, double area_radius_m,
                           std::uint64_t seed);

// Nearest-SBS rule; ties broken toward the lowest SBS index. A user outside
// every coverage disc still attaches to its nearest SBS.
std::vector<int> associate(const Topology& topology);

}  // namespace vrsim
