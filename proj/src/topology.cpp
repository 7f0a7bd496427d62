#include "vrsim/topology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace vrsim {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<std::vector<int>> Topology::users_per_sbs() const {
  std::vector<std::vector<int>> groups(sbs_positions.size());
  for (int i = 0; i < num_users(); ++i) groups[association[i]].push_back(i);
  return groups;
}

namespace {

Point sample_disc(Rng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

Topology generate_topology(int num_sbs, int num_users, double area_radius_m,
                           std::uint64_t seed) {
  if (num_sbs < 1) throw std::invalid_argument("generate_topology: num_sbs must be >= 1");
  if (num_users < 1) throw std::invalid_argument("generate_topology: num_users must be >= 1");
  if (!(area_radius_m > 0.0))
    throw std::invalid_argument("generate_topology: area_radius must be > 0");

  Topology topo;
  topo.coverage_radius_m = area_radius_m;
  Rng rng = Rng::stream(seed, "topology");
  topo.sbs_positions.reserve(num_sbs);
  for (int j = 0; j < num_sbs; ++j) topo.sbs_positions.push_back(sample_disc(rng, area_radius_m));
  topo.user_positions.reserve(num_users);
  for (int i = 0; i < num_users; ++i) topo.user_positions.push_back(sample_disc(rng, area_radius_m));
  topo.association = associate(topo);
  return topo;
}

std::vector<int> associate(const Topology& topology) {
  std::vector<int> assoc(topology.user_positions.size(), 0);
  for (int i = 0; i < topology.num_users(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_sbs = 0;
    for (int j = 0; j < topology.num_sbs(); ++j) {
      const double d = topology.user_sbs_distance(i, j);
      if (d < best) {  // strict: ties keep the lower index
        best = d;
        best_sbs = j;
      }
    }
    assoc[i] = best_sbs;
  }
  return assoc;
}

}  // namespace vrsim
