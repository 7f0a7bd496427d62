#include "vrsim/correlation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace vrsim {

double covariance(double sigma_i, double sigma_j, double distance_m, double alpha,
                  double kappa) {
  return sigma_i * sigma_j * std::exp(-std::pow(distance_m, alpha) / kappa);
}

double sigma_max(int user, const std::vector<int>& co_associated_users,
                 const Topology& topology, const std::vector<UserTrackingModel>& models,
                 const CorrelationDecay& decay) {
  double best = 0.0;
  for (int peer : co_associated_users) {
    if (peer == user) continue;
    const double cov =
        covariance(models[user].sigma, models[peer].sigma,
                   topology.user_user_distance(user, peer), decay.alpha, decay.kappa);
    best = std::max(best, cov);
  }
  return best;
}

double tracking_data_size(double sigma_max_value, const TrackingSizeConfig& config) {
  const double frac = std::min(sigma_max_value / config.sigma_ref, 1.0);
  return config.k_min_bits + (config.k_max_bits - config.k_min_bits) * frac;
}

namespace {

// Half-open [lo, hi) intervals on [0, 360).
using Intervals = std::vector<std::pair<double, double>>;

double wrap_deg(double a) {
  a = std::fmod(a, 360.0);
  if (a < 0.0) a += 360.0;
  return a;
}

Intervals view_intervals(const ViewState& v) {
  if (v.width_deg >= 360.0) return {{0.0, 360.0}};
  const double lo = wrap_deg(v.center_deg - v.width_deg / 2.0);
  const double hi = lo + v.width_deg;
  if (hi <= 360.0) return {{lo, hi}};
  return {{lo, 360.0}, {0.0, hi - 360.0}};
}

Intervals intersect(const Intervals& a, const Intervals& b) {
  Intervals out;
  for (const auto& [alo, ahi] : a) {
    for (const auto& [blo, bhi] : b) {
      const double lo = std::max(alo, blo);
      const double hi = std::min(ahi, bhi);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  }
  return out;
}

double total_length(const Intervals& xs) {
  double len = 0.0;
  for (const auto& [lo, hi] : xs) len += hi - lo;
  return len;
}

}  // namespace

double arc_intersection_deg(const std::vector<ViewState>& views) {
  if (views.empty()) return 0.0;
  Intervals cur = view_intervals(views.front());
  for (std::size_t i = 1; i + 0 < views.size() && !cur.empty(); ++i)
    cur = intersect(cur, view_intervals(views[i]));
  return total_length(cur);
}

double arc_union_deg(const std::vector<ViewState>& views) {
  Intervals all;
  for (const auto& v : views)
    for (const auto& iv : view_intervals(v)) all.push_back(iv);
  std::sort(all.begin(), all.end());
  double len = 0.0, cur_lo = 0.0, cur_hi = -1.0;
  for (const auto& [lo, hi] : all) {
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) len += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) len += cur_hi - cur_lo;
  return len;
}

CorrelationSets overlap_sets(const std::vector<ViewState>& views) {
  const int m = static_cast<int>(views.size());
  CorrelationSets sets;
  sets.num_views = m;
  if (m == 0) return sets;
  sets.view_width_deg = views.front().width_deg;
  for (const auto& v : views)
    if (v.width_deg != sets.view_width_deg)
      throw std::invalid_argument("overlap_sets: views must share one width");
  if (m < 2) return sets;

  sets.by_order.resize(m - 1);
  // Intersection of every subset, built up one view at a time over masks.
  std::vector<Intervals> inter(std::size_t{1} << m);
  for (int i = 0; i < m; ++i) inter[std::size_t{1} << i] = view_intervals(views[i]);
  for (std::size_t mask = 1; mask < inter.size(); ++mask) {
    const int n = std::popcount(mask);
    if (n < 2) continue;
    const std::size_t low = mask & (~mask + 1);
    inter[mask] = intersect(inter[mask ^ low], inter[low]);
    sets.by_order[n - 2].push_back(total_length(inter[mask]) / sets.view_width_deg);
  }
  return sets;
}

namespace {

// C(n, k) in double precision; group sizes stay small.
double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double visible_union_size(const CorrelationSets& sets, int num_users, double g120_bits) {
  if (num_users < 1)
    throw std::invalid_argument("visible_union_size: num_users must be >= 1");
  if (num_users == 1) return g120_bits;
  if (static_cast<int>(sets.by_order.size()) < num_users - 1)
    throw std::invalid_argument("visible_union_size: correlation sets incomplete");

  double correction = 0.0;  // sum C2 - sum C3 + sum C4 ...
  double sign = 1.0;
  for (int n = 2; n <= num_users; ++n, sign = -sign) {
    const auto& coeffs = sets.by_order[n - 2];
    if (static_cast<double>(coeffs.size()) != binomial(num_users, n))
      throw std::invalid_argument("visible_union_size: correlation sets incomplete");
    double s = 0.0;
    for (double c : coeffs) s += c;
    correction += sign * s;
  }
  return g120_bits * (static_cast<double>(num_users) - correction);
}

FormatChoice choose_format(double g360_bits, double l_a_bits) {
  FormatChoice choice;
  if (g360_bits >= l_a_bits) {
    choice.format = ContentFormat::kVisible120;
    choice.payload_bits = l_a_bits;
  } else {
    choice.format = ContentFormat::kFull360;
    choice.payload_bits = g360_bits;
  }
  return choice;
}

}  // namespace vrsim
