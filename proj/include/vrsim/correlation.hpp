#pragma once

#include <vector>

#include "vrsim/topology.hpp"

namespace vrsim {

// Gaussian tracking-data model of one user; mu is kept for completeness
// but never enters the covariance.
struct UserTrackingModel {
  double sigma = 1.0;
  double mu = 0.0;
};

// Power-exponential decay of tracking-data covariance with distance.
struct CorrelationDecay {
  double alpha = 2.0;
  double kappa = 5.0;
};

// sigma_i * sigma_j * exp(-d^alpha / kappa)
double covariance(double sigma_i, double sigma_j, double distance_m, double alpha,
                  double kappa);

// Largest pairwise covariance of `user` against its co-associated peers;
// 0 for a user alone at its SBS.
double sigma_max(int user, const std::vector<int>& co_associated_users,
                 const Topology& topology, const std::vector<UserTrackingModel>& models,
                 const CorrelationDecay& decay);

struct TrackingSizeConfig {
  double k_min_bits = 0.1e6;
  double k_max_bits = 1.0e6;
  double sigma_ref = 1.0;
};

// Linear-with-clamps map from covariance to uplink tracking payload.
double tracking_data_size(double sigma_max_value, const TrackingSizeConfig& config);

// One user's field-of-view window on a content: an arc of `width_deg`
// centred at `center_deg` on the 360-degree circle.
struct ViewState {
  int content_id = 0;
  double center_deg = 0.0;
  double width_deg = 120.0;
};

// n-way overlap coefficients, grouped by order: by_order[0] holds all
// 2-way coefficients, by_order[1] all 3-way ones, and so on. Every
// coefficient is arc-intersection length / view width, in [0,1].
struct CorrelationSets {
  int num_views = 0;
  double view_width_deg = 120.0;
  std::vector<std::vector<double>> by_order;
};

// Exact arc-intersection length (degrees) of all views; views wrap across
// 0/360 freely.
double arc_intersection_deg(const std::vector<ViewState>& views);

// Exact arc-union length (degrees) via interval merging. Equals the
// inclusion-exclusion of the same arcs; used as the closed form for large
// view groups.
double arc_union_deg(const std::vector<ViewState>& views);

// All n-way overlap coefficients, n = 2..views.size(). All views must
// share one width. Cost grows as 2^n; keep groups small.
CorrelationSets overlap_sets(const std::vector<ViewState>& views);

// Inclusion-exclusion payload of shipping every requested visible portion:
//   L_a = G120 * (U - sum C2 + sum C3 - ...)
// U_ja = 1 returns g120_bits. Throws std::invalid_argument when the sets
// are incomplete for orders 2..U_ja.
double visible_union_size(const CorrelationSets& sets, int num_users, double g120_bits);

enum class ContentFormat { kVisible120, kFull360 };

struct FormatChoice {
  ContentFormat format = ContentFormat::kVisible120;
  double payload_bits = 0.0;  // min(G360, L_a), what actually crosses backhaul
};

// Visible wins ties: Visible120 iff G360 >= L_a.
FormatChoice choose_format(double g360_bits, double l_a_bits);

}  // namespace vrsim
