#pragma once

#include <cstdint>
#include <vector>

#include "vrsim/channel.hpp"
#include "vrsim/correlation.hpp"
#include "vrsim/learning.hpp"
#include "vrsim/topology.hpp"

namespace vrsim {

struct ContentCatalog {
  int num_contents = 10;
  double g120_bits = 12e6;
  double g360_bits = 50e6;
  double view_width_deg = 120.0;
  double view_concentration = 0.0;  // 0 uniform centres, ->1 all identical
};

// Everything fixed for a whole run: layout, radio constants, catalog,
// per-user tracking payloads, and the per-SBS action tables.
struct EnvironmentModel {
  Topology topology;
  ChannelParams channel;
  ContentCatalog catalog;
  TrackingSizeConfig tracking_size;
  CorrelationDecay decay;
  std::vector<UserTrackingModel> tracking_models;
  int num_down_rb = 5;
  int num_up_rb = 5;
  double total_backhaul_bps = 10e9;
  double deadline_s = 0.020;
  bool correlation_aware = true;
  double sigma_max_scale = 1.0;
  int num_periods = 100;
  std::uint64_t seed = 0;
  std::uint64_t action_cap = 128;

  // Filled by finalize():
  std::vector<std::vector<int>> sbs_users;  // SBS -> global user ids
  std::vector<double> sigma_max_per_user;
  std::vector<double> tracking_bits_per_user;
  double per_user_backhaul_bps = 0.0;
  std::vector<std::vector<Allocation>> action_tables;  // per SBS
  std::vector<int> table_sizes;

  // Derives association groups, covariance maxima, tracking payloads and
  // action tables from the primary fields. Call once after construction.
  void finalize();
};

// One period's frozen random world: request distributions, view windows,
// per-slot requests and fading, reduced to the allocation-independent
// tables the evaluator needs. The utility of a joint action is then a
// deterministic function, so repeated evaluation is exact replay.
class PeriodEnvironment {
 public:
  PeriodEnvironment(const EnvironmentModel& model, int period, int num_slots);

  // Total success probability per SBS (summed over its users) of a joint
  // action, averaged over the period's slots; Eq.-style per-user
  // probabilities optionally returned through user_success.
  std::vector<double> evaluate(const std::vector<int>& action_indices,
                               std::vector<double>* user_success = nullptr) const;

  const EnvironmentModel& model() const { return *model_; }
  int period() const { return period_; }
  int num_slots() const { return num_slots_; }

  // Allocation-independent per-period outcomes of the format rule.
  const std::vector<double>& format_360_fraction() const { return format_360_fraction_; }
  const std::vector<std::vector<long long>>& format_counts_120() const {
    return format_counts_120_;
  }
  const std::vector<std::vector<long long>>& format_counts_360() const {
    return format_counts_360_;
  }
  // Mean visible-union payload per (SBS, content); NaN when never requested.
  const std::vector<std::vector<double>>& mean_la_bits() const { return mean_la_bits_; }

 private:
  const EnvironmentModel* model_;
  int period_;
  int num_slots_;
  int num_users_;
  int num_sbs_;

  // Flattened tables; slot-major for cache locality in evaluate().
  std::vector<double> rate_down_;      // [t][user][down_rb] bit/s
  std::vector<double> up_power_;       // [t][user][sbs][up_rb] W
  std::vector<double> backhaul_term_;  // [t][user] s

  std::vector<double> format_360_fraction_;
  std::vector<std::vector<long long>> format_counts_120_;
  std::vector<std::vector<long long>> format_counts_360_;
  std::vector<std::vector<double>> mean_la_bits_;

  mutable std::vector<double> scratch_down_;
  mutable std::vector<double> scratch_up_;
  mutable std::vector<int> scratch_assigned_;
  mutable std::vector<int> scratch_success_;
};

}  // namespace vrsim
