#pragma once

#include <memory>
#include <vector>

#include "vrsim/environment.hpp"
#include "vrsim/learning.hpp"

namespace vrsim {

// Everything a period leaves behind, per SBS unless noted.
struct PeriodMetrics {
  int period = 0;
  std::vector<std::vector<double>> utility_trace;        // [sbs][iteration]
  std::vector<int> convergence_iteration;                // 1-based
  std::vector<double> final_user_success;                // [user], greedy joint action
  std::vector<double> format_360_fraction;               // [sbs]
  std::vector<std::vector<long long>> format_counts_120; // [sbs][content]
  std::vector<std::vector<long long>> format_counts_360; // [sbs][content]
  std::vector<std::vector<double>> mean_la_bits;         // [sbs][content]

  double mean_utility(int sbs) const;
};

// First iteration after which the running-mean utility stays within 1%
// relative of its final level (mean of the last 100 running-mean points).
int convergence_iteration(const std::vector<double>& utility_trace);

// One period of the learning loop. Each iteration: every agent predicts and
// picks an action, the joint strategy indices are broadcast, the frozen
// slot world scores the joint action, and every agent trains on its own
// realized utility. Agents keep state across calls; call with consecutive
// periods of one run.
PeriodMetrics run_period(std::vector<std::unique_ptr<Agent>>& agents,
                         const PeriodEnvironment& env, int num_iterations, int period,
                         std::vector<Rng>& policy_rngs);

}  // namespace vrsim
