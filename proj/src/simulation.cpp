#include "vrsim/simulation.hpp"

#include <cmath>
#include <stdexcept>

namespace vrsim {

double PeriodMetrics::mean_utility(int sbs) const {
  const auto& trace = utility_trace[sbs];
  if (trace.empty()) return 0.0;
  double sum = 0.0;
  for (double u : trace) sum += u;
  return sum / static_cast<double>(trace.size());
}

int convergence_iteration(const std::vector<double>& utility_trace) {
  const int n = static_cast<int>(utility_trace.size());
  if (n == 0) return 0;
  std::vector<double> running(n);
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    acc += utility_trace[t];
    running[t] = acc / static_cast<double>(t + 1);
  }
  const int window = std::min(100, n);
  double centre = 0.0;
  for (int t = n - window; t < n; ++t) centre += running[t];
  centre /= static_cast<double>(window);
  const double tol = std::max(0.01 * std::abs(centre), 1e-12);

  int first = n - 1;
  for (int t = n - 1; t >= 0; --t) {
    if (std::abs(running[t] - centre) > tol) break;
    first = t;
  }
  return first + 1;
}

PeriodMetrics run_period(std::vector<std::unique_ptr<Agent>>& agents,
                         const PeriodEnvironment& env, int num_iterations, int period,
                         std::vector<Rng>& policy_rngs) {
  const auto& model = env.model();
  const int num_sbs = model.topology.num_sbs();
  if (static_cast<int>(agents.size()) != num_sbs || agents.size() != policy_rngs.size())
    throw std::invalid_argument("run_period: one agent and one policy stream per SBS");

  for (auto& agent : agents) agent->begin_period(period);

  PeriodMetrics metrics;
  metrics.period = period;
  metrics.utility_trace.assign(num_sbs, {});
  for (auto& trace : metrics.utility_trace) trace.reserve(num_iterations);

  std::vector<int> indices(num_sbs, 0);
  for (int t = 1; t <= num_iterations; ++t) {
    for (int j = 0; j < num_sbs; ++j)
      indices[j] = agents[j]->choose(period, t, policy_rngs[j]);
    const std::vector<double> utilities = env.evaluate(indices);
    for (int j = 0; j < num_sbs; ++j) {
      agents[j]->observe(indices, period, indices[j], utilities[j]);
      metrics.utility_trace[j].push_back(utilities[j]);
    }
  }

  metrics.convergence_iteration.resize(num_sbs);
  for (int j = 0; j < num_sbs; ++j)
    metrics.convergence_iteration[j] = convergence_iteration(metrics.utility_trace[j]);

  // Score the period's answer: every SBS plays its greedy action.
  std::vector<int> greedy(num_sbs);
  for (int j = 0; j < num_sbs; ++j) greedy[j] = agents[j]->greedy_action();
  env.evaluate(greedy, &metrics.final_user_success);

  metrics.format_360_fraction = env.format_360_fraction();
  metrics.format_counts_120 = env.format_counts_120();
  metrics.format_counts_360 = env.format_counts_360();
  metrics.mean_la_bits = env.mean_la_bits();
  return metrics;
}

}  // namespace vrsim
