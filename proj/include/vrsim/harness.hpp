#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vrsim/config.hpp"
#include "vrsim/environment.hpp"
#include "vrsim/simulation.hpp"

namespace vrsim {

enum class Algorithm { kEsnTransfer, kEsnNoCorr, kQCorr, kQNoCorr };

constexpr Algorithm kAllAlgorithms[] = {Algorithm::kEsnTransfer, Algorithm::kEsnNoCorr,
                                        Algorithm::kQCorr, Algorithm::kQNoCorr};

std::string algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);
bool algorithm_uses_correlation(Algorithm algorithm);

// Full result of one seeded run; the CSV rows are a projection of this.
struct RunRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kEsnTransfer;
  int num_sbs = 0;
  int num_users = 0;
  std::vector<double> sigma_max_per_user;
  std::vector<double> tracking_bits_per_user;
  std::vector<PeriodMetrics> periods;
  // Sum over users of their success probability, averaged over periods
  // ("total"), and the same number per user.
  double total_success = 0.0;
  double per_user_mean_success = 0.0;
  std::vector<nlohmann::json> checkpoints;  // when record_checkpoints is set

  bool operator==(const RunRecord&) const;
};

void to_json(nlohmann::json& j, const RunRecord& record);
void from_json(const nlohmann::json& j, RunRecord& record);

// Builds the run-constant world (layout, association, payloads, action
// tables) for one algorithm and seed.
EnvironmentModel make_environment(const ExperimentConfig& config, Algorithm algorithm,
                                  std::uint64_t seed);

// N periods x T slots of the chosen learner; deterministic per (config,
// algorithm, seed).
RunRecord run_experiment(const ExperimentConfig& config, Algorithm algorithm,
                         std::uint64_t seed);

// Seeds run as independent parallel tasks; records come back in seed order.
std::vector<RunRecord> run_seeds(const ExperimentConfig& config, Algorithm algorithm,
                                 const std::vector<std::uint64_t>& seeds);

enum class SweepAxis { kNumSbs, kNumUsers, kBackhaulRate, kSigmaMaxScale, kPeriod };

SweepAxis sweep_axis_from_name(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepCell {
  double axis_value = 0.0;
  Algorithm algorithm = Algorithm::kEsnTransfer;
  double mean = 0.0;    // total success, or convergence iterations for kPeriod
  double stddev = 0.0;
  int num_seeds = 0;
};

// Per (axis value, algorithm): mean and stddev over seeds of the total
// success probability; the period axis aggregates convergence iterations
// instead. Per-run records are appended to `records` when given.
std::vector<SweepCell> sweep(const ExperimentConfig& config, SweepAxis axis,
                             const std::vector<double>& values,
                             const std::vector<Algorithm>& algorithms,
                             const std::vector<std::uint64_t>& seeds,
                             std::vector<RunRecord>* records = nullptr);

// Empirical CDF of a run-record metric: ascending right-continuous step
// points (value, fraction <= value). Metrics: total_success,
// per_user_success, mean_utility.
std::vector<std::pair<double, double>> compute_cdf(const std::vector<RunRecord>& records,
                                                   const std::string& metric);

// CSV: one row per (run, sbs, period), 9 significant digits, byte-stable.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);
// JSON: lossless mirror of the records.
void emit_json(const std::vector<RunRecord>& records, const std::string& path);
void emit(const std::vector<RunRecord>& records, const std::string& format,
          const std::string& path);

std::string csv_text(const std::vector<RunRecord>& records);

}  // namespace vrsim
