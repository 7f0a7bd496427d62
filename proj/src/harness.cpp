#include "vrsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <thread>

namespace vrsim {

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kEsnTransfer: return "EsnTransfer";
    case Algorithm::kEsnNoCorr: return "EsnNoCorr";
    case Algorithm::kQCorr: return "QCorr";
    case Algorithm::kQNoCorr: return "QNoCorr";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  for (Algorithm a : kAllAlgorithms)
    if (name == algorithm_name(a)) return a;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected EsnTransfer, EsnNoCorr, QCorr or QNoCorr)");
}

bool algorithm_uses_correlation(Algorithm algorithm) {
  return algorithm == Algorithm::kEsnTransfer || algorithm == Algorithm::kQCorr;
}

EnvironmentModel make_environment(const ExperimentConfig& config, Algorithm algorithm,
                                  std::uint64_t seed) {
  EnvironmentModel model;
  model.topology =
      generate_topology(config.num_sbs, config.num_users, config.area_radius_m, seed);
  model.channel.pathloss_exponent = config.pathloss_exponent;
  model.channel.noise_w = config.noise_w();
  model.channel.rb_bandwidth_hz = config.rb_bandwidth_hz;
  model.channel.sbs_power_w = config.sbs_power_w();
  model.channel.user_power_w = config.user_power_w();
  model.channel.min_distance_m = config.min_distance_m;
  model.catalog.num_contents = config.num_contents;
  model.catalog.g120_bits = config.g120_bits;
  model.catalog.g360_bits = config.g360_bits;
  model.catalog.view_width_deg = config.view_width_deg;
  model.catalog.view_concentration = config.view_concentration;
  model.tracking_size = {config.k_min_bits, config.k_max_bits, config.sigma_ref};
  model.decay = {config.alpha, config.kappa};
  model.tracking_models.assign(config.num_users, {config.sigma_tracking, 0.0});
  model.num_down_rb = config.num_down_rb;
  model.num_up_rb = config.num_up_rb;
  model.total_backhaul_bps = config.total_backhaul_bps;
  model.deadline_s = config.deadline_s;
  model.correlation_aware = algorithm_uses_correlation(algorithm);
  model.sigma_max_scale = config.sigma_max_scale;
  model.num_periods = config.num_periods;
  model.seed = seed;
  model.action_cap = config.action_cap;
  model.finalize();
  return model;
}

namespace {

std::unique_ptr<Agent> make_agent(const ExperimentConfig& config, Algorithm algorithm,
                                  const EnvironmentModel& model, int sbs) {
  const int num_actions = model.table_sizes[sbs];
  if (algorithm == Algorithm::kQCorr || algorithm == Algorithm::kQNoCorr) {
    QAgent::Params params;
    params.zeta = config.zeta;
    params.epsilon = config.epsilon;
    params.epsilon_decay = config.epsilon_decay;
    return std::make_unique<QAgent>(num_actions, params);
  }
  EsnAgent::Params params;
  params.num_neurons = config.num_neurons;
  params.recurrent_weight = config.recurrent_weight;
  params.learning_rate = config.lambda;
  params.delta_learning_rate = config.lambda_prime;
  params.epsilon = config.epsilon;
  params.epsilon_decay = config.epsilon_decay;
  params.input_scale = config.esn_input_scale;
  params.transfer = true;
  params.schedule = config.learning_schedule();
  params.schedule_tau = config.schedule_tau;
  return std::make_unique<EsnAgent>(
      model.topology.num_sbs(), num_actions, model.table_sizes, config.num_periods,
      params, Rng::stream(model.seed, "agent", static_cast<std::uint64_t>(sbs)));
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& config, Algorithm algorithm,
                         std::uint64_t seed) {
  validate_config(config);
  const EnvironmentModel model = make_environment(config, algorithm, seed);
  const int num_sbs = model.topology.num_sbs();

  std::vector<std::unique_ptr<Agent>> agents;
  std::vector<Rng> policy_rngs;
  for (int j = 0; j < num_sbs; ++j) {
    agents.push_back(make_agent(config, algorithm, model, j));
    policy_rngs.push_back(Rng::stream(seed, "policy", static_cast<std::uint64_t>(j)));
  }

  RunRecord record;
  record.config_hash = config_hash(config);
  record.seed = seed;
  record.algorithm = algorithm;
  record.num_sbs = num_sbs;
  record.num_users = model.topology.num_users();
  record.sigma_max_per_user = model.sigma_max_per_user;
  record.tracking_bits_per_user = model.tracking_bits_per_user;

  double total = 0.0;
  for (int n = 1; n <= config.num_periods; ++n) {
    PeriodEnvironment env(model, n, config.slots_per_period);
    PeriodMetrics metrics =
        run_period(agents, env, config.slots_per_period, n, policy_rngs);
    double period_total = 0.0;
    for (int j = 0; j < num_sbs; ++j) period_total += metrics.mean_utility(j);
    total += period_total;
    record.periods.push_back(std::move(metrics));
  }
  record.total_success = total / static_cast<double>(config.num_periods);
  record.per_user_mean_success =
      record.total_success / static_cast<double>(record.num_users);
  if (config.record_checkpoints)
    for (const auto& agent : agents) record.checkpoints.push_back(agent->checkpoint());
  return record;
}

namespace {

int worker_count(std::size_t tasks) {
  unsigned hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("VRNETSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) hw = static_cast<unsigned>(n);
  }
  if (hw == 0) hw = 1;
  return static_cast<int>(std::min<std::size_t>(hw, tasks));
}

template <typename Fn>
void parallel_for(std::size_t tasks, Fn&& fn) {
  const int workers = worker_count(tasks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<RunRecord> run_seeds(const ExperimentConfig& config, Algorithm algorithm,
                                 const std::vector<std::uint64_t>& seeds) {
  std::vector<RunRecord> records(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    records[i] = run_experiment(config, algorithm, seeds[i]);
  });
  return records;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "num_sbs") return SweepAxis::kNumSbs;
  if (name == "num_users") return SweepAxis::kNumUsers;
  if (name == "backhaul_rate") return SweepAxis::kBackhaulRate;
  if (name == "sigma_max_scale") return SweepAxis::kSigmaMaxScale;
  if (name == "period") return SweepAxis::kPeriod;
  throw std::invalid_argument(
      "unknown sweep axis '" + name +
      "' (expected num_sbs, num_users, backhaul_rate, sigma_max_scale or period)");
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNumSbs: return "num_sbs";
    case SweepAxis::kNumUsers: return "num_users";
    case SweepAxis::kBackhaulRate: return "backhaul_rate";
    case SweepAxis::kSigmaMaxScale: return "sigma_max_scale";
    case SweepAxis::kPeriod: return "period";
  }
  return "unknown";
}

namespace {

ExperimentConfig with_axis_value(const ExperimentConfig& base, SweepAxis axis,
                                 double value) {
  ExperimentConfig config = base;
  switch (axis) {
    case SweepAxis::kNumSbs: config.num_sbs = static_cast<int>(value); break;
    case SweepAxis::kNumUsers: config.num_users = static_cast<int>(value); break;
    case SweepAxis::kBackhaulRate: config.total_backhaul_bps = value; break;
    case SweepAxis::kSigmaMaxScale: config.sigma_max_scale = value; break;
    case SweepAxis::kPeriod: break;  // same runs, aggregated per period
  }
  validate_config(config);
  return config;
}

double run_statistic(const RunRecord& record, SweepAxis axis, double value) {
  if (axis != SweepAxis::kPeriod) return record.total_success;
  const int period = static_cast<int>(value);
  for (const auto& metrics : record.periods) {
    if (metrics.period != period) continue;
    double sum = 0.0;
    for (int conv : metrics.convergence_iteration) sum += conv;
    return sum / static_cast<double>(metrics.convergence_iteration.size());
  }
  throw std::out_of_range("sweep: period " + std::to_string(period) +
                          " not present in run records");
}

}  // namespace

std::vector<SweepCell> sweep(const ExperimentConfig& config, SweepAxis axis,
                             const std::vector<double>& values,
                             const std::vector<Algorithm>& algorithms,
                             const std::vector<std::uint64_t>& seeds,
                             std::vector<RunRecord>* records) {
  // The period axis reuses one set of runs per algorithm.
  const std::vector<double> run_values =
      axis == SweepAxis::kPeriod ? std::vector<double>{0.0} : values;

  struct Task {
    std::size_t value_index;
    std::size_t algo_index;
    std::size_t seed_index;
  };
  std::vector<Task> tasks;
  for (std::size_t v = 0; v < run_values.size(); ++v)
    for (std::size_t a = 0; a < algorithms.size(); ++a)
      for (std::size_t s = 0; s < seeds.size(); ++s) tasks.push_back({v, a, s});
  std::vector<RunRecord> results(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    const ExperimentConfig run_config =
        with_axis_value(config, axis, run_values[task.value_index]);
    results[i] =
        run_experiment(run_config, algorithms[task.algo_index], seeds[task.seed_index]);
  });

  std::vector<SweepCell> cells;
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      const std::size_t run_v = axis == SweepAxis::kPeriod ? 0 : v;
      std::vector<double> stats;
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const std::size_t index =
            (run_v * algorithms.size() + a) * seeds.size() + s;
        stats.push_back(run_statistic(results[index], axis, values[v]));
      }
      double mean = 0.0;
      for (double x : stats) mean += x;
      mean /= static_cast<double>(stats.size());
      double var = 0.0;
      for (double x : stats) var += (x - mean) * (x - mean);
      var = stats.size() > 1 ? var / static_cast<double>(stats.size() - 1) : 0.0;
      cells.push_back({values[v], algorithms[a], mean, std::sqrt(var),
                       static_cast<int>(stats.size())});
    }
  }
  if (records)
    records->insert(records->end(), std::make_move_iterator(results.begin()),
                    std::make_move_iterator(results.end()));
  return cells;
}

std::vector<std::pair<double, double>> compute_cdf(const std::vector<RunRecord>& records,
                                                   const std::string& metric) {
  if (records.empty()) throw std::invalid_argument("compute_cdf: no records");
  std::vector<double> samples;
  if (metric == "total_success") {
    for (const auto& r : records) samples.push_back(r.total_success);
  } else if (metric == "per_user_success") {
    for (const auto& r : records)
      for (const auto& p : r.periods)
        for (double s : p.final_user_success) samples.push_back(s);
  } else if (metric == "mean_utility") {
    for (const auto& r : records)
      for (const auto& p : r.periods)
        for (std::size_t j = 0; j < p.utility_trace.size(); ++j)
          samples.push_back(p.mean_utility(static_cast<int>(j)));
  } else {
    throw std::invalid_argument("compute_cdf: unknown metric '" + metric + "'");
  }
  if (samples.empty()) throw std::invalid_argument("compute_cdf: no samples");
  std::sort(samples.begin(), samples.end());
  std::vector<std::pair<double, double>> cdf;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double frac = static_cast<double>(i + 1) / n;
    if (!cdf.empty() && cdf.back().first == samples[i])
      cdf.back().second = frac;  // right-continuous: keep the top step
    else
      cdf.emplace_back(samples[i], frac);
  }
  return cdf;
}

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string csv_text(const std::vector<RunRecord>& records) {
  std::string out = "seed,algorithm,period,sbs_id,mean_utility,convergence_iter,format_360_fraction\n";
  for (const auto& r : records) {
    for (const auto& p : r.periods) {
      for (std::size_t j = 0; j < p.utility_trace.size(); ++j) {
        out += std::to_string(r.seed);
        out += ',';
        out += algorithm_name(r.algorithm);
        out += ',';
        out += std::to_string(p.period);
        out += ',';
        out += std::to_string(j);
        out += ',';
        out += fmt9(p.mean_utility(static_cast<int>(j)));
        out += ',';
        out += std::to_string(p.convergence_iteration[j]);
        out += ',';
        out += fmt9(p.format_360_fraction[j]);
        out += '\n';
      }
    }
  }
  return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
  out << csv_text(records);
  if (!out) throw std::runtime_error("emit: write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// JSON mirror

namespace {

nlohmann::json metrics_to_json(const PeriodMetrics& m) {
  nlohmann::json j;
  j["period"] = m.period;
  j["utility_trace"] = m.utility_trace;
  j["convergence_iteration"] = m.convergence_iteration;
  j["final_user_success"] = m.final_user_success;
  j["format_360_fraction"] = m.format_360_fraction;
  j["format_counts_120"] = m.format_counts_120;
  j["format_counts_360"] = m.format_counts_360;
  // NaN marks (sbs, content) pairs that never saw a request; JSON has no
  // NaN, so encode as null.
  nlohmann::json la = nlohmann::json::array();
  for (const auto& row : m.mean_la_bits) {
    nlohmann::json jrow = nlohmann::json::array();
    for (double v : row)
      jrow.push_back(std::isnan(v) ? nlohmann::json() : nlohmann::json(v));
    la.push_back(std::move(jrow));
  }
  j["mean_la_bits"] = std::move(la);
  return j;
}

PeriodMetrics metrics_from_json(const nlohmann::json& j) {
  PeriodMetrics m;
  m.period = j.at("period").get<int>();
  m.utility_trace = j.at("utility_trace").get<std::vector<std::vector<double>>>();
  m.convergence_iteration = j.at("convergence_iteration").get<std::vector<int>>();
  m.final_user_success = j.at("final_user_success").get<std::vector<double>>();
  m.format_360_fraction = j.at("format_360_fraction").get<std::vector<double>>();
  m.format_counts_120 = j.at("format_counts_120").get<std::vector<std::vector<long long>>>();
  m.format_counts_360 = j.at("format_counts_360").get<std::vector<std::vector<long long>>>();
  for (const auto& jrow : j.at("mean_la_bits")) {
    std::vector<double> row;
    for (const auto& v : jrow)
      row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                : v.get<double>());
    m.mean_la_bits.push_back(std::move(row));
  }
  return m;
}

bool nan_equal(const std::vector<std::vector<double>>& a,
               const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      const bool an = std::isnan(a[i][k]), bn = std::isnan(b[i][k]);
      if (an != bn || (!an && a[i][k] != b[i][k])) return false;
    }
  }
  return true;
}

}  // namespace

bool RunRecord::operator==(const RunRecord& o) const {
  if (config_hash != o.config_hash || seed != o.seed || algorithm != o.algorithm ||
      num_sbs != o.num_sbs || num_users != o.num_users ||
      sigma_max_per_user != o.sigma_max_per_user ||
      tracking_bits_per_user != o.tracking_bits_per_user ||
      total_success != o.total_success ||
      per_user_mean_success != o.per_user_mean_success ||
      checkpoints != o.checkpoints || periods.size() != o.periods.size())
    return false;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    const auto& a = periods[i];
    const auto& b = o.periods[i];
    if (a.period != b.period || a.utility_trace != b.utility_trace ||
        a.convergence_iteration != b.convergence_iteration ||
        a.final_user_success != b.final_user_success ||
        a.format_360_fraction != b.format_360_fraction ||
        a.format_counts_120 != b.format_counts_120 ||
        a.format_counts_360 != b.format_counts_360 ||
        !nan_equal(a.mean_la_bits, b.mean_la_bits))
      return false;
  }
  return true;
}

void to_json(nlohmann::json& j, const RunRecord& record) {
  j["config_hash"] = record.config_hash;
  j["seed"] = record.seed;
  j["algorithm"] = algorithm_name(record.algorithm);
  j["num_sbs"] = record.num_sbs;
  j["num_users"] = record.num_users;
  j["sigma_max_per_user"] = record.sigma_max_per_user;
  j["tracking_bits_per_user"] = record.tracking_bits_per_user;
  nlohmann::json periods = nlohmann::json::array();
  for (const auto& p : record.periods) periods.push_back(metrics_to_json(p));
  j["periods"] = std::move(periods);
  j["total_success"] = record.total_success;
  j["per_user_mean_success"] = record.per_user_mean_success;
  j["checkpoints"] = record.checkpoints;
}

void from_json(const nlohmann::json& j, RunRecord& record) {
  record.config_hash = j.at("config_hash").get<std::string>();
  record.seed = j.at("seed").get<std::uint64_t>();
  record.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  record.num_sbs = j.at("num_sbs").get<int>();
  record.num_users = j.at("num_users").get<int>();
  record.sigma_max_per_user = j.at("sigma_max_per_user").get<std::vector<double>>();
  record.tracking_bits_per_user =
      j.at("tracking_bits_per_user").get<std::vector<double>>();
  record.periods.clear();
  for (const auto& p : j.at("periods")) record.periods.push_back(metrics_from_json(p));
  record.total_success = j.at("total_success").get<double>();
  record.per_user_mean_success = j.at("per_user_mean_success").get<double>();
  record.checkpoints = j.at("checkpoints").get<std::vector<nlohmann::json>>();
}

void emit_json(const std::vector<RunRecord>& records, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : records) j.push_back(r);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("emit: write failed for '" + path + "'");
}

void emit(const std::vector<RunRecord>& records, const std::string& format,
          const std::string& path) {
  if (format == "csv")
    emit_csv(records, path);
  else if (format == "json")
    emit_json(records, path);
  else
    throw std::invalid_argument("emit: unknown format '" + format + "'");
}

}  // namespace vrsim
