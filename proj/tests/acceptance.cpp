// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. An optional argv[1] runs a single criterion by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vrsim/harness.hpp"

using namespace vrsim;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome& outcome;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      outcome.pass = false;
      outcome.detail += (outcome.detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Format-decision threshold

Outcome criterion1() {
  Outcome out;
  Check check{out};
  const double g360 = 50e6;
  for (double la_mbits : {12.0, 24.0, 36.0, 48.0, 50.0, 52.0, 60.0}) {
    const FormatChoice choice = choose_format(g360, la_mbits * 1e6);
    const bool want_visible = la_mbits <= 50.0;
    check.require((choice.format == ContentFormat::kVisible120) == want_visible,
                  "L_a=" + fmt(la_mbits) + " Mbit chose the wrong format");
    check.require(choice.payload_bits == std::min(g360, la_mbits * 1e6),
                  "L_a=" + fmt(la_mbits) + " Mbit payload is not the minimum");
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2. Inclusion-exclusion vs grid arc-union oracle

Outcome criterion2() {
  Outcome out;
  Check check{out};
  Rng rng = Rng::stream(2025, "acceptance-union");
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    std::vector<ViewState> views;
    for (int i = 0; i < n; ++i) views.push_back({0, 360.0 * rng.uniform(), 120.0});
    const double la = visible_union_size(overlap_sets(views), n, 12e6);
    const double grid = 12e6 * oracles::grid_union_deg(views, 100000) / 120.0;
    worst = std::max(worst, std::abs(la - grid) / grid);
  }
  check.require(worst <= 0.01, "worst relative error " + fmt(worst) + " > 1%");
  if (out.pass) out.detail = "worst relative error " + fmt(worst);
  return out;
}

// ---------------------------------------------------------------------------
// 3. Gain formulas match brute-force re-simulation exactly

GainHistory random_history(Rng& rng, int slots) {
  GainHistory h;
  h.content_bits = rng.uniform(5e3, 20e3);
  h.tracking_bits = rng.uniform(1e2, 2e3);
  h.deadline_s = rng.uniform(0.005, 0.04);
  h.slots.resize(slots);
  for (auto& s : h.slots) {
    s.rate_down_bps = rng.uniform(1e5, 8e6);
    s.rate_up_bps = rng.uniform(1e4, 8e6);
    s.pooled_backhaul_bps = rng.uniform(1e6, 1e9);
    s.backhaul_term_s = rng.uniform(0.0, 0.02);
    const double roll = rng.uniform();
    if (roll < 0.03) s.rate_down_bps = 0.0;
    else if (roll < 0.06) s.rate_up_bps = 0.0;
    else if (roll < 0.09) s.backhaul_term_s = 0.05;
  }
  return h;
}

Outcome criterion3() {
  Outcome out;
  Check check{out};
  Rng rng = Rng::stream(2025, "acceptance-gains");
  for (int trial = 0; trial < 100; ++trial) {
    const GainHistory h = random_history(rng, 1000);
    const double dv = rng.uniform(0.0, 4e6);
    const double ds = rng.uniform(0.0, 4e6);
    const double m120 = rng.uniform(1e3, 60e3);
    const double m360 = rng.uniform(1e3, 60e3);
    check.require(gain_uplink_rbs(h, dv) == oracles::gain_uplink_resim(h, dv),
                  "uplink gain mismatch at trial " + std::to_string(trial));
    check.require(gain_downlink_rbs(h, ds) == oracles::gain_downlink_resim(h, ds),
                  "downlink gain mismatch at trial " + std::to_string(trial));
    check.require(
        gain_format_change(h, m120, m360) == oracles::gain_format_resim(h, m120, m360),
        "format gain mismatch at trial " + std::to_string(trial));
    if (!out.pass) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4. Supervised ESN convergence under both learning-rate schedules

Outcome criterion4() {
  Outcome out;
  Check check{out};
  const double targets[8] = {0.3, 2.1, 1.4, 4.0, 0.9, 3.3, 2.7, 1.8};
  for (const bool robbins_monro : {false, true}) {
    EsnAgent::Params params;  // N_w = 100, lambda = 0.3
    if (robbins_monro) {
      params.schedule = LearningSchedule::kRobbinsMonro;
      params.schedule_tau = 1000.0;
    }
    EsnAgent agent(2, 8, {8, 8}, 10, params, Rng::stream(4, "acceptance-esn"));
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.4);
    for (int t = 0; t < 5000; ++t) {
      esn_update_state(agent, x);
      agent.last_input = x;
      esn_train_utility(agent, t % 8, targets[t % 8]);
    }
    const Eigen::VectorXd y = esn_predict(agent, x);
    double err = 0.0;
    for (int k = 0; k < 8; ++k) err = std::max(err, std::abs(y[k] - targets[k]));
    check.require(err < 1e-2, std::string(robbins_monro ? "robbins-monro" : "constant") +
                                  " schedule error " + fmt(err) + " >= 1e-2");
    out.detail += (out.detail.empty() ? "" : ", ") +
                  std::string(robbins_monro ? "rm err " : "const err ") + fmt(err);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5. Echo-state contraction

Outcome criterion5() {
  Outcome out;
  Check check{out};
  EsnAgent::Params params;
  params.recurrent_weight = 0.5;
  EsnAgent a(2, 8, {8, 8}, 10, params, Rng::stream(5, "acceptance-esn"));
  EsnAgent b = a;
  Rng rng = Rng::stream(5, "acceptance-states");
  for (int i = 0; i < a.state.size(); ++i) {
    a.state[i] = rng.uniform(-1.0, 1.0);
    b.state[i] = rng.uniform(-1.0, 1.0);
  }
  const double initial = (a.state - b.state).norm();
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd x(3);
    x << rng.uniform(), rng.uniform(), rng.uniform();
    esn_update_state(a, x);
    esn_update_state(b, x);
  }
  const double final_distance = (a.state - b.state).norm();
  const double bound = std::pow(0.5, 200) * initial + 1e-9;
  check.require(final_distance <= bound, "distance " + fmt(final_distance) +
                                             " above bound " + fmt(bound));
  out.detail = "initial " + fmt(initial) + " -> final " + fmt(final_distance);
  return out;
}

// ---------------------------------------------------------------------------
// 6 + 7 share one batch of desk-scale runs.

struct DeskRuns {
  std::vector<RunRecord> esn, qcorr, qnocorr;
};

const DeskRuns& desk_runs() {
  static const DeskRuns runs = [] {
    ExperimentConfig cfg;
    apply_profile(cfg, "desk");
    cfg.num_periods = 10;
    cfg.slots_per_period = 1000;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(s);
    DeskRuns r;
    r.esn = run_seeds(cfg, Algorithm::kEsnTransfer, seeds);
    r.qcorr = run_seeds(cfg, Algorithm::kQCorr, seeds);
    r.qnocorr = run_seeds(cfg, Algorithm::kQNoCorr, seeds);
    return r;
  }();
  return runs;
}

double mean_total(const std::vector<RunRecord>& records) {
  double sum = 0.0;
  for (const auto& r : records) sum += r.total_success;
  return sum / static_cast<double>(records.size());
}

Outcome criterion6() {
  Outcome out;
  Check check{out};
  const DeskRuns& runs = desk_runs();
  const double esn = mean_total(runs.esn);
  const double qc = mean_total(runs.qcorr);
  const double qn = mean_total(runs.qnocorr);
  check.require(esn >= qc, "EsnTransfer < QCorr");
  check.require(qc >= qn, "QCorr < QNoCorr");
  check.require((esn - qc) / qc >= 0.05, "EsnTransfer-over-QCorr gap below 5%");
  out.detail = "EsnTransfer " + fmt(esn) + " >= QCorr " + fmt(qc) + " >= QNoCorr " +
               fmt(qn) + ", rel gap " + fmt(100.0 * (esn - qc) / qc) + "%";
  return out;
}

double mean_convergence(const std::vector<RunRecord>& records, int period) {
  double sum = 0.0;
  for (const auto& r : records) {
    const auto& conv = r.periods[period - 1].convergence_iteration;
    double per_run = 0.0;
    for (int c : conv) per_run += c;
    sum += per_run / static_cast<double>(conv.size());
  }
  return sum / static_cast<double>(records.size());
}

Outcome criterion7() {
  Outcome out;
  Check check{out};
  const DeskRuns& runs = desk_runs();
  const double esn1 = mean_convergence(runs.esn, 1);
  const double esn3 = mean_convergence(runs.esn, 3);
  const double q1 = mean_convergence(runs.qcorr, 1);
  const double q3 = mean_convergence(runs.qcorr, 3);
  check.require(esn3 <= 0.85 * esn1, "EsnTransfer period-3 convergence " + fmt(esn3) +
                                         " above 0.85 x period-1 " + fmt(esn1));
  const double q_ratio = q3 / q1;
  check.require(0.9 <= q_ratio && q_ratio <= 1.1,
                "QCorr period-3/period-1 ratio " + fmt(q_ratio) + " outside [0.9, 1.1]");
  out.detail = "EsnTransfer " + fmt(esn3) + "/" + fmt(esn1) + " = " + fmt(esn3 / esn1) +
               ", QCorr ratio " + fmt(q_ratio);
  return out;
}

// ---------------------------------------------------------------------------
// 8. Monotone sweeps and the backhaul gap direction

Outcome criterion8() {
  Outcome out;
  Check check{out};
  ExperimentConfig cfg;
  apply_profile(cfg, "desk");
  cfg.num_periods = 3;
  cfg.slots_per_period = 500;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(s);
  const std::vector<Algorithm> algos = {Algorithm::kEsnTransfer, Algorithm::kEsnNoCorr,
                                        Algorithm::kQCorr, Algorithm::kQNoCorr};

  const std::vector<double> sbs_grid = {3, 5, 7, 9};
  const auto sbs_cells = sweep(cfg, SweepAxis::kNumSbs, sbs_grid, algos, seeds);
  for (const Algorithm algo : algos) {
    double prev = -1.0;
    for (double value : sbs_grid) {
      for (const auto& cell : sbs_cells)
        if (cell.algorithm == algo && cell.axis_value == value) {
          check.require(cell.mean >= prev,
                        algorithm_name(algo) + " success not monotone in num_sbs at " +
                            fmt(value));
          prev = cell.mean;
        }
    }
  }

  const std::vector<double> backhaul_grid = {3e7, 1e8, 1e9, 1e10};
  const auto bh_cells = sweep(cfg, SweepAxis::kBackhaulRate, backhaul_grid, algos, seeds);
  auto cell_mean = [&](Algorithm algo, double value) {
    for (const auto& cell : bh_cells)
      if (cell.algorithm == algo && cell.axis_value == value) return cell.mean;
    return -1.0;
  };
  for (const Algorithm algo : algos) {
    double prev = -1.0;
    for (double value : backhaul_grid) {
      const double mean = cell_mean(algo, value);
      check.require(mean >= prev, algorithm_name(algo) +
                                      " success not monotone in backhaul at " + fmt(value));
      prev = mean;
    }
  }

  std::string gaps;
  double prev_gap = std::numeric_limits<double>::infinity();
  bool gap_ok = true;
  for (double value : backhaul_grid) {
    const double gap =
        cell_mean(Algorithm::kEsnTransfer, value) - cell_mean(Algorithm::kQCorr, value);
    gap_ok = gap_ok && gap <= prev_gap;
    prev_gap = gap;
    gaps += (gaps.empty() ? "" : ", ") + fmt(gap);
  }
  check.require(gap_ok, "EsnTransfer-vs-QCorr gap not non-increasing in backhaul rate (" +
                            gaps + ")");
  if (out.pass) out.detail = "gaps " + gaps;
  return out;
}

// ---------------------------------------------------------------------------
// 9. Determinism of the emitted CSV

Outcome criterion9() {
  Outcome out;
  Check check{out};
  ExperimentConfig cfg;
  apply_profile(cfg, "desk");
  cfg.num_sbs = 3;
  cfg.num_users = 9;
  cfg.num_periods = 2;
  cfg.slots_per_period = 200;
  cfg.action_cap = 64;
  const RunRecord a = run_experiment(cfg, Algorithm::kEsnTransfer, 123);
  const RunRecord b = run_experiment(cfg, Algorithm::kEsnTransfer, 123);
  check.require(a == b, "run records differ between identical runs");
  check.require(csv_text({a}) == csv_text({b}), "CSV bytes differ between identical runs");
  const RunRecord q = run_experiment(cfg, Algorithm::kQNoCorr, 123);
  const RunRecord q2 = run_experiment(cfg, Algorithm::kQNoCorr, 123);
  check.require(csv_text({q}) == csv_text({q2}), "QNoCorr CSV bytes differ");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> criteria = {
      {1, "format-decision threshold", criterion1},
      {2, "inclusion-exclusion vs grid union oracle", criterion2},
      {3, "gain formulas equal direct re-simulation", criterion3},
      {4, "supervised ESN convergence", criterion4},
      {5, "echo-state contraction", criterion5},
      {6, "algorithm ordering on the desk scale", criterion6},
      {7, "transfer convergence speedup", criterion7},
      {8, "monotone sweeps and backhaul gap direction", criterion8},
      {9, "deterministic CSV per (config, seed)", criterion9},
  };

  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const auto& entry : criteria) {
    if (only != 0 && entry.id != only) continue;
    const auto start = Clock::now();
    const Outcome outcome = entry.run();
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
            .count() /
        1000.0;
    std::printf("[%s] criterion %d: %s%s%s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL",
                entry.id, entry.name, outcome.detail.empty() ? "" : " - ",
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
