#include "vrsim/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

namespace vrsim {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

std::vector<int> allocation_row(const std::vector<int>& rb_user, int user) {
  std::vector<int> row(rb_user.size(), 0);
  for (std::size_t k = 0; k < rb_user.size(); ++k) row[k] = rb_user[k] == user ? 1 : 0;
  return row;
}

namespace {

Allocation decode_action(std::uint64_t code, int num_users, int num_down_rb,
                         int num_up_rb) {
  Allocation a;
  a.down_user.resize(num_down_rb);
  a.up_user.resize(num_up_rb);
  const auto base = static_cast<std::uint64_t>(num_users);
  for (int k = num_up_rb - 1; k >= 0; --k) {
    a.up_user[k] = static_cast<int>(code % base);
    code /= base;
  }
  for (int k = num_down_rb - 1; k >= 0; --k) {
    a.down_user[k] = static_cast<int>(code % base);
    code /= base;
  }
  return a;
}

}  // namespace

std::vector<Allocation> enumerate_actions(int num_users, int num_down_rb, int num_up_rb,
                                          std::uint64_t cap, std::uint64_t seed) {
  if (num_users <= 0) return {Allocation{std::vector<int>{}, std::vector<int>{}}};
  if (cap == 0) throw std::invalid_argument("enumerate_actions: cap must be >= 1");

  // U^(S+V), saturating instead of overflowing.
  std::uint64_t total = 1;
  bool overflow = false;
  for (int k = 0; k < num_down_rb + num_up_rb; ++k) {
    if (total > std::numeric_limits<std::uint64_t>::max() / num_users) {
      overflow = true;
      break;
    }
    total *= static_cast<std::uint64_t>(num_users);
  }

  std::vector<Allocation> actions;
  if (!overflow && total <= cap) {
    actions.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code)
      actions.push_back(decode_action(code, num_users, num_down_rb, num_up_rb));
    return actions;
  }

  Rng rng = Rng::stream(seed, "action-sample");
  std::set<std::uint64_t> codes;
  while (codes.size() < cap) {
    std::uint64_t code;
    if (overflow) {
      code = rng.next_u64();  // decode_action reduces digit-by-digit
    } else {
      code = rng.uniform_index(total);
    }
    codes.insert(code);
  }
  actions.reserve(codes.size());
  for (std::uint64_t code : codes)
    actions.push_back(decode_action(code, num_users, num_down_rb, num_up_rb));
  return actions;
}

Eigen::VectorXd build_input(const std::vector<int>& strategy_indices,
                            const std::vector<int>& table_sizes, int period,
                            int num_periods) {
  if (strategy_indices.size() != table_sizes.size())
    throw std::invalid_argument("build_input: index/size length mismatch");
  Eigen::VectorXd x(strategy_indices.size() + 1);
  for (std::size_t k = 0; k < strategy_indices.size(); ++k)
    x[static_cast<Eigen::Index>(k)] =
        static_cast<double>(strategy_indices[k]) / static_cast<double>(table_sizes[k]);
  x[x.size() - 1] = static_cast<double>(period) / static_cast<double>(num_periods);
  return x;
}

int select_action(const Eigen::VectorXd& utilities, double epsilon, Rng& rng) {
  if (utilities.size() == 0) throw std::invalid_argument("select_action: empty utilities");
  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return static_cast<int>(rng.uniform_index(utilities.size()));
  int best = 0;
  for (int k = 1; k < utilities.size(); ++k)
    if (utilities[k] > utilities[best]) best = k;
  return best;
}

// ---------------------------------------------------------------------------
// EsnAgent

EsnAgent::EsnAgent(int num_sbs, int num_actions, std::vector<int> table_sizes,
                   int num_periods, const Params& params, Rng init_rng)
    : params(params), table_sizes_(std::move(table_sizes)), num_periods_(num_periods) {
  const int input_dim = num_sbs + 1;
  const int n = params.num_neurons;
  input_weights.resize(n, input_dim);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < input_dim; ++c)
      input_weights(r, c) = init_rng.uniform(-0.5, 0.5) * params.input_scale;
  output_weights = Eigen::MatrixXd::Zero(num_actions, n + input_dim);
  delta_output_weights = Eigen::MatrixXd::Zero(num_actions, n + input_dim);
  state = Eigen::VectorXd::Zero(n);
  last_input = Eigen::VectorXd::Zero(input_dim);
  utility_this_period.assign(num_actions, kNan);
  utility_prev_period.assign(num_actions, kNan);
}

void esn_update_state(EsnAgent& agent, const Eigen::VectorXd& input) {
  const Eigen::Index n = agent.state.size();
  Eigen::VectorXd pre = agent.input_weights * input;
  const double w = agent.params.recurrent_weight;
  // Cyclic recurrent matrix: row i picks up w * mu[i-1], row 0 wraps.
  Eigen::VectorXd next(n);
  for (Eigen::Index i = 0; i < n; ++i)
    next[i] = std::tanh(w * agent.state[(i + n - 1) % n] + pre[i]);
  agent.state = std::move(next);
}

namespace {

Eigen::VectorXd readout(const Eigen::MatrixXd& weights, const Eigen::VectorXd& state,
                        const Eigen::VectorXd& input) {
  Eigen::VectorXd concat(state.size() + input.size());
  concat << state, input;
  return weights * concat;
}

double scheduled_rate(double base, LearningSchedule schedule, double tau,
                      std::int64_t update_count) {
  if (schedule == LearningSchedule::kConstant) return base;
  return base / (1.0 + static_cast<double>(update_count) / tau);
}

}  // namespace

Eigen::VectorXd esn_predict(const EsnAgent& agent, const Eigen::VectorXd& input) {
  return readout(agent.output_weights, agent.state, input);
}

Eigen::VectorXd esn_predict_delta(const EsnAgent& agent, const Eigen::VectorXd& input) {
  return readout(agent.delta_output_weights, agent.state, input);
}

void esn_train_utility(EsnAgent& agent, int performed_action, double realized_utility) {
  const Eigen::Index n = agent.state.size();
  const double predicted =
      readout(agent.output_weights, agent.state, agent.last_input)[performed_action];
  const double rate = scheduled_rate(agent.params.learning_rate, agent.params.schedule,
                                     agent.params.schedule_tau, agent.update_count);
  // Only the state-aligned columns move; input-aligned ones stay at init.
  agent.output_weights.row(performed_action).head(n) +=
      rate * (realized_utility - predicted) * agent.state.transpose();
  ++agent.update_count;
}

void esn_train_delta(EsnAgent& agent, int performed_action, double utility_n,
                     double utility_n_minus_1) {
  if (agent.current_period <= 1)
    throw std::logic_error("esn_train_delta: no previous period to difference against");
  const Eigen::Index n = agent.state.size();
  const double target = utility_n - utility_n_minus_1;
  const double predicted =
      readout(agent.delta_output_weights, agent.state, agent.last_input)[performed_action];
  const double rate =
      scheduled_rate(agent.params.delta_learning_rate, agent.params.schedule,
                     agent.params.schedule_tau, agent.update_count);
  agent.delta_output_weights.row(performed_action).head(n) +=
      rate * (target - predicted) * agent.state.transpose();
}

Eigen::VectorXd transfer_warm_start(EsnAgent& agent, int period) {
  if (period > 1) agent.output_weights += agent.delta_output_weights;
  return esn_predict(agent, agent.last_input);
}

void EsnAgent::begin_period(int period) {
  current_period = period;
  if (period > 1) {
    utility_prev_period = std::move(utility_this_period);
    utility_this_period.assign(num_actions(), kNan);
    if (params.transfer) transfer_warm_start(*this, period);
  }
}

int EsnAgent::choose(int period, int iteration, Rng& rng) {
  if (period == 1 && iteration == 1)
    return static_cast<int>(rng.uniform_index(num_actions()));
  const double eps =
      params.epsilon * std::pow(params.epsilon_decay, static_cast<double>(iteration - 1));
  return select_action(esn_predict(*this, last_input), eps, rng);
}

void EsnAgent::observe(const std::vector<int>& strategy_indices, int period,
                       int own_action, double utility) {
  const Eigen::VectorXd x =
      build_input(strategy_indices, table_sizes_, period, num_periods_);
  esn_update_state(*this, x);
  last_input = x;
  esn_train_utility(*this, own_action, utility);
  if (period > 1 && std::isfinite(utility_prev_period[own_action]))
    esn_train_delta(*this, own_action, utility, utility_prev_period[own_action]);
  utility_this_period[own_action] = utility;
}

int EsnAgent::greedy_action() const {
  const Eigen::VectorXd y = esn_predict(*this, last_input);
  int best = 0;
  for (int k = 1; k < y.size(); ++k)
    if (y[k] > y[best]) best = k;
  return best;
}

nlohmann::json EsnAgent::checkpoint() const {
  auto matrix = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  nlohmann::json j;
  j["kind"] = kind();
  j["input_weights"] = matrix(input_weights);
  j["output_weights"] = matrix(output_weights);
  j["delta_output_weights"] = matrix(delta_output_weights);
  j["state"] = vec(state);
  j["last_input"] = vec(last_input);
  j["recurrent_weight"] = params.recurrent_weight;
  j["current_period"] = current_period;
  j["update_count"] = update_count;
  j["utility_this_period"] = utility_this_period;
  j["utility_prev_period"] = utility_prev_period;
  return j;
}

// ---------------------------------------------------------------------------
// QAgent

QAgent::QAgent(int num_actions, const Params& params)
    : params(params), num_actions_(num_actions), zero_row_(num_actions, 0.0) {}

const std::vector<double>& QAgent::row(const StateKey& state) const {
  auto it = q_table.find(state);
  return it == q_table.end() ? zero_row_ : it->second;
}

void QAgent::begin_period(int period) {
  (void)period;
  // No carry-over between periods: the table keys include the period, and
  // the incumbent resets, so each period is learned from scratch.
  last_state.clear();
  last_action = 0;
}

int QAgent::choose(int period, int iteration, Rng& rng) {
  if (period == 1 && iteration == 1) {
    last_action = static_cast<int>(rng.uniform_index(num_actions_));
    return last_action;
  }
  const double eps =
      params.epsilon * std::pow(params.epsilon_decay, static_cast<double>(iteration - 1));
  // Exploration probes without moving the incumbent.
  if (eps > 0.0 && rng.uniform() < eps)
    return static_cast<int>(rng.uniform_index(num_actions_));
  // A state the table has never scored gives no reason to switch; keeping
  // the incumbent makes joint states recur so that entries can fill in.
  auto it = q_table.find(last_state);
  if (it == q_table.end()) return last_action;
  const auto& values = it->second;
  int best = 0;
  for (int k = 1; k < num_actions_; ++k)
    if (values[k] > values[best]) best = k;
  last_action = best;
  return best;
}

void QAgent::observe(const std::vector<int>& strategy_indices, int period, int own_action,
                     double utility) {
  StateKey key = strategy_indices;
  key.push_back(period);
  // The reward credits the state the action was chosen in, i.e. the
  // previous broadcast; the new broadcast becomes the next decision state.
  q_update(*this, last_state.empty() ? key : last_state, own_action, utility);
  last_state = std::move(key);
}

int QAgent::greedy_action() const {
  auto it = q_table.find(last_state);
  if (it == q_table.end()) return last_action;
  const auto& values = it->second;
  int best = 0;
  for (int k = 1; k < num_actions_; ++k)
    if (values[k] > values[best]) best = k;
  return best;
}

nlohmann::json QAgent::checkpoint() const {
  nlohmann::json j;
  j["kind"] = kind();
  j["zeta"] = params.zeta;
  j["last_action"] = last_action;
  j["last_state"] = last_state;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [key, values] : q_table) {
    nlohmann::json e;
    e["state"] = key;
    e["values"] = values;
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

void q_update(QAgent& agent, const QAgent::StateKey& state, int action, double reward) {
  if (!(agent.params.zeta > 0.0) || agent.params.zeta > 1.0)
    throw std::invalid_argument("q_update: zeta must lie in (0,1]");
  auto [it, inserted] = agent.q_table.try_emplace(
      state, std::vector<double>(agent.num_actions(), 0.0));
  auto& entry = it->second[action];
  entry = (1.0 - agent.params.zeta) * entry + agent.params.zeta * reward;
}

}  // namespace vrsim
