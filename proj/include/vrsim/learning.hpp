#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "vrsim/rng.hpp"

namespace vrsim {

// Joint assignment of one SBS's resource blocks: element k is the local
// index of the user holding RB k. Every RB is assigned, so the binary
// allocation matrix has exactly one 1 per RB column.
struct Allocation {
  std::vector<int> down_user;
  std::vector<int> up_user;

  bool operator==(const Allocation&) const = default;
};

// Binary allocation row of one user, as consumed by the rate functions.
std::vector<int> allocation_row(const std::vector<int>& rb_user, int user);

// Every way of handing S+V resource blocks to num_users users: full
// enumeration when the count fits under cap, otherwise a seeded sample of
// exactly cap distinct actions.
std::vector<Allocation> enumerate_actions(int num_users, int num_down_rb, int num_up_rb,
                                          std::uint64_t cap, std::uint64_t seed);

// ESN input: all SBSs' strategy indices scaled by their table sizes, plus
// the period scaled by the horizon.
Eigen::VectorXd build_input(const std::vector<int>& strategy_indices,
                            const std::vector<int>& table_sizes, int period,
                            int num_periods);

// epsilon-greedy over predicted utilities; greedy ties go to the lowest
// index.
int select_action(const Eigen::VectorXd& utilities, double epsilon, Rng& rng);

enum class LearningSchedule { kConstant, kRobbinsMonro };

// Learner interface shared by the ESN agents and the Q baselines. One agent
// per SBS; a run owns its agents exclusively.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_period(int period) = 0;
  virtual int choose(int period, int iteration, Rng& rng) = 0;
  virtual void observe(const std::vector<int>& strategy_indices, int period,
                       int own_action, double utility) = 0;
  virtual int greedy_action() const = 0;
  virtual int num_actions() const = 0;
  virtual const char* kind() const = 0;
  virtual nlohmann::json checkpoint() const = 0;
};

// Echo-state reservoir with a cyclic recurrent matrix and two online-trained
// linear readouts: one predicts each action's utility, the other the
// across-period utility shift used for the transfer warm start.
class EsnAgent : public Agent {
 public:
  struct Params {
    int num_neurons = 100;
    double recurrent_weight = 0.5;   // w on the cycle; spectral radius
    double learning_rate = 0.3;      // lambda
    double delta_learning_rate = 0.03;  // lambda', << lambda
    double epsilon = 0.1;
    double epsilon_decay = 1.0;      // per-iteration factor, reset each period
    double input_scale = 0.35;       // multiplies the U[-0.5,0.5] input draws
    bool transfer = true;
    LearningSchedule schedule = LearningSchedule::kConstant;
    double schedule_tau = 1000.0;
  };

  EsnAgent(int num_sbs, int num_actions, std::vector<int> table_sizes, int num_periods,
           const Params& params, Rng init_rng);

  void begin_period(int period) override;
  int choose(int period, int iteration, Rng& rng) override;
  void observe(const std::vector<int>& strategy_indices, int period, int own_action,
               double utility) override;
  int greedy_action() const override;
  int num_actions() const override { return static_cast<int>(output_weights.rows()); }
  const char* kind() const override { return "esn"; }
  nlohmann::json checkpoint() const override;

  // Model state; the readout layout is [state columns | input columns], and
  // training touches only one state-aligned row per update.
  Eigen::MatrixXd input_weights;         // N_w x (K+1)
  Eigen::MatrixXd output_weights;        // N_a x (N_w+K+1)
  Eigen::MatrixXd delta_output_weights;  // N_a x (N_w+K+1)
  Eigen::VectorXd state;                 // N_w
  Eigen::VectorXd last_input;            // K+1
  Params params;

  int current_period = 0;
  std::int64_t update_count = 0;  // learning-rate schedule clock
  std::vector<double> utility_this_period;  // NaN until an action is performed
  std::vector<double> utility_prev_period;

 private:
  std::vector<int> table_sizes_;
  int num_periods_ = 1;
};

// mu <- tanh(w * cyclic_shift(mu) + W_in x)
void esn_update_state(EsnAgent& agent, const Eigen::VectorXd& input);

// Readout a: predicted per-action utility, W_out [mu; x].
Eigen::VectorXd esn_predict(const EsnAgent& agent, const Eigen::VectorXd& input);

// Readout b: predicted per-action utility change across periods.
Eigen::VectorXd esn_predict_delta(const EsnAgent& agent, const Eigen::VectorXd& input);

// One-row delta-rule update of the utility readout toward the realized
// utility of the performed action.
void esn_train_utility(EsnAgent& agent, int performed_action, double realized_utility);

// One-row update of the delta readout toward the across-period utility
// difference of the performed action. Only valid from period 2 on.
void esn_train_delta(EsnAgent& agent, int performed_action, double utility_n,
                     double utility_n_minus_1);

// Folds the learned utility shift into the utility readout at a period
// boundary and returns the warmed-up predictions.
Eigen::VectorXd transfer_warm_start(EsnAgent& agent, int period);

// Tabular baseline: exponential-average Q keyed on the exact broadcast
// state. Unseen entries read as 0.
class QAgent : public Agent {
 public:
  struct Params {
    double zeta = 0.5;
    double epsilon = 0.1;
    double epsilon_decay = 1.0;
  };

  using StateKey = std::vector<int>;  // strategy indices + period

  QAgent(int num_actions, const Params& params);

  void begin_period(int period) override;
  int choose(int period, int iteration, Rng& rng) override;
  void observe(const std::vector<int>& strategy_indices, int period, int own_action,
               double utility) override;
  int greedy_action() const override;
  int num_actions() const override { return num_actions_; }
  const char* kind() const override { return "q"; }
  nlohmann::json checkpoint() const override;

  const std::vector<double>& row(const StateKey& state) const;

  std::map<StateKey, std::vector<double>> q_table;
  Params params;
  StateKey last_state;
  int last_action = 0;

 private:
  int num_actions_ = 0;
  std::vector<double> zero_row_;
};

// Q(x,a) <- (1-zeta) Q(x,a) + zeta r
void q_update(QAgent& agent, const QAgent::StateKey& state, int action, double reward);

}  // namespace vrsim
