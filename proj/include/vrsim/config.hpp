#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "vrsim/learning.hpp"

namespace vrsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key-value sections, one per module. Defaults reproduce the reference
// system parameters; the desk profile rescales the four payload sizes so
// that success probabilities leave the saturated regime (see README).
struct ExperimentConfig {
  // [topology]
  int num_sbs = 5;
  int num_users = 25;
  double area_radius_m = 500.0;

  // [channel]
  double pathloss_exponent = 3.0;
  double noise_dbm = -105.0;
  double rb_bandwidth_hz = 1.8e6;
  double sbs_power_dbm = 30.0;
  double user_power_dbm = 20.0;
  double min_distance_m = 1.0;
  double chi_sigma_los = 5.3;  // carried for completeness; no equation uses it

  // [content]
  int num_contents = 10;
  double g120_bits = 12e6;
  double g360_bits = 50e6;
  double view_width_deg = 120.0;
  double view_concentration = 0.0;

  // [correlation]
  double alpha = 2.0;
  double kappa = 5.0;
  double sigma_tracking = 1.0;
  double k_min_bits = 0.1e6;
  double k_max_bits = 1e6;
  double sigma_ref = 1.0;
  double sigma_max_scale = 1.0;

  // [network]
  int num_down_rb = 5;
  int num_up_rb = 5;
  double total_backhaul_bps = 10e9;
  double deadline_s = 0.020;

  // [learning]
  int num_neurons = 100;
  double recurrent_weight = 0.5;
  double lambda = 0.3;
  double lambda_prime = 0.03;
  double zeta = 0.5;
  double epsilon = 0.1;
  double epsilon_decay = 1.0;
  double esn_input_scale = 0.35;
  std::string schedule = "constant";  // or "robbins_monro"
  double schedule_tau = 1000.0;
  std::uint64_t action_cap = 128;

  // [experiment]
  int num_periods = 100;
  int slots_per_period = 1000;
  std::string profile = "paper-literal";
  bool record_checkpoints = false;

  // section.key names given explicitly by the parsed file; the profile
  // never overrides these.
  std::set<std::string> explicit_keys;

  double noise_w() const;
  double sbs_power_w() const;
  double user_power_w() const;

  LearningSchedule learning_schedule() const;
};

// Parse + validate. Empty file yields the defaults. Unknown keys and
// invalid values raise ConfigError naming the offending key.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

// Throws ConfigError naming the first violated key.
void validate_config(const ExperimentConfig& config);

// Canonical lossless text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

// Rescales the payload sizes of the named profile ("desk" divides the four
// content/tracking sizes by 1000; "paper-literal" leaves them). Keys the
// file set explicitly stay as given.
void apply_profile(ExperimentConfig& config, const std::string& profile);

// FNV-1a over the canonical serialization; platform-stable.
std::string config_hash(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace vrsim
