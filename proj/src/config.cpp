#include "vrsim/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

#include "vrsim/channel.hpp"

namespace vrsim {

double ExperimentConfig::noise_w() const { return dbm_to_watts(noise_dbm); }
double ExperimentConfig::sbs_power_w() const { return dbm_to_watts(sbs_power_dbm); }
double ExperimentConfig::user_power_w() const { return dbm_to_watts(user_power_dbm); }

LearningSchedule ExperimentConfig::learning_schedule() const {
  return schedule == "robbins_monro" ? LearningSchedule::kRobbinsMonro
                                     : LearningSchedule::kConstant;
}

namespace {

using Member = std::variant<int ExperimentConfig::*, double ExperimentConfig::*,
                            std::uint64_t ExperimentConfig::*, bool ExperimentConfig::*,
                            std::string ExperimentConfig::*>;

struct Field {
  const char* section;
  const char* key;
  Member member;
};

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = {
      {"topology", "num_sbs", &C::num_sbs},
      {"topology", "num_users", &C::num_users},
      {"topology", "area_radius_m", &C::area_radius_m},
      {"channel", "pathloss_exponent", &C::pathloss_exponent},
      {"channel", "noise_dbm", &C::noise_dbm},
      {"channel", "rb_bandwidth_hz", &C::rb_bandwidth_hz},
      {"channel", "sbs_power_dbm", &C::sbs_power_dbm},
      {"channel", "user_power_dbm", &C::user_power_dbm},
      {"channel", "min_distance_m", &C::min_distance_m},
      {"channel", "chi_sigma_los", &C::chi_sigma_los},
      {"content", "num_contents", &C::num_contents},
      {"content", "g120_bits", &C::g120_bits},
      {"content", "g360_bits", &C::g360_bits},
      {"content", "view_width_deg", &C::view_width_deg},
      {"content", "view_concentration", &C::view_concentration},
      {"correlation", "alpha", &C::alpha},
      {"correlation", "kappa", &C::kappa},
      {"correlation", "sigma_tracking", &C::sigma_tracking},
      {"correlation", "k_min_bits", &C::k_min_bits},
      {"correlation", "k_max_bits", &C::k_max_bits},
      {"correlation", "sigma_ref", &C::sigma_ref},
      {"correlation", "sigma_max_scale", &C::sigma_max_scale},
      {"network", "num_down_rb", &C::num_down_rb},
      {"network", "num_up_rb", &C::num_up_rb},
      {"network", "total_backhaul_bps", &C::total_backhaul_bps},
      {"network", "deadline_s", &C::deadline_s},
      {"learning", "num_neurons", &C::num_neurons},
      {"learning", "recurrent_weight", &C::recurrent_weight},
      {"learning", "lambda", &C::lambda},
      {"learning", "lambda_prime", &C::lambda_prime},
      {"learning", "zeta", &C::zeta},
      {"learning", "epsilon", &C::epsilon},
      {"learning", "epsilon_decay", &C::epsilon_decay},
      {"learning", "esn_input_scale", &C::esn_input_scale},
      {"learning", "schedule", &C::schedule},
      {"learning", "schedule_tau", &C::schedule_tau},
      {"learning", "action_cap", &C::action_cap},
      {"experiment", "num_periods", &C::num_periods},
      {"experiment", "slots_per_period", &C::slots_per_period},
      {"experiment", "profile", &C::profile},
      {"experiment", "record_checkpoints", &C::record_checkpoints},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void assign(ExperimentConfig& config, const Field& field, const std::string& raw,
            const std::string& where) {
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          config.*member = raw;
        } else if constexpr (std::is_same_v<T, bool>) {
          if (raw == "true" || raw == "1")
            config.*member = true;
          else if (raw == "false" || raw == "0")
            config.*member = false;
          else
            throw ConfigError(where + ": expected true/false, got '" + raw + "'");
        } else {
          errno = 0;
          char* end = nullptr;
          const double value = std::strtod(raw.c_str(), &end);
          if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
            throw ConfigError(where + ": invalid number '" + raw + "'");
          if constexpr (std::is_same_v<T, double>) {
            config.*member = value;
          } else {
            if (std::floor(value) != value)
              throw ConfigError(where + ": expected an integer, got '" + raw + "'");
            config.*member = static_cast<T>(value);
          }
        }
      },
      field.member);
}

std::string render(const ExperimentConfig& config, const Field& field) {
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(config.*member)>;
        char buf[64];
        if constexpr (std::is_same_v<T, std::string>) {
          return config.*member;
        } else if constexpr (std::is_same_v<T, bool>) {
          return (config.*member) ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          std::snprintf(buf, sizeof buf, "%.17g", config.*member);
          return buf;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          std::snprintf(buf, sizeof buf, "%" PRIu64, config.*member);
          return buf;
        } else {
          std::snprintf(buf, sizeof buf, "%d", config.*member);
          return buf;
        }
      },
      field.member);
}

void check(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of(";#");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string dotted = section + "." + key;
    const Field* match = nullptr;
    for (const auto& f : fields())
      if (section == f.section && key == f.key) {
        match = &f;
        break;
      }
    if (!match) throw ConfigError("unknown configuration key '" + dotted + "'");
    assign(config, *match, value, dotted);
    config.explicit_keys.insert(dotted);
  }
  apply_profile(config, config.profile);
  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& c) {
  check(c.num_sbs >= 1, "topology.num_sbs must be >= 1");
  check(c.num_users >= 1, "topology.num_users must be >= 1");
  check(c.area_radius_m > 0, "topology.area_radius_m must be > 0");
  check(c.pathloss_exponent > 0, "channel.pathloss_exponent must be > 0");
  check(c.rb_bandwidth_hz > 0, "channel.rb_bandwidth_hz must be > 0");
  check(c.min_distance_m > 0, "channel.min_distance_m must be > 0");
  check(c.num_contents >= 1, "content.num_contents must be >= 1");
  check(c.g120_bits > 0, "content.g120_bits must be > 0");
  check(c.g360_bits > 0, "content.g360_bits must be > 0");
  check(c.view_width_deg > 0 && c.view_width_deg <= 360,
        "content.view_width_deg must lie in (0, 360]");
  check(c.view_concentration >= 0 && c.view_concentration <= 1,
        "content.view_concentration must lie in [0, 1]");
  check(c.alpha > 0, "correlation.alpha must be > 0");
  check(c.kappa > 0, "correlation.kappa must be > 0");
  check(c.sigma_tracking > 0, "correlation.sigma_tracking must be > 0");
  check(c.k_min_bits >= 0, "correlation.k_min_bits must be >= 0");
  check(c.k_max_bits >= c.k_min_bits,
        "correlation.k_max_bits must be >= correlation.k_min_bits");
  check(c.sigma_ref > 0, "correlation.sigma_ref must be > 0");
  check(c.sigma_max_scale >= 0, "correlation.sigma_max_scale must be >= 0");
  check(c.num_down_rb >= 1, "network.num_down_rb must be >= 1");
  check(c.num_up_rb >= 1, "network.num_up_rb must be >= 1");
  check(c.total_backhaul_bps > 0, "network.total_backhaul_bps must be > 0");
  check(c.deadline_s > 0, "network.deadline_s must be > 0");
  check(c.num_neurons >= 1, "learning.num_neurons must be >= 1");
  check(c.recurrent_weight >= 0 && c.recurrent_weight <= 1,
        "learning.recurrent_weight must lie in [0, 1]");
  check(c.lambda >= 0, "learning.lambda must be >= 0");
  check(c.lambda_prime >= 0, "learning.lambda_prime must be >= 0");
  check(c.lambda_prime <= c.lambda,
        "learning.lambda_prime must not exceed learning.lambda");
  check(c.zeta > 0 && c.zeta <= 1, "learning.zeta must lie in (0, 1]");
  check(c.epsilon >= 0 && c.epsilon <= 1, "learning.epsilon must lie in [0, 1]");
  check(c.epsilon_decay > 0 && c.epsilon_decay <= 1,
        "learning.epsilon_decay must lie in (0, 1]");
  check(c.esn_input_scale > 0, "learning.esn_input_scale must be > 0");
  check(c.schedule == "constant" || c.schedule == "robbins_monro",
        "learning.schedule must be 'constant' or 'robbins_monro'");
  check(c.schedule_tau > 0, "learning.schedule_tau must be > 0");
  check(c.action_cap >= 1, "learning.action_cap must be >= 1");
  check(c.num_periods >= 1, "experiment.num_periods must be >= 1");
  check(c.slots_per_period >= 1, "experiment.slots_per_period must be >= 1");
  check(c.profile == "desk" || c.profile == "paper-literal",
        "experiment.profile must be 'desk' or 'paper-literal'");
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  std::string current;
  for (const auto& f : fields()) {
    if (current != f.section) {
      if (!out.empty()) out += "\n";
      current = f.section;
      out += "[" + current + "]\n";
    }
    out += std::string(f.key) + " = " + render(config, f) + "\n";
  }
  return out;
}

void apply_profile(ExperimentConfig& config, const std::string& profile) {
  if (profile != "desk" && profile != "paper-literal")
    throw ConfigError("experiment.profile must be 'desk' or 'paper-literal'");
  config.profile = profile;
  const ExperimentConfig defaults;
  const double scale = profile == "desk" ? 1e-3 : 1.0;
  auto set_unless_explicit = [&](const char* dotted, double ExperimentConfig::*member,
                                 double base) {
    if (!config.explicit_keys.contains(dotted)) config.*member = base * scale;
  };
  set_unless_explicit("content.g120_bits", &ExperimentConfig::g120_bits,
                      defaults.g120_bits);
  set_unless_explicit("content.g360_bits", &ExperimentConfig::g360_bits,
                      defaults.g360_bits);
  set_unless_explicit("correlation.k_min_bits", &ExperimentConfig::k_min_bits,
                      defaults.k_min_bits);
  set_unless_explicit("correlation.k_max_bits", &ExperimentConfig::k_max_bits,
                      defaults.k_max_bits);
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = serialize_config(config);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  for (const auto& f : fields()) {
    const bool equal = std::visit(
        [&](auto member) { return a.*member == b.*member; }, f.member);
    if (!equal) return false;
  }
  return true;
}

}  // namespace vrsim
