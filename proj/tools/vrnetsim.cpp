// Command-line front end: seeded runs, figure-style parameter sweeps,
// empirical CDFs, and config validation. Outputs are plottable CSV plus a
// lossless JSON record per run.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vrsim/harness.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("VRNETSIM_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos)
    return {std::strtoull(text.c_str(), nullptr, 10)};
  const std::uint64_t lo = std::strtoull(text.substr(0, dots).c_str(), nullptr, 10);
  const std::uint64_t hi = std::strtoull(text.substr(dots + 2).c_str(), nullptr, 10);
  if (hi < lo) throw CLI::ValidationError("--seeds", "range must be N..M with M >= N");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  return seeds;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    values.push_back(std::stod(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (values.empty()) throw CLI::ValidationError("--values", "expected a comma list");
  return values;
}

std::vector<vrsim::Algorithm> parse_algos(const std::string& text) {
  if (text == "all")
    return {std::begin(vrsim::kAllAlgorithms), std::end(vrsim::kAllAlgorithms)};
  std::vector<vrsim::Algorithm> algos;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    algos.push_back(vrsim::algorithm_from_name(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return algos;
}

// Profile precedence: --profile flag, then an explicit key in the file,
// then the experiment default (desk).
vrsim::ExperimentConfig load(const std::string& config_path, const std::string& profile,
                             bool profile_given) {
  vrsim::ExperimentConfig config;
  if (!config_path.empty()) config = vrsim::load_config(config_path);
  if (profile_given)
    vrsim::apply_profile(config, profile);
  else if (!config.explicit_keys.contains("experiment.profile"))
    vrsim::apply_profile(config, "desk");
  vrsim::validate_config(config);
  return config;
}

void write_sweep_csv(const std::vector<vrsim::SweepCell>& cells,
                     const std::string& axis_name, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << axis_name << ",algorithm,mean,stddev,num_seeds\n";
  char buf[96];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%.9g,%s,%.9g,%.9g,%d\n", c.axis_value,
                  vrsim::algorithm_name(c.algorithm).c_str(), c.mean, c.stddev,
                  c.num_seeds);
    out << buf;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless VR resource-management simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string profile = "desk";
  std::string out_dir = "out";
  std::string algo = "EsnTransfer";
  std::string algos = "all";
  std::string seeds_text = "0..19";
  std::string axis_name = "num_sbs";
  std::string values_text;
  std::string metric = "total_success";
  std::uint64_t seed = default_seed();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Config file (INI-style sections)");
    cmd->add_option("--profile", profile, "Size profile: desk or paper-literal");
    cmd->add_option("--out", out_dir, "Output directory");
  };

  CLI::App* run = app.add_subcommand("run", "One seeded experiment run");
  add_common(run);
  run->add_option("--algo", algo, "EsnTransfer, EsnNoCorr, QCorr or QNoCorr");
  run->add_option("--seed", seed, "Run seed (default: VRNETSIM_SEED or 0)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over seeds");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--axis", axis_name,
                        "num_sbs, num_users, backhaul_rate, sigma_max_scale or period");
  sweep_cmd->add_option("--values", values_text, "Comma list of axis values")->required();
  sweep_cmd->add_option("--algos", algos, "Comma list of algorithms, or 'all'");
  sweep_cmd->add_option("--seeds", seeds_text, "Seed range N..M");

  CLI::App* cdf_cmd = app.add_subcommand("cdf", "Empirical CDF over seeded runs");
  add_common(cdf_cmd);
  cdf_cmd->add_option("--algos", algos, "Comma list of algorithms, or 'all'");
  cdf_cmd->add_option("--seeds", seeds_text, "Seed range N..M");
  cdf_cmd->add_option("--metric", metric,
                      "total_success, per_user_success or mean_utility");

  CLI::App* validate = app.add_subcommand("validate-config", "Parse and validate a config");
  validate->add_option("--config", config_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const vrsim::ExperimentConfig config = vrsim::load_config(config_path);
      std::cout << "ok " << vrsim::config_hash(config) << "\n";
      return 0;
    }

    std::filesystem::create_directories(out_dir);
    if (run->parsed()) {
      const auto config = load(config_path, profile, run->count("--profile") > 0);
      const auto record =
          vrsim::run_experiment(config, vrsim::algorithm_from_name(algo), seed);
      vrsim::emit_csv({record}, out_dir + "/runs.csv");
      vrsim::emit_json({record}, out_dir + "/runs.json");
      std::cout << "total_success " << record.total_success << "\n";
    } else if (sweep_cmd->parsed()) {
      const auto config = load(config_path, profile, sweep_cmd->count("--profile") > 0);
      std::vector<vrsim::RunRecord> records;
      const auto cells =
          vrsim::sweep(config, vrsim::sweep_axis_from_name(axis_name),
                       parse_values(values_text), parse_algos(algos),
                       parse_seed_range(seeds_text), &records);
      write_sweep_csv(cells, axis_name, out_dir + "/sweep.csv");
      vrsim::emit_csv(records, out_dir + "/runs.csv");
      vrsim::emit_json(records, out_dir + "/runs.json");
      std::cout << "sweep cells " << cells.size() << ", runs " << records.size() << "\n";
    } else if (cdf_cmd->parsed()) {
      const auto config = load(config_path, profile, cdf_cmd->count("--profile") > 0);
      std::ofstream out(out_dir + "/cdf.csv", std::ios::binary);
      if (!out) throw std::runtime_error("cannot open cdf.csv for writing");
      out << "value,cumulative_fraction,algorithm\n";
      std::vector<vrsim::RunRecord> all_records;
      for (vrsim::Algorithm a : parse_algos(algos)) {
        const auto records = vrsim::run_seeds(config, a, parse_seed_range(seeds_text));
        char buf[96];
        for (const auto& [value, frac] : vrsim::compute_cdf(records, metric)) {
          std::snprintf(buf, sizeof buf, "%.9g,%.9g,%s\n", value, frac,
                        vrsim::algorithm_name(a).c_str());
          out << buf;
        }
        all_records.insert(all_records.end(), records.begin(), records.end());
      }
      vrsim::emit_json(all_records, out_dir + "/runs.json");
      std::cout << "cdf over " << all_records.size() << " runs\n";
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
