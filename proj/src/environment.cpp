#include "vrsim/environment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Beyond this group size the 2^n subset expansion stops paying its way;
// the interval-merge union is the same number in closed form.
constexpr int kInclusionExclusionLimit = 12;
}  // namespace

void EnvironmentModel::finalize() {
  const int num_users = topology.num_users();
  sbs_users = topology.users_per_sbs();
  if (static_cast<int>(tracking_models.size()) != num_users)
    tracking_models.assign(num_users, UserTrackingModel{});

  sigma_max_per_user.resize(num_users);
  tracking_bits_per_user.resize(num_users);
  for (int i = 0; i < num_users; ++i) {
    const auto& peers = sbs_users[topology.association[i]];
    const double smax =
        sigma_max_scale * sigma_max(i, peers, topology, tracking_models, decay);
    sigma_max_per_user[i] = smax;
    tracking_bits_per_user[i] = correlation_aware
                                    ? tracking_data_size(smax, tracking_size)
                                    : tracking_size.k_max_bits;
  }
  per_user_backhaul_bps = backhaul_rate_per_user(total_backhaul_bps, num_users);

  action_tables.clear();
  table_sizes.clear();
  for (int j = 0; j < topology.num_sbs(); ++j) {
    const auto local_users = static_cast<int>(sbs_users[j].size());
    action_tables.push_back(enumerate_actions(
        local_users, num_down_rb, num_up_rb, action_cap,
        Rng::stream(seed, "actions", static_cast<std::uint64_t>(j)).next_u64()));
    table_sizes.push_back(static_cast<int>(action_tables.back().size()));
  }
}

PeriodEnvironment::PeriodEnvironment(const EnvironmentModel& model, int period,
                                     int num_slots)
    : model_(&model),
      period_(period),
      num_slots_(num_slots),
      num_users_(model.topology.num_users()),
      num_sbs_(model.topology.num_sbs()) {
  const int nc = model.catalog.num_contents;
  const int s_rb = model.num_down_rb;
  const int v_rb = model.num_up_rb;

  Rng request_rng = Rng::stream(model.seed, "requests", static_cast<std::uint64_t>(period));
  Rng view_rng = Rng::stream(model.seed, "views", static_cast<std::uint64_t>(period));
  Rng fading_rng = Rng::stream(model.seed, "fading", static_cast<std::uint64_t>(period));

  // Request distribution and view window of every user, fixed for the period.
  std::vector<std::vector<double>> q_in(num_users_);
  for (auto& q : q_in) q = request_rng.dirichlet(nc);
  const double centre_span = 360.0 * (1.0 - model.catalog.view_concentration);
  std::vector<double> view_center(static_cast<std::size_t>(num_users_) * nc);
  for (double& c : view_center) c = view_rng.uniform() * centre_span;

  std::vector<int> requests(static_cast<std::size_t>(num_slots_) * num_users_);
  for (int t = 0; t < num_slots_; ++t) {
    for (int i = 0; i < num_users_; ++i) {
      const double u = request_rng.uniform();
      double acc = 0.0;
      int pick = nc - 1;
      for (int c = 0; c < nc; ++c) {
        acc += q_in[i][c];
        if (u < acc) {
          pick = c;
          break;
        }
      }
      requests[static_cast<std::size_t>(t) * num_users_ + i] = pick;
    }
  }

  // Per-slot fading reduced to what the evaluator needs. Downlink SINR does
  // not depend on the allocation (every SBS reuses every RB), so per-RB
  // rates can be frozen here; uplink interference depends on the joint
  // action, so only received powers are frozen.
  rate_down_.resize(static_cast<std::size_t>(num_slots_) * num_users_ * s_rb);
  up_power_.resize(static_cast<std::size_t>(num_slots_) * num_users_ * num_sbs_ * v_rb);
  for (int t = 0; t < num_slots_; ++t) {
    const ChannelRealization ch =
        draw_channel(model.topology, model.channel, s_rb, v_rb, fading_rng);
    for (int i = 0; i < num_users_; ++i) {
      const int j = model.topology.association[i];
      double* rd = &rate_down_[(static_cast<std::size_t>(t) * num_users_ + i) * s_rb];
      for (int k = 0; k < s_rb; ++k)
        rd[k] = model.channel.rb_bandwidth_hz *
                std::log2(1.0 + sinr_downlink(i, j, k, ch, model.channel));
      for (int l = 0; l < num_sbs_; ++l) {
        double* up = &up_power_[((static_cast<std::size_t>(t) * num_users_ + i) * num_sbs_ +
                                 l) *
                                v_rb];
        for (int k = 0; k < v_rb; ++k)
          up[k] = model.channel.user_power_w * ch.gain_up(i, l, k);
      }
    }
  }

  // Format decision and backhaul share of every (slot, SBS, content) group.
  backhaul_term_.assign(static_cast<std::size_t>(num_slots_) * num_users_, 0.0);
  format_counts_120_.assign(num_sbs_, std::vector<long long>(nc, 0));
  format_counts_360_.assign(num_sbs_, std::vector<long long>(nc, 0));
  std::vector<std::vector<double>> la_sum(num_sbs_, std::vector<double>(nc, 0.0));
  std::vector<std::vector<long long>> la_count(num_sbs_, std::vector<long long>(nc, 0));

  std::vector<std::vector<int>> bucket(nc);
  for (int t = 0; t < num_slots_; ++t) {
    for (int j = 0; j < num_sbs_; ++j) {
      const auto& users = model.sbs_users[j];
      if (users.empty()) continue;
      for (auto& b : bucket) b.clear();
      for (int i : users)
        bucket[requests[static_cast<std::size_t>(t) * num_users_ + i]].push_back(i);
      for (int a = 0; a < nc; ++a) {
        const auto& group = bucket[a];
        if (group.empty()) continue;
        const int u_ja = static_cast<int>(group.size());
        double payload = model.catalog.g360_bits;
        bool full360 = true;
        if (model.correlation_aware) {
          double la = model.catalog.g120_bits;
          if (u_ja > 1) {
            std::vector<ViewState> views;
            views.reserve(group.size());
            for (int i : group)
              views.push_back({a, view_center[static_cast<std::size_t>(i) * nc + a],
                               model.catalog.view_width_deg});
            if (u_ja <= kInclusionExclusionLimit)
              la = visible_union_size(overlap_sets(views), u_ja, model.catalog.g120_bits);
            else
              la = model.catalog.g120_bits * arc_union_deg(views) /
                   model.catalog.view_width_deg;
          }
          const FormatChoice choice = choose_format(model.catalog.g360_bits, la);
          payload = choice.payload_bits;
          full360 = choice.format == ContentFormat::kFull360;
          la_sum[j][a] += la;
          ++la_count[j][a];
        }
        (full360 ? format_counts_360_ : format_counts_120_)[j][a] += 1;
        const double term =
            payload / (static_cast<double>(u_ja) * model.per_user_backhaul_bps);
        for (int i : group)
          backhaul_term_[static_cast<std::size_t>(t) * num_users_ + i] = term;
      }
    }
  }

  format_360_fraction_.assign(num_sbs_, 0.0);
  mean_la_bits_.assign(num_sbs_, std::vector<double>(nc, kNan));
  for (int j = 0; j < num_sbs_; ++j) {
    long long n120 = 0, n360 = 0;
    for (int a = 0; a < nc; ++a) {
      n120 += format_counts_120_[j][a];
      n360 += format_counts_360_[j][a];
      if (la_count[j][a] > 0)
        mean_la_bits_[j][a] = la_sum[j][a] / static_cast<double>(la_count[j][a]);
    }
    format_360_fraction_[j] =
        (n120 + n360) > 0 ? static_cast<double>(n360) / static_cast<double>(n120 + n360)
                          : 0.0;
  }

  scratch_down_.resize(num_users_);
  scratch_up_.resize(num_users_);
  scratch_assigned_.resize(num_sbs_);
  scratch_success_.resize(num_users_);
}

std::vector<double> PeriodEnvironment::evaluate(const std::vector<int>& action_indices,
                                                std::vector<double>* user_success) const {
  const auto& model = *model_;
  if (static_cast<int>(action_indices.size()) != num_sbs_)
    throw std::invalid_argument("evaluate: one action index per SBS required");
  std::vector<const Allocation*> acts(num_sbs_);
  for (int j = 0; j < num_sbs_; ++j) {
    if (action_indices[j] < 0 || action_indices[j] >= model.table_sizes[j])
      throw std::out_of_range("evaluate: action index out of range");
    acts[j] = &model.action_tables[j][action_indices[j]];
  }

  const int s_rb = model.num_down_rb;
  const int v_rb = model.num_up_rb;
  const double bw = model.channel.rb_bandwidth_hz;
  const double noise = model.channel.noise_w;
  const double g120 = model.catalog.g120_bits;
  const double deadline = model.deadline_s;

  std::fill(scratch_success_.begin(), scratch_success_.end(), 0);
  for (int t = 0; t < num_slots_; ++t) {
    std::fill(scratch_down_.begin(), scratch_down_.end(), 0.0);
    std::fill(scratch_up_.begin(), scratch_up_.end(), 0.0);
    const std::size_t slot_base = static_cast<std::size_t>(t) * num_users_;

    for (int j = 0; j < num_sbs_; ++j) {
      const auto& down = acts[j]->down_user;
      const auto& users = model.sbs_users[j];
      for (int k = 0; k < static_cast<int>(down.size()); ++k) {
        const int g = users[down[k]];
        scratch_down_[g] += rate_down_[(slot_base + g) * s_rb + k];
      }
    }

    for (int k = 0; k < v_rb; ++k) {
      for (int j = 0; j < num_sbs_; ++j) {
        const auto& up = acts[j]->up_user;
        scratch_assigned_[j] = up.empty() ? -1 : model.sbs_users[j][up[k]];
      }
      for (int j = 0; j < num_sbs_; ++j) {
        const int g = scratch_assigned_[j];
        if (g < 0) continue;
        const double signal = up_power_[((slot_base + g) * num_sbs_ + j) * v_rb + k];
        double interference = 0.0;
        for (int l = 0; l < num_sbs_; ++l) {
          const int gi = scratch_assigned_[l];
          if (l == j || gi < 0) continue;
          interference += up_power_[((slot_base + gi) * num_sbs_ + j) * v_rb + k];
        }
        scratch_up_[g] += bw * std::log2(1.0 + signal / (noise + interference));
      }
    }

    for (int i = 0; i < num_users_; ++i) {
      const double cd = scratch_down_[i];
      const double dd = cd > 0.0 ? g120 / cd + backhaul_term_[slot_base + i] : kInf;
      const double ki = model.tracking_bits_per_user[i];
      const double cu = scratch_up_[i];
      const double du = ki > 0.0 ? (cu > 0.0 ? ki / cu : kInf) : 0.0;
      if (dd + du <= deadline) ++scratch_success_[i];
    }
  }

  if (user_success) {
    user_success->resize(num_users_);
    for (int i = 0; i < num_users_; ++i)
      (*user_success)[i] =
          static_cast<double>(scratch_success_[i]) / static_cast<double>(num_slots_);
  }

  std::vector<double> utilities(num_sbs_, 0.0);
  for (int j = 0; j < num_sbs_; ++j) {
    double total = 0.0;
    for (int i : model.sbs_users[j]) total += static_cast<double>(scratch_success_[i]);
    utilities[j] = total / static_cast<double>(num_slots_);
  }
  return utilities;
}

}  // namespace vrsim
