#include "vrsim/channel.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace vrsim {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_gain(double distance_m, double fading, double beta, double min_distance_m) {
  const double d = std::max(distance_m, min_distance_m);
  return fading * std::pow(d, -beta);
}

ChannelRealization draw_channel(const Topology& topology, const ChannelParams& params,
                                int num_down_rb, int num_up_rb, Rng& rng) {
  ChannelRealization ch;
  ch.num_users = topology.num_users();
  ch.num_sbs = topology.num_sbs();
  ch.num_down_rb = num_down_rb;
  ch.num_up_rb = num_up_rb;
  ch.down.resize(static_cast<std::size_t>(ch.num_users) * ch.num_sbs * num_down_rb);
  ch.up.resize(static_cast<std::size_t>(ch.num_users) * ch.num_sbs * num_up_rb);
  std::size_t di = 0, ui = 0;
  for (int i = 0; i < ch.num_users; ++i) {
    for (int j = 0; j < ch.num_sbs; ++j) {
      const double d = topology.user_sbs_distance(i, j);
      for (int k = 0; k < num_down_rb; ++k)
        ch.down[di++] = path_gain(d, rng.exponential(), params.pathloss_exponent,
                                  params.min_distance_m);
      for (int k = 0; k < num_up_rb; ++k)
        ch.up[ui++] = path_gain(d, rng.exponential(), params.pathloss_exponent,
                                params.min_distance_m);
    }
  }
  return ch;
}

double sinr_downlink(int user, int sbs, int rb, const ChannelRealization& ch,
                     const ChannelParams& params) {
  const double signal = params.sbs_power_w * ch.gain_down(user, sbs, rb);
  double interference = 0.0;
  for (int l = 0; l < ch.num_sbs; ++l) {
    if (l == sbs) continue;
    interference += params.sbs_power_w * ch.gain_down(user, l, rb);
  }
  return signal / (params.noise_w + interference);
}

double sinr_uplink(int user, int sbs, int rb, std::span<const int> co_channel_users,
                   const ChannelRealization& ch, const ChannelParams& params) {
  const double signal = params.user_power_w * ch.gain_up(user, sbs, rb);
  double interference = 0.0;
  for (int l : co_channel_users) {
    if (l == user) continue;
    interference += params.user_power_w * ch.gain_up(l, sbs, rb);
  }
  return signal / (params.noise_w + interference);
}

double rate_from_sinrs(std::span<const int> alloc_row, std::span<const double> sinrs,
                       double rb_bandwidth_hz) {
  assert(alloc_row.size() == sinrs.size());
  double rate = 0.0;
  for (std::size_t k = 0; k < alloc_row.size(); ++k)
    if (alloc_row[k]) rate += rb_bandwidth_hz * std::log2(1.0 + sinrs[k]);
  return rate;
}

double rate_downlink(int user, int sbs, std::span<const int> alloc_row,
                     const ChannelRealization& ch, const ChannelParams& params) {
  double rate = 0.0;
  for (std::size_t k = 0; k < alloc_row.size(); ++k) {
    if (!alloc_row[k]) continue;
    const double g = sinr_downlink(user, sbs, static_cast<int>(k), ch, params);
    rate += params.rb_bandwidth_hz * std::log2(1.0 + g);
  }
  return rate;
}

double rate_uplink(int user, int sbs, std::span<const int> alloc_row,
                   std::span<const std::vector<int>> co_channel_users_per_rb,
                   const ChannelRealization& ch, const ChannelParams& params) {
  double rate = 0.0;
  for (std::size_t k = 0; k < alloc_row.size(); ++k) {
    if (!alloc_row[k]) continue;
    const double g = sinr_uplink(user, sbs, static_cast<int>(k),
                                 co_channel_users_per_rb[k], ch, params);
    rate += params.rb_bandwidth_hz * std::log2(1.0 + g);
  }
  return rate;
}

double backhaul_rate_per_user(double total_backhaul_bps, int num_users) {
  if (num_users < 1)
    throw std::invalid_argument("backhaul_rate_per_user: num_users must be >= 1");
  return total_backhaul_bps / static_cast<double>(num_users);
}

}  // namespace vrsim
