#pragma once

#include <span>
#include <vector>

#include "vrsim/rng.hpp"
#include "vrsim/topology.hpp"

namespace vrsim {

// Radio constants shared by both link directions.
struct ChannelParams {
  double pathloss_exponent = 3.0;
  double noise_w = 3.1622776601683794e-14;  // -105 dBm
  double rb_bandwidth_hz = 1.8e6;           // 10 x 180 kHz
  double sbs_power_w = 1.0;                 // 30 dBm
  double user_power_w = 0.1;                // 20 dBm
  double min_distance_m = 1.0;              // path-gain clamp
};

double dbm_to_watts(double dbm);

// g * d^-beta with d clamped below min_distance.
double path_gain(double distance_m, double fading, double beta,
                 double min_distance_m = 1.0);

// One slot's fading state: composite link gains h = g * d^-beta for every
// (user, SBS, RB) pair, one tensor per direction. Immutable once drawn.
struct ChannelRealization {
  int num_users = 0;
  int num_sbs = 0;
  int num_down_rb = 0;
  int num_up_rb = 0;
  std::vector<double> down;  // [user][sbs][rb]
  std::vector<double> up;    // [user][sbs][rb]

  double gain_down(int user, int sbs, int rb) const {
    return down[(static_cast<std::size_t>(user) * num_sbs + sbs) * num_down_rb + rb];
  }
  double gain_up(int user, int sbs, int rb) const {
    return up[(static_cast<std::size_t>(user) * num_sbs + sbs) * num_up_rb + rb];
  }
};

// Unit-mean exponential fading power (Rayleigh amplitude), i.i.d. per
// (link, RB, slot).
ChannelRealization draw_channel(const Topology& topology, const ChannelParams& params,
                                int num_down_rb, int num_up_rb, Rng& rng);

// Downlink SINR on one RB; every other SBS reuses the RB and interferes.
double sinr_downlink(int user, int sbs, int rb, const ChannelRealization& ch,
                     const ChannelParams& params);

// Uplink SINR; co_channel_users are the users transmitting on this RB at
// other SBSs.
double sinr_uplink(int user, int sbs, int rb, std::span<const int> co_channel_users,
                   const ChannelRealization& ch, const ChannelParams& params);

// sum_k alloc_k * B * log2(1 + sinr_k), bit/s.
double rate_from_sinrs(std::span<const int> alloc_row, std::span<const double> sinrs,
                       double rb_bandwidth_hz);

double rate_downlink(int user, int sbs, std::span<const int> alloc_row,
                     const ChannelRealization& ch, const ChannelParams& params);

double rate_uplink(int user, int sbs, std::span<const int> alloc_row,
                   std::span<const std::vector<int>> co_channel_users_per_rb,
                   const ChannelRealization& ch, const ChannelParams& params);

// Per-user share of the cloud-SBS backhaul pipe, bit/s.
double backhaul_rate_per_user(double total_backhaul_bps, int num_users);

}  // namespace vrsim
