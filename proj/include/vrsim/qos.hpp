#pragma once

#include <vector>

#include "vrsim/correlation.hpp"

namespace vrsim {

// Realized delays and outcome of one user's slot.
struct SlotOutcome {
  double downlink_delay_s = 0.0;
  double uplink_delay_s = 0.0;
  bool success = false;
  int content = 0;
  ContentFormat format = ContentFormat::kVisible120;
};

struct SuccessEstimate {
  double probability = 0.0;
  int horizon = 0;  // slots averaged over
};

// Radio leg plus the backhaul leg shared by all requesters of the content:
//   G120 / rate + payload / (requesters * per_user_backhaul)
// Zero rate means the slot cannot complete: +inf.
double downlink_delay(double content_bits, double rate_down_bps, double payload_bits,
                      int requesters, double per_user_backhaul_bps);

// tracking_bits / rate; +inf on zero rate (0 bits take 0 s either way).
double uplink_delay(double tracking_bits, double rate_up_bps);

// Deadline check is closed: a sum exactly at the deadline succeeds.
bool success_indicator(double downlink_delay_s, double uplink_delay_s, double deadline_s);

SuccessEstimate success_probability(const std::vector<SlotOutcome>& outcomes);

// Fixed-allocation slot history used by the resource-gain formulas. Rates
// vary per slot (fading); payload terms vary with the slot's requester set.
struct GainSlot {
  double rate_down_bps = 0.0;
  double rate_up_bps = 0.0;
  double backhaul_term_s = 0.0;        // payload / (requesters * per-user backhaul)
  double pooled_backhaul_bps = 0.0;    // requesters * per-user backhaul
};

struct GainHistory {
  std::vector<GainSlot> slots;
  double content_bits = 0.0;   // downlink payload over the radio leg
  double tracking_bits = 0.0;  // uplink payload
  double deadline_s = 0.0;
};

// Success-probability gain from adding uplink RBs worth delta_rate_bps.
// Counts slots whose uplink rate sits inside the window
//   [K/(deadline - D_down) - delta, K/(deadline - D_down));
// slots already failing on the downlink alone contribute 0.
double gain_uplink_rbs(const GainHistory& history, double delta_rate_bps);

// Mirror of gain_uplink_rbs with the downlink threshold
//   G120 / (deadline - D_up - backhaul_term).
double gain_downlink_rbs(const GainHistory& history, double delta_rate_bps);

// Gain from switching the content transmission format, given the two
// candidate backhaul payloads; identical payloads yield exactly 0.
double gain_format_change(const GainHistory& history, double m120_bits, double m360_bits);

}  // namespace vrsim
