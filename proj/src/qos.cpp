#include "vrsim/qos.hpp"

#include <limits>
#include <stdexcept>

namespace vrsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double downlink_delay(double content_bits, double rate_down_bps, double payload_bits,
                      int requesters, double per_user_backhaul_bps) {
  double radio = 0.0;
  if (content_bits > 0.0) {
    if (rate_down_bps <= 0.0) return kInf;
    radio = content_bits / rate_down_bps;
  }
  double backhaul = 0.0;
  if (payload_bits > 0.0) {
    const double pooled = static_cast<double>(requesters) * per_user_backhaul_bps;
    if (pooled <= 0.0) return kInf;
    backhaul = payload_bits / pooled;
  }
  return radio + backhaul;
}

double uplink_delay(double tracking_bits, double rate_up_bps) {
  if (tracking_bits <= 0.0) return 0.0;
  if (rate_up_bps <= 0.0) return kInf;
  return tracking_bits / rate_up_bps;
}

bool success_indicator(double downlink_delay_s, double uplink_delay_s, double deadline_s) {
  return downlink_delay_s + uplink_delay_s <= deadline_s;
}

SuccessEstimate success_probability(const std::vector<SlotOutcome>& outcomes) {
  if (outcomes.empty())
    throw std::invalid_argument("success_probability: empty outcome list");
  int successes = 0;
  for (const auto& o : outcomes) successes += o.success ? 1 : 0;
  return {static_cast<double>(successes) / static_cast<double>(outcomes.size()),
          static_cast<int>(outcomes.size())};
}

namespace {

double slot_downlink_delay(const GainHistory& h, const GainSlot& s) {
  if (h.content_bits > 0.0 && s.rate_down_bps <= 0.0) return kInf;
  const double radio = h.content_bits > 0.0 ? h.content_bits / s.rate_down_bps : 0.0;
  return radio + s.backhaul_term_s;
}

double slot_uplink_delay(const GainHistory& h, const GainSlot& s) {
  return uplink_delay(h.tracking_bits, s.rate_up_bps);
}

}  // namespace

double gain_uplink_rbs(const GainHistory& history, double delta_rate_bps) {
  if (history.slots.empty()) return 0.0;
  int hits = 0;
  for (const auto& s : history.slots) {
    const double remaining = history.deadline_s - slot_downlink_delay(history, s);
    if (!(remaining > 0.0)) continue;  // downlink alone already blows the deadline
    const double threshold = history.tracking_bits / remaining;
    if (threshold - delta_rate_bps <= s.rate_up_bps && s.rate_up_bps < threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(history.slots.size());
}

double gain_downlink_rbs(const GainHistory& history, double delta_rate_bps) {
  if (history.slots.empty()) return 0.0;
  int hits = 0;
  for (const auto& s : history.slots) {
    const double remaining =
        history.deadline_s - slot_uplink_delay(history, s) - s.backhaul_term_s;
    if (!(remaining > 0.0)) continue;
    const double threshold = history.content_bits / remaining;
    if (threshold - delta_rate_bps <= s.rate_down_bps && s.rate_down_bps < threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(history.slots.size());
}

double gain_format_change(const GainHistory& history, double m120_bits, double m360_bits) {
  if (history.slots.empty() || m120_bits == m360_bits) return 0.0;
  const double lighter = std::min(m120_bits, m360_bits);
  const double heavier = std::max(m120_bits, m360_bits);
  int hits = 0;
  for (const auto& s : history.slots) {
    if (!(s.pooled_backhaul_bps > 0.0)) continue;
    double radio = kInf;
    if (history.content_bits <= 0.0)
      radio = 0.0;
    else if (s.rate_down_bps > 0.0)
      radio = history.content_bits / s.rate_down_bps;
    const double slack = history.deadline_s - radio - slot_uplink_delay(history, s);
    const double window = slack * s.pooled_backhaul_bps;
    if (lighter <= window && window < heavier) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(history.slots.size());
}

}  // namespace vrsim
