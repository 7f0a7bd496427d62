#pragma once

// Independent oracles for the test suites. Everything here recomputes
// expectations from first principles (grid counting, direct before/after
// re-simulation) without touching the library's code paths under test.

#include <cmath>
#include <limits>
#include <vector>

#include "vrsim/correlation.hpp"
#include "vrsim/qos.hpp"

namespace oracles {

// Arc-union measure by membership counting on a uniform circular grid.
inline double grid_union_deg(const std::vector<vrsim::ViewState>& views,
                             int points = 100000) {
  int inside = 0;
  for (int p = 0; p < points; ++p) {
    const double angle = 360.0 * (static_cast<double>(p) + 0.5) / points;
    for (const auto& v : views) {
      double delta = std::fmod(std::abs(angle - v.center_deg), 360.0);
      if (delta > 180.0) delta = 360.0 - delta;
      if (delta <= v.width_deg / 2.0) {
        ++inside;
        break;
      }
    }
  }
  return 360.0 * static_cast<double>(inside) / points;
}

inline double slot_downlink_delay(const vrsim::GainHistory& h, const vrsim::GainSlot& s,
                                  double extra_down_rate = 0.0) {
  const double rate = s.rate_down_bps + extra_down_rate;
  if (h.content_bits > 0.0 && rate <= 0.0)
    return std::numeric_limits<double>::infinity();
  return (h.content_bits > 0.0 ? h.content_bits / rate : 0.0) + s.backhaul_term_s;
}

inline double slot_uplink_delay(const vrsim::GainHistory& h, const vrsim::GainSlot& s,
                                double extra_up_rate = 0.0) {
  if (h.tracking_bits <= 0.0) return 0.0;
  const double rate = s.rate_up_bps + extra_up_rate;
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return h.tracking_bits / rate;
}

// Direct before/after re-simulation of the success probability difference
// when uplink RBs worth delta_rate are added.
inline double gain_uplink_resim(const vrsim::GainHistory& h, double delta_rate) {
  int before = 0, after = 0;
  for (const auto& s : h.slots) {
    const double dd = slot_downlink_delay(h, s);
    before += dd + slot_uplink_delay(h, s) <= h.deadline_s ? 1 : 0;
    after += dd + slot_uplink_delay(h, s, delta_rate) <= h.deadline_s ? 1 : 0;
  }
  return static_cast<double>(after - before) / static_cast<double>(h.slots.size());
}

inline double gain_downlink_resim(const vrsim::GainHistory& h, double delta_rate) {
  int before = 0, after = 0;
  for (const auto& s : h.slots) {
    const double du = slot_uplink_delay(h, s);
    before += slot_downlink_delay(h, s) + du <= h.deadline_s ? 1 : 0;
    after += slot_downlink_delay(h, s, delta_rate) + du <= h.deadline_s ? 1 : 0;
  }
  return static_cast<double>(after - before) / static_cast<double>(h.slots.size());
}

// Gain of switching from the heavier to the lighter payload, re-simulated
// slot by slot with each format's backhaul term.
inline double gain_format_resim(const vrsim::GainHistory& h, double m120, double m360) {
  if (h.slots.empty() || m120 == m360) return 0.0;
  const double lighter = std::min(m120, m360);
  const double heavier = std::max(m120, m360);
  int with_lighter = 0, with_heavier = 0;
  for (const auto& s : h.slots) {
    double radio = std::numeric_limits<double>::infinity();
    if (h.content_bits <= 0.0)
      radio = 0.0;
    else if (s.rate_down_bps > 0.0)
      radio = h.content_bits / s.rate_down_bps;
    const double du = slot_uplink_delay(h, s);
    if (!(s.pooled_backhaul_bps > 0.0)) continue;
    with_lighter +=
        radio + lighter / s.pooled_backhaul_bps + du <= h.deadline_s ? 1 : 0;
    with_heavier +=
        radio + heavier / s.pooled_backhaul_bps + du <= h.deadline_s ? 1 : 0;
  }
  return static_cast<double>(with_lighter - with_heavier) /
         static_cast<double>(h.slots.size());
}

}  // namespace oracles
