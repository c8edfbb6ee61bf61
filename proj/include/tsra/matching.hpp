#pragma once

#include <span>
#include <vector>

#include "tsra/grid.hpp"

namespace tsra {

/// Positive root of r / (v (v - r)) = d: the service rate that keeps the
/// average delay at d for arrival rate r. Rates and d must share a time unit.
double delay_to_rate(double r, double d_star);

/// One tentative (device, channel) pair. Backlog in Mbit, bandwidth in MHz,
/// headroom in J, noise and powers in W.
struct PairInput {
  double backlog = 0.0;
  double headroom = 0.0;
  double bandwidth = 1.0;
  double gain = 1.0;
  double noise = 1.0;
  double slot = 1.0;
  double p_max = 0.0;
};

/// Maximizer of pair_utility over [0, p_max]. Zero headroom means spending
/// energy is free, which gives p_max.
double optimal_power(const PairInput& in);

/// Q T0 W log2(1 + p h / sigma^2) - H p.
double pair_utility(const PairInput& in, double power);

/// Channels sorted by f - price descending, ties by lower index.
std::vector<int> build_preferences(std::span<const double> values, std::span<const double> prices);

struct Matching {
  std::vector<std::vector<int>> channels_of;  // ascending channel indices per device
  std::vector<int> owner;                     // -1 when the channel is unassigned
  std::vector<double> prices;
  int rounds = 0;
  long price_steps = 0;  // total number of single increments applied
  double price_step = 0.0;
};

/// Ascending-price matching with quotas. Each round every device bids for its
/// best `quota` channels with positive net value; contested channels get one
/// price increment. Ends when no channel has two bidders.
Matching match(const Grid<double>& values, int quota, double price_step);

/// `fraction` of the median |f| over all pairs, or `fraction` when that is 0.
double default_price_step(const Grid<double>& values, double fraction);

/// Scales all powers by E / (sum p T0) when the total would exceed E.
/// Returns the factor applied (1 when no scaling was needed).
double enforce_energy_causality(Grid<double>& powers, double energy, double slot);

/// v_n >= v*_n for every device.
std::vector<bool> check_c12(std::span<const double> service, std::span<const double> targets);

}  // namespace tsra
