#pragma once

#include <optional>
#include <span>

namespace tsra {

/// Fluid data queue in Mbit.
struct DataQueue {
  double backlog = 0.0;
  double priority = 1.0;
  double storage_cap = 0.0;
  double initial = 0.0;
  double cumulative_arrivals = 0.0;
  double cumulative_service = 0.0;
  double drops = 0.0;
};

DataQueue make_data_queue(double initial, double priority, double storage_cap);

/// Serve first, then admit: Q' = min(cap, max(Q - v*T0, 0) + r*T0).
/// Rates in Mbps, T0 in seconds. Negative rates throw ContractViolation.
DataQueue update_data_queue(const DataQueue& q, double r, double v, double T0);

/// Battery in joules.
struct EnergyQueue {
  double backlog = 0.0;
  double capacity = 0.0;
  double headroom() const { return capacity - backlog; }
};

/// E' = max(E - p_c, 0) + g + theta. Consumption beyond E, or a refill that
/// could overflow the capacity, is a controller bug and throws.
EnergyQueue update_energy_queue(const EnergyQueue& e, double consumed, double purchased,
                                double harvested);

/// Q(t_last) / t_last for a per-slot backlog history.
double mean_rate_stability(std::span<const double> backlog_history);

/// r_bar / (v_bar (v_bar - r_bar)); empty when the queue is not stabilised.
std::optional<double> time_average_delay(std::span<const double> arrivals,
                                         std::span<const double> service);

}  // namespace tsra
