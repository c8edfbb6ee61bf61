#include "tsra/queueing.hpp"

#include <algorithm>
#include <numeric>

#include "tsra/errors.hpp"

namespace tsra {

namespace {
constexpr double kSlack = 1e-9;
}

DataQueue make_data_queue(double initial, double priority, double storage_cap) {
  require(initial >= 0 && initial <= storage_cap, "initial backlog outside [0, cap]");
  DataQueue q;
  q.backlog = initial;
  q.initial = initial;
  q.priority = priority;
  q.storage_cap = storage_cap;
  return q;
}

DataQueue update_data_queue(const DataQueue& q, double r, double v, double T0) {
  require(r >= 0 && v >= 0, "data queue rates must be nonnegative");
  require(T0 > 0, "slot duration must be positive");
  DataQueue next = q;
  const double served = std::min(q.backlog, v * T0);
  const double arrived = r * T0;
  const double raw = q.backlog - served + arrived;
  next.backlog = std::min(q.storage_cap, raw);
  next.cumulative_arrivals += arrived;
  next.cumulative_service += served;
  next.drops += raw - next.backlog;
  return next;
}

EnergyQueue update_energy_queue(const EnergyQueue& e, double consumed, double purchased,
                                double harvested) {
  require(consumed >= 0 && purchased >= 0 && harvested >= 0, "energy flows must be nonnegative");
  const double tol = kSlack * std::max(1.0, e.capacity);
  if (consumed > e.backlog + tol) throw ContractViolation("energy causality violated (C4)");
  if (e.backlog + purchased + harvested > e.capacity + tol) {
    throw ContractViolation("battery capacity violated (C3)");
  }
  EnergyQueue next = e;
  next.backlog = std::max(e.backlog - consumed, 0.0) + purchased + harvested;
  next.backlog = std::min(next.backlog, e.capacity);
  return next;
}

double mean_rate_stability(std::span<const double> backlog_history) {
  require(!backlog_history.empty(), "stability statistic needs a nonempty history");
  return backlog_history.back() / static_cast<double>(backlog_history.size());
}

std::optional<double> time_average_delay(std::span<const double> arrivals,
                                         std::span<const double> service) {
  require(!arrivals.empty() && arrivals.size() == service.size(),
          "delay needs equal-length nonempty histories");
  const double n = static_cast<double>(arrivals.size());
  const double r = std::accumulate(arrivals.begin(), arrivals.end(), 0.0) / n;
  const double v = std::accumulate(service.begin(), service.end(), 0.0) / n;
  if (r == 0.0) return 0.0;
  if (!(v > r)) return std::nullopt;
  return r / (v * (v - r));
}

}  // namespace tsra
