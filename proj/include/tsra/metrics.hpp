#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tsra/records.hpp"

namespace tsra {

/// chi log2(1 + scale r), r in Mbps.
double qoe(double rate, double priority, double scale = 1.0);

/// sum_k x_k W_k log2(1 + p_k h_k / sigma^2). W in MHz gives Mbps.
double shannon_rate(std::span<const int> assigned, std::span<const double> power,
                    std::span<const double> gain, std::span<const double> bandwidth, double noise);

/// max / mean of a nonnegative series.
double par(std::span<const double> series);

/// Fraction of samples <= each grid point.
std::vector<double> cdf(std::span<const double> series, std::span<const double> grid);

/// Mean and population standard deviation.
std::pair<double, double> time_avg_std(std::span<const double> series);

/// Sum of eta g + kappa theta over all slots, RMB.
double cumulative_cost(std::span<const SlotRecord> slots);

/// Column of per-device values over time.
std::vector<double> device_series(std::span<const SlotRecord> slots, std::size_t device,
                                  std::vector<double> SlotRecord::*field);

inline constexpr int kSummarySchema = 1;

/// Scalar aggregates of one run.
struct Summary {
  int schema = kSummarySchema;
  std::string controller;
  std::uint64_t seed = 0;
  std::int64_t slots = 0;
  std::int64_t frames = 0;
  double V = 0.0;
  double beta = 0.0;
  int quota = 0;

  double avg_qoe = 0.0;             // time average of sum_n U_n
  double avg_objective = 0.0;       // time average of f
  double total_cost_rmb = 0.0;
  double total_purchased_j = 0.0;
  double total_harvested_j = 0.0;
  double avg_backlog_mbit = 0.0;    // time average of sum_n Q_n
  double std_backlog_mbit = 0.0;
  double backlog_par = 0.0;         // per-device PAR, averaged over devices
  double arrival_par = 0.0;         // same for r_n
  double avg_energy_j = 0.0;
  double max_stability_ratio = 0.0; // max_n Q_n(end)/end relative to peak Q_n
  double c12_violation_fraction = 0.0;
  double power_scaled_fraction = 0.0;
  double mean_admm_iterations = 0.0;
  std::int64_t admm_nonconverged = 0;
  std::vector<double> final_backlog;

  bool operator==(const Summary&) const = default;
};

Summary summarize(const RunResult& result);

void to_json(nlohmann::json& j, const Summary& s);
void from_json(const nlohmann::json& j, Summary& s);

}  // namespace tsra
