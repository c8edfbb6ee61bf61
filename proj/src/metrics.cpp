#include "tsra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsra/errors.hpp"
#include "tsra/queueing.hpp"

namespace tsra {

double qoe(double rate, double priority, double scale) {
  require(rate >= 0, "rate must be nonnegative");
  return priority * std::log2(1.0 + scale * rate);
}

double shannon_rate(std::span<const int> assigned, std::span<const double> power,
                    std::span<const double> gain, std::span<const double> bandwidth, double noise) {
  require(assigned.size() == power.size() && power.size() == gain.size() &&
              gain.size() == bandwidth.size(),
          "shannon_rate inputs differ in length");
  double v = 0.0;
  for (std::size_t k = 0; k < assigned.size(); ++k) {
    if (assigned[k]) v += bandwidth[k] * std::log2(1.0 + power[k] * gain[k] / noise);
  }
  return v;
}

double par(std::span<const double> series) {
  require(!series.empty(), "PAR of an empty series");
  const double peak = *std::max_element(series.begin(), series.end());
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  require(mean > 0, "PAR needs a positive mean");
  return peak / mean;
}

std::vector<double> cdf(std::span<const double> series, std::span<const double> grid) {
  require(!series.empty(), "CDF of an empty series");
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), g);
    out.push_back(static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size()));
  }
  return out;
}

std::pair<double, double> time_avg_std(std::span<const double> series) {
  require(!series.empty(), "statistics of an empty series");
  const double n = static_cast<double>(series.size());
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : series) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / n)};
}

double cumulative_cost(std::span<const SlotRecord> slots) {
  double total = 0.0;
  for (const auto& s : slots) total += s.grid_price * s.purchased + s.harvest_price * s.harvested;
  return total;
}

std::vector<double> device_series(std::span<const SlotRecord> slots, std::size_t device,
                                  std::vector<double> SlotRecord::*field) {
  std::vector<double> out;
  out.reserve(slots.size());
  for (const auto& s : slots) out.push_back((s.*field).at(device));
  return out;
}

Summary summarize(const RunResult& r) {
  require(!r.slots.empty(), "cannot summarize an empty run");
  const SimConfig& c = r.config;
  const auto n = static_cast<std::size_t>(c.devices);
  Summary s;
  s.controller = std::string(to_string(r.controller));
  s.seed = c.seed;
  s.slots = static_cast<std::int64_t>(r.slots.size());
  s.frames = static_cast<std::int64_t>(r.frames.size());
  s.V = c.V;
  s.beta = r.beta_used;
  s.quota = c.quota;

  std::vector<double> total_backlog;
  double qoe_sum = 0.0, obj_sum = 0.0, energy_sum = 0.0, iters = 0.0;
  std::int64_t c12_bad = 0, scaled = 0, admm_runs = 0;
  for (const auto& slot : r.slots) {
    total_backlog.push_back(std::accumulate(slot.backlog.begin(), slot.backlog.end(), 0.0));
    qoe_sum += slot.utility_total;
    obj_sum += slot.objective;
    energy_sum += slot.energy;
    s.total_purchased_j += slot.purchased;
    s.total_harvested_j += slot.harvested;
    for (bool ok : slot.c12_ok) c12_bad += ok ? 0 : 1;
    if (slot.power_scale < 1.0) ++scaled;
    if (slot.admm_iterations > 0) {
      ++admm_runs;
      iters += slot.admm_iterations;
      if (!slot.admm_converged) ++s.admm_nonconverged;
    }
  }
  const double count = static_cast<double>(r.slots.size());
  s.avg_qoe = qoe_sum / count;
  s.avg_objective = obj_sum / count;
  s.total_cost_rmb = cumulative_cost(r.slots);
  auto [mean_q, std_q] = time_avg_std(total_backlog);
  s.avg_backlog_mbit = mean_q;
  s.std_backlog_mbit = std_q;
  s.avg_energy_j = energy_sum / count;
  s.c12_violation_fraction = static_cast<double>(c12_bad) / (count * static_cast<double>(n));
  s.power_scaled_fraction = static_cast<double>(scaled) / count;
  s.mean_admm_iterations = admm_runs ? iters / static_cast<double>(admm_runs) : 0.0;

  double backlog_par = 0.0, arrival_par = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto q = device_series(r.slots, i, &SlotRecord::backlog);
    auto a = device_series(r.slots, i, &SlotRecord::rate);
    auto safe_par = [](const std::vector<double>& v) {
      return std::any_of(v.begin(), v.end(), [](double x) { return x > 0; }) ? par(v) : 1.0;
    };
    backlog_par += safe_par(q);
    arrival_par += safe_par(a);
    const double peak = *std::max_element(q.begin(), q.end());
    if (peak > 0) s.max_stability_ratio = std::max(s.max_stability_ratio, mean_rate_stability(q) / peak);
  }
  s.backlog_par = backlog_par / static_cast<double>(n);
  s.arrival_par = arrival_par / static_cast<double>(n);
  s.final_backlog = r.final_backlog;
  return s;
}

void to_json(nlohmann::json& j, const Summary& s) {
  j = nlohmann::json{{"schema", s.schema},
                     {"controller", s.controller},
                     {"seed", s.seed},
                     {"slots", s.slots},
                     {"frames", s.frames},
                     {"V", s.V},
                     {"beta", s.beta},
                     {"quota", s.quota},
                     {"avg_qoe", s.avg_qoe},
                     {"avg_objective", s.avg_objective},
                     {"total_cost_rmb", s.total_cost_rmb},
                     {"total_purchased_j", s.total_purchased_j},
                     {"total_harvested_j", s.total_harvested_j},
                     {"avg_backlog_mbit", s.avg_backlog_mbit},
                     {"std_backlog_mbit", s.std_backlog_mbit},
                     {"backlog_par", s.backlog_par},
                     {"arrival_par", s.arrival_par},
                     {"avg_energy_j", s.avg_energy_j},
                     {"max_stability_ratio", s.max_stability_ratio},
                     {"c12_violation_fraction", s.c12_violation_fraction},
                     {"power_scaled_fraction", s.power_scaled_fraction},
                     {"mean_admm_iterations", s.mean_admm_iterations},
                     {"admm_nonconverged", s.admm_nonconverged},
                     {"final_backlog_mbit", s.final_backlog}};
}

void from_json(const nlohmann::json& j, Summary& s) {
  j.at("schema").get_to(s.schema);
  j.at("controller").get_to(s.controller);
  j.at("seed").get_to(s.seed);
  j.at("slots").get_to(s.slots);
  j.at("frames").get_to(s.frames);
  j.at("V").get_to(s.V);
  j.at("beta").get_to(s.beta);
  j.at("quota").get_to(s.quota);
  j.at("avg_qoe").get_to(s.avg_qoe);
  j.at("avg_objective").get_to(s.avg_objective);
  j.at("total_cost_rmb").get_to(s.total_cost_rmb);
  j.at("total_purchased_j").get_to(s.total_purchased_j);
  j.at("total_harvested_j").get_to(s.total_harvested_j);
  j.at("avg_backlog_mbit").get_to(s.avg_backlog_mbit);
  j.at("std_backlog_mbit").get_to(s.std_backlog_mbit);
  j.at("backlog_par").get_to(s.backlog_par);
  j.at("arrival_par").get_to(s.arrival_par);
  j.at("avg_energy_j").get_to(s.avg_energy_j);
  j.at("max_stability_ratio").get_to(s.max_stability_ratio);
  j.at("c12_violation_fraction").get_to(s.c12_violation_fraction);
  j.at("power_scaled_fraction").get_to(s.power_scaled_fraction);
  j.at("mean_admm_iterations").get_to(s.mean_admm_iterations);
  j.at("admm_nonconverged").get_to(s.admm_nonconverged);
  j.at("final_backlog_mbit").get_to(s.final_backlog);
}

}  // namespace tsra
