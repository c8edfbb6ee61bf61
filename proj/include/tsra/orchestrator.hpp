#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsra/config.hpp"
#include "tsra/records.hpp"

namespace tsra {

/// Simulates the whole horizon: energy management on each frame boundary,
/// then rate control, matching and power allocation, then queue updates in
/// every slot. Decisions violating C1-C9 raise ContractViolation naming the
/// slot.
RunResult run(const SimConfig& config, ControllerKind controller);

struct AuditIssue {
  std::int64_t slot = 0;
  std::string constraint;
  std::string detail;
};

/// Re-checks C1-C9 from the recorded trajectory alone.
std::vector<AuditIssue> audit(const RunResult& result);

/// N (r_max^2 + v_max^2) T0^2 + E_max^2 + (g_max + theta_max)^2.
double drift_constant_B(int devices, double r_max, double v_max, double slot, double e_max,
                        double g_max, double theta_max);

struct DriftCheck {
  double B = 0.0;
  double v_max = 0.0;
  std::vector<double> lhs;  // L(end) - L(start) - V sum f, per frame
  std::vector<double> rhs;  // bound with the frame's D1, D2, D3
  std::vector<bool> holds;
  bool all() const;
};

/// Sample-path version of the per-frame drift-minus-utility bound. v_max is
/// the largest service rate realised in the run, theta_max is eh_max.
DriftCheck drift_bound_check(const RunResult& result);

struct TradeoffRow {
  double V = 0.0;
  double avg_backlog = 0.0;    // time average of sum_n Q_n, Mbit
  double avg_objective = 0.0;  // time average of f
};

/// Runs `controller` once per V with the same seed. Needs at least three V.
std::vector<TradeoffRow> tradeoff_sweep(const SimConfig& config, std::span<const double> v_grid,
                                        ControllerKind controller = ControllerKind::proposed);

}  // namespace tsra
