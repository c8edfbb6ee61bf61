#pragma once

#include <span>
#include <vector>

namespace tsra {

/// minimize sum_n a_n r_n - b_n log2(1 + s r_n)  s.t.  sum_n r_n <= R, r >= 0
/// with a_n = Q_n T0, b_n = V chi_n, s = utility rate scale. Rates in Mbps.
struct RateProblem {
  std::vector<double> queue_weight;    // a
  std::vector<double> utility_weight;  // b
  double sum_cap = 0.0;                // R
  double rate_scale = 1.0;             // s
  int split = 0;                       // size of the x block, 0 selects N/2
  double rho = 1.0;
  bool adaptive_rho = true;  // match rho to the blocks' curvature each iteration
  double eps_pri = 1e-4;
  double eps_dual = 1e-4;
  int max_iter = 500;

  std::size_t size() const { return queue_weight.size(); }
  std::size_t x_size() const;
};

/// Scaled-form ADMM state; kept between calls for warm starts.
struct AdmmState {
  std::vector<double> x;
  std::vector<double> z;
  double mu = 0.0;
  double rho = 0.0;  // penalty reached by the last solve, 0 before the first
  int iteration = 0;
  double residual_pri = 0.0;
  double residual_dual = 0.0;
};

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
};

struct RateSolution {
  std::vector<double> rates;
  int iterations = 0;
  bool converged = true;
  bool bypassed = false;  // unconstrained optimum already feasible
  std::vector<Residuals> trace;
};

/// Per-device minimizer when the sum constraint carries price `lambda`.
double rate_given_price(double a, double b, double scale, double lambda);

std::vector<double> unconstrained_rates(const RateProblem& problem);
double rate_objective(const RateProblem& problem, std::span<const double> rates);

/// Exact block minimizers of the augmented Lagrangian.
std::vector<double> x_update(const RateProblem& problem, std::span<const double> z, double mu);
std::vector<double> z_update(const RateProblem& problem, std::span<const double> x, double mu);
double dual_update(double mu, std::span<const double> x, std::span<const double> z,
                   double sum_cap);
Residuals residuals(std::span<const double> x, std::span<const double> z,
                    std::span<const double> z_prev, double sum_cap, double rho);

/// Runs ADMM on the equality form when the cap binds. On hitting max_iter the
/// best iterate is scaled into the feasible set and `converged` is false.
RateSolution solve_rates_admm(const RateProblem& problem, AdmmState& state);

/// KKT solution by bisection on the multiplier of the sum constraint.
std::vector<double> oracle_rates(const RateProblem& problem);

}  // namespace tsra
