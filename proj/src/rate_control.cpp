#include "tsra/rate_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/tools/toms748_solve.hpp>

#include "tsra/errors.hpp"

namespace tsra {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void check_problem(const RateProblem& p) {
  require(!p.queue_weight.empty(), "rate problem needs at least one device");
  require(p.queue_weight.size() == p.utility_weight.size(), "rate problem weight size mismatch");
  require(p.sum_cap >= 0, "sum-rate cap must be nonnegative");
  require(p.rate_scale > 0, "rate scale must be positive");
  require(p.rho > 0, "ADMM penalty must be positive");
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p.queue_weight[i] >= 0 && p.utility_weight[i] >= 0, "rate weights must be nonnegative");
  }
}

// Minimizes sum_i [a_i x_i - b_i log2(1 + s x_i)] + rho/2 (sum x + offset)^2 over x >= 0.
// Given the block sum S every coordinate has a closed form, so only S is searched.
std::vector<double> block_minimize(std::span<const double> a, std::span<const double> b,
                                   double scale, double rho, double offset) {
  std::vector<double> x(a.size(), 0.0);
  if (a.empty()) return x;

  auto total_at = [&](double S) {
    const double t = rho * (S + offset);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += rate_given_price(a[i], b[i], scale, t);
    return acc;
  };
  auto phi = [&](double S) { return total_at(S) - S; };

  const double min_a = *std::min_element(a.begin(), a.end());
  const double critical = -offset - min_a / rho;
  double lo = 0.0;
  if (critical >= 0.0) {
    double gap = 1e-9 * std::max(1.0, critical);
    lo = critical + gap;
    while (!std::isfinite(phi(lo))) {
      gap *= 2;
      lo = critical + gap;
    }
  }
  double f_lo = phi(lo);
  double S = lo;
  if (f_lo > 0.0) {
    double step = std::max(1.0, lo);
    double hi = lo + step;
    double f_hi = phi(hi);
    while (f_hi > 0.0) {
      lo = hi;
      f_lo = f_hi;
      step *= 2;
      hi = lo + step;
      f_hi = phi(hi);
    }
    if (f_hi == 0.0) {
      S = hi;
    } else {
      std::uintmax_t iters = 200;
      auto [left, right] = boost::math::tools::toms748_solve(
          phi, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iters);
      S = 0.5 * (left + right);
    }
  }
  const double t = rho * (S + offset);
  for (std::size_t i = 0; i < a.size(); ++i) x[i] = rate_given_price(a[i], b[i], scale, t);
  return x;
}

// Slope of a block's total rate with respect to the constraint price.
double block_sensitivity(std::span<const double> a, std::span<const double> b, double scale,
                         double price) {
  double k = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] + price;
    if (b[i] > 0.0 && b[i] / (d * kLn2) > 1.0 / scale) k += b[i] / (d * d * kLn2);
  }
  return k;
}

// Geometric mean of the two blocks' curvatures at the current price estimate;
// 0 when either block is inactive there.
double matched_penalty(const RateProblem& p, double price) {
  const std::size_t l = p.x_size();
  const double floor = 1e-9 * *std::max_element(p.utility_weight.begin(), p.utility_weight.end());
  const double t = std::max(price, floor);
  std::span<const double> a(p.queue_weight);
  std::span<const double> b(p.utility_weight);
  const double kx = block_sensitivity(a.first(l), b.first(l), p.rate_scale, t);
  const double kz = block_sensitivity(a.subspan(l), b.subspan(l), p.rate_scale, t);
  if (!(kx > 0.0) || !(kz > 0.0)) return 0.0;
  return 1.0 / std::sqrt(kx * kz);
}

}  // namespace

std::size_t RateProblem::x_size() const {
  const std::size_t n = size();
  return split > 0 ? static_cast<std::size_t>(split) : n / 2;
}

double rate_given_price(double a, double b, double scale, double lambda) {
  if (b <= 0.0) return 0.0;
  const double denom = a + lambda;
  if (denom <= 0.0) return kInf;
  return std::max(0.0, b / (denom * kLn2) - 1.0 / scale);
}

std::vector<double> unconstrained_rates(const RateProblem& p) {
  check_problem(p);
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] = rate_given_price(p.queue_weight[i], p.utility_weight[i], p.rate_scale, 0.0);
  }
  return r;
}

double rate_objective(const RateProblem& p, std::span<const double> rates) {
  require(rates.size() == p.size(), "rate vector size mismatch");
  double obj = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    obj += p.queue_weight[i] * rates[i] - p.utility_weight[i] * std::log2(1.0 + p.rate_scale * rates[i]);
  }
  return obj;
}

std::vector<double> x_update(const RateProblem& p, std::span<const double> z, double mu) {
  const std::size_t l = p.x_size();
  std::span<const double> a(p.queue_weight.data(), l);
  std::span<const double> b(p.utility_weight.data(), l);
  return block_minimize(a, b, p.rate_scale, p.rho, sum(z) - p.sum_cap + mu);
}

std::vector<double> z_update(const RateProblem& p, std::span<const double> x, double mu) {
  const std::size_t l = p.x_size();
  std::span<const double> a(p.queue_weight.data() + l, p.size() - l);
  std::span<const double> b(p.utility_weight.data() + l, p.size() - l);
  return block_minimize(a, b, p.rate_scale, p.rho, sum(x) - p.sum_cap + mu);
}

double dual_update(double mu, std::span<const double> x, std::span<const double> z,
                   double sum_cap) {
  return mu + sum(x) + sum(z) - sum_cap;
}

Residuals residuals(std::span<const double> x, std::span<const double> z,
                    std::span<const double> z_prev, double sum_cap, double rho) {
  require(z.size() == z_prev.size(), "residual block size mismatch");
  Residuals r;
  r.primal = std::abs(sum(x) + sum(z) - sum_cap);
  double dz = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) dz += z[i] - z_prev[i];
  r.dual = rho * std::abs(dz);
  return r;
}

RateSolution solve_rates_admm(const RateProblem& p, AdmmState& state) {
  check_problem(p);
  RateSolution out;
  const std::size_t n = p.size();
  if (n < 2) {
    out.rates = oracle_rates(p);
    out.bypassed = true;
    return out;
  }
  const std::size_t l = p.x_size();
  require(l >= 1 && l <= n - 1, "ADMM split must lie in [1, N-1]");

  auto free = unconstrained_rates(p);
  if (sum(free) <= p.sum_cap) {
    out.rates = std::move(free);
    out.bypassed = true;
    state.iteration = 0;
    state.residual_pri = state.residual_dual = 0.0;
    return out;
  }

  if (state.x.size() != l || state.z.size() != n - l || !std::isfinite(state.mu)) {
    state.x.assign(l, p.sum_cap / static_cast<double>(n));
    state.z.assign(n - l, p.sum_cap / static_cast<double>(n));
    state.mu = 0.0;
  }

  RateProblem work = p;
  if (state.rho > 0.0 && p.adaptive_rho) {
    work.rho = state.rho;
  }
  std::vector<double> best;
  double best_score = kInf;
  out.converged = false;
  int i = 0;
  while (i < p.max_iter) {
    ++i;
    state.x = x_update(work, state.z, state.mu);
    std::vector<double> z_prev = state.z;
    state.z = z_update(work, state.x, state.mu);
    state.mu = dual_update(state.mu, state.x, state.z, p.sum_cap);
    Residuals res = residuals(state.x, state.z, z_prev, p.sum_cap, work.rho);
    out.trace.push_back(res);
    state.residual_pri = res.primal;
    state.residual_dual = res.dual;
    if (res.primal <= p.eps_pri && res.dual <= p.eps_dual) {
      out.converged = true;
      break;
    }
    const double score = std::max(res.primal / p.eps_pri, res.dual / p.eps_dual);
    if (score < best_score) {
      best_score = score;
      best = state.x;
      best.insert(best.end(), state.z.begin(), state.z.end());
    }
    if (p.adaptive_rho) {
      const double next = matched_penalty(p, work.rho * state.mu);
      if (next > 0.0) {
        state.mu *= work.rho / next;
        work.rho = next;
      }
    }
  }
  state.rho = work.rho;
  state.iteration = i;
  out.iterations = i;

  if (out.converged) {
    out.rates = state.x;
    out.rates.insert(out.rates.end(), state.z.begin(), state.z.end());
  } else {
    out.rates = std::move(best);
    const double total = sum(out.rates);
    if (total > p.sum_cap && total > 0.0) {
      const double f = p.sum_cap / total;
      for (double& r : out.rates) r *= f;
    }
  }
  return out;
}

std::vector<double> oracle_rates(const RateProblem& p) {
  check_problem(p);
  std::vector<double> r(p.size(), 0.0);
  if (p.sum_cap <= 0.0) return r;
  auto at = [&](double lambda) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      r[i] = rate_given_price(p.queue_weight[i], p.utility_weight[i], p.rate_scale, lambda);
      total += r[i];
    }
    return total;
  };
  if (at(0.0) <= p.sum_cap) return r;
  double lo = 0.0;
  double hi = *std::max_element(p.utility_weight.begin(), p.utility_weight.end()) * p.rate_scale / kLn2;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (at(mid) > p.sum_cap) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  at(hi);
  return r;
}

}  // namespace tsra
