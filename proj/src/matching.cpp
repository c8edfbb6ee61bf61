#include "tsra/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tsra/errors.hpp"

namespace tsra {

double delay_to_rate(double r, double d_star) {
  require(d_star > 0, "delay bound must be positive");
  require(r >= 0, "arrival rate must be nonnegative");
  const double dr = d_star * r;
  return (dr + std::sqrt(dr * dr + 4.0 * r * d_star)) / (2.0 * d_star);
}

double optimal_power(const PairInput& in) {
  require(in.gain > 0 && in.noise > 0, "pair gain and noise must be positive");
  require(in.headroom >= 0, "battery headroom must be nonnegative");
  if (in.headroom == 0.0) return in.p_max;
  const double water = in.backlog * in.slot * in.bandwidth / (in.headroom * std::numbers::ln2);
  return std::clamp(water - in.noise / in.gain, 0.0, in.p_max);
}

double pair_utility(const PairInput& in, double power) {
  require(power >= 0, "power must be nonnegative");
  return in.backlog * in.slot * in.bandwidth * std::log2(1.0 + power * in.gain / in.noise) -
         in.headroom * power;
}

std::vector<int> build_preferences(std::span<const double> values, std::span<const double> prices) {
  require(values.size() == prices.size(), "preference inputs differ in length");
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] - prices[a] > values[b] - prices[b];
  });
  return order;
}

Matching match(const Grid<double>& values, int quota, double price_step) {
  require(quota >= 1, "quota must be at least 1");
  require(price_step > 0, "price step must be positive");
  const auto n = values.rows();
  const auto k = values.cols();

  std::vector<long> steps(k, 0);
  std::vector<double> prices(k, 0.0);
  std::vector<std::vector<int>> bids(n);
  std::vector<int> bidders(k);
  Matching m;
  m.price_step = price_step;

  for (;;) {
    ++m.rounds;
    std::fill(bidders.begin(), bidders.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      bids[i].clear();
      auto row = values.row(i);
      for (int c : build_preferences(row, prices)) {
        if (static_cast<int>(bids[i].size()) == quota) break;
        if (row[c] - prices[c] <= 0.0) break;
        bids[i].push_back(c);
        ++bidders[c];
      }
    }
    bool contested = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (bidders[c] > 1) {
        contested = true;
        ++steps[c];
        ++m.price_steps;
        prices[c] = static_cast<double>(steps[c]) * price_step;
      }
    }
    if (!contested) break;
  }

  m.prices = prices;
  m.owner.assign(k, -1);
  m.channels_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.channels_of[i] = bids[i];
    std::sort(m.channels_of[i].begin(), m.channels_of[i].end());
    for (int c : bids[i]) m.owner[c] = static_cast<int>(i);
  }
  return m;
}

double default_price_step(const Grid<double>& values, double fraction) {
  require(fraction > 0, "price step fraction must be positive");
  auto flat = values.flat();
  if (flat.empty()) return fraction;
  std::vector<double> mags(flat.size());
  std::transform(flat.begin(), flat.end(), mags.begin(), [](double v) { return std::abs(v); });
  const auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  double median = *mid;
  if (mags.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(mags.begin(), mid));
  }
  return median > 0.0 ? fraction * median : fraction;
}

double enforce_energy_causality(Grid<double>& powers, double energy, double slot) {
  require(energy >= 0 && slot > 0, "energy and slot duration must be valid");
  auto flat = powers.flat();
  const double total = std::accumulate(flat.begin(), flat.end(), 0.0) * slot;
  if (total <= energy) return 1.0;
  const double factor = energy / total;
  for (double& p : flat) p *= factor;
  return factor;
}

std::vector<bool> check_c12(std::span<const double> service, std::span<const double> targets) {
  require(service.size() == targets.size(), "service and target sizes differ");
  std::vector<bool> ok(service.size());
  for (std::size_t i = 0; i < service.size(); ++i) ok[i] = service[i] >= targets[i];
  return ok;
}

}  // namespace tsra
