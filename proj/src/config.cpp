#include "tsra/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tsra/errors.hpp"

namespace tsra {

std::string_view to_string(PriceKind kind) {
  switch (kind) {
    case PriceKind::sinusoid:
      return "sinusoid";
    case PriceKind::two_tier:
      return "two_tier";
    case PriceKind::constant:
      return "constant";
  }
  return "unknown";
}

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, int line, const std::string& key) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' expects a number, got '" +
                          text + "'",
                      line);
  }
  return value;
}

std::int64_t parse_int(const std::string& text, int line, const std::string& key) {
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key +
                          "' expects an integer, got '" + text + "'",
                      line);
  }
  return value;
}

std::vector<double> parse_list(const std::string& text, int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line, key));
  if (out.empty()) {
    throw ConfigError("line " + std::to_string(line) + ": '" + key + "' is empty", line);
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(values[i]);
  }
  return out;
}

bool all_equal(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

// Lists that depend on N or K are kept raw until the whole file is read.
struct RawLists {
  std::vector<double> p_max;
  int p_max_line = 0;
};

using Setter = std::function<void(SimConfig&, RawLists&, const std::string&, int)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto integer = [](auto member) {
      return [member](SimConfig& c, RawLists&, const std::string& v, int line) {
        using Field = std::remove_reference_t<decltype(c.*member)>;
        c.*member = static_cast<Field>(parse_int(v, line, "value"));
      };
    };
    auto real = [](double SimConfig::*member) {
      return [member](SimConfig& c, RawLists&, const std::string& v, int line) {
        c.*member = parse_double(v, line, "value");
      };
    };
    auto list = [](std::vector<double> SimConfig::*member) {
      return [member](SimConfig& c, RawLists&, const std::string& v, int line) {
        c.*member = parse_list(v, line, "value");
      };
    };
    t["system.devices"] = integer(&SimConfig::devices);
    t["system.channels"] = integer(&SimConfig::channels);
    t["system.slots_per_frame"] = integer(&SimConfig::slots_per_frame);
    t["system.frames"] = integer(&SimConfig::frames);
    t["system.slot_duration_s"] = real(&SimConfig::slot_duration);
    t["control.V"] = real(&SimConfig::V);
    t["control.beta"] = real(&SimConfig::beta);
    t["control.quota"] = integer(&SimConfig::quota);
    t["devices.priority"] = list(&SimConfig::priority);
    t["devices.path_gain"] = list(&SimConfig::path_gain);
    t["devices.delay_bound_s"] = list(&SimConfig::delay_bound);
    t["queues.data_init_mbit"] = real(&SimConfig::data_init);
    t["queues.energy_init_j"] = real(&SimConfig::energy_init);
    t["queues.storage_cap_mbit"] = real(&SimConfig::storage_cap);
    t["energy.g_max_j"] = real(&SimConfig::g_max);
    t["energy.e_max_j"] = real(&SimConfig::e_max);
    t["energy.eh_max_j"] = real(&SimConfig::eh_max);
    t["radio.bandwidth_mhz"] = list(&SimConfig::bandwidth);
    t["radio.noise_power_w"] = real(&SimConfig::noise_power);
    t["radio.p_max_w"] = [](SimConfig&, RawLists& raw, const std::string& v, int line) {
      raw.p_max = parse_list(v, line, "radio.p_max_w");
      raw.p_max_line = line;
    };
    t["rate.r_max_mbps"] = real(&SimConfig::r_max);
    t["rate.utility_rate_scale"] = real(&SimConfig::utility_rate_scale);
    t["admm.split"] = integer(&SimConfig::admm_split);
    t["admm.rho"] = real(&SimConfig::admm_rho);
    t["admm.adaptive_rho"] = [](SimConfig& c, RawLists&, const std::string& v, int line) {
      if (v == "true") {
        c.admm_adaptive_rho = true;
      } else if (v == "false") {
        c.admm_adaptive_rho = false;
      } else {
        throw ConfigError("line " + std::to_string(line) + ": admm.adaptive_rho expects true or false",
                          line);
      }
    };
    t["admm.eps_pri"] = real(&SimConfig::admm_eps_pri);
    t["admm.eps_dual"] = real(&SimConfig::admm_eps_dual);
    t["admm.max_iter"] = integer(&SimConfig::admm_max_iter);
    t["matching.price_step_fraction"] = real(&SimConfig::price_step_fraction);
    t["price.grid.model"] = [](SimConfig& c, RawLists&, const std::string& v, int line) {
      if (v == "sinusoid") {
        c.grid_price.kind = PriceKind::sinusoid;
      } else if (v == "two_tier") {
        c.grid_price.kind = PriceKind::two_tier;
      } else if (v == "constant") {
        c.grid_price.kind = PriceKind::constant;
      } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown price model '" + v + "'",
                          line);
      }
    };
    t["price.grid.min_rmb_per_kwh"] = [](SimConfig& c, RawLists&, const std::string& v, int line) {
      c.grid_price.min_price = parse_double(v, line, "price.grid.min_rmb_per_kwh");
    };
    t["price.grid.max_rmb_per_kwh"] = [](SimConfig& c, RawLists&, const std::string& v, int line) {
      c.grid_price.max_price = parse_double(v, line, "price.grid.max_rmb_per_kwh");
    };
    t["price.grid.period_frames"] = [](SimConfig& c, RawLists&, const std::string& v, int line) {
      c.grid_price.period = parse_int(v, line, "price.grid.period_frames");
    };
    t["price.harvest_rmb_per_kwh"] = real(&SimConfig::harvest_price);
    t["run.seed"] = [](SimConfig& c, RawLists&, const std::string& v, int line) {
      auto s = parse_int(v, line, "run.seed");
      if (s < 0) throw ConfigError("line " + std::to_string(line) + ": seed must be >= 0", line);
      c.seed = static_cast<std::uint64_t>(s);
    };
    return t;
  }();
  return table;
}

void broadcast(std::vector<double>& v, std::size_t n, double fallback, const char* what) {
  if (v.empty()) v.assign(n, fallback);
  if (v.size() == 1 && n > 1) v.assign(n, v.front());
  if (v.size() != n) {
    throw ConfigError(std::string(what) + " has " + std::to_string(v.size()) +
                      " entries, expected " + std::to_string(n));
  }
}

}  // namespace

void expand_defaults(SimConfig& c) {
  if (c.devices < 1 || c.channels < 1) {
    throw ConfigError("system.devices and system.channels must be positive");
  }
  const auto n = static_cast<std::size_t>(c.devices);
  const auto k = static_cast<std::size_t>(c.channels);
  broadcast(c.priority, n, 0.2, "devices.priority");
  broadcast(c.path_gain, n, 1e-10, "devices.path_gain");
  broadcast(c.delay_bound, n, 1e-5, "devices.delay_bound_s");
  broadcast(c.bandwidth, k, 1.0, "radio.bandwidth_mhz");
  if (c.p_max.rows() != n || c.p_max.cols() != k) {
    double fill = c.p_max.empty() ? 0.01 : c.p_max(0, 0);
    if (!c.p_max.empty() && !all_equal(c.p_max.flat())) {
      throw ConfigError("radio.p_max_w shape does not match devices x channels");
    }
    c.p_max = Grid<double>(n, k, fill);
  }
}

std::vector<std::string> validate(const SimConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (c.devices < 2) fail("system.devices must be at least 2");
  if (c.channels < 1) fail("system.channels must be positive");
  if (c.slots_per_frame < 1) fail("system.slots_per_frame must be positive");
  if (c.frames < 1) fail("system.frames must be positive");
  if (!(c.slot_duration > 0)) fail("system.slot_duration_s must be positive");
  if (!(c.V >= 0)) fail("control.V must be nonnegative");
  if (!(c.beta >= 0)) fail("control.beta must be nonnegative");
  if (c.quota < 1) fail("control.quota must be at least 1");
  const auto n = static_cast<std::size_t>(c.devices);
  const auto k = static_cast<std::size_t>(c.channels);
  if (c.priority.size() != n) fail("devices.priority must have one entry per device");
  if (c.path_gain.size() != n) fail("devices.path_gain must have one entry per device");
  if (c.delay_bound.size() != n) fail("devices.delay_bound_s must have one entry per device");
  if (c.bandwidth.size() != k) fail("radio.bandwidth_mhz must have one entry per channel");
  if (c.p_max.rows() != n || c.p_max.cols() != k) fail("radio.p_max_w has the wrong shape");
  for (double x : c.priority)
    if (!(x > 0)) fail("devices.priority entries must be positive");
  for (double x : c.path_gain)
    if (!(x > 0)) fail("devices.path_gain entries must be positive");
  for (double x : c.delay_bound)
    if (!(x > 0)) fail("devices.delay_bound_s entries must be positive");
  for (double x : c.bandwidth)
    if (!(x > 0)) fail("radio.bandwidth_mhz entries must be positive");
  for (double x : c.p_max.flat())
    if (!(x >= 0)) fail("radio.p_max_w entries must be nonnegative");
  if (!(c.data_init >= 0)) fail("queues.data_init_mbit must be nonnegative");
  if (!(c.storage_cap > 0)) fail("queues.storage_cap_mbit must be positive");
  if (!(c.e_max > 0)) fail("energy.e_max_j must be positive");
  if (!(c.energy_init >= 0 && c.energy_init <= c.e_max)) {
    fail("queues.energy_init_j must lie in [0, energy.e_max_j]");
  }
  if (!(c.g_max >= 0)) fail("energy.g_max_j must be nonnegative");
  if (!(c.eh_max >= 0)) fail("energy.eh_max_j must be nonnegative");
  if (!(c.noise_power > 0)) fail("radio.noise_power_w must be positive");
  if (!(c.r_max >= 0)) fail("rate.r_max_mbps must be nonnegative");
  if (!(c.utility_rate_scale > 0)) fail("rate.utility_rate_scale must be positive");
  if (c.admm_split < 0 || c.admm_split > c.devices - 1) {
    fail("admm.split must lie in [1, devices-1] (0 selects devices/2)");
  }
  if (!(c.admm_rho > 0)) fail("admm.rho must be positive");
  if (!(c.admm_eps_pri > 0) || !(c.admm_eps_dual > 0)) fail("admm tolerances must be positive");
  if (c.admm_max_iter < 1) fail("admm.max_iter must be positive");
  if (!(c.price_step_fraction > 0)) fail("matching.price_step_fraction must be positive");
  if (!(c.grid_price.min_price >= 0) || !(c.grid_price.max_price >= c.grid_price.min_price)) {
    fail("grid price requires 0 <= min <= max");
  }
  if (c.grid_price.period < 1) fail("price.grid.period_frames must be at least 1");
  if (!(c.harvest_price >= 0)) fail("price.harvest_rmb_per_kwh must be nonnegative");

  std::vector<std::string> warnings;
  if (c.harvest_price >= c.grid_price.min_price && c.harvest_price > 0) {
    warnings.push_back(
        "harvest price is not below the grid price in every frame; the closed-form energy "
        "schedule assumes it is");
  }
  return warnings;
}

SimConfig parse_config(std::istream& in, const std::string& source) {
  SimConfig config;
  RawLists raw;
  std::set<std::string, std::less<>> seen;
  std::string line_text;
  int line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    auto hash = line_text.find('#');
    if (hash != std::string::npos) line_text.erase(hash);
    auto text = trim(line_text);
    if (text.empty()) continue;
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line) + ": expected 'key = value'", line);
    }
    auto key = trim(std::string_view(text).substr(0, eq));
    auto value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(source + ":" + std::to_string(line) + ": empty key or value", line);
    }
    const auto& table = setters();
    auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError(source + ":" + std::to_string(line) + ": unknown key '" + key + "'", line);
    }
    if (!seen.insert(key).second) {
      throw ConfigError(source + ":" + std::to_string(line) + ": duplicate key '" + key + "'",
                        line);
    }
    try {
      it->second(config, raw, value, line);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::string(e.what()), line);
    }
  }

  // Without an explicit priority list the default vector only fits N = 5.
  if (!seen.contains("devices.priority") && config.devices != 5) config.priority.clear();

  if (!raw.p_max.empty()) {
    const auto n = static_cast<std::size_t>(std::max(config.devices, 1));
    const auto k = static_cast<std::size_t>(std::max(config.channels, 1));
    Grid<double> grid(n, k);
    if (raw.p_max.size() == 1) {
      grid = Grid<double>(n, k, raw.p_max.front());
    } else if (raw.p_max.size() == n) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) grid(i, j) = raw.p_max[i];
    } else if (raw.p_max.size() == n * k) {
      std::copy(raw.p_max.begin(), raw.p_max.end(), grid.flat().begin());
    } else {
      throw ConfigError(source + ":" + std::to_string(raw.p_max_line) +
                            ": radio.p_max_w needs 1, N or N*K entries",
                        raw.p_max_line);
    }
    config.p_max = std::move(grid);
  }
  expand_defaults(config);
  validate(config);
  return config;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

std::string to_text(const SimConfig& c) {
  std::ostringstream out;
  auto kv = [&](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  kv("system.devices", std::to_string(c.devices));
  kv("system.channels", std::to_string(c.channels));
  kv("system.slots_per_frame", std::to_string(c.slots_per_frame));
  kv("system.frames", std::to_string(c.frames));
  kv("system.slot_duration_s", fmt_double(c.slot_duration));
  kv("control.V", fmt_double(c.V));
  kv("control.beta", fmt_double(c.beta));
  kv("control.quota", std::to_string(c.quota));
  kv("devices.priority", join(c.priority));
  kv("devices.path_gain", join(c.path_gain));
  kv("devices.delay_bound_s", join(c.delay_bound));
  kv("queues.data_init_mbit", fmt_double(c.data_init));
  kv("queues.energy_init_j", fmt_double(c.energy_init));
  kv("queues.storage_cap_mbit", fmt_double(c.storage_cap));
  kv("energy.g_max_j", fmt_double(c.g_max));
  kv("energy.e_max_j", fmt_double(c.e_max));
  kv("energy.eh_max_j", fmt_double(c.eh_max));
  kv("radio.bandwidth_mhz", join(c.bandwidth));
  kv("radio.noise_power_w", fmt_double(c.noise_power));
  {
    auto flat = c.p_max.flat();
    std::vector<double> values(flat.begin(), flat.end());
    if (!values.empty() && all_equal(values)) values.resize(1);
    kv("radio.p_max_w", join(values));
  }
  kv("rate.r_max_mbps", fmt_double(c.r_max));
  kv("rate.utility_rate_scale", fmt_double(c.utility_rate_scale));
  kv("admm.split", std::to_string(c.admm_split));
  kv("admm.rho", fmt_double(c.admm_rho));
  kv("admm.adaptive_rho", c.admm_adaptive_rho ? "true" : "false");
  kv("admm.eps_pri", fmt_double(c.admm_eps_pri));
  kv("admm.eps_dual", fmt_double(c.admm_eps_dual));
  kv("admm.max_iter", std::to_string(c.admm_max_iter));
  kv("matching.price_step_fraction", fmt_double(c.price_step_fraction));
  kv("price.grid.model", std::string(to_string(c.grid_price.kind)));
  kv("price.grid.min_rmb_per_kwh", fmt_double(c.grid_price.min_price));
  kv("price.grid.max_rmb_per_kwh", fmt_double(c.grid_price.max_price));
  kv("price.grid.period_frames", std::to_string(c.grid_price.period));
  kv("price.harvest_rmb_per_kwh", fmt_double(c.harvest_price));
  kv("run.seed", std::to_string(c.seed));
  return out.str();
}

}  // namespace tsra
