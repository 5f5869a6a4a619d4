// SPDX-License-Identifier: Apache-2.0
#include "crdra/tools/config.hpp"

#include "crdra/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace crdra::tools {

using nlohmann::json;

std::vector<double> Sweep::values() const {
  std::vector<double> v;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
    v.push_back(log_scale ? start * std::pow(stop / start, t) : start + (stop - start) * t);
  }
  return v;
}

namespace {

double to_budget(const json& v) {
  if (v.is_null()) return kInf;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    throw ConfigError("budget string must be \"inf\", got \"" + s + "\"");
  }
  if (!v.is_number()) throw ConfigError("budget must be a number, \"inf\" or null");
  return v.get<double>();
}

std::vector<double> budgets(const json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(to_budget(e));
  } else {
    out.push_back(to_budget(v));
  }
  return out;
}

std::vector<Index> counts(const json& v) {
  std::vector<Index> out;
  auto one = [](const json& e) {
    if (!e.is_number_integer()) throw ConfigError("antenna counts must be integers");
    return static_cast<Index>(e.get<long long>());
  };
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(one(e));
  } else {
    out.push_back(one(v));
  }
  return out;
}

// Repeats a single entry for every user.
template <class T>
void broadcast(std::vector<T>& v, std::size_t users) {
  if (v.size() == 1 && users > 1) v.assign(users, v.front());
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

bool known(const std::string& experiment) {
  return std::find(kExperiments.begin(), kExperiments.end(), experiment) != kExperiments.end();
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig c;
  c.experiment = get_or<std::string>(root, "experiment", "");
  c.id = get_or<std::string>(root, "id", c.experiment);

  const json topo = root.value("topology", json::object());
  c.users = get_or<std::size_t>(topo, "users", 1);
  c.bs_antennas = get_or<Index>(topo, "bs_antennas", 1);
  if (topo.contains("tx_antennas")) c.tx_antennas = counts(topo["tx_antennas"]);
  if (topo.contains("rx_antennas")) c.rx_antennas = counts(topo["rx_antennas"]);
  if (topo.contains("pu_antennas")) c.pu_antennas = counts(topo["pu_antennas"]);
  if (c.tx_antennas.empty()) c.tx_antennas = {1};
  if (c.rx_antennas.empty()) c.rx_antennas = {1};
  broadcast(c.tx_antennas, c.users);
  broadcast(c.rx_antennas, c.users);

  const json b = root.value("budgets", json::object());
  if (b.contains("power")) c.power = budgets(b["power"]);
  if (b.contains("interference")) c.interference = budgets(b["interference"]);
  if (b.contains("weights")) c.weights = budgets(b["weights"]);
  if (c.power.empty()) c.power = {1.0};
  broadcast(c.power, c.users);
  if (c.weights.empty()) c.weights.assign(c.users, 1.0);
  broadcast(c.weights, c.users);
  if (c.interference.size() == 1 && c.pu_antennas.size() > 1) c.interference.assign(c.pu_antennas.size(), c.interference[0]);

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    c.sweep.variable = get_or<std::string>(s, "variable", "power");
    c.sweep.start = get_or<double>(s, "start", 1.0);
    c.sweep.stop = get_or<double>(s, "stop", c.sweep.start);
    c.sweep.steps = get_or<std::size_t>(s, "steps", 1);
    const auto scale = get_or<std::string>(s, "scale", "linear");
    if (scale != "linear" && scale != "log") throw ConfigError("sweep.scale must be \"linear\" or \"log\"");
    c.sweep.log_scale = scale == "log";
  } else {
    c.sweep.start = c.sweep.stop = c.power.empty() ? 1.0 : c.power.front();
  }

  const json f = root.value("fading", json::object());
  c.dimensions = get_or<std::size_t>(f, "dimensions", 1);
  c.direct_variance = get_or<double>(f, "direct_variance", 1.0);
  c.cross_variance = get_or<double>(f, "cross_variance", 1.0);
  c.pu_variance = get_or<double>(f, "pu_variance", 1.0);

  if (root.contains("seed")) c.seed = get_or<std::uint64_t>(root, "seed", 0);
  c.tolerance = get_or<double>(root, "tolerance", 1e-5);
  c.output = get_or<std::string>(root, "output", "");

  const json d = root.value("diversity", json::object());
  c.samples = get_or<std::size_t>(d, "samples", 100000);
  if (d.contains("laws")) c.laws = get_or<std::vector<std::string>>(d, "laws", {});
  c.spread = get_or<double>(d, "spread", 1.0);
  c.pu_power = get_or<double>(d, "pu_power", 1.0);

  const json ic = root.value("ic", json::object());
  c.split_resolution = get_or<std::size_t>(ic, "split_resolution", 0);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

void ExperimentConfig::validate() const {
  if (!known(experiment)) throw ConfigError("unknown experiment '" + experiment + "'");
  if (sweep.variable != "power" && sweep.variable != "interference") {
    throw ConfigError("sweep.variable must be \"power\" or \"interference\"");
  }
  if (!std::isfinite(sweep.start) || !std::isfinite(sweep.stop)) throw ConfigError("sweep bounds must be finite");
  if (sweep.steps < 1) throw ConfigError("sweep.steps must be at least 1");
  if (sweep.log_scale && !(sweep.start > 0.0 && sweep.stop > 0.0)) {
    throw ConfigError("log sweeps need positive bounds");
  }
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");

  if (experiment == "diversity") {
    if (samples < 1) throw ConfigError("diversity.samples must be at least 1");
    if (laws.empty()) throw ConfigError("diversity.laws must not be empty");
    for (const auto& l : laws) {
      if (l != "constant" && l != "exponential" && l != "two-point") {
        throw ConfigError("unknown interference law '" + l + "'");
      }
    }
    if (!(spread >= 0.0 && spread <= 1.0)) throw ConfigError("diversity.spread must lie in [0, 1]");
    if (!(pu_power >= 0.0)) throw ConfigError("diversity.pu_power must be nonnegative");
    if (interference.size() != 1 && sweep.variable != "interference") {
      throw ConfigError("diversity needs one interference budget");
    }
    return;
  }

  if (users < 1) throw ConfigError("topology.users must be at least 1");
  if (tx_antennas.size() != users || rx_antennas.size() != users) {
    throw ConfigError("one tx/rx antenna count per user is required");
  }
  if (interference.size() != pu_antennas.size()) {
    throw ConfigError("one interference budget per PU is required");
  }
  if (weights.size() != users) throw ConfigError("one weight per user is required");
  const bool single_budget = experiment == "fig2" || experiment == "bc-wsr" || experiment == "sinr-balance";
  if (!single_budget && power.size() != users) throw ConfigError("one power budget per user is required");
  if (experiment == "fig2" && users != 1) throw ConfigError("fig2 uses a single point-to-point link");
  if (experiment == "dra" && dimensions < 1) throw ConfigError("fading.dimensions must be at least 1");
  if (experiment != "dra" && dimensions != 1) throw ConfigError("fading.dimensions applies to dra only");
  if (experiment == "ic-wsr" && split_resolution > 50) throw ConfigError("ic.split_resolution is limited to 50");
  topology().validate();
}

Topology ExperimentConfig::topology() const {
  if (experiment == "fig2") return Topology::point_to_point(tx_antennas.front(), rx_antennas.front(), pu_antennas);
  if (experiment == "mac-wsr" || experiment == "dra") return Topology::mac(bs_antennas, tx_antennas, pu_antennas);
  if (experiment == "bc-wsr") return Topology::bc(bs_antennas, rx_antennas, pu_antennas);
  if (experiment == "sinr-balance") return Topology::bc(bs_antennas, std::vector<Index>(users, 1), pu_antennas);
  if (experiment == "ic-wsr") return Topology::ic(tx_antennas, rx_antennas, pu_antennas);
  throw ConfigError("experiment '" + experiment + "' has no network topology");
}

FadingProcess ExperimentConfig::fading() const {
  FadingProcess f;
  f.dimensions = dimensions;
  f.seed = seed.value_or(0);
  f.direct_variance = direct_variance;
  f.cross_variance = cross_variance;
  f.pu_variance = pu_variance;
  return f;
}

ExperimentConfig default_fig2_config() {
  ExperimentConfig c;
  c.experiment = "fig2";
  c.id = "fig2";
  c.users = 1;
  c.tx_antennas = {4};
  c.rx_antennas = {4};
  c.pu_antennas = {1, 1};
  c.power = {1.0};
  c.interference = {0.1, 0.1};
  c.weights = {1.0};
  c.sweep = {"power", 0.1, 100.0, 20, true};
  return c;
}

}  // namespace crdra::tools
