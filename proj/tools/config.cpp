// Copyright 2026 The qdfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>

namespace qdcli {

namespace {

const std::map<std::string, std::string> &defaults() {
  static const std::map<std::string, std::string> d = {
      // Intensity lifetimes in ps; the amplitude rates are 1/(2 T1).
      {"emitter.t1_x", "125.5"},
      {"emitter.t1_xx", "38.8"},
      {"emitter.fss", "0"},
      {"emitter.pair_delay", "1500"},
      {"grid.span", "12"},
      {"grid.n_bins", "1536"},
      {"fusion.scheme", "double_pbs"},
      {"fusion.fss_on", "true"},
      {"fusion.wandering", "off"},
      {"fusion.sigma_x", "0"},
      {"fusion.sigma_xx", "0"},
      {"fusion.schmidt_modes", "256"},
      {"fusion.schmidt_tolerance", "1e-5"},
      {"fusion.max_residual", "1e-3"},
      {"fusion.detuning_samples", "200"},
      {"fusion.phi_offset", "0"},
      {"fusion.path_overlap", "1"},
      {"imperfections.depolarization", "0"},
      {"imperfections.hv_admixture", "0"},
      {"experiment.shots", "1000000"},
      {"experiment.bootstrap", "200"},
      {"experiment.calibrate", "true"},
      {"experiment.v_x", "0.625"},
      {"experiment.v_xx", "0.694"},
      {"experiment.pair_fidelity", "0.908"},
      {"experiment.fss_share", "0.5"},
      {"experiment.multiphoton_prob", "0"},
      {"experiment.efficiency", "1"},
      {"experiment.window", "600"},
      {"experiment.rep_rate", "0.08"},
      {"experiment.mean_photons", "0.1"},
      {"multiplex.n_photons", "4"},
      {"multiplex.loop_loss", "1"},
      {"multiplex.switch_loss", "1"},
      {"multiplex.period", "1.5"},
      {"multiplex.storage_overlap", "1"},
      {"run.seed", "42"},
      {"run.workers", "1"},
      {"run.format", "csv"},
  };
  return d;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

qdf_wandering_mode wandering_mode(const std::string &key,
                                  const std::string &v) {
  if (v == "off") return QDF_WANDERING_OFF;
  if (v == "independent") return QDF_WANDERING_INDEPENDENT;
  if (v == "correlated") return QDF_WANDERING_CORRELATED;
  throw ConfigError(key + ": expected off, independent or correlated, got '" +
                    v + "'");
}

}  // namespace

RunConfig::RunConfig() : values_(defaults()) {}

void RunConfig::load_file(const std::string &path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error &e) {
    throw ConfigError("cannot read config: " + std::string(e.what()));
  }
  for (const auto &[section, body] : tree) {
    if (body.empty())
      throw ConfigError(path + ": key '" + section + "' outside a section");
    for (const auto &[key, leaf] : body) {
      if (!leaf.empty())
        throw ConfigError(path + ": nested key " + section + "." + key);
      set(section + "." + key, leaf.data());
    }
  }
}

void RunConfig::set(const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "' is not section.key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string &key, const std::string &value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = trim(value);
  // Type check now so a bad value fails before any output.
  const std::string &v = it->second;
  if (key == "fusion.scheme") {
    qdf_scheme s;
    if (qdf_scheme_parse(v.c_str(), &s) != QDF_OK)
      throw ConfigError(key + ": " + qdf_last_error());
  } else if (key == "fusion.wandering") {
    wandering_mode(key, v);
  } else if (key == "run.format") {
    if (v != "csv" && v != "json")
      throw ConfigError(key + ": expected csv or json");
  } else if (key == "fusion.fss_on" || key == "experiment.calibrate") {
    flag(key);
  } else if (key == "run.seed") {
    u64(key);
  } else {
    num(key);
  }
}

std::string RunConfig::str(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::num(const std::string &key) const {
  const std::string v = str(key);
  double x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": '" + v + "' is not a number");
  return x;
}

long long RunConfig::integer(const std::string &key) const {
  const std::string v = str(key);
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    // Accept integral floating forms such as 1e6.
    const double d = num(key);
    if (d != std::floor(d) || std::fabs(d) > 9e15)
      throw ConfigError(key + ": '" + v + "' is not an integer");
    return static_cast<long long>(d);
  }
  return x;
}

std::uint64_t RunConfig::u64(const std::string &key) const {
  const std::string v = str(key);
  std::uint64_t x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    const long long i = integer(key);
    if (i < 0) throw ConfigError(key + ": must be non-negative");
    return std::uint64_t(i);
  }
  return x;
}

bool RunConfig::flag(const std::string &key) const {
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

qdf_emitter RunConfig::emitter() const {
  qdf_emitter e;
  if (qdf_emitter_from_lifetimes(num("emitter.t1_x"), num("emitter.t1_xx"),
                                 &e) != QDF_OK)
    throw ConfigError(std::string("emitter: ") + qdf_last_error());
  e.fss = num("emitter.fss");
  e.pair_delay = num("emitter.pair_delay");
  e.sigma_x = num("fusion.sigma_x");
  e.sigma_xx = num("fusion.sigma_xx");
  return e;
}

qdf_grid RunConfig::grid() const {
  const qdf_emitter e = emitter();
  qdf_grid g;
  if (qdf_grid_for_emitter(&e, num("grid.span"), int(integer("grid.n_bins")),
                           &g) != QDF_OK)
    throw ConfigError(std::string("grid: ") + qdf_last_error());
  return g;
}

qdf_fusion_config RunConfig::fusion() const {
  qdf_fusion_config c = qdf_default_fusion_config();
  qdf_scheme_parse(str("fusion.scheme").c_str(), &c.scheme);
  c.fss_on = flag("fusion.fss_on") ? 1 : 0;
  c.wandering = wandering_mode("fusion.wandering", str("fusion.wandering"));
  c.sigma_x = num("fusion.sigma_x");
  c.sigma_xx = num("fusion.sigma_xx");
  c.schmidt_modes = int(integer("fusion.schmidt_modes"));
  c.schmidt_tolerance = num("fusion.schmidt_tolerance");
  c.max_residual = num("fusion.max_residual");
  c.detuning_samples = int(integer("fusion.detuning_samples"));
  c.seed = u64("run.seed");
  c.phi_offset = num("fusion.phi_offset");
  c.path_overlap = num("fusion.path_overlap");
  c.workers = int(integer("run.workers"));
  return c;
}

qdf_imperfections RunConfig::imperfections() const {
  return {num("imperfections.depolarization"),
          num("imperfections.hv_admixture")};
}

qdf_source_model RunConfig::model() const {
  qdf_source_model m = qdf_reference_model();
  m.emitter = emitter();
  m.grid = grid();
  m.imperfections = imperfections();
  m.wandering = wandering_mode("fusion.wandering", str("fusion.wandering"));
  if (m.wandering == QDF_WANDERING_OFF) m.wandering = QDF_WANDERING_INDEPENDENT;
  m.pair_fidelity_target = num("experiment.pair_fidelity");
  m.fss_share = num("experiment.fss_share");
  m.multiphoton_prob = num("experiment.multiphoton_prob");
  m.efficiency = num("experiment.efficiency");
  m.window = num("experiment.window");
  m.rep_rate = num("experiment.rep_rate");
  return m;
}

qdf_loop_config RunConfig::loop() const {
  return {int(integer("multiplex.n_photons")), num("multiplex.loop_loss"),
          num("multiplex.switch_loss"), num("multiplex.period"),
          num("multiplex.storage_overlap")};
}

}  // namespace qdcli
