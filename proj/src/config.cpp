// SPDX-License-Identifier: Apache-2.0
#include "fmux/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fmux/report.hpp"
#include "fmux/units.hpp"

namespace fmux {

using nlohmann::json;

void SweepSettings::validate() const {
  if (n_max < 1) throw ValidationError("sweep.n_max must be >= 1");
  if (n_modes < 1) throw ValidationError("sweep.n_modes must be >= 1");
  if (!(eta_s >= 0.0 && eta_s <= 1.0)) {
    throw ValidationError("switch efficiency out of [0,1]: sweep.eta_s = " +
                          std::to_string(eta_s));
  }
  for (const double e : eta_grid) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw ValidationError("switch efficiency out of [0,1]: sweep.eta_grid entry " +
                            std::to_string(e));
    }
  }
}

void BsfwmSettings::validate() const {
  if (!(zdw_nm > 0.0)) throw ValidationError("fiber.zdw_nm must be > 0");
  if (!(gamma > 0.0)) throw ValidationError("fiber.gamma_w_m must be > 0");
  if (!(length_m > 0.0)) throw ValidationError("fiber.length_m must be > 0");
  if (beta3 && !(*beta3 > 0.0)) throw ValidationError("fiber.beta3_s3_m must be > 0");
  if (!(input_nm > 0.0 && target_nm > 0.0)) {
    throw ValidationError("bsfwm channel wavelengths must be > 0 nm");
  }
  if (pump_power_w && !(*pump_power_w >= 0.0)) {
    throw ValidationError("bsfwm.pump_power_w must be >= 0");
  }
  if (n_channels < 1) throw ValidationError("bsfwm.n_channels must be >= 1");
  if (!(spacing_ghz >= 0.0)) throw ValidationError("bsfwm.spacing_ghz must be >= 0");
  if (!(calibrate_bandwidth_ghz > 0.0)) {
    throw ValidationError("bsfwm.calibrate_bandwidth_ghz must be > 0");
  }
}

double BsfwmSettings::resolved_pump_power() const {
  if (pump_power_w) return *pump_power_w;
  // Complete conversion: kappa L = 2 gamma P L = pi / 2.
  return units::pi / (4.0 * gamma * length_m);
}

FiberSpec BsfwmSettings::fiber() const {
  validate();
  if (beta3) {
    return FiberSpec::from_zdw_nm(zdw_nm, *beta3, gamma, length_m, beta4);
  }
  // Fit beta3 to the calibration bandwidth of the first channel. The pump
  // geometry does not depend on beta3, so a placeholder fiber suffices.
  FiberSpec tmpl = FiberSpec::from_zdw_nm(zdw_nm, 1e-41, gamma, length_m, beta4);
  const PumpConfig p = pumps(tmpl);
  const double fitted = calibrate_beta3(calibrate_bandwidth_ghz * 1e9, p, tmpl);
  tmpl.beta3 = fitted;
  return tmpl;
}

PumpConfig BsfwmSettings::pumps(const FiberSpec& f) const {
  return PumpConfig::for_channel(f, input_nm, target_nm, resolved_pump_power());
}

void FullConfig::validate() const {
  detection.validate();
  sweep.validate();
  bsfwm.validate();
  experiment.validate();
  loss_budget.validate();
}

namespace {

std::vector<double> default_eta_grid() {
  std::vector<double> grid;
  for (int i = 50; i <= 100; ++i) grid.push_back(i / 100.0);
  return grid;
}

constexpr double kBaseMeanPhotonNumber = 0.01;

std::vector<ChannelSpec> default_channels(double base_mu) {
  const double xi = xi_from_mu(base_mu);
  // First channel sits at the target frequency already: weaker pair
  // production, no conversion stage, its heralds fire no pumps.
  return {
      ChannelSpec{xi, 0.65, false},
      ChannelSpec{xi, 1.0, true},
      ChannelSpec{xi, 1.0, true},
  };
}

LossBudget default_loss_budget() {
  return LossBudget{{
      {"collection", 8.0},
      {"multiplexing", 1.3},
      {"grating", 1.0},
      {"fiber_coupling", 2.5},
      {"detection", 3.0},
  }};
}

}  // namespace

FullConfig default_config() {
  FullConfig cfg;
  cfg.detection = DetectionChain{0.4, 0.53, 0.0};
  cfg.sweep.eta_grid = default_eta_grid();
  cfg.experiment.channels = default_channels(kBaseMeanPhotonNumber);
  cfg.experiment.chain = cfg.detection;
  cfg.loss_budget = default_loss_budget();
  return cfg;
}

const std::vector<DefaultEntry>& documented_defaults() {
  static const std::vector<DefaultEntry> entries = {
      {"detection.eta_h", "0.4", "heralding-arm efficiency (modeling default)"},
      {"detection.eta_d", "0.53", "measured SNSPD quantum efficiency, 53%"},
      {"detection.dark_click_prob", "0", "dark counts negligible at the operating point"},
      {"sweep.n_max", "40", "mode-count range of the scaling study"},
      {"sweep.eta_s", "0.85", "representative per-switch transmission (~0.7 dB)"},
      {"sweep.n_modes", "30", "mode count of the switching-loss scan"},
      {"sweep.eta_grid", "0.50..1.00 step 0.01", "switching-loss scan range (modeling default)"},
      {"fiber.zdw_nm", "1405", "zero-dispersion wavelength of the dispersion-shifted fiber"},
      {"fiber.length_m", "100", "dispersion-shifted fiber length"},
      {"fiber.gamma_w_m", "0.0023", "typical dispersion-shifted-fiber nonlinearity (not measured)"},
      {"fiber.beta3_s3_m", "(fitted)", "fit to the measured 160 GHz acceptance bandwidth"},
      {"fiber.beta4_s4_m", "0", "third-order dispersion only (modeling default)"},
      {"bsfwm.input_nm", "1280.65", "first converted channel wavelength"},
      {"bsfwm.target_nm", "1284.45", "common output channel wavelength"},
      {"bsfwm.pump_power_w", "pi/(4 gamma L)", "complete-conversion pump power, watt-class peak pumps"},
      {"bsfwm.n_channels", "10", "channel count of the acceptance-bandwidth study"},
      {"bsfwm.spacing_ghz", "100", "dense WDM grid spacing of the pump bank"},
      {"bsfwm.calibrate_bandwidth_ghz", "160", "measured first-channel acceptance bandwidth"},
      {"simulation.n_bins", "1000000", "run length (modeling default)"},
      {"simulation.bin_period_s", "1e-06", "pump trigger rate, 1 MHz"},
      {"simulation.base_mean_photon_number", "0.01", "per-channel brightness (modeling default)"},
      {"simulation.channels", "3 channels, strengths 0.65/1/1",
       "three heralded channels; target-frequency channel produces pairs at 0.65 relative rate"},
      {"simulation.switch_loss_db", "1.3", "measured multiplexing insertion loss, 1.3 dB"},
      {"simulation.conversion_efficiency", "0.93", "measured frequency-conversion efficiency, 93%"},
      {"simulation.noise_per_pulse", "0.003", "measured pump-induced background, 3e-3 photons per pulse"},
      {"simulation.rng_seed", "12345", "seed (modeling default)"},
      {"simulation.workers", "1", "worker count; results are worker-count invariant"},
      {"loss_budget_db", "collection 8, multiplexing 1.3, grating 1, fiber_coupling 2.5, detection 3",
       "measured heralding-efficiency loss budget"},
  };
  return entries;
}

namespace {

[[noreturn]] void unknown_key(const std::string& path, const std::string& key) {
  throw ValidationError("unknown config key '" + (path.empty() ? key : path + "." + key) +
                        "'");
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) unknown_key(path, key);
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError("config key '" + path + "' must be a number");
  return v.get<double>();
}

std::uint64_t as_uint(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ValidationError("config key '" + path + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ValidationError("config key '" + path + "' must be a boolean");
  return v.get<bool>();
}

void parse_detection(const json& j, DetectionChain& chain) {
  check_keys(j, "detection", {"eta_h", "eta_d", "dark_click_prob"});
  if (j.contains("eta_h")) chain.eta_h = as_number(j["eta_h"], "detection.eta_h");
  if (j.contains("eta_d")) chain.eta_d = as_number(j["eta_d"], "detection.eta_d");
  if (j.contains("dark_click_prob")) {
    chain.dark_click_prob = as_number(j["dark_click_prob"], "detection.dark_click_prob");
  }
}

void parse_sweep(const json& j, SweepSettings& s) {
  check_keys(j, "sweep", {"n_max", "eta_s", "n_modes", "eta_grid", "per_scheme_mu"});
  if (j.contains("n_max")) s.n_max = static_cast<int>(as_uint(j["n_max"], "sweep.n_max"));
  if (j.contains("eta_s")) s.eta_s = as_number(j["eta_s"], "sweep.eta_s");
  if (j.contains("n_modes")) {
    s.n_modes = static_cast<int>(as_uint(j["n_modes"], "sweep.n_modes"));
  }
  if (j.contains("per_scheme_mu")) {
    s.per_scheme_mu = as_bool(j["per_scheme_mu"], "sweep.per_scheme_mu");
  }
  if (j.contains("eta_grid")) {
    if (!j["eta_grid"].is_array()) {
      throw ValidationError("config key 'sweep.eta_grid' must be an array of numbers");
    }
    s.eta_grid.clear();
    for (const auto& v : j["eta_grid"]) s.eta_grid.push_back(as_number(v, "sweep.eta_grid"));
  }
}

void parse_fiber(const json& j, BsfwmSettings& b) {
  check_keys(j, "fiber", {"zdw_nm", "beta3_s3_m", "beta4_s4_m", "gamma_w_m", "length_m"});
  if (j.contains("zdw_nm")) b.zdw_nm = as_number(j["zdw_nm"], "fiber.zdw_nm");
  if (j.contains("beta3_s3_m")) b.beta3 = as_number(j["beta3_s3_m"], "fiber.beta3_s3_m");
  if (j.contains("beta4_s4_m")) b.beta4 = as_number(j["beta4_s4_m"], "fiber.beta4_s4_m");
  if (j.contains("gamma_w_m")) b.gamma = as_number(j["gamma_w_m"], "fiber.gamma_w_m");
  if (j.contains("length_m")) b.length_m = as_number(j["length_m"], "fiber.length_m");
}

void parse_bsfwm(const json& j, BsfwmSettings& b) {
  check_keys(j, "bsfwm",
             {"input_nm", "target_nm", "pump_power_w", "n_channels", "spacing_ghz",
              "calibrate_bandwidth_ghz"});
  if (j.contains("input_nm")) b.input_nm = as_number(j["input_nm"], "bsfwm.input_nm");
  if (j.contains("target_nm")) b.target_nm = as_number(j["target_nm"], "bsfwm.target_nm");
  if (j.contains("pump_power_w")) {
    b.pump_power_w = as_number(j["pump_power_w"], "bsfwm.pump_power_w");
  }
  if (j.contains("n_channels")) {
    b.n_channels = static_cast<int>(as_uint(j["n_channels"], "bsfwm.n_channels"));
  }
  if (j.contains("spacing_ghz")) {
    b.spacing_ghz = as_number(j["spacing_ghz"], "bsfwm.spacing_ghz");
  }
  if (j.contains("calibrate_bandwidth_ghz")) {
    b.calibrate_bandwidth_ghz =
        as_number(j["calibrate_bandwidth_ghz"], "bsfwm.calibrate_bandwidth_ghz");
  }
}

void parse_simulation(const json& j, ExperimentConfig& e) {
  check_keys(j, "simulation",
             {"n_bins", "bin_period_s", "base_mean_photon_number", "channels",
              "switch_loss_db", "conversion_efficiency", "noise_per_pulse", "rng_seed",
              "workers"});
  double base_mu = kBaseMeanPhotonNumber;
  if (j.contains("base_mean_photon_number")) {
    base_mu = as_number(j["base_mean_photon_number"], "simulation.base_mean_photon_number");
    if (!(base_mu >= 0.0)) {
      throw ValidationError("simulation.base_mean_photon_number must be >= 0");
    }
    for (auto& ch : e.channels) ch.xi_sq = xi_from_mu(base_mu);
  }
  if (j.contains("channels")) {
    if (!j["channels"].is_array() || j["channels"].empty()) {
      throw ValidationError("config key 'simulation.channels' must be a non-empty array");
    }
    e.channels.clear();
    for (const auto& cj : j["channels"]) {
      check_keys(cj, "simulation.channels[]", {"xi_sq", "strength", "converts"});
      ChannelSpec ch;
      ch.xi_sq = cj.contains("xi_sq")
                     ? as_number(cj["xi_sq"], "simulation.channels[].xi_sq")
                     : xi_from_mu(base_mu);
      if (cj.contains("strength")) {
        ch.relative_strength = as_number(cj["strength"], "simulation.channels[].strength");
      }
      if (cj.contains("converts")) {
        ch.needs_conversion = as_bool(cj["converts"], "simulation.channels[].converts");
      }
      e.channels.push_back(ch);
    }
  }
  if (j.contains("n_bins")) e.n_bins = as_uint(j["n_bins"], "simulation.n_bins");
  if (j.contains("bin_period_s")) {
    e.bin_period = as_number(j["bin_period_s"], "simulation.bin_period_s");
  }
  if (j.contains("switch_loss_db")) {
    e.switch_loss_db = as_number(j["switch_loss_db"], "simulation.switch_loss_db");
  }
  if (j.contains("conversion_efficiency")) {
    e.conversion_eff = as_number(j["conversion_efficiency"], "simulation.conversion_efficiency");
  }
  if (j.contains("noise_per_pulse")) {
    e.noise_per_pulse = as_number(j["noise_per_pulse"], "simulation.noise_per_pulse");
  }
  if (j.contains("rng_seed")) e.rng_seed = as_uint(j["rng_seed"], "simulation.rng_seed");
  if (j.contains("workers")) {
    e.workers = static_cast<int>(as_uint(j["workers"], "simulation.workers"));
  }
}

void parse_loss_budget(const json& j, LossBudget& budget) {
  if (!j.is_object()) {
    throw ValidationError("config key 'loss_budget_db' must be an object of label -> dB");
  }
  budget.entries_db.clear();
  for (const auto& [label, value] : j.items()) {
    budget.entries_db.emplace_back(label, as_number(value, "loss_budget_db." + label));
  }
}

}  // namespace

FullConfig parse_config_text(const std::string& text, const std::string& origin) {
  FullConfig cfg = default_config();
  std::string trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
  if (trimmed.empty()) {
    cfg.validate();
    return cfg;
  }

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    // Map the byte offset to a line number for a usable message.
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ValidationError(origin + ": JSON parse error at line " + std::to_string(line) +
                          ": " + err.what());
  }
  if (!root.is_object()) {
    throw ValidationError(origin + ": top-level config must be a JSON object");
  }

  check_keys(root, "", {"detection", "sweep", "fiber", "bsfwm", "simulation", "loss_budget_db"});
  if (root.contains("detection")) parse_detection(root["detection"], cfg.detection);
  if (root.contains("sweep")) parse_sweep(root["sweep"], cfg.sweep);
  if (root.contains("fiber")) parse_fiber(root["fiber"], cfg.bsfwm);
  if (root.contains("bsfwm")) parse_bsfwm(root["bsfwm"], cfg.bsfwm);
  if (root.contains("simulation")) parse_simulation(root["simulation"], cfg.experiment);
  if (root.contains("loss_budget_db")) parse_loss_budget(root["loss_budget_db"], cfg.loss_budget);

  cfg.experiment.chain = cfg.detection;
  cfg.validate();
  return cfg;
}

FullConfig parse_config(const std::string& path) {
  if (path.empty()) {
    FullConfig cfg = default_config();
    cfg.validate();
    return cfg;
  }
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace fmux
