// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fmux/bsfwm.hpp"
#include "fmux/event_sim.hpp"
#include "fmux/mux.hpp"
#include "fmux/photon_stats.hpp"

namespace fmux {

/// Parameters of the architecture sweeps (scaling curves).
struct SweepSettings {
  int n_max = 40;        // sweep-n covers N = 1..n_max
  double eta_s = 0.85;   // per-switch transmission for lossy schemes
  int n_modes = 30;      // fixed N for sweep-loss / optimize-mu
  std::vector<double> eta_grid;  // sweep-loss grid (default 0.50..1.00 step 0.01)
  bool per_scheme_mu = false;

  void validate() const;
};

/// Fiber + channel-plan settings for the frequency-conversion engine.
/// beta3 absent means "fit to the calibration bandwidth at load time";
/// pump_power absent means "complete conversion", P = pi/(4 gamma L).
struct BsfwmSettings {
  double zdw_nm = 1405.0;
  std::optional<double> beta3;  // s^3/m
  double beta4 = 0.0;           // s^4/m
  double gamma = 2.3e-3;        // 1/(W m)
  double length_m = 100.0;
  double input_nm = 1280.65;   // first converted channel
  double target_nm = 1284.45;  // common output channel
  std::optional<double> pump_power_w;
  int n_channels = 10;
  double spacing_ghz = 100.0;
  double calibrate_bandwidth_ghz = 160.0;

  void validate() const;
  double resolved_pump_power() const;
  /// Fiber with beta3 resolved (running the calibration when unset).
  FiberSpec fiber() const;
  PumpConfig pumps(const FiberSpec& fiber) const;
};

struct FullConfig {
  DetectionChain detection;  // shared by sweeps and the event simulation
  SweepSettings sweep;
  BsfwmSettings bsfwm;
  ExperimentConfig experiment;
  LossBudget loss_budget;

  void validate() const;
};

/// All defaults with their provenance notes (printed by --show-defaults).
struct DefaultEntry {
  std::string key;
  std::string value;
  std::string citation;
};
const std::vector<DefaultEntry>& documented_defaults();

FullConfig default_config();

/// Parse a JSON config file. Empty path or empty file -> all defaults.
/// Unknown keys are hard errors (ValidationError naming the key path);
/// malformed JSON raises ValidationError with line context; out-of-range
/// values raise ValidationError naming the violated invariant.
FullConfig parse_config(const std::string& path);
FullConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace fmux
