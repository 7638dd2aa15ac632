// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "fmux/photon_stats.hpp"

namespace fmux {

/// Switching-network loss models for N-fold spectral multiplexing.
///   fixed_loss : one switch in the path, eta_switch = eta_s
///   log_tree   : binary tree, eta_switch = eta_s^ceil(log2 N)
///   multi_pass : photons re-circulate, losing eta_s per remaining slot
///   ideal      : lossless reference, eta_switch = 1
enum class SwitchScheme { fixed_loss, log_tree, multi_pass, ideal };

std::string_view to_string(SwitchScheme scheme);
SwitchScheme scheme_from_string(std::string_view name);

struct SwitchNetwork {
  SwitchScheme scheme = SwitchScheme::fixed_loss;
  double eta_s = 1.0;  // per-switch transmission; ignored by `ideal`
  int n_modes = 1;

  void validate() const;
};

/// Flat transmission factor of the network. Not defined for multi_pass
/// (whose loss depends on which slot heralded) -> ValidationError.
double switch_efficiency(const SwitchNetwork& net);

/// Probability that at least one of n_modes channels heralds:
///   1 - (1 - p_h)^N.
double mux_herald_prob(double p_h, int n_modes);

/// Multiplexed single-photon probability for the given scheme.
/// For fixed_loss / log_tree / ideal: eta_switch * p_s * (1 - (1 - p_h)^N).
/// For multi_pass: sum_{j=1..N} (1-p_h)^{N-j} p_h p_s eta_s^{N-j}
///   = p_h p_s (1 - r^N)/(1 - r) with r = (1 - p_h) eta_s  (N p_h p_s at r=1).
double mux_single_prob(const SqueezedSource& src, const DetectionChain& chain,
                       const SwitchNetwork& net);

struct OptimizeResult {
  double mu_opt = 0.0;
  double p_opt = 0.0;
};

struct OptimizeOptions {
  double mu_lo = 1e-4;
  double mu_hi = 10.0;
  double tol_mu = 1e-8;
};

/// Golden-section search on log(mu) maximizing mux_single_prob for the given
/// objective network. Guards against bracket-endpoint maxima.
OptimizeResult optimize_mu(const DetectionChain& chain, const SwitchNetwork& objective,
                           OptimizeOptions opts = {});

/// Same, with the default objective: the lossless ideal network of n_modes.
/// This is the mu shared across schemes when comparing architectures.
OptimizeResult optimize_mu(const DetectionChain& chain, int n_modes,
                           OptimizeOptions opts = {});

struct ScalingPoint {
  SwitchScheme scheme;
  int n_modes;
  double eta_s;     // as configured (1.0 reported for `ideal`)
  double mu_opt;    // mean photon number used for this row
  double p_single;  // multiplexed single-photon probability
  double p_multi;   // multi-photon probability |xi|^4 (switch losses excluded)
};

/// Scaling with channel count: for each N in [1, n_max] optimize mu once
/// against the ideal network and evaluate every scheme at that mu (the
/// shared-mu policy). per_scheme_mu = true re-optimizes per scheme instead.
std::vector<ScalingPoint> sweep_n(const DetectionChain& chain, double eta_s, int n_max,
                                  bool per_scheme_mu = false);

/// Scaling with switch transmission at fixed N: every scheme evaluated on
/// eta_grid, mu optimized once (ideal objective, eta-independent).
std::vector<ScalingPoint> sweep_loss(const DetectionChain& chain, int n_modes,
                                     std::span<const double> eta_grid);

}  // namespace fmux
