// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fmux/errors.hpp"

namespace fmux {

/// Fiber dispersion around the zero-dispersion frequency (ZDW), where
/// beta2 = 0 by definition:
///   beta(w) = beta0 + beta1 d + (beta3/6) d^3 + (beta4/24) d^4,  d = w - omega_zdw.
/// beta0/beta1 never enter a four-wave mismatch and are not stored.
struct FiberSpec {
  double omega_zdw = 0.0;  // rad/s
  double beta3 = 0.0;      // s^3/m
  double beta4 = 0.0;      // s^4/m
  double gamma = 0.0;      // 1/(W m)
  double length = 0.0;     // m

  static FiberSpec from_zdw_nm(double zdw_nm, double beta3, double gamma, double length,
                               double beta4 = 0.0);

  void validate() const;
};

/// Pump geometry for Bragg-scattering four-wave mixing in the symmetric
/// configuration: the two quantum fields sit above the ZDW at detunings
///   d_in = dOm + dw/2 + wt,   d_out = dOm - dw/2 + wt,
/// and the two pumps sit mirrored below it at -(dOm + dw/2), -(dOm - dw/2).
/// Here dw = pump separation (equals the input->output frequency shift),
/// dOm = common mean detuning from the ZDW, and wt is the offset of the
/// input from the phase-matched channel center (wt = 0 at perfect matching).
/// All three are angular (rad/s); dw, dOm are stored as magnitudes of the
/// mirrored layout.
class PumpConfig {
 public:
  /// Directly from the detuning pair (dw, dOm) and per-pump peak power.
  static PumpConfig from_offsets(double delta_omega, double delta_Omega,
                                 double pump_power_w);

  /// Phase-matched geometry for converting input_nm -> target_nm:
  /// dw = w_in - w_out, dOm = (w_in + w_out)/2 - omega_zdw (so wt = 0 at the
  /// channel center). Requires the field pair to sit above the ZDW.
  static PumpConfig for_channel(const FiberSpec& fiber, double input_nm, double target_nm,
                                double pump_power_w);

  double delta_omega() const { return delta_omega_; }
  double delta_Omega() const { return delta_Omega_; }
  double pump_power() const { return pump_power_; }

  /// Actual pump angular frequencies (on the low-frequency side of the ZDW).
  double omega_p1(const FiberSpec& fiber) const;
  double omega_p2(const FiberSpec& fiber) const;

  PumpConfig with_power(double pump_power_w) const;
  PumpConfig shifted(double delta_omega_add, double delta_Omega_add) const;

 private:
  PumpConfig(double dw, double dOm, double p);
  double delta_omega_;
  double delta_Omega_;
  double pump_power_;
};

/// Phase mismatch of the Bragg-scattering process at input offset wt:
///   k = (beta3/2) wt dw (wt + 2 dOm)   [third order, exact]
/// plus, when beta4 != 0, the quartic difference of the full four-point
/// Taylor evaluation of beta at the two fields and two mirrored pumps.
/// Ordering convention: annihilated minus created waves; only k^2 is
/// physically observable downstream.
double phase_mismatch(const FiberSpec& fiber, const PumpConfig& pumps, double omega_tilde);

/// Interaction strength kappa = 2 gamma P (rad/m equivalent).
double interaction_strength(const FiberSpec& fiber, const PumpConfig& pumps);

/// Conversion efficiency of the two-sideband coupled-mode solution:
///   eta = kappa^2/(k^2 + kappa^2) * sin^2( sqrt(k^2 + kappa^2) L ).
/// Complete conversion at k = 0 when kappa L = pi/2 (i.e. 2 gamma P L = pi/2).
double conversion_efficiency(double k, const PumpConfig& pumps, const FiberSpec& fiber);

/// eta as a function of the input offset wt (composes the two above).
double conversion_at_offset(const FiberSpec& fiber, const PumpConfig& pumps,
                            double omega_tilde);

/// Full width at half maximum, in Hz, of eta(input frequency) around the
/// phase-matched center wt = 0. Found by outward march + bisection on each
/// side (1 MHz tolerance). Throws NumericError if eta never falls below half
/// of the center value within +-10 THz.
double acceptance_bandwidth(const FiberSpec& fiber, const PumpConfig& pumps);

struct ChannelPoint {
  int channel = 0;              // 1-based
  double delta_omega_ghz = 0.0; // input->output shift of this channel
  double peak_efficiency = 0.0; // eta at the re-centered channel (wt = 0)
  double bandwidth_ghz = 0.0;
};

/// Multi-channel acceptance sweep. Channel i keeps the output frequency and
/// one pump fixed and moves the input (and the other pump) up by
/// (i-1) * spacing: dw grows by the spacing, dOm by half of it; each channel
/// is re-centered so wt = 0 at its own input.
std::vector<ChannelPoint> channel_sweep(const FiberSpec& fiber, const PumpConfig& base,
                                        int n_channels, double spacing_hz);

/// Fit beta3 so that acceptance_bandwidth(channel geometry) matches
/// target_bandwidth_hz within 1 GHz, by bisection on log(beta3) over
/// [1e-44, 1e-38] s^3/m (bandwidth is strictly decreasing in beta3).
/// Throws NumericError when the bracket does not straddle the target.
double calibrate_beta3(double target_bandwidth_hz, const PumpConfig& pumps,
                       const FiberSpec& fiber_template);

}  // namespace fmux
