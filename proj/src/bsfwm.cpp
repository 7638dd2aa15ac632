// SPDX-License-Identifier: Apache-2.0
#include "fmux/bsfwm.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fmux/units.hpp"

namespace fmux {

FiberSpec FiberSpec::from_zdw_nm(double zdw_nm, double beta3, double gamma, double length,
                                 double beta4) {
  if (!(zdw_nm > 0.0)) throw ValidationError("zero-dispersion wavelength must be > 0 nm");
  FiberSpec f;
  f.omega_zdw = units::angular_from_nm(zdw_nm);
  f.beta3 = beta3;
  f.beta4 = beta4;
  f.gamma = gamma;
  f.length = length;
  f.validate();
  return f;
}

void FiberSpec::validate() const {
  if (!(omega_zdw > 0.0)) throw ValidationError("fiber omega_zdw must be > 0");
  if (!(length > 0.0)) throw ValidationError("fiber length must be > 0 m");
  if (!(gamma >= 0.0)) throw ValidationError("fiber gamma must be >= 0");
}

PumpConfig::PumpConfig(double dw, double dOm, double p)
    : delta_omega_(dw), delta_Omega_(dOm), pump_power_(p) {
  if (!(delta_omega_ >= 0.0)) throw ValidationError("pump separation delta_omega must be >= 0");
  if (!(delta_Omega_ > 0.0)) throw ValidationError("mean detuning delta_Omega must be > 0");
  if (!(pump_power_ >= 0.0)) throw ValidationError("pump power must be >= 0 W");
}

PumpConfig PumpConfig::from_offsets(double delta_omega, double delta_Omega,
                                    double pump_power_w) {
  return PumpConfig(delta_omega, delta_Omega, pump_power_w);
}

PumpConfig PumpConfig::for_channel(const FiberSpec& fiber, double input_nm, double target_nm,
                                   double pump_power_w) {
  const double w_in = units::angular_from_nm(input_nm);
  const double w_out = units::angular_from_nm(target_nm);
  if (!(w_in > w_out)) {
    throw ValidationError("channel geometry requires the input above the output frequency");
  }
  const double mean = (w_in + w_out) / 2.0 - fiber.omega_zdw;
  if (!(mean > 0.0)) {
    throw ValidationError("channel geometry requires the field pair above the ZDW");
  }
  return PumpConfig(w_in - w_out, mean, pump_power_w);
}

double PumpConfig::omega_p1(const FiberSpec& fiber) const {
  return fiber.omega_zdw - (delta_Omega_ + delta_omega_ / 2.0);
}

double PumpConfig::omega_p2(const FiberSpec& fiber) const {
  return fiber.omega_zdw - (delta_Omega_ - delta_omega_ / 2.0);
}

PumpConfig PumpConfig::with_power(double pump_power_w) const {
  return PumpConfig(delta_omega_, delta_Omega_, pump_power_w);
}

PumpConfig PumpConfig::shifted(double delta_omega_add, double delta_Omega_add) const {
  return PumpConfig(delta_omega_ + delta_omega_add, delta_Omega_ + delta_Omega_add,
                    pump_power_);
}

double phase_mismatch(const FiberSpec& fiber, const PumpConfig& pumps, double omega_tilde) {
  fiber.validate();
  const double dw = pumps.delta_omega();
  const double dOm = pumps.delta_Omega();
  const double wt = omega_tilde;

  // Third order is exact in closed form.
  double k = fiber.beta3 / 2.0 * wt * dw * (wt + 2.0 * dOm);

  if (fiber.beta4 != 0.0) {
    // Quartic difference of the four Taylor points, annihilated minus
    // created: input (a + h), mirrored pump 1 (-(dOm + h)) minus output
    // (a - h), mirrored pump 2 (-(dOm - h)); a = dOm + wt, h = dw/2.
    const double a = dOm + wt;
    const double h = dw / 2.0;
    const auto q4 = [](double d) { return d * d * d * d; };
    k += fiber.beta4 / 24.0 * (q4(a + h) - q4(a - h) + q4(dOm + h) - q4(dOm - h));
  }
  return k;
}

double interaction_strength(const FiberSpec& fiber, const PumpConfig& pumps) {
  return 2.0 * fiber.gamma * pumps.pump_power();
}

double conversion_efficiency(double k, const PumpConfig& pumps, const FiberSpec& fiber) {
  fiber.validate();
  const double kappa = interaction_strength(fiber, pumps);
  if (kappa == 0.0) return 0.0;
  const double w = std::sqrt(k * k + kappa * kappa);
  const double s = std::sin(w * fiber.length);
  return (kappa * kappa) / (w * w) * s * s;
}

double conversion_at_offset(const FiberSpec& fiber, const PumpConfig& pumps,
                            double omega_tilde) {
  return conversion_efficiency(phase_mismatch(fiber, pumps, omega_tilde), pumps, fiber);
}

namespace {

constexpr double kScanLimit = 2.0 * units::pi * 10e12;  // +-10 THz search window

// First crossing of eta below `half` on one side of wt = 0; `sign` = +-1.
// Returns the crossing offset magnitude (rad/s) to 1 MHz, or NaN if eta
// stays above half within the scan window.
double half_crossing(const FiberSpec& fiber, const PumpConfig& pumps, double half,
                     double sign) {
  // Initial step from the linear mismatch slope: wt_scale maps |k| ~ kappa.
  const double slope = std::abs(fiber.beta3) * pumps.delta_omega() * pumps.delta_Omega();
  const double kappa = interaction_strength(fiber, pumps);
  double step = (slope > 0.0 && kappa > 0.0) ? kappa / slope / 8.0 : kScanLimit / 1024.0;
  step = std::min(step, kScanLimit / 16.0);

  double lo = 0.0;
  double hi = step;
  while (conversion_at_offset(fiber, pumps, sign * hi) >= half) {
    lo = hi;
    hi *= 1.5;
    if (hi > kScanLimit) return std::nan("");
  }
  const double tol = 2.0 * units::pi * 1e6;  // 1 MHz
  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2.0;
    if (conversion_at_offset(fiber, pumps, sign * mid) >= half) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2.0;
}

}  // namespace

double acceptance_bandwidth(const FiberSpec& fiber, const PumpConfig& pumps) {
  fiber.validate();
  const double center = conversion_at_offset(fiber, pumps, 0.0);
  if (!(center > 0.0)) {
    throw NumericError("acceptance_bandwidth: zero efficiency at the channel center");
  }
  const double half = center / 2.0;
  const double up = half_crossing(fiber, pumps, half, +1.0);
  const double down = half_crossing(fiber, pumps, half, -1.0);
  if (std::isnan(up) || std::isnan(down)) {
    throw NumericError(
        "acceptance_bandwidth: no half-maximum crossing within +-10 THz of the center");
  }
  return units::hz_from_angular(up + down);
}

std::vector<ChannelPoint> channel_sweep(const FiberSpec& fiber, const PumpConfig& base,
                                        int n_channels, double spacing_hz) {
  if (n_channels < 1) throw ValidationError("channel_sweep requires n_channels >= 1");
  if (!(spacing_hz >= 0.0)) throw ValidationError("channel spacing must be >= 0 Hz");
  std::vector<ChannelPoint> points;
  points.reserve(n_channels);
  for (int i = 0; i < n_channels; ++i) {
    // Output and one pump stay fixed; the input (and the other pump) move up
    // by i * spacing: the separation grows by the full spacing, the mean
    // detuning by half of it. Each channel is phase-matched at its center.
    const double shift = units::angular_from_hz(i * spacing_hz);
    const PumpConfig pumps = base.shifted(shift, shift / 2.0);
    ChannelPoint pt;
    pt.channel = i + 1;
    pt.delta_omega_ghz = units::hz_from_angular(pumps.delta_omega()) / 1e9;
    pt.peak_efficiency = conversion_at_offset(fiber, pumps, 0.0);
    pt.bandwidth_ghz = acceptance_bandwidth(fiber, pumps) / 1e9;
    points.push_back(pt);
  }
  return points;
}

double calibrate_beta3(double target_bandwidth_hz, const PumpConfig& pumps,
                       const FiberSpec& fiber_template) {
  if (!(target_bandwidth_hz > 0.0)) {
    throw ValidationError("calibration target bandwidth must be > 0 Hz");
  }
  const double b_lo = 1e-44;
  const double b_hi = 1e-38;
  const double tol_hz = 1e9;  // match within 1 GHz

  // Bandwidth is strictly decreasing in beta3. A scan overflow (no crossing
  // within the window) means the bandwidth is larger than any usable target.
  const auto bandwidth_at = [&](double beta3) {
    FiberSpec f = fiber_template;
    f.beta3 = beta3;
    try {
      return acceptance_bandwidth(f, pumps);
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const double bw_lo = bandwidth_at(b_lo);  // widest
  const double bw_hi = bandwidth_at(b_hi);  // narrowest
  if (!(bw_hi < target_bandwidth_hz && target_bandwidth_hz < bw_lo)) {
    throw NumericError("calibrate_beta3: target bandwidth " +
                       std::to_string(target_bandwidth_hz / 1e9) +
                       " GHz not bracketed by beta3 in [1e-44, 1e-38]");
  }

  double x_lo = std::log(b_lo);
  double x_hi = std::log(b_hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::exp((x_lo + x_hi) / 2.0);
    const double bw = bandwidth_at(mid);
    if (std::abs(bw - target_bandwidth_hz) <= tol_hz) return mid;
    if (bw > target_bandwidth_hz) {
      x_lo = std::log(mid);
    } else {
      x_hi = std::log(mid);
    }
  }
  throw NumericError("calibrate_beta3: bisection failed to reach 1 GHz tolerance");
}

}  // namespace fmux
