// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmux/errors.hpp"

namespace fmux {

/// Convert squeezing magnitude |xi|^2 to the thermal mean photon number
/// mu = |xi|^2 / (1 - |xi|^2). Domain: xi_sq in [0, 1).
double mu_from_xi(double xi_sq);

/// Inverse of mu_from_xi: |xi|^2 = mu / (1 + mu). Domain: mu >= 0.
double xi_from_mu(double mu);

/// One two-mode squeezed channel, parameterized by |xi|^2.
/// The marginal of either mode is thermal: p(n) = (1 - |xi|^2) |xi|^{2n}.
class SqueezedSource {
 public:
  static SqueezedSource from_xi_sq(double xi_sq);
  static SqueezedSource from_mu(double mu);

  double xi_sq() const { return xi_sq_; }
  double mu() const { return mu_from_xi(xi_sq_); }

 private:
  explicit SqueezedSource(double xi_sq) : xi_sq_(xi_sq) {}
  double xi_sq_;
};

/// Sequence of labeled losses in dB; the chain efficiency is 10^(-sum/10).
struct LossBudget {
  std::vector<std::pair<std::string, double>> entries_db;

  double total_db() const;
  double efficiency() const;
  void validate() const;  // every entry >= 0 dB
};

/// Detector efficiencies for the heralding arm (eta_h) and the signal arm
/// (eta_d), both bucket (non-photon-number-resolving) detectors.
/// dark_click_prob is a per-detector, per-bin probability; it participates
/// only in the event simulation, never in the closed-form expressions.
struct DetectionChain {
  double eta_h = 1.0;
  double eta_d = 1.0;
  double dark_click_prob = 0.0;

  static DetectionChain ideal() { return {}; }

  void validate() const;
};

/// Probability that the heralding bucket detector clicks:
///   p_h = eta_h |xi|^2 / (1 - (1 - eta_h) |xi|^2).
double herald_prob(const SqueezedSource& src, double eta_h);

/// Probability, conditioned on a heralding click, that the single photon of a
/// one-pair event is delivered through the signal arm:
///   p_s = eta_d eta_h |xi|^2 (1 - |xi|^2) / p_h.
/// Multi-photon emissions detected as one photon are deliberately excluded.
/// Throws NumericError when p_h == 0 (conditional undefined).
double conditional_single_prob(const SqueezedSource& src, const DetectionChain& chain);

/// Probability that a pulse carries more than one pair: p_multi = |xi|^4.
double multi_photon_prob(const SqueezedSource& src);

struct FockOracleResult {
  double herald_prob = 0.0;
  double tail_mass = 0.0;  // analytic mass of the truncated thermal tail
  // Empty when herald_prob == 0 (conditionals undefined).
  std::optional<double> conditional_single;
  std::optional<double> heralded_g2;
};

/// Brute-force verification oracle: explicit summation over Fock terms
/// (1-|xi|^2)|xi|^{2n} with binomial bucket-detection at each stage.
/// heralded_g2 is the three-detector click estimator evaluated on the
/// heralded signal distribution after a fair 50/50 split with eta_d per arm
/// (the same statistic the event simulator measures, without backgrounds).
/// Throws NumericError when the truncated tail mass exceeds 1e-10.
FockOracleResult fock_oracle(const SqueezedSource& src, const DetectionChain& chain,
                             int n_max = 60);

}  // namespace fmux
