// SPDX-License-Identifier: Apache-2.0
#include "fmux/photon_stats.hpp"

#include <cmath>

#include "fmux/units.hpp"

namespace fmux {

namespace {

void check_xi_sq(double xi_sq) {
  if (!(xi_sq >= 0.0 && xi_sq < 1.0)) {
    throw ValidationError("xi_sq out of [0, 1): " + std::to_string(xi_sq));
  }
}

void check_efficiency(double eta, const char* name) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ValidationError(std::string(name) + " efficiency out of [0,1]: " +
                          std::to_string(eta));
  }
}

}  // namespace

double mu_from_xi(double xi_sq) {
  check_xi_sq(xi_sq);
  return xi_sq / (1.0 - xi_sq);
}

double xi_from_mu(double mu) {
  if (!(mu >= 0.0)) {
    throw ValidationError("mean photon number must be >= 0, got " + std::to_string(mu));
  }
  return mu / (1.0 + mu);
}

SqueezedSource SqueezedSource::from_xi_sq(double xi_sq) {
  check_xi_sq(xi_sq);
  return SqueezedSource(xi_sq);
}

SqueezedSource SqueezedSource::from_mu(double mu) {
  return SqueezedSource(xi_from_mu(mu));
}

double LossBudget::total_db() const {
  double total = 0.0;
  for (const auto& [label, db] : entries_db) total += db;
  return total;
}

double LossBudget::efficiency() const {
  validate();
  return units::db_to_efficiency(total_db());
}

void LossBudget::validate() const {
  for (const auto& [label, db] : entries_db) {
    if (!(db >= 0.0)) {
      throw ValidationError("loss budget entry '" + label + "' must be >= 0 dB");
    }
  }
}

void DetectionChain::validate() const {
  check_efficiency(eta_h, "heralding");
  check_efficiency(eta_d, "signal");
  if (!(dark_click_prob >= 0.0 && dark_click_prob <= 1.0)) {
    throw ValidationError("dark_click_prob out of [0,1]");
  }
}

double herald_prob(const SqueezedSource& src, double eta_h) {
  check_efficiency(eta_h, "heralding");
  const double q = src.xi_sq();
  return eta_h * q / (1.0 - (1.0 - eta_h) * q);
}

double conditional_single_prob(const SqueezedSource& src, const DetectionChain& chain) {
  chain.validate();
  const double p_h = herald_prob(src, chain.eta_h);
  if (p_h == 0.0) {
    throw NumericError("conditional single-photon probability undefined: herald probability is zero");
  }
  const double q = src.xi_sq();
  return chain.eta_d * chain.eta_h * q * (1.0 - q) / p_h;
}

double multi_photon_prob(const SqueezedSource& src) {
  const double q = src.xi_sq();
  return q * q;
}

FockOracleResult fock_oracle(const SqueezedSource& src, const DetectionChain& chain,
                             int n_max) {
  chain.validate();
  if (n_max < 1) throw ValidationError("fock_oracle requires n_max >= 1");

  const double q = src.xi_sq();
  // Analytic mass of the discarded tail: sum_{n > n_max} (1-q) q^n = q^{n_max+1}.
  const double tail = std::pow(q, n_max + 1);
  if (tail > 1e-10) {
    throw NumericError("fock_oracle truncation inadequate: tail mass " +
                       std::to_string(tail) + " > 1e-10 at n_max " + std::to_string(n_max));
  }

  FockOracleResult res;
  res.tail_mass = tail;

  const double eta_h = chain.eta_h;
  const double eta_d = chain.eta_d;

  double p_click = 0.0;
  double p_a = 0.0;   // heralded && click on split arm a (eta_d/2 per photon)
  double p_ab = 0.0;  // heralded && clicks on both arms
  double pn = 1.0 - q;  // p(0)
  for (int n = 0; n <= n_max; ++n) {
    const double click_n = 1.0 - std::pow(1.0 - eta_h, n);
    p_click += pn * click_n;
    const double joint = pn * click_n;
    const double miss_half = std::pow(1.0 - eta_d / 2.0, n);
    const double miss_full = std::pow(1.0 - eta_d, n);
    p_a += joint * (1.0 - miss_half);
    p_ab += joint * (1.0 - 2.0 * miss_half + miss_full);
    pn *= q;
  }
  res.herald_prob = p_click;

  if (p_click > 0.0) {
    // Single-pair term only: p(1) * (herald click at n=1) * (survives eta_d).
    const double p1 = (1.0 - q) * q;
    res.conditional_single = p1 * eta_h * eta_d / p_click;
    if (p_a > 0.0) {
      const double pa_cond = p_a / p_click;
      const double pab_cond = p_ab / p_click;
      res.heralded_g2 = pab_cond / (pa_cond * pa_cond);
    }
  }
  return res;
}

}  // namespace fmux
