// SPDX-License-Identifier: Apache-2.0
#include "fmux/mux.hpp"

#include <cmath>

namespace fmux {

std::string_view to_string(SwitchScheme scheme) {
  switch (scheme) {
    case SwitchScheme::fixed_loss: return "fixed_loss";
    case SwitchScheme::log_tree: return "log_tree";
    case SwitchScheme::multi_pass: return "multi_pass";
    case SwitchScheme::ideal: return "ideal";
  }
  throw ValidationError("unknown switch scheme enumerator");
}

SwitchScheme scheme_from_string(std::string_view name) {
  if (name == "fixed_loss") return SwitchScheme::fixed_loss;
  if (name == "log_tree") return SwitchScheme::log_tree;
  if (name == "multi_pass") return SwitchScheme::multi_pass;
  if (name == "ideal") return SwitchScheme::ideal;
  throw ValidationError("unknown switch scheme '" + std::string(name) +
                        "' (expected fixed_loss|log_tree|multi_pass|ideal)");
}

void SwitchNetwork::validate() const {
  if (!(eta_s >= 0.0 && eta_s <= 1.0)) {
    throw ValidationError("switch efficiency out of [0,1]: " + std::to_string(eta_s));
  }
  if (n_modes < 1) {
    throw ValidationError("n_modes must be >= 1, got " + std::to_string(n_modes));
  }
}

namespace {

// ceil(log2 N) as an exact integer (depth of the binary routing tree).
int tree_depth(int n_modes) {
  int depth = 0;
  int span = 1;
  while (span < n_modes) {
    span *= 2;
    ++depth;
  }
  return depth;
}

}  // namespace

double switch_efficiency(const SwitchNetwork& net) {
  net.validate();
  switch (net.scheme) {
    case SwitchScheme::fixed_loss: return net.eta_s;
    case SwitchScheme::log_tree: return std::pow(net.eta_s, tree_depth(net.n_modes));
    case SwitchScheme::ideal: return 1.0;
    case SwitchScheme::multi_pass:
      throw ValidationError(
          "switch_efficiency undefined for multi_pass (loss depends on the heralded slot)");
  }
  throw ValidationError("unknown switch scheme enumerator");
}

double mux_herald_prob(double p_h, int n_modes) {
  if (!(p_h >= 0.0 && p_h <= 1.0)) {
    throw ValidationError("herald probability out of [0,1]");
  }
  if (n_modes < 1) throw ValidationError("n_modes must be >= 1");
  return 1.0 - std::pow(1.0 - p_h, n_modes);
}

double mux_single_prob(const SqueezedSource& src, const DetectionChain& chain,
                       const SwitchNetwork& net) {
  net.validate();
  chain.validate();
  if (src.xi_sq() == 0.0) return 0.0;  // no photons at all
  const double p_h = herald_prob(src, chain.eta_h);
  const double p_s = conditional_single_prob(src, chain);

  if (net.scheme == SwitchScheme::multi_pass) {
    // sum_{j=1..N} (1-p_h)^{N-j} p_h p_s eta_s^{N-j} = p_h p_s (1-r^N)/(1-r)
    const double r = (1.0 - p_h) * net.eta_s;
    if (std::abs(1.0 - r) < 1e-12) return net.n_modes * p_h * p_s;
    return p_h * p_s * (1.0 - std::pow(r, net.n_modes)) / (1.0 - r);
  }
  return switch_efficiency(net) * p_s * mux_herald_prob(p_h, net.n_modes);
}

namespace {

double objective(double mu, const DetectionChain& chain, const SwitchNetwork& net) {
  return mux_single_prob(SqueezedSource::from_mu(mu), chain, net);
}

}  // namespace

OptimizeResult optimize_mu(const DetectionChain& chain, const SwitchNetwork& net,
                           OptimizeOptions opts) {
  net.validate();
  chain.validate();
  if (!(opts.mu_lo > 0.0 && opts.mu_hi > opts.mu_lo)) {
    throw ValidationError("optimize_mu bracket must satisfy 0 < mu_lo < mu_hi");
  }

  // Golden-section on x = log(mu); the objective is unimodal in mu.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(opts.mu_lo);
  double b = std::log(opts.mu_hi);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(std::exp(x1), chain, net);
  double f2 = objective(std::exp(x2), chain, net);
  while (std::exp(b) - std::exp(a) > opts.tol_mu) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(std::exp(x2), chain, net);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(std::exp(x1), chain, net);
    }
  }
  const double mu_opt = std::exp((a + b) / 2.0);
  const double p_opt = objective(mu_opt, chain, net);

  // Endpoint guard: the bracket must contain the maximum strictly inside.
  const double f_lo = objective(opts.mu_lo, chain, net);
  const double f_hi = objective(opts.mu_hi, chain, net);
  if (p_opt < f_lo || p_opt < f_hi) {
    throw NumericError("optimize_mu: maximum lies at a bracket endpoint; widen [mu_lo, mu_hi]");
  }
  return {mu_opt, p_opt};
}

OptimizeResult optimize_mu(const DetectionChain& chain, int n_modes, OptimizeOptions opts) {
  SwitchNetwork ideal_net;
  ideal_net.scheme = SwitchScheme::ideal;
  ideal_net.n_modes = n_modes;
  return optimize_mu(chain, ideal_net, opts);
}

namespace {

constexpr SwitchScheme kAllSchemes[] = {SwitchScheme::fixed_loss, SwitchScheme::log_tree,
                                        SwitchScheme::multi_pass, SwitchScheme::ideal};

ScalingPoint evaluate_point(const DetectionChain& chain, SwitchScheme scheme, int n,
                            double eta_s, double mu) {
  SwitchNetwork net{scheme, scheme == SwitchScheme::ideal ? 1.0 : eta_s, n};
  const auto src = SqueezedSource::from_mu(mu);
  return {scheme, n, net.eta_s, mu, mux_single_prob(src, chain, net),
          multi_photon_prob(src)};
}

}  // namespace

std::vector<ScalingPoint> sweep_n(const DetectionChain& chain, double eta_s, int n_max,
                                  bool per_scheme_mu) {
  if (n_max < 1) throw ValidationError("sweep_n requires n_max >= 1");
  std::vector<ScalingPoint> points;
  points.reserve(static_cast<std::size_t>(n_max) * 4);
  for (int n = 1; n <= n_max; ++n) {
    const double mu_shared = optimize_mu(chain, n).mu_opt;
    for (const auto scheme : kAllSchemes) {
      double mu = mu_shared;
      if (per_scheme_mu) {
        SwitchNetwork net{scheme, scheme == SwitchScheme::ideal ? 1.0 : eta_s, n};
        mu = optimize_mu(chain, net).mu_opt;
      }
      points.push_back(evaluate_point(chain, scheme, n, eta_s, mu));
    }
  }
  return points;
}

std::vector<ScalingPoint> sweep_loss(const DetectionChain& chain, int n_modes,
                                     std::span<const double> eta_grid) {
  if (eta_grid.empty()) throw ValidationError("sweep_loss requires a non-empty eta grid");
  const double mu_shared = optimize_mu(chain, n_modes).mu_opt;
  std::vector<ScalingPoint> points;
  points.reserve(eta_grid.size() * 4);
  for (const double eta_s : eta_grid) {
    for (const auto scheme : kAllSchemes) {
      points.push_back(evaluate_point(chain, scheme, n_modes, eta_s, mu_shared));
    }
  }
  return points;
}

}  // namespace fmux
