// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmux/philox.hpp"
#include "fmux/photon_stats.hpp"

namespace fmux {

/// One spectral channel of the multiplexed source.
/// relative_strength scales the channel's mean pair number (brightness);
/// needs_conversion = false marks a channel already at the target frequency
/// (it bypasses the frequency converter, and its heralds fire no pumps).
struct ChannelSpec {
  double xi_sq = 0.0;
  double relative_strength = 1.0;
  bool needs_conversion = true;

  double effective_xi_sq() const;  // xi after brightness scaling
  void validate() const;
};

/// Pulse-slot model of the tabletop experiment: time is discretized into
/// bins of one trigger period; each bin independently draws pair numbers
/// per channel, forms heralds, routes the winning channel to the output and
/// detects it behind a fair 50/50 split (two bucket arms a/b).
struct ExperimentConfig {
  std::uint64_t n_bins = 1'000'000;
  double bin_period = 1e-6;  // s
  std::vector<ChannelSpec> channels;
  DetectionChain chain;          // eta_h heralding arms, eta_d output arms, dark
  double switch_loss_db = 1.3;   // routing path (applies to every channel)
  double conversion_eff = 0.93;  // frequency-converter transmission
  double noise_per_pulse = 3e-3; // Poisson background mean, only when pumps fire
  std::uint64_t rng_seed = 12345;
  int workers = 1;

  void validate() const;
};

struct ValueWithError {
  double value = 0.0;
  double std_error = 0.0;
};

/// Pure integer tallies; merging shards is addition, so reports are
/// bit-identical for any worker count.
struct SimCounters {
  std::uint64_t bins = 0;
  std::uint64_t herald = 0;        // bins with a winning herald (= N_c)
  std::uint64_t output_click = 0;  // bins with a click on either output arm
  std::uint64_t coincidence = 0;   // herald && output click, same bin
  std::uint64_t accidental = 0;    // herald(i) && output click(i+1)
  std::uint64_t n_ac = 0;          // herald && arm a
  std::uint64_t n_bc = 0;          // herald && arm b
  std::uint64_t n_abc = 0;         // herald && both arms
  // Raw pair number n of the first channel, tallied every bin regardless of
  // heralding: the unheralded marginal of one signal mode (sum n, sum n(n-1)).
  std::uint64_t sum_source = 0;
  std::uint64_t sum_source_pairs = 0;
  std::vector<std::uint64_t> channel_wins;

  void merge(const SimCounters& other);
};

struct SimReport {
  SimCounters counters;
  double herald_rate = 0.0;       // Hz
  double coincidence_rate = 0.0;  // Hz
  std::vector<double> per_channel_rates;  // Hz of winning heralds per channel
  // Empty when the run has insufficient statistics to form the ratio.
  std::optional<ValueWithError> car;
  std::optional<ValueWithError> g2_heralded;
  // g2(0) of the first channel's signal mode without heralding, estimated
  // from the unconditional photon-number moments (2 for a thermal mode).
  std::optional<double> unheralded_field_g2;

  /// Deterministic flat key=value serialization (reproducibility checks).
  std::string to_key_value() const;
};

/// Draw the pair number of one channel for one bin (geometric law with
/// success 1 - xi_sq; mean mu).
int sample_pair_count(double xi_sq, BinRng& rng);

/// Bucket detector outcome for n incident photons:
/// clicks with probability 1 - (1 - eta)^n (1 - dark_click_prob).
bool bucket_click(int n, double eta, double dark_click_prob, BinRng& rng);

SimReport run_simulation(const ExperimentConfig& cfg);

/// Closed-form expectations for the identical per-bin pipeline, composed
/// from the heralding/conditional formulas and generating functions of the
/// thinned thermal + Poisson background photon number. `coincidence_prob`
/// is the click-based quantity the simulator measures; `heralded_single_prob`
/// is the stricter single-pair product (they agree as mu -> 0).
struct AnalyticExpectation {
  double herald_prob = 0.0;           // per bin
  double coincidence_prob = 0.0;      // per bin, click-based
  double heralded_single_prob = 0.0;  // per bin, single-pair events only
  double output_click_prob = 0.0;     // per bin, unconditional
  double accidental_prob = 0.0;       // per adjacent-bin pair
  double herald_rate = 0.0;           // Hz
  double coincidence_rate = 0.0;      // Hz
  double car = 0.0;
  double g2_heralded = 0.0;
  std::vector<double> channel_win_prob;
};

AnalyticExpectation analytic_expectation(const ExperimentConfig& cfg);

struct EnhancementReport {
  double mux_coincidence_rate = 0.0;          // Hz
  std::vector<double> single_coincidence_rates;  // Hz, one per channel
  double mean_single_rate = 0.0;              // Hz
  double enhancement_db = 0.0;
};

/// Multiplexing enhancement: coincidence rate of the full configuration over
/// the mean of per-channel runs with the multiplexing path removed (no switch
/// loss, no conversion, no pump background), in dB.
EnhancementReport mux_enhancement(const ExperimentConfig& cfg);

}  // namespace fmux
