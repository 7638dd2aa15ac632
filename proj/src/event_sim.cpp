// SPDX-License-Identifier: Apache-2.0
#include "fmux/event_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "fmux/report.hpp"
#include "fmux/units.hpp"

namespace fmux {

double ChannelSpec::effective_xi_sq() const {
  // Brightness scales the mean pair number, not |xi|^2 directly.
  return xi_from_mu(mu_from_xi(xi_sq) * relative_strength);
}

void ChannelSpec::validate() const {
  if (!(xi_sq >= 0.0 && xi_sq < 1.0)) throw ValidationError("channel xi_sq out of [0, 1)");
  if (!(relative_strength >= 0.0)) throw ValidationError("channel strength must be >= 0");
  if (!(effective_xi_sq() < 1.0)) throw ValidationError("channel brightness too high");
}

void ExperimentConfig::validate() const {
  if (n_bins == 0) throw ValidationError("n_bins must be >= 1");
  if (!(bin_period > 0.0)) throw ValidationError("bin_period must be > 0 s");
  if (channels.empty()) throw ValidationError("at least one channel is required");
  for (const auto& ch : channels) ch.validate();
  chain.validate();
  if (!(switch_loss_db >= 0.0)) throw ValidationError("switch_loss_db must be >= 0");
  if (!(conversion_eff >= 0.0 && conversion_eff <= 1.0)) {
    throw ValidationError("conversion efficiency out of [0,1]");
  }
  if (!(noise_per_pulse >= 0.0)) throw ValidationError("noise_per_pulse must be >= 0");
  if (workers < 1) throw ValidationError("workers must be >= 1");
}

void SimCounters::merge(const SimCounters& other) {
  bins += other.bins;
  herald += other.herald;
  output_click += other.output_click;
  coincidence += other.coincidence;
  accidental += other.accidental;
  n_ac += other.n_ac;
  n_bc += other.n_bc;
  n_abc += other.n_abc;
  sum_source += other.sum_source;
  sum_source_pairs += other.sum_source_pairs;
  if (channel_wins.size() < other.channel_wins.size()) {
    channel_wins.resize(other.channel_wins.size(), 0);
  }
  for (std::size_t i = 0; i < other.channel_wins.size(); ++i) {
    channel_wins[i] += other.channel_wins[i];
  }
}

int sample_pair_count(double xi_sq, BinRng& rng) {
  if (!(xi_sq >= 0.0 && xi_sq < 1.0)) throw ValidationError("xi_sq out of [0, 1)");
  return rng.geometric(xi_sq);
}

bool bucket_click(int n, double eta, double dark_click_prob, BinRng& rng) {
  const double miss = std::pow(1.0 - eta, n) * (1.0 - dark_click_prob);
  return rng.bernoulli(1.0 - miss);
}

namespace {

// Everything about one bin that the tallies (and the next bin's accidental
// pairing) need. Pure function of (cfg, seed, bin index).
struct BinOutcome {
  int winner = -1;  // heralded channel, -1 if none
  bool click_a = false;
  bool click_b = false;
  int source_photons = 0;  // raw pair number of channel 0 (unheralded marginal)
  bool output_click() const { return click_a || click_b; }
};

struct PipelineParams {
  std::vector<double> xi_eff;          // per channel
  std::vector<double> path_transmission;  // switch loss x conversion (or bypass)
  std::vector<bool> fires_pumps;
  double eta_h = 1.0;
  double eta_d = 1.0;
  double dark = 0.0;
  double noise = 0.0;

  explicit PipelineParams(const ExperimentConfig& cfg) {
    const double eta_switch = units::db_to_efficiency(cfg.switch_loss_db);
    for (const auto& ch : cfg.channels) {
      xi_eff.push_back(ch.effective_xi_sq());
      path_transmission.push_back(eta_switch *
                                  (ch.needs_conversion ? cfg.conversion_eff : 1.0));
      fires_pumps.push_back(ch.needs_conversion);
    }
    eta_h = cfg.chain.eta_h;
    eta_d = cfg.chain.eta_d;
    dark = cfg.chain.dark_click_prob;
    noise = cfg.noise_per_pulse;
  }
};

BinOutcome simulate_bin(const PipelineParams& p, std::uint64_t seed, std::uint64_t bin) {
  BinRng rng(seed, bin);
  BinOutcome out;

  // Pair generation and heralding, fixed channel order. Simultaneous heralds
  // resolve to the lowest index; the losing photons are discarded.
  int pairs_won = 0;
  for (std::size_t c = 0; c < p.xi_eff.size(); ++c) {
    const int n = rng.geometric(p.xi_eff[c]);
    if (c == 0) out.source_photons = n;
    const bool click = bucket_click(n, p.eta_h, p.dark, rng);
    if (click && out.winner < 0) {
      out.winner = static_cast<int>(c);
      pairs_won = n;
    }
  }

  // Routing: only the winning channel's photons reach the output; they pass
  // the switch path and (unless the channel is already at the target
  // frequency) the converter. Pump-driven background rides along.
  int m = 0;
  if (out.winner >= 0) {
    const double t = p.path_transmission[out.winner];
    for (int i = 0; i < pairs_won; ++i) {
      if (rng.bernoulli(t)) ++m;
    }
    if (p.fires_pumps[out.winner]) m += rng.poisson(p.noise);
  }

  // Fair 50/50 split onto two bucket arms with eta_d each; a photon lands on
  // arm a with eta_d/2, on arm b with eta_d/2, else is lost. Dark counts are
  // drawn per arm in every bin.
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    if (u < p.eta_d / 2.0) {
      out.click_a = true;
    } else if (u < p.eta_d) {
      out.click_b = true;
    }
  }
  if (p.dark > 0.0) {
    if (rng.bernoulli(p.dark)) out.click_a = true;
    if (rng.bernoulli(p.dark)) out.click_b = true;
  }
  return out;
}

SimCounters run_shard(const PipelineParams& p, const ExperimentConfig& cfg,
                      std::uint64_t lo, std::uint64_t hi) {
  SimCounters k;
  k.channel_wins.assign(cfg.channels.size(), 0);
  if (lo >= hi) return k;

  BinOutcome cur = simulate_bin(p, cfg.rng_seed, lo);
  for (std::uint64_t bin = lo; bin < hi; ++bin) {
    ++k.bins;
    const bool heralded = cur.winner >= 0;
    if (heralded) {
      ++k.herald;
      ++k.channel_wins[static_cast<std::size_t>(cur.winner)];
    }
    if (cur.output_click()) ++k.output_click;
    if (heralded && cur.output_click()) ++k.coincidence;
    if (heralded && cur.click_a) ++k.n_ac;
    if (heralded && cur.click_b) ++k.n_bc;
    if (heralded && cur.click_a && cur.click_b) ++k.n_abc;
    const auto n0 = static_cast<std::uint64_t>(cur.source_photons);
    k.sum_source += n0;
    k.sum_source_pairs += n0 * (n0 > 0 ? n0 - 1 : 0);

    // Adjacent-bin accidental: herald here, output click in the next bin.
    // The pair is owned by the left bin, so shards never double-count; the
    // bin past the shard edge is recomputed (counter-based RNG makes that
    // exact). The final bin has no right neighbor.
    if (bin + 1 < cfg.n_bins) {
      const BinOutcome next = simulate_bin(p, cfg.rng_seed, bin + 1);
      if (heralded && next.output_click()) ++k.accidental;
      cur = next;
    }
  }
  return k;
}

}  // namespace

SimReport run_simulation(const ExperimentConfig& cfg) {
  cfg.validate();
  const PipelineParams params(cfg);

  SimCounters total;
  total.channel_wins.assign(cfg.channels.size(), 0);
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.workers), cfg.n_bins));
  if (workers <= 1) {
    total = run_shard(params, cfg, 0, cfg.n_bins);
  } else {
    std::vector<SimCounters> parts(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = cfg.n_bins / static_cast<std::uint64_t>(workers);
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
      const std::uint64_t hi =
          (w == workers - 1) ? cfg.n_bins : chunk * static_cast<std::uint64_t>(w + 1);
      pool.emplace_back([&parts, &params, &cfg, w, lo, hi] {
        parts[static_cast<std::size_t>(w)] = run_shard(params, cfg, lo, hi);
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& part : parts) total.merge(part);
  }

  SimReport rep;
  rep.counters = total;
  const double span = static_cast<double>(cfg.n_bins) * cfg.bin_period;
  rep.herald_rate = static_cast<double>(total.herald) / span;
  rep.coincidence_rate = static_cast<double>(total.coincidence) / span;
  for (const auto wins : total.channel_wins) {
    rep.per_channel_rates.push_back(static_cast<double>(wins) / span);
  }

  if (total.accidental > 0 && total.coincidence > 0) {
    const double c = static_cast<double>(total.coincidence);
    const double a = static_cast<double>(total.accidental);
    const double car = c / a;
    rep.car = ValueWithError{car, car * std::sqrt(1.0 / c + 1.0 / a)};
  }
  if (total.n_abc > 0 && total.n_ac > 0 && total.n_bc > 0 && total.herald > 0) {
    const double abc = static_cast<double>(total.n_abc);
    const double ac = static_cast<double>(total.n_ac);
    const double bc = static_cast<double>(total.n_bc);
    const double c = static_cast<double>(total.herald);
    const double g2 = abc * c / (ac * bc);
    rep.g2_heralded =
        ValueWithError{g2, g2 * std::sqrt(1.0 / abc + 1.0 / ac + 1.0 / bc + 1.0 / c)};
  }
  if (total.sum_source > 0 && total.sum_source_pairs > 0) {
    const double sum = static_cast<double>(total.sum_source);
    rep.unheralded_field_g2 = static_cast<double>(total.sum_source_pairs) *
                              static_cast<double>(total.bins) / (sum * sum);
  }
  return rep;
}

std::string SimReport::to_key_value() const {
  std::ostringstream os;
  os << "bins=" << counters.bins << "\n";
  os << "herald=" << counters.herald << "\n";
  os << "output_click=" << counters.output_click << "\n";
  os << "coincidence=" << counters.coincidence << "\n";
  os << "accidental=" << counters.accidental << "\n";
  os << "n_c=" << counters.herald << "\n";
  os << "n_ac=" << counters.n_ac << "\n";
  os << "n_bc=" << counters.n_bc << "\n";
  os << "n_abc=" << counters.n_abc << "\n";
  os << "sum_source=" << counters.sum_source << "\n";
  os << "sum_source_pairs=" << counters.sum_source_pairs << "\n";
  for (std::size_t i = 0; i < counters.channel_wins.size(); ++i) {
    os << "channel_" << i << "_wins=" << counters.channel_wins[i] << "\n";
  }
  os << "herald_rate_hz=" << format_double(herald_rate) << "\n";
  os << "coincidence_rate_hz=" << format_double(coincidence_rate) << "\n";
  os << "car=" << (car ? format_double(car->value) : "nan") << "\n";
  os << "car_std_error=" << (car ? format_double(car->std_error) : "nan") << "\n";
  os << "g2_heralded=" << (g2_heralded ? format_double(g2_heralded->value) : "nan") << "\n";
  os << "g2_heralded_std_error="
     << (g2_heralded ? format_double(g2_heralded->std_error) : "nan") << "\n";
  os << "unheralded_field_g2="
     << (unheralded_field_g2 ? format_double(*unheralded_field_g2) : "nan") << "\n";
  return os.str();
}

AnalyticExpectation analytic_expectation(const ExperimentConfig& cfg) {
  cfg.validate();
  const PipelineParams p(cfg);
  const std::size_t n_ch = p.xi_eff.size();
  const double dark = p.dark;

  // Per-channel herald click probability: 1 - (1-dark) * E[(1-eta_h)^n].
  std::vector<double> p_click(n_ch);
  for (std::size_t c = 0; c < n_ch; ++c) {
    const double q = p.xi_eff[c];
    const double survive = (1.0 - q) / (1.0 - (1.0 - p.eta_h) * q);
    p_click[c] = 1.0 - (1.0 - dark) * survive;
  }

  AnalyticExpectation ex;
  ex.channel_win_prob.resize(n_ch);
  double p_none = 1.0;
  for (std::size_t c = 0; c < n_ch; ++c) {
    ex.channel_win_prob[c] = p_none * p_click[c];
    p_none *= 1.0 - p_click[c];
  }
  ex.herald_prob = 1.0 - p_none;

  // Generating function of the winning channel's output photon number
  // (signal thinned by the path, plus pump background), E[s^m | win c].
  const auto gen_fn = [&](std::size_t c, double s) {
    const double q = p.xi_eff[c];
    const double t = p.path_transmission[c];
    const double sp = 1.0 - t * (1.0 - s);  // thinning composed into the GF
    const double gen_all = (1.0 - q) / (1.0 - q * sp);
    const double gen_miss = (1.0 - q) / (1.0 - q * (1.0 - p.eta_h) * sp);
    const double g = (gen_all - (1.0 - dark) * gen_miss) / p_click[c];
    const double lam = p.fires_pumps[c] ? p.noise : 0.0;
    return g * std::exp(-lam * (1.0 - s));
  };

  double p_co = 0.0;   // herald && output click
  double p_ac = 0.0;   // herald && arm a
  double p_abc = 0.0;  // herald && both arms
  for (std::size_t c = 0; c < n_ch; ++c) {
    const double win = ex.channel_win_prob[c];
    if (win == 0.0) continue;
    const double miss_half = gen_fn(c, 1.0 - p.eta_d / 2.0);
    const double miss_full = gen_fn(c, 1.0 - p.eta_d);
    const double no_dark = 1.0 - dark;
    p_co += win * (1.0 - no_dark * no_dark * miss_full);
    p_ac += win * (1.0 - no_dark * miss_half);
    p_abc += win * (1.0 - 2.0 * no_dark * miss_half + no_dark * no_dark * miss_full);

    // Single-pair product: exactly one pair, its herald clicks, the photon
    // survives the path and is detected.
    const double q = p.xi_eff[c];
    const double click1 = 1.0 - (1.0 - dark) * (1.0 - p.eta_h);
    const double t = p.path_transmission[c];
    ex.heralded_single_prob += (win / p_click[c]) * (1.0 - q) * q * click1 * t * p.eta_d;
  }
  ex.coincidence_prob = p_co;

  // Output clicks happen in heralded bins (photons + background) or, with
  // dark counts, in any bin.
  const double dark_only = 1.0 - (1.0 - dark) * (1.0 - dark);
  ex.output_click_prob = p_co + (1.0 - ex.herald_prob) * dark_only;
  ex.accidental_prob = ex.herald_prob * ex.output_click_prob;

  ex.herald_rate = ex.herald_prob / cfg.bin_period;
  ex.coincidence_rate = ex.coincidence_prob / cfg.bin_period;
  ex.car = ex.accidental_prob > 0.0 ? ex.coincidence_prob / ex.accidental_prob : 0.0;
  const double p_bc = p_ac;  // symmetric arms
  ex.g2_heralded =
      (p_ac > 0.0) ? (p_abc * ex.herald_prob) / (p_ac * p_bc) : 0.0;
  return ex;
}

EnhancementReport mux_enhancement(const ExperimentConfig& cfg) {
  cfg.validate();
  EnhancementReport rep;

  const SimReport mux = run_simulation(cfg);
  rep.mux_coincidence_rate = mux.coincidence_rate;

  // Reference runs: one channel at a time, multiplexing path removed — no
  // switch loss, no conversion stage, no pump background.
  double sum = 0.0;
  for (std::size_t c = 0; c < cfg.channels.size(); ++c) {
    ExperimentConfig single = cfg;
    single.channels = {cfg.channels[c]};
    single.channels[0].needs_conversion = false;
    single.switch_loss_db = 0.0;
    single.noise_per_pulse = 0.0;
    // Offset seeds keep the reference runs statistically independent of each
    // other and of the multiplexed run (identical channels would otherwise
    // reuse the very same random stream).
    single.rng_seed = cfg.rng_seed + 1 + static_cast<std::uint64_t>(c);
    const SimReport r = run_simulation(single);
    rep.single_coincidence_rates.push_back(r.coincidence_rate);
    sum += r.coincidence_rate;
  }
  rep.mean_single_rate = sum / static_cast<double>(cfg.channels.size());
  if (!(rep.mean_single_rate > 0.0) || !(rep.mux_coincidence_rate > 0.0)) {
    throw StatsError("mux_enhancement: zero coincidence rate; increase n_bins or brightness");
  }
  rep.enhancement_db = 10.0 * std::log10(rep.mux_coincidence_rate / rep.mean_single_rate);
  return rep;
}

}  // namespace fmux
