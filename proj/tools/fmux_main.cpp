// SPDX-License-Identifier: Apache-2.0
// fmux command line: analytic architecture sweeps, phase-matching tables,
// and the event-level Monte Carlo, emitted as deterministic CSV or JSON.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmux/bsfwm.hpp"
#include "fmux/config.hpp"
#include "fmux/errors.hpp"
#include "fmux/event_sim.hpp"
#include "fmux/mux.hpp"
#include "fmux/photon_stats.hpp"
#include "fmux/report.hpp"
#include "fmux/units.hpp"

namespace {

using namespace fmux;

struct RunManifest {
  std::string config_path;  // empty -> defaults
  std::string output_path;  // empty -> stdout
  std::string format = "csv";
};

void add_common(CLI::App* sub, RunManifest& m) {
  sub->add_option("--config", m.config_path, "JSON config file (omit for defaults)");
  sub->add_option("--output", m.output_path, "Output file (default: stdout)");
  sub->add_option("--format", m.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void write_text(const RunManifest& m, const std::string& text) {
  if (m.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(m.output_path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + m.output_path + "'");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing output file '" + m.output_path + "'");
}

void emit_table(const RunManifest& m, const Table& table, const std::string& name) {
  write_text(m, table.to_string(m.format == "json"));
  std::cerr << name << ": " << table.rows.size() << " rows"
            << (m.output_path.empty() ? "" : " -> " + m.output_path) << "\n";
}

// Key-value records (simulate / enhancement) rendered as a flat JSON object.
std::string record_to_json(const std::string& kv) {
  nlohmann::ordered_json obj;
  std::istringstream in(kv);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    obj[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return obj.dump(2) + "\n";
}

void emit_record(const RunManifest& m, const std::string& kv, const std::string& name) {
  write_text(m, m.format == "json" ? record_to_json(kv) : kv);
  std::cerr << name << ": done"
            << (m.output_path.empty() ? "" : " -> " + m.output_path) << "\n";
}

Table scaling_table(const std::vector<ScalingPoint>& points) {
  Table t;
  t.columns = {"scheme", "N", "eta_s", "mu_opt", "p_single", "p_multi"};
  for (const auto& p : points) {
    t.add_row({std::string(to_string(p.scheme)), static_cast<std::int64_t>(p.n_modes),
               p.eta_s, p.mu_opt, p.p_single, p.p_multi});
  }
  return t;
}

int run_sweep_n(const RunManifest& m, const FullConfig& cfg, const DetectionChain& chain,
                std::optional<int> n_max, std::optional<double> eta_s, bool per_scheme) {
  const int nmax = n_max.value_or(cfg.sweep.n_max);
  const double es = eta_s.value_or(cfg.sweep.eta_s);
  const bool per = per_scheme || cfg.sweep.per_scheme_mu;
  emit_table(m, scaling_table(sweep_n(chain, es, nmax, per)), "sweep-n");
  return 0;
}

int run_sweep_loss(const RunManifest& m, const FullConfig& cfg, const DetectionChain& chain,
                   std::optional<int> n_modes) {
  const int nm = n_modes.value_or(cfg.sweep.n_modes);
  emit_table(m, scaling_table(sweep_loss(chain, nm, cfg.sweep.eta_grid)), "sweep-loss");
  return 0;
}

int run_optimize_mu(const RunManifest& m, const FullConfig& cfg, const DetectionChain& chain,
                    std::optional<int> n_modes, const std::string& scheme_name,
                    std::optional<double> eta_s, bool per_scheme) {
  const int nm = n_modes.value_or(cfg.sweep.n_modes);
  SwitchNetwork net;
  net.scheme = scheme_from_string(scheme_name);
  net.eta_s = eta_s.value_or(cfg.sweep.eta_s);
  net.n_modes = nm;
  net.validate();

  // Shared-mu policy: optimize against the lossless ideal network, then
  // evaluate the requested scheme at that mu; --per-scheme-mu optimizes the
  // requested scheme directly.
  const OptimizeResult opt =
      per_scheme ? optimize_mu(chain, net) : optimize_mu(chain, nm);
  const SqueezedSource src = SqueezedSource::from_mu(opt.mu_opt);
  const double p_single = mux_single_prob(src, chain, net);

  Table t;
  t.columns = {"scheme", "N", "eta_s", "mu_opt", "xi_sq", "p_single", "p_multi"};
  t.add_row({std::string(to_string(net.scheme)), static_cast<std::int64_t>(nm),
             net.scheme == SwitchScheme::ideal ? 1.0 : net.eta_s, opt.mu_opt,
             src.xi_sq(), p_single, multi_photon_prob(src)});
  emit_table(m, t, "optimize-mu");
  return 0;
}

int run_phasematch(const RunManifest& m, const FullConfig& cfg,
                   std::optional<int> channels, std::optional<double> spacing_ghz) {
  BsfwmSettings b = cfg.bsfwm;
  if (channels) b.n_channels = *channels;
  if (spacing_ghz) b.spacing_ghz = *spacing_ghz;
  b.validate();

  const FiberSpec fiber = b.fiber();
  const PumpConfig pumps = b.pumps(fiber);
  const auto points = channel_sweep(fiber, pumps, b.n_channels, b.spacing_ghz * 1e9);

  Table t;
  t.columns = {"channel", "delta_omega_ghz", "peak_efficiency", "bandwidth_ghz"};
  for (const auto& p : points) {
    t.add_row({static_cast<std::int64_t>(p.channel), p.delta_omega_ghz,
               p.peak_efficiency, p.bandwidth_ghz});
  }
  emit_table(m, t, "phasematch");
  return 0;
}

int run_channels(const RunManifest& m, const FullConfig& cfg, std::optional<int> channels,
                 std::optional<double> spacing_ghz, int points, double span_ghz) {
  if (points < 2) throw ValidationError("--points must be >= 2");
  if (!(span_ghz > 0.0)) throw ValidationError("--span-ghz must be > 0");
  BsfwmSettings b = cfg.bsfwm;
  if (channels) b.n_channels = *channels;
  if (spacing_ghz) b.spacing_ghz = *spacing_ghz;
  b.validate();

  const FiberSpec fiber = b.fiber();
  const PumpConfig base = b.pumps(fiber);

  Table t;
  t.columns = {"channel", "offset_ghz", "k_per_m", "efficiency"};
  for (int c = 1; c <= b.n_channels; ++c) {
    const double shift = units::angular_from_hz((c - 1) * b.spacing_ghz * 1e9);
    const PumpConfig pc = base.shifted(shift, shift / 2.0);
    for (int i = 0; i < points; ++i) {
      const double off_ghz = -span_ghz / 2.0 + span_ghz * i / (points - 1);
      const double wt = units::angular_from_hz(off_ghz * 1e9);
      const double k = phase_mismatch(fiber, pc, wt);
      t.add_row({static_cast<std::int64_t>(c), off_ghz, k,
                 conversion_efficiency(k, pc, fiber)});
    }
  }
  emit_table(m, t, "channels");
  return 0;
}

int run_simulate(const RunManifest& m, const FullConfig& cfg,
                 std::optional<std::uint64_t> seed, std::optional<std::uint64_t> bins,
                 std::optional<int> workers) {
  ExperimentConfig e = cfg.experiment;
  if (seed) e.rng_seed = *seed;
  if (bins) e.n_bins = *bins;
  if (workers) e.workers = *workers;
  e.validate();

  const SimReport report = run_simulation(e);
  emit_record(m, report.to_key_value(), "simulate");
  if (!report.car || !report.g2_heralded) {
    throw StatsError("CAR or heralded g2 undefined (too few coincidence/accidental counts; "
                     "increase n_bins)");
  }
  return 0;
}

int run_enhancement(const RunManifest& m, const FullConfig& cfg,
                    std::optional<std::uint64_t> seed, std::optional<std::uint64_t> bins) {
  ExperimentConfig e = cfg.experiment;
  if (seed) e.rng_seed = *seed;
  if (bins) e.n_bins = *bins;
  e.validate();

  const EnhancementReport r = mux_enhancement(e);
  std::ostringstream kv;
  kv << "mux_coincidence_rate_hz=" << format_double(r.mux_coincidence_rate) << "\n";
  for (std::size_t i = 0; i < r.single_coincidence_rates.size(); ++i) {
    kv << "single_coincidence_rate_hz_" << i << "="
       << format_double(r.single_coincidence_rates[i]) << "\n";
  }
  kv << "mean_single_rate_hz=" << format_double(r.mean_single_rate) << "\n";
  kv << "enhancement_db=" << format_double(r.enhancement_db) << "\n";
  emit_record(m, kv.str(), "enhancement");
  return 0;
}

void print_defaults() {
  for (const auto& d : documented_defaults()) {
    std::cout << d.key << " = " << d.value << "\n    " << d.citation << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fmux: frequency-multiplexed heralded single-photon source toolkit"};
  app.require_subcommand(0, 1);

  bool show_defaults = false;
  app.add_flag("--show-defaults", show_defaults,
               "Print every default with its provenance note and exit");

  RunManifest manifest;

  // Scaling sweeps model the idealized-detection architecture study by
  // default; override with --eta-h/--eta-d. The measured detection section of
  // the config drives simulate/enhancement.
  double eta_h = 1.0;
  double eta_d = 1.0;
  std::optional<int> n_max, n_modes, pm_channels;
  std::optional<double> eta_s, pm_spacing;
  bool per_scheme = false;
  std::string scheme_name = "ideal";
  int profile_points = 81;
  double profile_span_ghz = 400.0;
  std::optional<std::uint64_t> seed, bins;
  std::optional<int> workers;

  CLI::App* sn = app.add_subcommand("sweep-n", "Single-photon probability vs mode count");
  add_common(sn, manifest);
  sn->add_option("--n-max", n_max, "Sweep N = 1..n_max");
  sn->add_option("--eta-s", eta_s, "Per-switch transmission");
  sn->add_option("--eta-h", eta_h, "Heralding efficiency (default 1)");
  sn->add_option("--eta-d", eta_d, "Output detection efficiency (default 1)");
  sn->add_flag("--per-scheme-mu", per_scheme, "Re-optimize mu per scheme");

  CLI::App* sl = app.add_subcommand("sweep-loss",
                                    "Single-photon probability vs switch transmission");
  add_common(sl, manifest);
  sl->add_option("--n-modes", n_modes, "Fixed mode count N");
  sl->add_option("--eta-h", eta_h, "Heralding efficiency (default 1)");
  sl->add_option("--eta-d", eta_d, "Output detection efficiency (default 1)");

  CLI::App* om = app.add_subcommand("optimize-mu", "Optimal mean photon number for one N");
  add_common(om, manifest);
  om->add_option("--n-modes", n_modes, "Mode count N");
  om->add_option("--scheme", scheme_name, "fixed_loss | log_tree | multi_pass | ideal");
  om->add_option("--eta-s", eta_s, "Per-switch transmission");
  om->add_option("--eta-h", eta_h, "Heralding efficiency (default 1)");
  om->add_option("--eta-d", eta_d, "Output detection efficiency (default 1)");
  om->add_flag("--per-scheme-mu", per_scheme,
               "Optimize against the requested scheme instead of the ideal network");

  CLI::App* pm = app.add_subcommand("phasematch",
                                    "Per-channel peak efficiency and acceptance bandwidth");
  add_common(pm, manifest);
  pm->add_option("--channels", pm_channels, "Number of channels");
  pm->add_option("--spacing-ghz", pm_spacing, "Channel spacing in GHz");

  CLI::App* ch = app.add_subcommand("channels",
                                    "Conversion-efficiency profile vs input offset per channel");
  add_common(ch, manifest);
  ch->add_option("--channels", pm_channels, "Number of channels");
  ch->add_option("--spacing-ghz", pm_spacing, "Channel spacing in GHz");
  ch->add_option("--points", profile_points, "Samples per channel (default 81)");
  ch->add_option("--span-ghz", profile_span_ghz, "Offset span in GHz (default 400)");

  CLI::App* sim = app.add_subcommand("simulate", "Event-level Monte Carlo of the experiment");
  add_common(sim, manifest);
  sim->add_option("--seed", seed, "RNG seed override");
  sim->add_option("--bins", bins, "Number of time bins");
  sim->add_option("--workers", workers, "Worker threads (results are worker-invariant)");

  CLI::App* enh = app.add_subcommand("enhancement",
                                     "Multiplexing enhancement vs mean single channel");
  add_common(enh, manifest);
  enh->add_option("--seed", seed, "RNG seed override");
  enh->add_option("--bins", bins, "Number of time bins per run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (show_defaults) {
    print_defaults();
    return 0;
  }

  const CLI::App* active = nullptr;
  for (const CLI::App* sub : {sn, sl, om, pm, ch, sim, enh}) {
    if (sub->parsed()) active = sub;
  }
  if (active == nullptr) {
    std::cout << app.help();
    return 0;
  }
  const std::string name = active->get_name();

  try {
    const FullConfig cfg = parse_config(manifest.config_path);
    const DetectionChain sweep_chain{eta_h, eta_d, 0.0};
    if (active == sn) return run_sweep_n(manifest, cfg, sweep_chain, n_max, eta_s, per_scheme);
    if (active == sl) return run_sweep_loss(manifest, cfg, sweep_chain, n_modes);
    if (active == om) {
      return run_optimize_mu(manifest, cfg, sweep_chain, n_modes, scheme_name, eta_s,
                             per_scheme);
    }
    if (active == pm) return run_phasematch(manifest, cfg, pm_channels, pm_spacing);
    if (active == ch) {
      return run_channels(manifest, cfg, pm_channels, pm_spacing, profile_points,
                          profile_span_ghz);
    }
    if (active == sim) return run_simulate(manifest, cfg, seed, bins, workers);
    if (active == enh) return run_enhancement(manifest, cfg, seed, bins);
  } catch (const ValidationError& e) {
    std::cerr << name << ": config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << name << ": numeric error: " << e.what() << "\n";
    return 3;
  } catch (const StatsError& e) {
    std::cerr << name << ": insufficient statistics: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << name << ": error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
