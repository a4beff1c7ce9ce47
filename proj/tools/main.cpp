// Command line front end: sampling, single-instance spectra, the two
// simulation protocols, ring checks, lemma batteries and a self test.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hubmix/arc_model.hpp"
#include "hubmix/chain_matrix.hpp"
#include "hubmix/dense_spectrum.hpp"
#include "hubmix/harness.hpp"
#include "hubmix/io.hpp"
#include "hubmix/stats.hpp"
#include "hubmix/structured_spectrum.hpp"
#include "hubmix/theory_probe.hpp"
#include "hubmix/thread_pool.hpp"

namespace {

using hubmix::i64;
using hubmix::u64;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolverFailure = 2;

int parse_threads(const std::string& value) {
  if (value == "auto" || value.empty()) return 0;
  return std::stoi(value);
}

std::vector<i64> parse_int_list(const std::string& text) {
  std::vector<i64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoll(item));
  }
  return out;
}

json arcs_to_json(const hubmix::ArcSystem& arcs) {
  json j;
  j["n"] = arcs.node_count();
  j["k"] = arcs.arc_count();
  j["lengths"] = arcs.lengths;
  return j;
}

json sweep_to_json(const hubmix::SweepTable& table) {
  json j;
  j["group_label"] = table.group_label;
  j["trim"] = table.trim;
  j["attempted"] = table.attempted;
  j["succeeded"] = table.succeeded;
  j["groups"] = json::array();
  for (const auto& g : table.groups) {
    j["groups"].push_back({{"key", g.key},
                           {"count", g.count},
                           {"mean", g.mean},
                           {"std", g.stddev},
                           {"median", g.median},
                           {"p05", g.p05},
                           {"p95", g.p95}});
  }
  return j;
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    hubmix::write_file(out_path, content);
  }
}

int failure_exit(const hubmix::SweepTable& table, double fail_threshold) {
  if (table.attempted == 0) return kExitOk;
  const double failed_frac =
      1.0 - static_cast<double>(table.succeeded) / static_cast<double>(table.attempted);
  if (failed_frac > fail_threshold) {
    std::fprintf(stderr, "solver failures: %lld of %lld trials (%.3f%% > %.3f%%)\n",
                 static_cast<long long>(table.attempted - table.succeeded),
                 static_cast<long long>(table.attempted), 100.0 * failed_frac,
                 100.0 * fail_threshold);
    return kExitSolverFailure;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  i64 n = 0, k = 0;
  double mean_length = 0.0;
  i64 arcs = 0;
  u64 seed = 1;
  bool rejection = false;
  i64 max_attempts = 100000;
};

int run_sample(const SampleArgs& a) {
  json j;
  if (a.n > 0) {
    if (a.rejection) {
      const auto res =
          hubmix::sample_cycle_cut_by_rejection(a.n, a.k, a.max_attempts, a.seed);
      if (!res.arcs) {
        std::fprintf(stderr, "rejection sampler exhausted %lld attempts\n",
                     static_cast<long long>(res.attempts));
        return kExitSolverFailure;
      }
      j = arcs_to_json(*res.arcs);
      j["model"] = "cycle-cut-rejection";
      j["attempts"] = res.attempts;
    } else {
      j = arcs_to_json(hubmix::sample_cycle_cut(a.n, a.k, a.seed));
      j["model"] = "cycle-cut";
    }
  } else {
    hubmix::GeometricParams params{a.mean_length, a.arcs};
    j = arcs_to_json(hubmix::sample_geometric_arcs(params, a.seed));
    j["model"] = "geometric-arcs";
  }
  j["seed"] = a.seed;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

struct SpectrumArgs {
  std::string lengths;
  i64 n = 0, k = 0;
  u64 seed = 1;
  double q = 1.0;
  std::string method = "auto";
  bool deflate_zeros = false;
  std::string out;
  std::string format = "csv";
};

int run_spectrum(const SpectrumArgs& a) {
  hubmix::ArcSystem arcs;
  if (!a.lengths.empty()) {
    arcs.lengths = parse_int_list(a.lengths);
  } else if (a.n > 0) {
    arcs = hubmix::sample_cycle_cut(a.n, a.k, a.seed);
  } else {
    std::fprintf(stderr, "spectrum: provide --lengths or --n/--k\n");
    return kExitUsage;
  }
  arcs.validate();

  const bool want_structured =
      a.method == "structured" || (a.method == "auto" && a.q == 1.0);
  if (a.method == "structured" && a.q != 1.0) {
    std::fprintf(stderr, "spectrum: the structured solver applies to q = 1 only\n");
    return kExitUsage;
  }

  hubmix::Spectrum spectrum;
  if (want_structured) {
    spectrum = hubmix::full_spectrum(arcs);
  } else {
    const auto p = hubmix::TransitionMatrix::pure_drift(arcs);
    const auto pq = hubmix::TransitionMatrix::interpolate(p, a.q);
    hubmix::DenseOptions opts;
    opts.deflate_exact_kernel = a.deflate_zeros;
    const auto values = hubmix::dense_eigenvalues(pq, opts);
    spectrum.eigenvalues = hubmix::cluster_values(values);
    spectrum.node_count = arcs.node_count();
    spectrum.method = hubmix::SpectrumMethod::dense;
  }

  if (a.format == "json") {
    json j;
    j["n"] = spectrum.node_count;
    j["method"] =
        spectrum.method == hubmix::SpectrumMethod::structured ? "structured" : "dense";
    j["mixing_rate"] = hubmix::mixing_rate(spectrum);
    j["eigenvalues"] = json::array();
    for (const auto& c : spectrum.eigenvalues) {
      j["eigenvalues"].push_back(
          {{"re", c.value.real()}, {"im", c.value.imag()}, {"mult", c.multiplicity}});
    }
    write_or_print(a.out, j.dump(2) + "\n");
  } else {
    write_or_print(a.out, hubmix::eigenvalue_csv(spectrum));
  }
  std::fprintf(stderr, "mixing rate: %.17g\n", hubmix::mixing_rate(spectrum));
  return kExitOk;
}

struct RateScanArgs {
  i64 n_lo = 54, n_hi = 2980, points = 8;
  std::string n_grid;
  double sigma = 0.5;
  i64 trials = 2000;
  double trim = 0.05;
  double gamma = 4.1;
  u64 seed = 1;
  std::string threads = "auto";
  std::string out;
  std::string format = "csv";
  bool svg = false;
  double fail_threshold = 0.01;
};

int run_ratescan(const RateScanArgs& a) {
  hubmix::RateScanConfig cfg;
  cfg.n_grid = a.n_grid.empty() ? hubmix::log_spaced_grid(a.n_lo, a.n_hi, a.points)
                                : parse_int_list(a.n_grid);
  cfg.sigma = a.sigma;
  cfg.trials_per_n = a.trials;
  cfg.trim = a.trim;
  cfg.gamma = a.gamma;
  cfg.seed = a.seed;
  cfg.threads = parse_threads(a.threads);
  if (cfg.gamma <= 4.0) {
    std::fprintf(stderr, "note: gamma = %.3f is outside the theorem range (> 4)\n",
                 cfg.gamma);
  }

  const auto result = hubmix::ratescan(cfg);

  std::printf("# n k drift_median reversible_median ring_violation_freq\n");
  for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
    std::printf("%lld %lld %.6e %.6e %.4f\n",
                static_cast<long long>(cfg.n_grid[g]),
                static_cast<long long>(
                    result.records[2 * (g * static_cast<std::size_t>(cfg.trials_per_n))].k),
                result.drift.groups[g].median, result.reversible.groups[g].median,
                result.ring_violation_freq[g]);
  }
  try {
    const auto fd = hubmix::fit_loglog_slope(result.drift);
    const auto fr = hubmix::fit_loglog_slope(result.reversible);
    std::printf("# drift slope %.4f (r2 %.4f), reversible slope %.4f (r2 %.4f)\n",
                fd.slope, fd.r_squared, fr.slope, fr.r_squared);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "slope fit skipped: %s\n", e.what());
  }

  if (!a.out.empty()) {
    if (a.format == "json") {
      json j;
      j["drift"] = sweep_to_json(result.drift);
      j["reversible"] = sweep_to_json(result.reversible);
      j["ring_violation_freq"] = result.ring_violation_freq;
      hubmix::write_file(a.out + "-ratescan.json", j.dump(2) + "\n");
    } else {
      hubmix::write_file(a.out + "-drift.csv", hubmix::sweep_csv(result.drift));
      hubmix::write_file(a.out + "-reversible.csv",
                         hubmix::sweep_csv(result.reversible));
      hubmix::write_file(a.out + "-trials.csv", hubmix::trials_csv(result.records));
    }
    if (a.svg) {
      hubmix::write_file(a.out + "-hist.svg", hubmix::svg_histogram(result.records));
    }
  }
  const int code_a = failure_exit(result.drift, a.fail_threshold);
  const int code_b = failure_exit(result.reversible, a.fail_threshold);
  return std::max(code_a, code_b);
}

struct QSweepArgs {
  i64 n = 500, k = 10;
  double q_step = 0.025;
  i64 trials = 500;
  double trim = 0.05;
  u64 seed = 1;
  std::string threads = "auto";
  std::string out;
  std::string format = "csv";
  bool svg = false;
  double fail_threshold = 0.01;
};

int run_qsweep(const QSweepArgs& a) {
  hubmix::QSweepConfig cfg;
  cfg.n = a.n;
  cfg.k = a.k;
  cfg.q_grid = hubmix::default_q_grid(a.q_step);
  cfg.trials = a.trials;
  cfg.trim = a.trim;
  cfg.seed = a.seed;
  cfg.threads = parse_threads(a.threads);

  const auto result = hubmix::qsweep(cfg);

  std::printf("# q trimmed_mean trimmed_std median\n");
  for (const auto& g : result.table.groups) {
    std::printf("%.3f %.6e %.6e %.6e\n", g.key, g.mean, g.stddev, g.median);
  }
  if (!a.out.empty()) {
    if (a.format == "json") {
      hubmix::write_file(a.out + "-qsweep.json",
                         sweep_to_json(result.table).dump(2) + "\n");
    } else {
      hubmix::write_file(a.out + "-sweep.csv", hubmix::sweep_csv(result.table));
      hubmix::write_file(a.out + "-trials.csv", hubmix::trials_csv(result.records));
    }
    if (a.svg) {
      hubmix::write_file(a.out + "-curve.svg", hubmix::svg_curve(result.table));
    }
  }
  return failure_exit(result.table, a.fail_threshold);
}

struct RingCheckArgs {
  i64 n = 1024, k = 0;
  double mean_length = 0.0;  // use the geometric model when > 0
  double gamma = 4.1;
  i64 trials = 1000;
  u64 seed = 1;
  std::string threads = "auto";
};

int run_ring_check(const RingCheckArgs& a) {
  const i64 k = a.k > 0 ? a.k : static_cast<i64>(std::sqrt(static_cast<double>(a.n)));
  const double mean_len = a.mean_length > 0.0
                              ? a.mean_length
                              : static_cast<double>(a.n) / static_cast<double>(k);
  const auto ring = hubmix::RingSpec::make(a.gamma, mean_len, k);
  if (ring.below_theorem_range()) {
    std::fprintf(stderr, "note: gamma = %.3f is outside the theorem range (> 4)\n",
                 a.gamma);
  }

  std::vector<int> violated(static_cast<std::size_t>(a.trials), 0);
  std::vector<int> failed(static_cast<std::size_t>(a.trials), 0);
  hubmix::parallel_for_index(a.trials, parse_threads(a.threads), [&](i64 t) {
    const u64 s = hubmix::mix_seed(a.seed, static_cast<u64>(t));
    hubmix::ArcSystem arcs;
    if (a.mean_length > 0.0) {
      arcs = hubmix::sample_geometric_arcs({mean_len, k}, s);
    } else {
      arcs = hubmix::sample_cycle_cut(a.n, k, s);
    }
    try {
      const auto hit = hubmix::find_ring_violation(arcs, ring);
      violated[static_cast<std::size_t>(t)] = hit.has_value() ? 1 : 0;
    } catch (const std::exception&) {
      failed[static_cast<std::size_t>(t)] = 1;
    }
  });
  i64 viol = 0, fail = 0;
  for (i64 t = 0; t < a.trials; ++t) {
    viol += violated[static_cast<std::size_t>(t)];
    fail += failed[static_cast<std::size_t>(t)];
  }
  const i64 ok = a.trials - fail;
  std::printf("model=%s n=%lld k=%lld L=%.3f gamma=%.3f threshold=%.6e\n",
              a.mean_length > 0.0 ? "geometric-arcs" : "cycle-cut",
              static_cast<long long>(a.n), static_cast<long long>(k), mean_len,
              a.gamma, ring.rate_threshold());
  std::printf(
      "trials=%lld ok=%lld violation_freq=%.6f rate_clears_threshold_freq=%.6f\n",
      static_cast<long long>(a.trials), static_cast<long long>(ok),
      ok > 0 ? static_cast<double>(viol) / static_cast<double>(ok) : 0.0,
      ok > 0 ? 1.0 - static_cast<double>(viol) / static_cast<double>(ok) : 0.0);
  if (fail > a.trials / 100) return kExitSolverFailure;
  return kExitOk;
}

struct LemmaArgs {
  i64 trials = 100000;
  u64 seed = 1;
  i64 instances = 100;
  i64 samples = 1000;
  i64 cos_trials = 0;      // heavy; off by default
  i64 residue_trials = 0;  // off by default
  double alpha = 1.1, beta = 1.1, c_factor = 2.0;
  double mean_length = 200.0;
  i64 arc_count = 10000;
};

int run_lemma_mc(const LemmaArgs& a) {
  std::printf("# max-length tail: L k C threshold exact bound empirical\n");
  bool tail_ok = true;
  for (double mean_len : {50.0, 100.0, 200.0}) {
    for (i64 k : {i64{10}, i64{100}, i64{1000}}) {
      for (double c : {1.5, 2.0, 3.0}) {
        const auto r = hubmix::max_length_tail(mean_len, k, c, a.trials, a.seed);
        const bool ok = r.exact <= r.bound;
        tail_ok = tail_ok && ok;
        std::printf("%.0f %lld %.1f %lld %.6e %.6e %.6e%s\n", mean_len,
                    static_cast<long long>(k), c,
                    static_cast<long long>(r.threshold), r.exact, r.bound,
                    r.empirical, ok ? "" : "  EXCEEDS BOUND");
      }
    }
  }

  i64 axis_fail = 0, imag_fail = 0, imag_na = 0;
  for (i64 i = 0; i < a.instances; ++i) {
    const u64 s = hubmix::mix_seed(a.seed ^ 0x5a5a5a5aull, static_cast<u64>(i));
    hubmix::Rng rng(s);
    const i64 k = 5 + static_cast<i64>(rng.below(60));
    const double mean_len = 2.0 + 30.0 * rng.uniform01();
    const auto arcs = hubmix::sample_geometric_arcs({mean_len, k}, rng.next_u64());
    if (!hubmix::real_axis_check(arcs, a.samples)) ++axis_fail;
    const auto cfg =
        hubmix::CosProbeConfig::make(a.alpha, a.beta, a.c_factor, mean_len, k);
    switch (hubmix::small_arg_imag_check(arcs, cfg, a.samples)) {
      case hubmix::CheckOutcome::holds: break;
      case hubmix::CheckOutcome::fails: ++imag_fail; break;
      case hubmix::CheckOutcome::not_applicable: ++imag_na; break;
    }
  }
  std::printf("real_axis_check: %lld/%lld hold\n",
              static_cast<long long>(a.instances - axis_fail),
              static_cast<long long>(a.instances));
  std::printf("small_arg_imag_check: %lld hold, %lld fail, %lld not applicable\n",
              static_cast<long long>(a.instances - imag_fail - imag_na),
              static_cast<long long>(imag_fail), static_cast<long long>(imag_na));

  if (a.cos_trials > 0) {
    const auto cfg = hubmix::CosProbeConfig::make(a.alpha, a.beta, a.c_factor,
                                                  a.mean_length, a.arc_count);
    const auto est = hubmix::cos_plus_event_mc(cfg, a.cos_trials, a.seed);
    std::printf(
        "cos_plus_event: frequency %.4f +- %.4f (m=%lld, delta=%.4f, %lld trials)\n",
        est.frequency, est.std_error, static_cast<long long>(cfg.group_size()),
        cfg.slack(), static_cast<long long>(est.trials));
  }
  if (a.residue_trials > 0) {
    const auto cfg = hubmix::CosProbeConfig::make(a.alpha, a.beta, a.c_factor,
                                                  a.mean_length, a.arc_count);
    const double x = 0.5 * (cfg.window_lo() + cfg.window_hi());
    const auto est = hubmix::residue_interval_mc(cfg, x, 0.0, a.residue_trials, a.seed);
    std::printf("residue_interval: frequency %.4f +- %.4f against bound 0.75\n",
                est.frequency, est.std_error);
  }
  return (tail_ok && axis_fail == 0 && imag_fail == 0) ? kExitOk : kExitSolverFailure;
}

struct SelfTestArgs {
  i64 instances = 300;
  u64 seed = 20240901;
  std::string threads = "auto";
};

int run_selftest(const SelfTestArgs& a) {
  std::vector<int> bad(static_cast<std::size_t>(a.instances), 0);
  hubmix::parallel_for_index(a.instances, parse_threads(a.threads), [&](i64 t) {
    hubmix::Rng rng(hubmix::mix_seed(a.seed, static_cast<u64>(t)));
    hubmix::ArcSystem arcs;
    const i64 k = 1 + static_cast<i64>(rng.below(5));
    for (i64 i = 0; i < k; ++i) {
      arcs.lengths.push_back(1 + static_cast<i64>(rng.below(8)));
    }
    try {
      const auto spec = hubmix::full_spectrum(arcs);
      std::vector<hubmix::Complex> sv;
      for (const auto& c : spec.eigenvalues) {
        for (i64 m = 0; m < c.multiplicity; ++m) sv.push_back(c.value);
      }
      hubmix::DenseOptions opts;
      opts.deflate_exact_kernel = true;
      const auto p = hubmix::TransitionMatrix::pure_drift(arcs);
      const auto dv = hubmix::dense_eigenvalues(p, opts);
      const auto ca = hubmix::cluster_values(sv, 1e-6);
      const auto cb = hubmix::cluster_values(dv, 1e-6);
      if (ca.size() != cb.size()) {
        bad[static_cast<std::size_t>(t)] = 1;
        return;
      }
      std::vector<bool> used(cb.size(), false);
      for (const auto& x : ca) {
        double best = 1e300;
        std::size_t bi = 0;
        for (std::size_t j = 0; j < cb.size(); ++j) {
          if (used[j]) continue;
          const double d = std::abs(x.value - cb[j].value);
          if (d < best) {
            best = d;
            bi = j;
          }
        }
        used[bi] = true;
        if (best > 1e-8 || x.multiplicity != cb[bi].multiplicity) {
          bad[static_cast<std::size_t>(t)] = 1;
          return;
        }
      }
      if (p.max_row_sum_error() > 1e-12 || p.max_col_sum_error() > 1e-12) {
        bad[static_cast<std::size_t>(t)] = 1;
      }
    } catch (const std::exception&) {
      bad[static_cast<std::size_t>(t)] = 1;
    }
  });
  i64 failures = 0;
  for (int b : bad) failures += b;
  std::printf("selftest: %lld/%lld instances agree (structured vs dense oracle)\n",
              static_cast<long long>(a.instances - failures),
              static_cast<long long>(a.instances));
  return failures == 0 ? kExitOk : kExitSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixing rates of drift chains on random cycle-with-hubs graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; command line flags win");

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "sample a graph, print JSON");
  sample->add_option("--n", sample_args.n, "node count (cycle-cut model)");
  sample->add_option("--k", sample_args.k, "arc/hub count");
  sample->add_option("--mean-length", sample_args.mean_length,
                     "mean arc length (geometric model)");
  sample->add_option("--arcs", sample_args.arcs, "arc count (geometric model)");
  sample->add_option("--seed", sample_args.seed, "base seed");
  sample->add_flag("--rejection", sample_args.rejection,
                   "condition the geometric model on hitting n nodes");
  sample->add_option("--max-attempts", sample_args.max_attempts, "rejection budget");

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of one instance");
  spectrum->add_option("--lengths", spectrum_args.lengths, "comma separated arc lengths");
  spectrum->add_option("--n", spectrum_args.n, "sample a cycle-cut instance of this size");
  spectrum->add_option("--k", spectrum_args.k, "arc count for sampling");
  spectrum->add_option("--seed", spectrum_args.seed, "base seed");
  spectrum->add_option("--q", spectrum_args.q, "drift weight in [1/2, 1]");
  spectrum->add_option("--method", spectrum_args.method, "auto|structured|dense")
      ->check(CLI::IsMember({"auto", "structured", "dense"}));
  spectrum->add_flag("--deflate-zeros", spectrum_args.deflate_zeros,
                     "peel the exact kernel before the dense QR pass");
  spectrum->add_option("--out", spectrum_args.out, "output path (default stdout)");
  spectrum->add_option("--format", spectrum_args.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  RateScanArgs ratescan_args;
  auto* ratescan_cmd = app.add_subcommand("ratescan", "rate scan over an n grid");
  ratescan_cmd->add_option("--n-lo", ratescan_args.n_lo, "smallest n");
  ratescan_cmd->add_option("--n-hi", ratescan_args.n_hi, "largest n");
  ratescan_cmd->add_option("--points", ratescan_args.points, "log grid size");
  ratescan_cmd->add_option("--n-grid", ratescan_args.n_grid,
                           "explicit comma separated n grid");
  ratescan_cmd->add_option("--sigma", ratescan_args.sigma, "k = floor(n^sigma)");
  ratescan_cmd->add_option("--trials", ratescan_args.trials, "trials per n");
  ratescan_cmd->add_option("--trim", ratescan_args.trim, "trim fraction per tail");
  ratescan_cmd->add_option("--gamma", ratescan_args.gamma, "ring exponent");
  ratescan_cmd->add_option("--seed", ratescan_args.seed, "base seed");
  ratescan_cmd->add_option("--threads", ratescan_args.threads, "worker count or auto");
  ratescan_cmd->add_option("--out", ratescan_args.out, "output file prefix");
  ratescan_cmd->add_option("--format", ratescan_args.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  ratescan_cmd->add_flag("--svg", ratescan_args.svg, "also write the 2-D histogram");
  ratescan_cmd->add_option("--fail-threshold", ratescan_args.fail_threshold,
                           "max tolerated solver failure fraction");

  QSweepArgs qsweep_args;
  auto* qsweep_cmd = app.add_subcommand("qsweep", "mixing rate along the drift blend q");
  qsweep_cmd->add_option("--n", qsweep_args.n, "node count");
  qsweep_cmd->add_option("--k", qsweep_args.k, "arc count");
  qsweep_cmd->add_option("--q-step", qsweep_args.q_step, "grid step in [1/2, 1]");
  qsweep_cmd->add_option("--trials", qsweep_args.trials, "graphs to sample");
  qsweep_cmd->add_option("--trim", qsweep_args.trim, "trim fraction per tail");
  qsweep_cmd->add_option("--seed", qsweep_args.seed, "base seed");
  qsweep_cmd->add_option("--threads", qsweep_args.threads, "worker count or auto");
  qsweep_cmd->add_option("--out", qsweep_args.out, "output file prefix");
  qsweep_cmd->add_option("--format", qsweep_args.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  qsweep_cmd->add_flag("--svg", qsweep_args.svg, "also write the mean/std curve");
  qsweep_cmd->add_option("--fail-threshold", qsweep_args.fail_threshold,
                         "max tolerated solver failure fraction");

  RingCheckArgs ring_args;
  auto* ring_cmd = app.add_subcommand("ring-check", "eigenvalue exclusion frequency");
  ring_cmd->add_option("--n", ring_args.n, "node count (cycle-cut model)");
  ring_cmd->add_option("--k", ring_args.k, "arc count (default floor(sqrt(n)))");
  ring_cmd->add_option("--mean-length", ring_args.mean_length,
                       "use the geometric model with this mean instead");
  ring_cmd->add_option("--gamma", ring_args.gamma, "ring exponent");
  ring_cmd->add_option("--trials", ring_args.trials, "instances");
  ring_cmd->add_option("--seed", ring_args.seed, "base seed");
  ring_cmd->add_option("--threads", ring_args.threads, "worker count or auto");

  LemmaArgs lemma_args;
  auto* lemma_cmd =
      app.add_subcommand("lemma-mc", "tail, axis, half-plane and cosine batteries");
  lemma_cmd->add_option("--trials", lemma_args.trials, "Monte Carlo trials per tail case");
  lemma_cmd->add_option("--seed", lemma_args.seed, "base seed");
  lemma_cmd->add_option("--instances", lemma_args.instances,
                        "random instances for spot checks");
  lemma_cmd->add_option("--samples", lemma_args.samples, "grid points per spot check");
  lemma_cmd->add_option("--cos-trials", lemma_args.cos_trials,
                        "cosine cancellation trials (0 = skip)");
  lemma_cmd->add_option("--residue-trials", lemma_args.residue_trials,
                        "residue interval trials (0 = skip)");
  lemma_cmd->add_option("--alpha", lemma_args.alpha, "group size exponent");
  lemma_cmd->add_option("--beta", lemma_args.beta, "slack exponent");
  lemma_cmd->add_option("--c-factor", lemma_args.c_factor, "length cap factor C");
  lemma_cmd->add_option("--mean-length", lemma_args.mean_length,
                        "L for the cosine battery");
  lemma_cmd->add_option("--arc-count", lemma_args.arc_count, "k for the cosine battery");

  SelfTestArgs selftest_args;
  auto* selftest_cmd = app.add_subcommand("selftest", "oracle equivalence quick suite");
  selftest_cmd->add_option("--instances", selftest_args.instances, "instance count");
  selftest_cmd->add_option("--seed", selftest_args.seed, "base seed");
  selftest_cmd->add_option("--threads", selftest_args.threads, "worker count or auto");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sample->parsed()) return run_sample(sample_args);
    if (spectrum->parsed()) return run_spectrum(spectrum_args);
    if (ratescan_cmd->parsed()) return run_ratescan(ratescan_args);
    if (qsweep_cmd->parsed()) return run_qsweep(qsweep_args);
    if (ring_cmd->parsed()) return run_ring_check(ring_args);
    if (lemma_cmd->parsed()) return run_lemma_mc(lemma_args);
    if (selftest_cmd->parsed()) return run_selftest(selftest_args);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolverFailure;
  }
  return kExitOk;
}
