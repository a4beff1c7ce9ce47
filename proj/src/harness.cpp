#include "hubmix/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hubmix/arc_model.hpp"
#include "hubmix/chain_matrix.hpp"
#include "hubmix/dense_spectrum.hpp"
#include "hubmix/structured_spectrum.hpp"
#include "hubmix/theory_probe.hpp"
#include "hubmix/thread_pool.hpp"

namespace hubmix {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

}  // namespace

GroupStats summarize_group(double key, std::vector<double> values, double trim) {
  GroupStats g;
  g.key = key;
  g.count = static_cast<i64>(values.size());
  if (values.empty()) return g;
  g.median = median(values);
  g.p05 = percentile(values, 5.0);
  g.p95 = percentile(values, 95.0);
  const std::vector<double> core = trimmed(std::move(values), trim);
  g.mean = mean(core);
  g.stddev = sample_stddev(core);
  return g;
}

std::vector<double> default_q_grid(double step) {
  std::vector<double> grid;
  const i64 count = static_cast<i64>(std::llround(0.5 / step));
  for (i64 i = 0; i <= count; ++i) {
    grid.push_back(0.5 + static_cast<double>(i) * step);
  }
  grid.back() = 1.0;
  return grid;
}

std::vector<i64> log_spaced_grid(i64 lo, i64 hi, i64 points) {
  if (lo < 1 || hi < lo || points < 1) {
    throw std::invalid_argument("log_spaced_grid: bad range");
  }
  std::vector<i64> grid;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (i64 i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0
                                 : static_cast<double>(i) /
                                       static_cast<double>(points - 1);
    const i64 n = static_cast<i64>(std::llround(std::exp(llo + f * (lhi - llo))));
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  return grid;
}

RateScanResult ratescan(const RateScanConfig& cfg) {
  if (cfg.n_grid.empty() || cfg.trials_per_n < 1) {
    throw std::invalid_argument("ratescan: empty grid or no trials");
  }
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) {
    throw std::invalid_argument("ratescan: sigma must lie in (0, 1)");
  }
  const i64 points = static_cast<i64>(cfg.n_grid.size());
  std::vector<i64> ks(static_cast<std::size_t>(points));
  for (i64 i = 0; i < points; ++i) {
    const i64 n = cfg.n_grid[static_cast<std::size_t>(i)];
    const i64 k = static_cast<i64>(
        std::floor(std::pow(static_cast<double>(n), cfg.sigma)));
    if (k < 2) throw std::invalid_argument("ratescan: k = floor(n^sigma) must be >= 2");
    if (k > n) throw std::invalid_argument("ratescan: k exceeds n");
    ks[static_cast<std::size_t>(i)] = k;
  }

  const i64 total = points * cfg.trials_per_n;
  std::vector<TrialRecord> records(static_cast<std::size_t>(2 * total));

  // Schedule the largest n first so the expensive dense solves do not pile
  // up at the tail of the worker queue.
  std::vector<i64> order(static_cast<std::size_t>(total));
  for (i64 t = 0; t < total; ++t) order[static_cast<std::size_t>(t)] = t;
  std::stable_sort(order.begin(), order.end(), [&](i64 a, i64 b) {
    return cfg.n_grid[static_cast<std::size_t>(a / cfg.trials_per_n)] >
           cfg.n_grid[static_cast<std::size_t>(b / cfg.trials_per_n)];
  });

  parallel_for_index(total, cfg.threads, [&](i64 slot) {
    const i64 t = order[static_cast<std::size_t>(slot)];
    const i64 grid_index = t / cfg.trials_per_n;
    const i64 n = cfg.n_grid[static_cast<std::size_t>(grid_index)];
    const i64 k = ks[static_cast<std::size_t>(grid_index)];
    const u64 trial_seed = mix_seed(cfg.seed, static_cast<u64>(t));

    const ArcSystem arcs = sample_cycle_cut(n, k, trial_seed);

    TrialRecord& drift = records[static_cast<std::size_t>(2 * t)];
    drift.trial_index = 2 * t;
    drift.seed = trial_seed;
    drift.n = n;
    drift.k = k;
    drift.drift_q = 1.0;
    drift.method = SolveMethod::structured;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Spectrum spec = full_spectrum(arcs);
      drift.lambda = mixing_rate(spec);
      drift.residual = spec.max_residual;
    } catch (const std::exception& e) {
      drift.ok = false;
      drift.error = e.what();
    }
    drift.wall_ms = elapsed_ms(t0);

    TrialRecord& rev = records[static_cast<std::size_t>(2 * t + 1)];
    rev.trial_index = 2 * t + 1;
    rev.seed = trial_seed;
    rev.n = n;
    rev.k = k;
    rev.drift_q = 0.5;
    rev.method = SolveMethod::dense;
    const auto t1 = std::chrono::steady_clock::now();
    try {
      const TransitionMatrix p = TransitionMatrix::pure_drift(arcs);
      const TransitionMatrix half = TransitionMatrix::interpolate(p, 0.5);
      rev.lambda = mixing_rate_general(half);
    } catch (const std::exception& e) {
      rev.ok = false;
      rev.error = e.what();
    }
    rev.wall_ms = elapsed_ms(t1);
  });

  RateScanResult result;
  result.drift.group_label = "n";
  result.drift.trim = cfg.trim;
  result.reversible.group_label = "n";
  result.reversible.trim = cfg.trim;
  result.ring_violation_freq.assign(static_cast<std::size_t>(points), 0.0);

  for (i64 g = 0; g < points; ++g) {
    const i64 n = cfg.n_grid[static_cast<std::size_t>(g)];
    const i64 k = ks[static_cast<std::size_t>(g)];
    const RingSpec ring =
        RingSpec::make(cfg.gamma, static_cast<double>(n) / static_cast<double>(k), k);
    std::vector<double> drift_vals, rev_vals;
    i64 violations = 0, drift_ok = 0;
    for (i64 j = 0; j < cfg.trials_per_n; ++j) {
      const i64 t = g * cfg.trials_per_n + j;
      const TrialRecord& d = records[static_cast<std::size_t>(2 * t)];
      const TrialRecord& r = records[static_cast<std::size_t>(2 * t + 1)];
      result.drift.attempted += 1;
      result.reversible.attempted += 1;
      if (d.ok) {
        drift_vals.push_back(d.lambda);
        result.drift.succeeded += 1;
        ++drift_ok;
        if (d.lambda <= ring.rate_threshold()) ++violations;
      }
      if (r.ok) {
        rev_vals.push_back(r.lambda);
        result.reversible.succeeded += 1;
      }
    }
    result.drift.groups.push_back(
        summarize_group(static_cast<double>(n), std::move(drift_vals), cfg.trim));
    result.reversible.groups.push_back(
        summarize_group(static_cast<double>(n), std::move(rev_vals), cfg.trim));
    result.ring_violation_freq[static_cast<std::size_t>(g)] =
        drift_ok > 0 ? static_cast<double>(violations) / static_cast<double>(drift_ok)
                     : 0.0;
  }
  result.records = std::move(records);
  return result;
}

QSweepResult qsweep(const QSweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("qsweep: no trials");
  if (cfg.n > 4000) throw std::invalid_argument("qsweep: n exceeds the dense budget");
  std::vector<double> q_grid = cfg.q_grid.empty() ? default_q_grid() : cfg.q_grid;
  for (double q : q_grid) {
    if (!(q >= 0.5 && q <= 1.0)) {
      throw std::invalid_argument("qsweep: q grid outside [1/2, 1]");
    }
  }
  const i64 nq = static_cast<i64>(q_grid.size());
  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.trials * nq));

  parallel_for_index(cfg.trials, cfg.threads, [&](i64 g) {
    const u64 graph_seed = mix_seed(cfg.seed, static_cast<u64>(g));
    const ArcSystem arcs = sample_cycle_cut(cfg.n, cfg.k, graph_seed);
    const TransitionMatrix p = TransitionMatrix::pure_drift(arcs);
    for (i64 qi = 0; qi < nq; ++qi) {
      TrialRecord& rec = records[static_cast<std::size_t>(g * nq + qi)];
      rec.trial_index = g * nq + qi;
      rec.seed = graph_seed;
      rec.n = cfg.n;
      rec.k = cfg.k;
      rec.drift_q = q_grid[static_cast<std::size_t>(qi)];
      rec.method = SolveMethod::dense;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const TransitionMatrix pq =
            TransitionMatrix::interpolate(p, rec.drift_q);
        rec.lambda = mixing_rate_general(pq);
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      rec.wall_ms = elapsed_ms(t0);
    }
  });

  QSweepResult result;
  result.table.group_label = "q";
  result.table.trim = cfg.trim;
  for (i64 qi = 0; qi < nq; ++qi) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(cfg.trials));
    for (i64 g = 0; g < cfg.trials; ++g) {
      const TrialRecord& rec = records[static_cast<std::size_t>(g * nq + qi)];
      result.table.attempted += 1;
      if (rec.ok) {
        vals.push_back(rec.lambda);
        result.table.succeeded += 1;
      }
    }
    result.table.groups.push_back(
        summarize_group(q_grid[static_cast<std::size_t>(qi)], std::move(vals), cfg.trim));
  }
  result.records = std::move(records);
  return result;
}

LinearFit fit_loglog_slope(const SweepTable& table) {
  std::vector<double> xs, ys;
  for (const GroupStats& g : table.groups) {
    if (g.count == 0) continue;
    if (!(g.median > 0.0)) {
      throw std::invalid_argument("fit_loglog_slope: non-positive median");
    }
    xs.push_back(std::log(g.key));
    ys.push_back(std::log(g.median));
  }
  if (xs.size() < 3) {
    throw std::invalid_argument("fit_loglog_slope: need at least 3 groups");
  }
  return least_squares_fit(xs, ys);
}

}  // namespace hubmix
