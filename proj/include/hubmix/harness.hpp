#pragma once

#include <string>
#include <vector>

#include "hubmix/stats.hpp"
#include "hubmix/types.hpp"

namespace hubmix {

enum class SolveMethod { structured, dense };

struct TrialRecord {
  i64 trial_index = 0;
  u64 seed = 0;
  i64 n = 0;
  i64 k = 0;
  double drift_q = 1.0;      // blend weight; 1 = pure drift
  double lambda = 0.0;
  SolveMethod method = SolveMethod::structured;
  double residual = 0.0;     // structured: max root residual; dense: 0
  double wall_ms = 0.0;
  bool ok = true;
  std::string error;
};

struct GroupStats {
  double key = 0.0;      // grouping value: n or q
  i64 count = 0;         // successful trials in the group
  double mean = 0.0;     // trimmed mean
  double stddev = 0.0;   // trimmed sample stddev
  double median = 0.0;   // untrimmed
  double p05 = 0.0;
  double p95 = 0.0;
};

struct SweepTable {
  std::string group_label;  // "n" or "q"
  double trim = 0.05;
  std::vector<GroupStats> groups;
  i64 attempted = 0;
  i64 succeeded = 0;
};

GroupStats summarize_group(double key, std::vector<double> values, double trim);

struct RateScanConfig {
  std::vector<i64> n_grid;
  double sigma = 0.5;      // k = floor(n^sigma)
  i64 trials_per_n = 2000;
  double trim = 0.05;
  double gamma = 4.1;
  u64 seed = 1;
  int threads = 0;  // 0 = hardware count
};

struct RateScanResult {
  SweepTable drift;                          // structured lambda, q = 1
  SweepTable reversible;                     // dense symmetric lambda, q = 1/2
  std::vector<double> ring_violation_freq;   // per n-grid entry, at cfg.gamma
  std::vector<TrialRecord> records;          // sorted by trial_index
};

// Paired rate scan over the n grid: each trial samples one graph and
// measures both the pure drift chain (structured solver) and its
// symmetrization (dense symmetric path). Ring violations are counted at the
// configured gamma with L = n/k.
RateScanResult ratescan(const RateScanConfig& cfg);

struct QSweepConfig {
  i64 n = 500;
  i64 k = 10;
  std::vector<double> q_grid;  // defaults to 0.5 .. 1.0 in steps of 0.025
  i64 trials = 500;
  double trim = 0.05;
  u64 seed = 1;
  int threads = 0;
};

struct QSweepResult {
  SweepTable table;  // grouped by q
  std::vector<TrialRecord> records;
};

// Paired q sweep: the same sampled graph is evaluated at every q via the
// dense solver (symmetric fast path at q = 1/2).
QSweepResult qsweep(const QSweepConfig& cfg);

// Least squares on (ln key, ln median) over groups with data. Needs at
// least 3 groups; non-positive medians are rejected.
LinearFit fit_loglog_slope(const SweepTable& table);

std::vector<double> default_q_grid(double step = 0.025);
std::vector<i64> log_spaced_grid(i64 lo, i64 hi, i64 points);

}  // namespace hubmix
