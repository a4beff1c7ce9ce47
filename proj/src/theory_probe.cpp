#include "hubmix/theory_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hubmix/spectrum.hpp"

namespace hubmix {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double RingSpec::inner_radius() const { return 1.0 - rate_threshold(); }

double RingSpec::rate_threshold() const {
  const double lnk = std::log(static_cast<double>(arc_count));
  return 1.0 / (mean_length * std::pow(lnk, gamma));
}

RingSpec RingSpec::make(double gamma, double mean_length, i64 arc_count) {
  if (arc_count < 2) {
    throw std::invalid_argument("RingSpec: need k >= 2 (log k must be positive)");
  }
  if (!(mean_length >= 1.0)) {
    throw std::invalid_argument("RingSpec: mean length must be >= 1");
  }
  RingSpec ring{gamma, mean_length, arc_count};
  const double inner = ring.inner_radius();
  if (!(inner > 0.0 && inner < 1.0)) {
    throw std::invalid_argument("RingSpec: inner radius must lie in (0, 1)");
  }
  return ring;
}

std::optional<Complex> find_ring_violation(const ArcSystem& arcs, const RingSpec& ring) {
  const Spectrum spectrum = full_spectrum(arcs);
  const double rate = mixing_rate(spectrum);
  if (rate > ring.rate_threshold()) return std::nullopt;

  // Report the offending eigenvalue: the largest modulus after discounting
  // one copy of the stationary eigenvalue.
  std::size_t stationary = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const double d = std::abs(spectrum.eigenvalues[i].value - 1.0);
    if (d < best) {
      best = d;
      stationary = i;
    }
  }
  Complex worst(0.0, 0.0);
  double worst_mod = -1.0;
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const i64 mult =
        spectrum.eigenvalues[i].multiplicity - (i == stationary ? 1 : 0);
    if (mult <= 0) continue;
    const double mod = std::abs(spectrum.eigenvalues[i].value);
    if (mod > worst_mod) {
      worst_mod = mod;
      worst = spectrum.eigenvalues[i].value;
    }
  }
  return worst;
}

i64 CosProbeConfig::group_size() const {
  const double lnk = std::log(static_cast<double>(arc_count));
  return static_cast<i64>(std::ceil(std::pow(lnk, alpha)));
}

double CosProbeConfig::slack() const {
  const double lnk = std::log(static_cast<double>(arc_count));
  return std::pow(lnk, -beta);
}

double CosProbeConfig::length_cap() const {
  return c_factor * mean_length * std::log(static_cast<double>(arc_count));
}

double CosProbeConfig::window_lo() const { return std::numbers::pi / length_cap(); }

double CosProbeConfig::window_hi() const { return kTwoPi - window_lo(); }

double CosProbeConfig::grid_step() const {
  const double d = slack();
  return 2.0 * d * d /
         (static_cast<double>(group_size()) * length_cap());
}

CosProbeConfig CosProbeConfig::make(double alpha, double beta, double c_factor,
                                    double mean_length, i64 arc_count) {
  if (!(alpha > 1.0) || !(beta > 1.0) || !(c_factor > 1.0)) {
    throw std::invalid_argument("CosProbeConfig: alpha, beta, C must exceed 1");
  }
  if (!(mean_length >= 1.0)) {
    throw std::invalid_argument("CosProbeConfig: mean length must be >= 1");
  }
  if (arc_count < 3) {
    throw std::invalid_argument("CosProbeConfig: need k >= 3 (so that delta < 1)");
  }
  CosProbeConfig cfg{alpha, beta, c_factor, mean_length, arc_count};
  if (!(cfg.window_lo() < cfg.window_hi())) {
    throw std::invalid_argument("CosProbeConfig: empty argument window");
  }
  return cfg;
}

TailBoundResult max_length_tail(double mean_length, i64 arc_count, double c_factor,
                                i64 trials, u64 seed) {
  if (!(c_factor > 1.0)) throw std::invalid_argument("max_length_tail: C must exceed 1");
  if (!(mean_length >= 1.0) || arc_count < 1 || trials < 1) {
    throw std::invalid_argument("max_length_tail: bad arguments");
  }
  TailBoundResult out;
  const double lnk = std::log(static_cast<double>(arc_count));
  out.threshold = static_cast<i64>(std::ceil(c_factor * mean_length * lnk));
  out.bound = std::exp((1.0 - c_factor) * lnk);

  // P(single length > threshold) = (1 - 1/L)^threshold; complement over k
  // independent arcs, both in log space.
  const double log_single = (mean_length == 1.0)
                                ? -std::numeric_limits<double>::infinity()
                                : static_cast<double>(out.threshold) *
                                      std::log1p(-1.0 / mean_length);
  const double single = std::exp(log_single);
  out.exact = -std::expm1(static_cast<double>(arc_count) * std::log1p(-single));

  i64 hits = 0;
  for (i64 t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<u64>(t)));
    i64 max_len = 0;
    for (i64 i = 0; i < arc_count; ++i) {
      max_len = std::max(max_len, sample_geometric_length(rng, mean_length));
    }
    if (max_len > out.threshold) ++hits;
  }
  out.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  return out;
}

bool real_axis_check(const ArcSystem& arcs, i64 samples) {
  arcs.validate();
  if (samples < 1) throw std::invalid_argument("real_axis_check: samples >= 1");
  const double k = static_cast<double>(arcs.arc_count());
  for (i64 j = 1; j <= samples; ++j) {
    const double z = 0.01 + (0.99 - 0.01) * static_cast<double>(j) /
                                static_cast<double>(samples + 1);
    double sum = 0.0;
    for (i64 len : arcs.lengths) sum += std::pow(z, -static_cast<double>(len));
    if (!(sum > k)) return false;
  }
  return true;
}

CheckOutcome small_arg_imag_check(const ArcSystem& arcs, const CosProbeConfig& cfg,
                                  i64 samples) {
  arcs.validate();
  if (samples < 1) throw std::invalid_argument("small_arg_imag_check: samples >= 1");
  if (static_cast<double>(arcs.max_length()) >= cfg.length_cap()) {
    return CheckOutcome::not_applicable;  // the bounded-length event fails
  }
  // Radii span the ring at the theorem's reference exponent; the statement
  // itself is radius-free, so the exact band only sets the sampling range.
  const double lnk = std::log(static_cast<double>(cfg.arc_count));
  const double width = std::min(0.5, 1.0 / (cfg.mean_length * std::pow(lnk, 4.1)));
  const double r_lo = 1.0 - width;
  const double arg_hi = cfg.window_lo();

  constexpr double kGolden = 0.6180339887498949;
  for (i64 j = 0; j < samples; ++j) {
    const double frac = std::fmod(kGolden * static_cast<double>(j + 1), 1.0);
    const double radius = r_lo + (1.0 - r_lo) * frac;
    const double arg = arg_hi * static_cast<double>(j + 1) /
                       static_cast<double>(samples + 1);
    const Complex z = std::polar(radius, arg);
    const Complex q = eval_hub_sum(arcs, z);
    if (!(q.imag() < -1e-14)) return CheckOutcome::fails;
  }
  return CheckOutcome::holds;
}

double cos_plus_sup(std::span<const i64> lengths, const CosProbeConfig& cfg) {
  if (static_cast<i64>(lengths.size()) != cfg.group_size()) {
    throw std::invalid_argument("cos_plus_sup: need exactly m lengths");
  }
  return cos_plus_sup_on_grid(lengths, cfg.window_lo(), cfg.window_hi(),
                              cfg.grid_step());
}

double cos_plus_sup_on_grid(std::span<const i64> lengths, double lo, double hi,
                            double step) {
  if (!(step > 0.0) || !(hi >= lo) || lengths.empty()) {
    throw std::invalid_argument("cos_plus_sup_on_grid: bad grid");
  }
  const i64 points = static_cast<i64>(std::floor((hi - lo) / step)) + 1;
  const std::size_t m = lengths.size();

  // Incremental rotations: one complex multiply per (term, grid point), with
  // periodic exact refresh to stop drift.
  std::vector<double> re(m), im(m), cre(m), cim(m);
  auto refresh = [&](i64 j) {
    const double x = lo + static_cast<double>(j) * step;
    for (std::size_t i = 0; i < m; ++i) {
      const double phase = static_cast<double>(lengths[i]) * x;
      re[i] = std::cos(phase);
      im[i] = std::sin(phase);
    }
  };
  for (std::size_t i = 0; i < m; ++i) {
    const double delta = static_cast<double>(lengths[i]) * step;
    cre[i] = std::cos(delta);
    cim[i] = std::sin(delta);
  }

  double sup = 0.0;
  constexpr i64 kRefresh = 4096;
  for (i64 j = 0; j < points; ++j) {
    if (j % kRefresh == 0) refresh(j);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += std::max(re[i], 0.0);
    sup = std::max(sup, sum);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = re[i] * cre[i] - im[i] * cim[i];
      const double s = re[i] * cim[i] + im[i] * cre[i];
      re[i] = r;
      im[i] = s;
    }
  }
  return sup;
}

EventEstimate cos_plus_event_mc(const CosProbeConfig& cfg, i64 trials, u64 seed) {
  if (trials < 100) throw std::invalid_argument("cos_plus_event_mc: trials >= 100");
  const i64 m = cfg.group_size();
  const double d = cfg.slack();
  const double cutoff = static_cast<double>(m) - d * d;

  EventEstimate est;
  est.trials = trials;
  std::vector<i64> lengths(static_cast<std::size_t>(m));
  for (i64 t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<u64>(t)));
    for (i64 i = 0; i < m; ++i) {
      lengths[static_cast<std::size_t>(i)] = sample_geometric_length(rng, cfg.mean_length);
    }
    if (cos_plus_sup(lengths, cfg) < cutoff) ++est.successes;
  }
  est.frequency = static_cast<double>(est.successes) / static_cast<double>(trials);
  est.std_error = std::sqrt(std::max(0.0, est.frequency * (1.0 - est.frequency) /
                                              static_cast<double>(trials)));
  return est;
}

bool residue_in_interval(i64 length, double x, double center, double width) {
  const double value = std::fmod(static_cast<double>(length) * x, kTwoPi);
  const double diff = std::remainder(value - center, kTwoPi);  // in (-pi, pi]
  return std::abs(diff) <= 0.5 * width;
}

EventEstimate residue_interval_mc(const CosProbeConfig& cfg, double x,
                                  double interval_center, i64 trials, u64 seed) {
  if (trials < 1) throw std::invalid_argument("residue_interval_mc: trials >= 1");
  if (!(x >= cfg.window_lo() && x <= cfg.window_hi())) {
    throw std::invalid_argument("residue_interval_mc: x outside the argument window");
  }
  const double width = 6.0 * cfg.slack();
  if (!(width < std::numbers::pi)) {
    throw std::invalid_argument("residue_interval_mc: requires 6 delta < pi");
  }
  EventEstimate est;
  est.trials = trials;
  for (i64 t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, static_cast<u64>(t)));
    const i64 len = sample_geometric_length(rng, cfg.mean_length);
    if (residue_in_interval(len, x, interval_center, width)) ++est.successes;
  }
  est.frequency = static_cast<double>(est.successes) / static_cast<double>(trials);
  est.std_error = std::sqrt(std::max(0.0, est.frequency * (1.0 - est.frequency) /
                                              static_cast<double>(trials)));
  return est;
}

}  // namespace hubmix
