#include "hubmix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hubmix {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(n - 1));
}

double percentile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("percentile: empty sample");
  if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile: p out of range");
  std::sort(xs.begin(), xs.end());
  const double pos = p / 100.0 * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

double median(std::vector<double> xs) { return percentile(std::move(xs), 50.0); }

std::vector<double> trimmed(std::vector<double> xs, double trim) {
  if (trim < 0.0 || trim >= 0.5) throw std::invalid_argument("trimmed: trim out of range");
  std::sort(xs.begin(), xs.end());
  const std::size_t cut = static_cast<std::size_t>(
      std::floor(trim * static_cast<double>(xs.size())));
  if (2 * cut >= xs.size()) return xs;
  return std::vector<double>(xs.begin() + static_cast<std::ptrdiff_t>(cut),
                             xs.end() - static_cast<std::ptrdiff_t>(cut));
}

namespace {

// Series expansion of P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) by modified Lentz, valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_p: bad args");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("regularized_gamma_q: bad args");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(dof / 2.0, x / 2.0);
}

double chi_square_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("chi_square_quantile: p in (0,1)");
  double lo = 0.0;
  double hi = dof + 20.0 * std::sqrt(2.0 * dof) + 50.0;
  while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi_square_cdf(mid, dof) < p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

ChiSquareTest chi_square_goodness(std::span<const i64> counts,
                                  std::span<const double> probs,
                                  double min_expected) {
  if (counts.size() != probs.size() || counts.empty()) {
    throw std::invalid_argument("chi_square_goodness: size mismatch");
  }
  i64 total = 0;
  for (i64 c : counts) total += c;
  const double n = static_cast<double>(total);

  // Pool low-expectation categories into one bucket.
  double pooled_obs = 0.0, pooled_exp = 0.0;
  double stat = 0.0;
  i64 cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = n * probs[i];
    if (e < min_expected) {
      pooled_obs += static_cast<double>(counts[i]);
      pooled_exp += e;
    } else {
      const double d = static_cast<double>(counts[i]) - e;
      stat += d * d / e;
      ++cells;
    }
  }
  if (pooled_exp > 0.0) {
    const double d = pooled_obs - pooled_exp;
    stat += d * d / pooled_exp;
    ++cells;
  }
  ChiSquareTest out;
  out.statistic = stat;
  out.dof = std::max<i64>(1, cells - 1);
  out.p_value = regularized_gamma_q(static_cast<double>(out.dof) / 2.0, stat / 2.0);
  return out;
}

ChiSquareTest chi_square_two_sample(std::span<const i64> a, std::span<const i64> b,
                                    double min_combined) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("chi_square_two_sample: size mismatch");
  }
  double na = 0.0, nb = 0.0;
  for (i64 v : a) na += static_cast<double>(v);
  for (i64 v : b) nb += static_cast<double>(v);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("chi_square_two_sample: empty sample");
  const double ra = std::sqrt(nb / na);
  const double rb = std::sqrt(na / nb);

  double stat = 0.0;
  i64 cells = 0;
  double pa = 0.0, pb = 0.0;  // pooled rare categories
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = static_cast<double>(a[i]);
    const double bi = static_cast<double>(b[i]);
    if (ai + bi <= 0.0) continue;
    if (ai + bi < min_combined) {
      pa += ai; pb += bi;
      continue;
    }
    const double d = ra * ai - rb * bi;
    stat += d * d / (ai + bi);
    ++cells;
  }
  if (pa + pb > 0.0) {
    const double d = ra * pa - rb * pb;
    stat += d * d / (pa + pb);
    ++cells;
  }
  ChiSquareTest out;
  out.statistic = stat;
  out.dof = std::max<i64>(1, cells - 1);
  out.p_value = regularized_gamma_q(static_cast<double>(out.dof) / 2.0, stat / 2.0);
  return out;
}

LinearFit least_squares_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares_fit: need >= 2 points");
  }
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_fit: degenerate x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace hubmix
