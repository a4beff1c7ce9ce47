#include "hubmix/structured_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace hubmix {

namespace {

Complex pow_int(Complex base, i64 exponent) {
  Complex result(1.0, 0.0);
  Complex acc = base;
  u64 e = static_cast<u64>(exponent);
  while (e > 0) {
    if (e & 1ull) result *= acc;
    acc *= acc;
    e >>= 1;
  }
  return result;
}

// Horner evaluation of p and p' with compensated accumulation of the value,
// plus the scale sum s = sum_j |c_j| |z|^j used for relative residuals.
struct EvalResult {
  Complex value;
  Complex derivative;
  double scale;
};

EvalResult eval_poly(std::span<const double> c, Complex z) {
  const std::size_t deg = c.size() - 1;
  Complex p(c[deg], 0.0);
  Complex comp(0.0, 0.0);  // running compensation for p
  Complex dp(0.0, 0.0);
  const double az = std::abs(z);
  double scale = std::abs(c[deg]);
  for (std::size_t j = deg; j-- > 0;) {
    dp = dp * z + p;
    // compensated p = p * z + c[j]
    const Complex prod = p * z;
    const Complex sum = prod + Complex(c[j], 0.0);
    const Complex t = sum - prod;
    comp = comp * z + ((prod - (sum - t)) + (Complex(c[j], 0.0) - t));
    p = sum;
    scale = scale * az + std::abs(c[j]);
  }
  return {p + comp, dp, scale};
}

}  // namespace

Complex eval_hub_sum(const ArcSystem& arcs, Complex z) {
  arcs.validate();
  if (z == Complex(0.0, 0.0)) {
    throw std::invalid_argument("eval_hub_sum: z = 0 is a pole");
  }
  // Group equal lengths so each distinct power is formed once.
  std::map<i64, i64> counts;
  for (i64 len : arcs.lengths) ++counts[len];
  const Complex w = Complex(1.0, 0.0) / z;
  Complex sum(0.0, 0.0);
  for (const auto& [len, count] : counts) {
    sum += static_cast<double>(count) * pow_int(w, len);
  }
  return sum;
}

HubPolynomial char_polynomial(const ArcSystem& arcs) {
  arcs.validate();
  const i64 m = arcs.max_length();
  const i64 k = arcs.arc_count();
  HubPolynomial poly;
  poly.coefficients.assign(static_cast<std::size_t>(m) + 1, 0);
  std::map<i64, i64> exponent_counts;
  for (i64 len : arcs.lengths) {
    poly.coefficients[static_cast<std::size_t>(m - len)] += 1;
    ++exponent_counts[m - len];
  }
  poly.coefficients[static_cast<std::size_t>(m)] -= k;
  poly.terms.assign(exponent_counts.begin(), exponent_counts.end());
  return poly;
}

std::vector<Complex> polynomial_roots(std::span<const double> coeffs,
                                      const RootFinderOptions& opts) {
  std::size_t top = coeffs.size();
  while (top > 0 && coeffs[top - 1] == 0.0) --top;
  if (top == 0) throw std::invalid_argument("polynomial_roots: zero polynomial");
  const std::size_t deg = top - 1;
  if (deg == 0) return {};
  std::vector<double> c(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(top));
  if (deg == 1) return {Complex(-c[0] / c[1], 0.0)};

  // Equally spaced starts on a circle inside the unit disk, nudged by an
  // irrational angle so symmetric polynomials do not stall on their axes.
  constexpr double kAngularOffset = 0.3819660112501051;
  std::vector<Complex> z(deg);
  for (std::size_t i = 0; i < deg; ++i) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(deg) +
        kAngularOffset;
    z[i] = opts.start_radius * Complex(std::cos(angle), std::sin(angle));
  }

  std::vector<bool> settled(deg, false);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    bool all_settled = true;
    for (std::size_t i = 0; i < deg; ++i) {
      const EvalResult ev = eval_poly(c, z[i]);
      if (std::abs(ev.value) <= 1e-15 * ev.scale) {
        settled[i] = true;
        continue;
      }
      Complex newton;
      if (ev.derivative == Complex(0.0, 0.0)) {
        // Stationary point: kick off it deterministically.
        z[i] += Complex(1e-6, 1e-6);
        settled[i] = false;
        all_settled = false;
        continue;
      }
      newton = ev.value / ev.derivative;
      Complex repulsion(0.0, 0.0);
      for (std::size_t j = 0; j < deg; ++j) {
        if (j == i) continue;
        const Complex diff = z[i] - z[j];
        if (std::abs(diff) < 1e-290) continue;
        repulsion += Complex(1.0, 0.0) / diff;
      }
      const Complex denom = Complex(1.0, 0.0) - newton * repulsion;
      const Complex step = (std::abs(denom) < 1e-290) ? newton : newton / denom;
      z[i] -= step;
      if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag())) {
        throw RootFinderError("polynomial_roots: iterate diverged", z);
      }
      settled[i] = std::abs(step) < opts.correction_tol;
      all_settled = all_settled && settled[i];
    }
    if (all_settled && iter > 0) break;
  }

  for (std::size_t i = 0; i < deg; ++i) {
    const EvalResult ev = eval_poly(c, z[i]);
    if (std::abs(ev.value) > opts.residual_tol * ev.scale) {
      throw RootFinderError("polynomial_roots: residual check failed", z);
    }
  }
  return z;
}

RootSet solve_hub_roots(const ArcSystem& arcs, const RootFinderOptions& opts) {
  const HubPolynomial poly = char_polynomial(arcs);
  const i64 m = poly.degree();

  // Exact synthetic division by (z - 1); the remainder vanishes because the
  // integer coefficients sum to zero.
  std::vector<i64> deflated(static_cast<std::size_t>(m), 0);
  deflated[static_cast<std::size_t>(m - 1)] = poly.coefficients[static_cast<std::size_t>(m)];
  for (i64 j = m - 1; j >= 1; --j) {
    deflated[static_cast<std::size_t>(j - 1)] =
        poly.coefficients[static_cast<std::size_t>(j)] + deflated[static_cast<std::size_t>(j)];
  }

  std::vector<Complex> roots;
  double max_residual = 0.0;
  if (m >= 2) {
    std::vector<double> c(deflated.size());
    std::transform(deflated.begin(), deflated.end(), c.begin(),
                   [](i64 v) { return static_cast<double>(v); });
    roots = polynomial_roots(c, opts);
    // Residuals against the undeflated integer polynomial.
    std::vector<double> full(poly.coefficients.size());
    std::transform(poly.coefficients.begin(), poly.coefficients.end(), full.begin(),
                   [](i64 v) { return static_cast<double>(v); });
    for (const Complex& r : roots) {
      const EvalResult ev = eval_poly(full, r);
      max_residual = std::max(max_residual, std::abs(ev.value) / ev.scale);
    }
  }
  roots.push_back(Complex(1.0, 0.0));

  RootSet out;
  out.clusters = cluster_values(roots, opts.cluster_tol);
  out.max_residual = max_residual;
  return out;
}

std::vector<EigenvalueCluster> nonzero_eigenvalues(const ArcSystem& arcs,
                                                   const RootFinderOptions& opts) {
  return solve_hub_roots(arcs, opts).clusters;
}

Spectrum full_spectrum(const ArcSystem& arcs, const RootFinderOptions& opts) {
  RootSet roots = solve_hub_roots(arcs, opts);
  const i64 n = arcs.node_count();
  const i64 m = arcs.max_length();
  Spectrum spectrum;
  spectrum.eigenvalues = std::move(roots.clusters);
  if (n > m) spectrum.eigenvalues.push_back({Complex(0.0, 0.0), n - m});
  spectrum.node_count = n;
  spectrum.method = SpectrumMethod::structured;
  spectrum.max_residual = roots.max_residual;
  return spectrum;
}

}  // namespace hubmix
