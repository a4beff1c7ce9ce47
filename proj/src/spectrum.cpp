#include "hubmix/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hubmix {

std::vector<EigenvalueCluster> cluster_values(std::span<const Complex> values,
                                              double tol) {
  std::vector<EigenvalueCluster> clusters;
  std::vector<Complex> sums;
  for (const Complex& z : values) {
    bool merged = false;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (std::abs(z - clusters[c].value) <= tol) {
        sums[c] += z;
        ++clusters[c].multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) {
      clusters.push_back({z, 1});
      sums.push_back(z);
    }
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    clusters[c].value = sums[c] / static_cast<double>(clusters[c].multiplicity);
  }
  return clusters;
}

double mixing_rate(const Spectrum& spectrum) {
  if (spectrum.eigenvalues.empty()) throw SpectrumError("mixing_rate: empty spectrum");
  std::size_t stationary = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const double d = std::abs(spectrum.eigenvalues[i].value - 1.0);
    if (d < best) {
      best = d;
      stationary = i;
    }
  }
  if (best > 1e-8) {
    throw SpectrumError("mixing_rate: no eigenvalue within 1e-8 of 1");
  }
  double rate = 1.0;
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    i64 mult = spectrum.eigenvalues[i].multiplicity - (i == stationary ? 1 : 0);
    if (mult <= 0) continue;
    rate = std::min(rate, 1.0 - std::abs(spectrum.eigenvalues[i].value));
  }
  return std::clamp(rate, 0.0, 1.0);
}

double mixing_rate_from_values(std::span<const Complex> values) {
  if (values.empty()) throw SpectrumError("mixing_rate: empty spectrum");
  std::size_t stationary = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = std::abs(values[i] - 1.0);
    if (d < best) {
      best = d;
      stationary = i;
    }
  }
  if (best > 1e-8) {
    throw SpectrumError("mixing_rate: no eigenvalue within 1e-8 of 1");
  }
  double rate = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == stationary) continue;
    rate = std::min(rate, 1.0 - std::abs(values[i]));
  }
  return std::clamp(rate, 0.0, 1.0);
}

}  // namespace hubmix
