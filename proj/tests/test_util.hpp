#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hubmix/rng.hpp"
#include "hubmix/spectrum.hpp"
#include "hubmix/types.hpp"

namespace hubmix::testutil {

inline std::vector<Complex> expand_spectrum(const Spectrum& s) {
  std::vector<Complex> out;
  for (const auto& c : s.eigenvalues) {
    for (i64 i = 0; i < c.multiplicity; ++i) out.push_back(c.value);
  }
  return out;
}

// Greedy nearest-neighbor pairing; returns the max pair distance (or a huge
// value on size mismatch). Fine for well-separated spectra.
inline double pairing_distance(const std::vector<Complex>& a,
                               const std::vector<Complex>& b) {
  if (a.size() != b.size()) return 1e300;
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    double best = 1e300;
    std::size_t bi = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        bi = j;
      }
    }
    used[bi] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

struct ClusterMatch {
  double distance = 0.0;   // max distance between paired cluster means
  bool structure_ok = true;  // same cluster count and multiplicities
};

// Compares two eigenvalue multisets after merging round-off level splits:
// defective eigenvalues scatter by ~eps^(1/j) in any backward-stable solver,
// so raw values are clustered (well below the smallest true gap) and the
// cluster means and multiplicities are compared instead.
inline ClusterMatch clustered_match(const std::vector<Complex>& a,
                                    const std::vector<Complex>& b,
                                    double cluster_tol = 1e-6) {
  ClusterMatch out;
  const auto ca = cluster_values(a, cluster_tol);
  const auto cb = cluster_values(b, cluster_tol);
  if (ca.size() != cb.size()) {
    out.structure_ok = false;
    return out;
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
    out.distance = std::max(out.distance, best);
    if (x.multiplicity != cb[bi].multiplicity) out.structure_ok = false;
  }
  return out;
}

inline std::vector<i64> random_lengths(Rng& rng, i64 max_k, i64 max_len) {
  const i64 k = 1 + static_cast<i64>(rng.below(static_cast<u64>(max_k)));
  std::vector<i64> lengths;
  for (i64 i = 0; i < k; ++i) {
    lengths.push_back(1 + static_cast<i64>(rng.below(static_cast<u64>(max_len))));
  }
  return lengths;
}

}  // namespace hubmix::testutil
