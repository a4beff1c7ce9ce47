#include "hubmix/arc_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace hubmix {

i64 ArcSystem::node_count() const {
  return std::accumulate(lengths.begin(), lengths.end(), i64{0});
}

i64 ArcSystem::max_length() const {
  return lengths.empty() ? 0 : *std::max_element(lengths.begin(), lengths.end());
}

i64 ArcSystem::length_gcd() const {
  i64 g = 0;
  for (i64 len : lengths) g = std::gcd(g, len);
  return g;
}

i64 ArcSystem::count_unit_arcs() const {
  return std::count(lengths.begin(), lengths.end(), i64{1});
}

void ArcSystem::validate() const {
  if (lengths.empty()) throw std::invalid_argument("ArcSystem: no arcs");
  for (i64 len : lengths) {
    if (len < 1) throw std::invalid_argument("ArcSystem: arc length < 1");
  }
}

void GeometricParams::validate() const {
  if (!(mean_length >= 1.0)) {
    throw std::invalid_argument("GeometricParams: mean_length must be >= 1");
  }
  if (arc_count < 1) {
    throw std::invalid_argument("GeometricParams: arc_count must be >= 1");
  }
}

i64 sample_geometric_length(Rng& rng, double mean_length) {
  if (!(mean_length >= 1.0)) {
    throw std::invalid_argument("sample_geometric_length: mean must be >= 1");
  }
  const double u = rng.uniform_open01();
  if (mean_length == 1.0) return 1;  // success probability 1
  const double denom = std::log1p(-1.0 / mean_length);  // log(1-p) < 0
  const double value = std::ceil(std::log(u) / denom);
  return std::max<i64>(1, static_cast<i64>(value));
}

ArcSystem sample_geometric_arcs(const GeometricParams& params, u64 seed) {
  params.validate();
  Rng rng(seed);
  ArcSystem arcs;
  arcs.lengths.reserve(static_cast<std::size_t>(params.arc_count));
  for (i64 i = 0; i < params.arc_count; ++i) {
    arcs.lengths.push_back(sample_geometric_length(rng, params.mean_length));
  }
  return arcs;
}

ArcSystem sample_cycle_cut(i64 n, i64 k, u64 seed) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("sample_cycle_cut: need 1 <= k <= n");
  }
  Rng rng(seed);

  // Floyd's algorithm: k distinct edge indices in [0, n) without replacement.
  std::unordered_set<u64> chosen;
  chosen.reserve(static_cast<std::size_t>(2 * k));
  for (i64 j = n - k; j < n; ++j) {
    const u64 t = rng.below(static_cast<u64>(j) + 1);
    if (!chosen.insert(t).second) chosen.insert(static_cast<u64>(j));
  }
  std::vector<i64> edges(chosen.begin(), chosen.end());
  std::sort(edges.begin(), edges.end());

  // Removing edge e (between node e and e+1 mod n) makes node e an arc end.
  // Gap between consecutive removed edges = node count of the arc between.
  ArcSystem arcs;
  arcs.lengths.reserve(static_cast<std::size_t>(k));
  for (i64 i = 0; i + 1 < k; ++i) arcs.lengths.push_back(edges[i + 1] - edges[i]);
  arcs.lengths.push_back(n - edges[k - 1] + edges[0]);
  return arcs;
}

RejectionResult sample_cycle_cut_by_rejection(i64 n, i64 k, i64 max_attempts,
                                              u64 seed) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("sample_cycle_cut_by_rejection: need 1 <= k <= n");
  }
  if (max_attempts < 1) {
    throw std::invalid_argument("sample_cycle_cut_by_rejection: max_attempts < 1");
  }
  GeometricParams params{static_cast<double>(n) / static_cast<double>(k), k};
  Rng rng(seed);
  RejectionResult result;
  for (i64 attempt = 1; attempt <= max_attempts; ++attempt) {
    ArcSystem candidate;
    candidate.lengths.reserve(static_cast<std::size_t>(k));
    for (i64 i = 0; i < k; ++i) {
      candidate.lengths.push_back(sample_geometric_length(rng, params.mean_length));
    }
    if (candidate.node_count() == n) {
      result.arcs = std::move(candidate);
      result.attempts = attempt;
      return result;
    }
  }
  result.attempts = max_attempts;
  return result;
}

NodeCountProbability exact_node_count_probability(i64 n, i64 k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("exact_node_count_probability: need 1 <= k <= n");
  }
  NodeCountProbability out;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  // log C(n-1, k-1) + k log k + (n-k) log(n-k) - n log n, with 0^0 = 1.
  double log_binom = std::lgamma(nd) - std::lgamma(kd) - std::lgamma(nd - kd + 1.0);
  double tail = (n == k) ? 0.0 : (nd - kd) * std::log(nd - kd);
  out.log_exact = log_binom + kd * std::log(kd) + tail - nd * std::log(nd);
  out.exact = std::exp(out.log_exact);
  out.asymptotic = (n == k)
                       ? std::numeric_limits<double>::infinity()
                       : std::sqrt(kd / (2.0 * std::numbers::pi * nd * (nd - kd)));
  return out;
}

}  // namespace hubmix
