#pragma once

#include <optional>
#include <vector>

#include "hubmix/rng.hpp"
#include "hubmix/types.hpp"

namespace hubmix {

// A cycle-with-hubs instance. The multiset of arc lengths fully determines
// the graph and every chain built on it: arc i is a directed path of L_i
// nodes whose first node (the arc start) receives jump edges from every arc
// end. L_i = 1 means the arc is a single node that is both start and end.
struct ArcSystem {
  std::vector<i64> lengths;

  i64 arc_count() const { return static_cast<i64>(lengths.size()); }
  i64 node_count() const;
  i64 max_length() const;
  i64 length_gcd() const;
  i64 count_unit_arcs() const;

  // Throws std::invalid_argument unless every length is >= 1 and k >= 1.
  void validate() const;
};

// Parameters of the independent-arcs model: k arcs with Geo(1/L) lengths.
struct GeometricParams {
  double mean_length = 1.0;
  i64 arc_count = 1;

  void validate() const;  // mean_length >= 1, arc_count >= 1
};

// One geometric draw on {1, 2, ...} with the given mean, by inverse CDF:
// ceil(log(U) / log(1 - 1/mean)). Consumes exactly one engine output.
i64 sample_geometric_length(Rng& rng, double mean_length);

// k independent Geo(1/L) arc lengths.
ArcSystem sample_geometric_arcs(const GeometricParams& params, u64 seed);

// Remove k distinct edges of an n-cycle, chosen uniformly without
// replacement; the arc lengths are the node counts between consecutive
// removed edges and sum to n exactly.
ArcSystem sample_cycle_cut(i64 n, i64 k, u64 seed);

struct RejectionResult {
  std::optional<ArcSystem> arcs;  // empty if the attempt budget ran out
  i64 attempts = 0;
};

// Draw from the independent-arcs model at mean n/k until the node count hits
// n exactly. Expected attempts are 1/exact_node_count_probability(n,k).exact.
RejectionResult sample_cycle_cut_by_rejection(i64 n, i64 k, i64 max_attempts,
                                              u64 seed);

struct NodeCountProbability {
  double exact = 0.0;       // C(n-1,k-1) k^k (n-k)^(n-k) / n^n
  double asymptotic = 0.0;  // sqrt(k / (2 pi n (n-k))); +inf when n = k
  double log_exact = 0.0;
};

// Probability that the independent-arcs model at mean n/k yields exactly n
// nodes. Evaluated with log-gamma; n = k takes the 0^0 = 1 convention.
NodeCountProbability exact_node_count_probability(i64 n, i64 k);

}  // namespace hubmix
