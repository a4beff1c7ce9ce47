#pragma once

#include <span>
#include <vector>

#include "hubmix/arc_model.hpp"
#include "hubmix/types.hpp"

namespace hubmix {

// Sparse row-stochastic operator over the (arc, position) state space.
// Nodes are indexed arc by arc in sampled order: arc i occupies the
// contiguous block [start_i, start_i + L_i); a_i = start_i is the arc start
// and b_i = start_i + L_i - 1 the arc end. Distributions multiply on the
// left (the row-vector convention), so row i holds the out-probabilities of
// state i. Every matrix built here is doubly stochastic.
class TransitionMatrix {
 public:
  struct Entry {
    std::int32_t col;
    double value;
  };

  // Deterministic clockwise drift: probability 1 along each arc, uniform
  // 1/k jump from every arc end to all arc starts (self-loop included for
  // single-node arcs). nnz = (n - k) + k^2.
  static TransitionMatrix pure_drift(const ArcSystem& arcs);

  // Blend q P + (1 - q) P^T for q in [1/2, 1]; q = 1/2 is exactly symmetric,
  // q = 1 returns P unchanged. Requires a doubly stochastic input.
  static TransitionMatrix interpolate(const TransitionMatrix& p, double drift_q);

  i64 size() const { return n_; }
  i64 nonzero_count() const { return static_cast<i64>(entries_.size()); }
  std::span<const Entry> row(i64 i) const {
    return {entries_.data() + row_start_[static_cast<std::size_t>(i)],
            entries_.data() + row_start_[static_cast<std::size_t>(i) + 1]};
  }

  TransitionMatrix transposed() const;

  // Row-major n*n buffer; rejected above the dense budget of n = 4000.
  std::vector<double> to_dense() const;

  double trace() const;
  double max_row_sum_error() const;  // max_i |sum_j P_ij - 1|
  double max_col_sum_error() const;
  bool is_symmetric(double tol = 1e-14) const;

  // dist * P. The input must have nonnegative entries summing to 1 within
  // 1e-12; the output sum is preserved.
  std::vector<double> apply_distribution(std::span<const double> dist) const;

 private:
  explicit TransitionMatrix(i64 n)
      : n_(n), row_start_(static_cast<std::size_t>(n) + 1, 0) {}

  void finalize_rows(std::vector<std::vector<Entry>>& rows);

  i64 n_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;  // row-major, columns sorted within a row
};

// Total-variation distance to the uniform distribution after t = 0..steps
// left-applications of p, starting from `start`.
std::vector<double> tv_distance_curve(const TransitionMatrix& p,
                                      std::span<const double> start, i64 steps);

}  // namespace hubmix
