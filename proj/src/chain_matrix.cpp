#include "hubmix/chain_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hubmix {

namespace {
constexpr i64 kDenseLimit = 4000;
constexpr double kStochasticTol = 1e-12;
}  // namespace

void TransitionMatrix::finalize_rows(std::vector<std::vector<Entry>>& rows) {
  std::size_t nnz = 0;
  for (auto& r : rows) {
    std::sort(r.begin(), r.end(),
              [](const Entry& a, const Entry& b) { return a.col < b.col; });
    nnz += r.size();
  }
  entries_.clear();
  entries_.reserve(nnz);
  row_start_[0] = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    entries_.insert(entries_.end(), rows[i].begin(), rows[i].end());
    row_start_[i + 1] = entries_.size();
  }
}

TransitionMatrix TransitionMatrix::pure_drift(const ArcSystem& arcs) {
  arcs.validate();
  const i64 k = arcs.arc_count();
  const i64 n = arcs.node_count();
  TransitionMatrix m(n);

  std::vector<i64> starts(static_cast<std::size_t>(k));
  i64 acc = 0;
  for (i64 i = 0; i < k; ++i) {
    starts[static_cast<std::size_t>(i)] = acc;
    acc += arcs.lengths[static_cast<std::size_t>(i)];
  }

  const double jump = 1.0 / static_cast<double>(k);
  std::vector<std::vector<Entry>> rows(static_cast<std::size_t>(n));
  for (i64 i = 0; i < k; ++i) {
    const i64 s = starts[static_cast<std::size_t>(i)];
    const i64 len = arcs.lengths[static_cast<std::size_t>(i)];
    for (i64 t = 0; t + 1 < len; ++t) {
      rows[static_cast<std::size_t>(s + t)].push_back(
          {static_cast<std::int32_t>(s + t + 1), 1.0});
    }
    auto& end_row = rows[static_cast<std::size_t>(s + len - 1)];
    end_row.reserve(static_cast<std::size_t>(k));
    for (i64 j = 0; j < k; ++j) {
      end_row.push_back(
          {static_cast<std::int32_t>(starts[static_cast<std::size_t>(j)]), jump});
    }
  }
  m.finalize_rows(rows);
  return m;
}

TransitionMatrix TransitionMatrix::interpolate(const TransitionMatrix& p,
                                               double drift_q) {
  if (!(drift_q >= 0.5 && drift_q <= 1.0)) {
    throw std::invalid_argument("interpolate: drift weight must lie in [1/2, 1]");
  }
  if (p.max_row_sum_error() > kStochasticTol || p.max_col_sum_error() > kStochasticTol) {
    throw std::invalid_argument("interpolate: input is not doubly stochastic");
  }
  if (drift_q == 1.0) return p;

  const TransitionMatrix pt = p.transposed();
  const double w = drift_q, wt = 1.0 - drift_q;
  TransitionMatrix m(p.n_);
  std::vector<std::vector<Entry>> rows(static_cast<std::size_t>(p.n_));
  for (i64 i = 0; i < p.n_; ++i) {
    auto ra = p.row(i);
    auto rb = pt.row(i);
    auto& out = rows[static_cast<std::size_t>(i)];
    out.reserve(ra.size() + rb.size());
    std::size_t ia = 0, ib = 0;
    while (ia < ra.size() || ib < rb.size()) {
      if (ib >= rb.size() || (ia < ra.size() && ra[ia].col < rb[ib].col)) {
        out.push_back({ra[ia].col, w * ra[ia].value});
        ++ia;
      } else if (ia >= ra.size() || rb[ib].col < ra[ia].col) {
        out.push_back({rb[ib].col, wt * rb[ib].value});
        ++ib;
      } else {
        out.push_back({ra[ia].col, w * ra[ia].value + wt * rb[ib].value});
        ++ia;
        ++ib;
      }
    }
  }
  m.finalize_rows(rows);
  return m;
}

TransitionMatrix TransitionMatrix::transposed() const {
  TransitionMatrix m(n_);
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_), 0);
  for (const Entry& e : entries_) ++counts[static_cast<std::size_t>(e.col)];
  m.row_start_[0] = 0;
  for (i64 i = 0; i < n_; ++i) {
    m.row_start_[static_cast<std::size_t>(i) + 1] =
        m.row_start_[static_cast<std::size_t>(i)] + counts[static_cast<std::size_t>(i)];
  }
  m.entries_.resize(entries_.size());
  std::vector<std::size_t> cursor(m.row_start_.begin(), m.row_start_.end() - 1);
  for (i64 r = 0; r < n_; ++r) {
    for (const Entry& e : row(r)) {
      m.entries_[cursor[static_cast<std::size_t>(e.col)]++] =
          {static_cast<std::int32_t>(r), e.value};
    }
  }
  return m;  // columns within each row come out sorted because rows were scanned in order
}

std::vector<double> TransitionMatrix::to_dense() const {
  if (n_ > kDenseLimit) {
    throw std::invalid_argument("to_dense: matrix exceeds the dense budget (n <= 4000)");
  }
  std::vector<double> a(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0.0);
  for (i64 r = 0; r < n_; ++r) {
    for (const Entry& e : row(r)) {
      a[static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) +
        static_cast<std::size_t>(e.col)] = e.value;
    }
  }
  return a;
}

double TransitionMatrix::trace() const {
  double t = 0.0;
  for (i64 r = 0; r < n_; ++r) {
    for (const Entry& e : row(r)) {
      if (e.col == r) t += e.value;
    }
  }
  return t;
}

double TransitionMatrix::max_row_sum_error() const {
  double worst = 0.0;
  for (i64 r = 0; r < n_; ++r) {
    double s = 0.0;
    for (const Entry& e : row(r)) s += e.value;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double TransitionMatrix::max_col_sum_error() const {
  std::vector<double> sums(static_cast<std::size_t>(n_), 0.0);
  for (const Entry& e : entries_) sums[static_cast<std::size_t>(e.col)] += e.value;
  double worst = 0.0;
  for (double s : sums) worst = std::max(worst, std::abs(s - 1.0));
  return worst;
}

bool TransitionMatrix::is_symmetric(double tol) const {
  const TransitionMatrix t = transposed();
  for (i64 r = 0; r < n_; ++r) {
    auto ra = row(r);
    auto rb = t.row(r);
    // Merge the two sorted rows; a column present on one side only must
    // carry a ~0 value for the matrix to count as symmetric.
    std::size_t ia = 0, ib = 0;
    while (ia < ra.size() || ib < rb.size()) {
      const std::int32_t ca = ia < ra.size() ? ra[ia].col : std::int32_t(n_);
      const std::int32_t cb = ib < rb.size() ? rb[ib].col : std::int32_t(n_);
      const double va = (ca <= cb) ? ra[ia].value : 0.0;
      const double vb = (cb <= ca) ? rb[ib].value : 0.0;
      if (std::abs(va - vb) > tol) return false;
      if (ca <= cb) ++ia;
      if (cb <= ca) ++ib;
    }
  }
  return true;
}

std::vector<double> TransitionMatrix::apply_distribution(
    std::span<const double> dist) const {
  if (static_cast<i64>(dist.size()) != n_) {
    throw std::invalid_argument("apply_distribution: size mismatch");
  }
  double sum = 0.0;
  for (double v : dist) {
    if (v < 0.0) throw std::invalid_argument("apply_distribution: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kStochasticTol) {
    throw std::invalid_argument("apply_distribution: input does not sum to 1");
  }
  std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
  for (i64 r = 0; r < n_; ++r) {
    const double mass = dist[static_cast<std::size_t>(r)];
    if (mass == 0.0) continue;
    for (const Entry& e : row(r)) {
      out[static_cast<std::size_t>(e.col)] += mass * e.value;
    }
  }
  return out;
}

std::vector<double> tv_distance_curve(const TransitionMatrix& p,
                                      std::span<const double> start, i64 steps) {
  if (steps < 1) throw std::invalid_argument("tv_distance_curve: steps >= 1");
  const double uniform = 1.0 / static_cast<double>(p.size());
  std::vector<double> dist(start.begin(), start.end());
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(steps) + 1);
  auto tv = [&](const std::vector<double>& d) {
    double s = 0.0;
    for (double v : d) s += std::abs(v - uniform);
    return 0.5 * s;
  };
  curve.push_back(tv(dist));
  for (i64 t = 0; t < steps; ++t) {
    dist = p.apply_distribution(dist);
    curve.push_back(tv(dist));
  }
  return curve;
}

}  // namespace hubmix
