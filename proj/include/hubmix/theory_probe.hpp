#pragma once

#include <optional>
#include <span>

#include "hubmix/arc_model.hpp"
#include "hubmix/structured_spectrum.hpp"
#include "hubmix/types.hpp"

namespace hubmix {

// Annulus 1 - 1/(L ln^gamma k) <= |z| <= 1, z != 1, that asymptotically
// contains no eigenvalue. Natural log throughout. gamma > 4 is the theorem's
// hypothesis; smaller values are allowed here and flagged, not rejected.
struct RingSpec {
  double gamma = 4.1;
  double mean_length = 1.0;  // L
  i64 arc_count = 1;         // k

  double inner_radius() const;
  double rate_threshold() const;  // 1 - inner_radius = 1/(L ln^gamma k)
  bool below_theorem_range() const { return gamma <= 4.0; }

  // Requires k >= 2 and inner radius in (0, 1).
  static RingSpec make(double gamma, double mean_length, i64 arc_count);
};

// Returns an eigenvalue mu != 1 with |mu| >= inner_radius when one exists,
// i.e. exactly when mixing_rate <= rate_threshold; none otherwise.
std::optional<Complex> find_ring_violation(const ArcSystem& arcs, const RingSpec& ring);

// Derived quantities of the cosine-cancellation argument: group size
// m = ceil(ln^alpha k), slack delta = ln^-beta k, the argument window
// A = [pi/(C L ln k), 2pi - pi/(C L ln k)], and the grid resolution
// eps = 2 delta^2 / (m C L ln k).
struct CosProbeConfig {
  double alpha = 1.1;
  double beta = 1.1;
  double c_factor = 2.0;     // the C in C L ln k
  double mean_length = 1.0;  // L
  i64 arc_count = 3;         // k

  i64 group_size() const;      // m
  double slack() const;        // delta
  double window_lo() const;    // pi/(C L ln k)
  double window_hi() const;    // 2 pi - window_lo
  double grid_step() const;    // eps
  double length_cap() const;   // C L ln k

  // Requires alpha, beta, C > 1, L >= 1 and k >= 3 (so that delta < 1).
  static CosProbeConfig make(double alpha, double beta, double c_factor,
                             double mean_length, i64 arc_count);
};

struct TailBoundResult {
  double empirical = 0.0;  // frequency of max_i L_i > threshold
  double exact = 0.0;      // 1 - (1 - (1-1/L)^threshold)^k
  double bound = 0.0;      // k^(1-C)
  i64 threshold = 0;       // ceil(C L ln k)
};

// Tail of the maximal arc length against the k^(1-C) bound.
TailBoundResult max_length_tail(double mean_length, i64 arc_count, double c_factor,
                                i64 trials, u64 seed);

// q(z) > k for z in (0,1): sampled on `samples` equally spaced points
// inside (0.01, 0.99). Deterministic statement, spot-checked.
bool real_axis_check(const ArcSystem& arcs, i64 samples);

enum class CheckOutcome { holds, fails, not_applicable };

// For z in the ring with 0 < arg z < pi/(C L ln k), every term z^(-L_i)
// falls in the lower half-plane, so Im q(z) < 0. Requires the bounded-length
// event max_i L_i < C L ln k; otherwise reports not_applicable. The
// conjugate half follows by symmetry of the real-coefficient sum.
CheckOutcome small_arg_imag_check(const ArcSystem& arcs, const CosProbeConfig& cfg,
                                  i64 samples);

// Grid supremum of sum_i cos+(L_i x) over the argument window, on the grid
// of resolution eps. A lower bound of the true supremum within delta^2 (the
// Lipschitz budget of the grid device).
double cos_plus_sup(std::span<const i64> lengths, const CosProbeConfig& cfg);

// Same maximization on an explicit grid [lo, lo + step, ...] <= hi.
double cos_plus_sup_on_grid(std::span<const i64> lengths, double lo, double hi,
                            double step);

struct EventEstimate {
  double frequency = 0.0;
  double std_error = 0.0;
  i64 successes = 0;
  i64 trials = 0;
};

// Frequency of {cos_plus_sup < m - delta^2} over independent m-tuples of
// Geo(1/L) lengths. Requires trials >= 100.
EventEstimate cos_plus_event_mc(const CosProbeConfig& cfg, i64 trials, u64 seed);

// True when length * x mod 2pi lands in the width-6delta interval centered
// at `center` (an interval of the circle, wraparound included).
bool residue_in_interval(i64 length, double x, double center, double width);

// Frequency of {L_1 x mod 2pi in D} with |D| = 6 delta, compared against the
// 3/4 bound. Requires x inside the argument window and 6 delta < pi.
EventEstimate residue_interval_mc(const CosProbeConfig& cfg, double x,
                                  double interval_center, i64 trials, u64 seed);

}  // namespace hubmix
