#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hubmix/theory_probe.hpp"
#include "test_util.hpp"

using namespace hubmix;

TEST_CASE("ring spec: derived radius and validation") {
  const auto ring = RingSpec::make(4.1, 40.0, 40);
  const double lnk = std::log(40.0);
  CHECK(ring.rate_threshold() ==
        doctest::Approx(1.0 / (40.0 * std::pow(lnk, 4.1))).epsilon(1e-14));
  CHECK(ring.inner_radius() == doctest::Approx(1.0 - ring.rate_threshold()));
  CHECK_FALSE(ring.below_theorem_range());
  CHECK(RingSpec::make(3.0, 40.0, 40).below_theorem_range());

  CHECK_THROWS_AS(RingSpec::make(4.1, 10.0, 1), std::invalid_argument);
  // L (ln k)^gamma < 1 puts the inner radius below zero: no valid ring.
  CHECK_THROWS_AS(RingSpec::make(4.1, 1.5, 2), std::invalid_argument);
}

TEST_CASE("ring violation: periodic chains always violate, fast chains never") {
  const auto ring = RingSpec::make(4.1, 1.5, 40);
  // all arcs equal: roots of unity sit on the circle
  const auto hit = find_ring_violation(ArcSystem{{3, 3, 3}}, ring);
  REQUIRE(hit.has_value());
  CHECK(std::abs(std::abs(*hit) - 1.0) < 1e-8);

  // [1,2] mixes at rate 1/2, far above the ring threshold
  CHECK_FALSE(find_ring_violation(ArcSystem{{1, 2}}, ring).has_value());
}

TEST_CASE("ring violation agrees with the mixing rate threshold exactly") {
  Rng rng(9001);
  const auto ring = RingSpec::make(4.1, 8.0, 12);
  for (int t = 0; t < 150; ++t) {
    const auto arcs = sample_geometric_arcs({8.0, 12}, mix_seed(3, static_cast<u64>(t)));
    const double rate = mixing_rate(full_spectrum(arcs));
    const bool violated = find_ring_violation(arcs, ring).has_value();
    CHECK(violated == (rate <= ring.rate_threshold()));
  }
}

TEST_CASE("cos probe config: derived quantities") {
  const auto cfg = CosProbeConfig::make(1.1, 1.1, 2.0, 100.0, 1000);
  const double lnk = std::log(1000.0);
  CHECK(cfg.group_size() == static_cast<i64>(std::ceil(std::pow(lnk, 1.1))));
  CHECK(cfg.slack() == doctest::Approx(std::pow(lnk, -1.1)).epsilon(1e-14));
  CHECK(cfg.length_cap() == doctest::Approx(2.0 * 100.0 * lnk).epsilon(1e-14));
  CHECK(cfg.window_lo() == doctest::Approx(std::numbers::pi / cfg.length_cap()));
  CHECK(cfg.window_hi() == doctest::Approx(2.0 * std::numbers::pi - cfg.window_lo()));
  const double d = cfg.slack();
  CHECK(cfg.grid_step() ==
        doctest::Approx(2.0 * d * d /
                        (static_cast<double>(cfg.group_size()) * cfg.length_cap())));

  CHECK_THROWS_AS(CosProbeConfig::make(1.0, 1.1, 2.0, 10.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(CosProbeConfig::make(1.1, 1.1, 2.0, 10.0, 2), std::invalid_argument);
}

TEST_CASE("max length tail: exact formula under the k^(1-C) bound") {
  const auto r = max_length_tail(100.0, 100, 2.0, 100000, 5);
  CHECK(r.bound == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(r.exact <= r.bound);
  const double se = std::sqrt(std::max(r.exact * (1.0 - r.exact), 1e-12) / 1e5);
  CHECK(std::abs(r.empirical - r.exact) < 3.0 * se + 1e-9);

  // unit mean: every length is 1, threshold is above 1 for k >= 3
  const auto r1 = max_length_tail(1.0, 50, 2.0, 2000, 5);
  CHECK(r1.empirical == 0.0);
  CHECK(r1.exact == 0.0);

  // C close to 1: the bound k^(1-C) approaches 1 and holds trivially
  const auto r2 = max_length_tail(50.0, 10, 1.0001, 1000, 5);
  CHECK(r2.bound > 0.999);
  CHECK(r2.exact <= r2.bound);

  CHECK_THROWS_AS(max_length_tail(50.0, 10, 1.0, 100, 5), std::invalid_argument);
}

TEST_CASE("real axis check: q(z) > k on (0, 1)") {
  CHECK(real_axis_check(ArcSystem{{1, 2}}, 100));
  // manual spot value at z = 1/2: 2 + 4 = 6 > 2
  CHECK(std::abs(eval_hub_sum(ArcSystem{{1, 2}}, Complex(0.5, 0.0)) -
                 Complex(6.0, 0.0)) < 1e-12);
  Rng rng(212);
  for (int t = 0; t < 150; ++t) {
    ArcSystem arcs{testutil::random_lengths(rng, 8, 12)};
    CHECK(real_axis_check(arcs, 200));
  }
}

TEST_CASE("small argument check: negative imaginary part under the length cap") {
  Rng rng(606);
  int held = 0, na = 0;
  for (int t = 0; t < 100; ++t) {
    const i64 k = 8 + static_cast<i64>(rng.below(40));
    const double mean_len = 3.0 + 20.0 * rng.uniform01();
    const auto arcs = sample_geometric_arcs({mean_len, k}, rng.next_u64());
    const auto cfg = CosProbeConfig::make(1.1, 1.1, 2.0, mean_len, k);
    const auto outcome = small_arg_imag_check(arcs, cfg, 500);
    CHECK(outcome != CheckOutcome::fails);
    if (outcome == CheckOutcome::holds) ++held;
    if (outcome == CheckOutcome::not_applicable) ++na;
  }
  CHECK(held > 0);  // the bounded-length event is the typical one

  // force a violation of the bounded-length event
  const auto cfg = CosProbeConfig::make(1.1, 1.1, 2.0, 2.0, 10);
  ArcSystem long_arc{{1, 1, 1, 1, 1, 1, 1, 1, 1, 500}};
  CHECK(small_arg_imag_check(long_arc, cfg, 100) == CheckOutcome::not_applicable);
}

TEST_CASE("cos plus sup: alignment saturates, all-ones tracks the window edge") {
  const auto cfg = CosProbeConfig::make(1.1, 1.1, 2.0, 10.0, 1000);
  const i64 m = cfg.group_size();
  const double d = cfg.slack();

  // equal lengths line up at x = 2 pi / len inside the window
  std::vector<i64> equal(static_cast<std::size_t>(m), 5);
  const double sup_eq = cos_plus_sup(equal, cfg);
  CHECK(sup_eq >= static_cast<double>(m) - d * d);
  CHECK(sup_eq <= static_cast<double>(m) + 1e-9);

  // all lengths 1: cosine is decreasing over the window's left edge region,
  // so the grid supremum sits at the first grid point
  std::vector<i64> ones(static_cast<std::size_t>(m), 1);
  const double sup_ones = cos_plus_sup(ones, cfg);
  const double expect = static_cast<double>(m) * std::cos(cfg.window_lo());
  CHECK(std::abs(sup_ones - expect) <=
        static_cast<double>(m) * cfg.grid_step() + 1e-9);
  CHECK(sup_ones < static_cast<double>(m));

  std::vector<i64> wrong_size(static_cast<std::size_t>(m + 1), 1);
  CHECK_THROWS_AS(cos_plus_sup(wrong_size, cfg), std::invalid_argument);
}

TEST_CASE("cos plus sup: grid refinement moves the value by at most delta^2") {
  const auto cfg = CosProbeConfig::make(1.1, 1.1, 2.0, 10.0, 200);
  const i64 m = cfg.group_size();
  Rng rng(77);
  for (int t = 0; t < 10; ++t) {
    std::vector<i64> lengths;
    for (i64 i = 0; i < m; ++i) {
      // keep draws under the length cap so the Lipschitz budget applies
      i64 len;
      do {
        len = sample_geometric_length(rng, cfg.mean_length);
      } while (static_cast<double>(len) >= cfg.length_cap());
      lengths.push_back(len);
    }
    const double coarse = cos_plus_sup(lengths, cfg);
    const double fine = cos_plus_sup_on_grid(lengths, cfg.window_lo(),
                                             cfg.window_hi(), cfg.grid_step() / 2.0);
    CHECK(fine >= coarse - 1e-12);  // denser grid from the same origin
    CHECK(fine - coarse <= cfg.slack() * cfg.slack());
  }
}

TEST_CASE("cos plus event: forced alignment defeats cancellation") {
  // With all lengths equal the supremum reaches m, so the event
  // {sup < m - delta^2} never happens; check via the sup directly on a few
  // deterministic draws plus the Monte Carlo wrapper on a tiny mean.
  const auto cfg = CosProbeConfig::make(1.1, 1.1, 2.0, 1.0, 1000);
  // mean length 1 forces every draw to length 1; sup = m cos(window_lo),
  // and m (1 - cos(window_lo)) is far above delta^2 for these parameters,
  // so the cancellation event holds on every trial.
  const auto est = cos_plus_event_mc(cfg, 100, 9);
  CHECK(est.frequency == 1.0);

  CHECK_THROWS_AS(cos_plus_event_mc(cfg, 50, 9), std::invalid_argument);
}

TEST_CASE("residue interval: wraparound membership and the lattice boundary case") {
  // interval centered at 0 of width 1: membership wraps across 2 pi
  CHECK(residue_in_interval(1, 0.25, 0.0, 1.0));            // 0.25 in [-0.5, 0.5]
  CHECK(residue_in_interval(1, 2.0 * std::numbers::pi - 0.2, 0.0, 1.0));
  CHECK_FALSE(residue_in_interval(1, 1.0, 0.0, 1.0));

  // even lengths at x = pi land exactly on 0 mod 2 pi
  for (i64 len : {i64{2}, i64{4}, i64{10}, i64{800}}) {
    CHECK(residue_in_interval(len, std::numbers::pi, 0.0, 0.5));
    CHECK_FALSE(residue_in_interval(len, std::numbers::pi, std::numbers::pi, 0.5));
  }
}

TEST_CASE("residue interval MC: precondition gates and the 3/4 bound") {
  // small k makes 6 delta >= pi: rejected
  const auto tight = CosProbeConfig::make(1.1, 1.1, 2.0, 100.0, 5);
  CHECK_THROWS_AS(residue_interval_mc(tight, 1.0, 0.0, 1000, 1), std::invalid_argument);

  const auto cfg = CosProbeConfig::make(1.1, 1.1, 2.0, 100.0, 100000);
  const double x = 0.5 * (cfg.window_lo() + cfg.window_hi());
  CHECK_THROWS_AS(residue_interval_mc(cfg, cfg.window_lo() / 2.0, 0.0, 1000, 1),
                  std::invalid_argument);
  const auto est = residue_interval_mc(cfg, x, 0.0, 100000, 4);
  CHECK(est.frequency <= 0.75 + 3.0 * est.std_error + 1e-9);
}
