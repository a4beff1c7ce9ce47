#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "hubmix/arc_model.hpp"
#include "hubmix/stats.hpp"

using namespace hubmix;

TEST_CASE("geometric arcs: unit mean forces unit lengths") {
  for (u64 seed : {1ull, 2ull, 99ull}) {
    const auto arcs = sample_geometric_arcs({1.0, 5}, seed);
    CHECK(arcs.lengths == std::vector<i64>{1, 1, 1, 1, 1});
  }
}

TEST_CASE("geometric arcs: sample mean approaches the configured mean") {
  // E = 10, Var = (1-p)/p^2 = 90; 1e5 draws put the CLT band well inside 0.3.
  const i64 draws = 100000;
  double sum = 0.0;
  for (i64 s = 0; s < draws; ++s) {
    const auto arcs = sample_geometric_arcs({10.0, 1}, mix_seed(42, static_cast<u64>(s)));
    sum += static_cast<double>(arcs.lengths[0]);
  }
  const double mean_len = sum / static_cast<double>(draws);
  CHECK(mean_len == doctest::Approx(10.0).epsilon(0.03));
}

TEST_CASE("geometric arcs: P(length = 2) at mean 2 is 1/4") {
  const i64 draws = 100000;
  i64 hits = 0;
  for (i64 s = 0; s < draws; ++s) {
    const auto arcs = sample_geometric_arcs({2.0, 1}, mix_seed(7, static_cast<u64>(s)));
    if (arcs.lengths[0] == 2) ++hits;
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(draws);
  const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(draws));
  CHECK(std::abs(freq - 0.25) < 3.0 * se);
}

TEST_CASE("geometric arcs: parameter validation") {
  CHECK_THROWS_AS(sample_geometric_arcs({0.5, 3}, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_geometric_arcs({2.0, 0}, 1), std::invalid_argument);
}

TEST_CASE("cycle cut: degenerate and conservation cases") {
  const auto full = sample_cycle_cut(5, 5, 3);
  CHECK(full.lengths == std::vector<i64>{1, 1, 1, 1, 1});
  for (u64 s = 0; s < 200; ++s) {
    const auto arcs = sample_cycle_cut(10, 3, s);
    CHECK(arcs.node_count() == 10);
    CHECK(arcs.arc_count() == 3);
  }
  CHECK_THROWS_AS(sample_cycle_cut(5, 6, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_cycle_cut(5, 0, 1), std::invalid_argument);
}

TEST_CASE("cycle cut: gap law matches exhaustive enumeration at n=6, k=2") {
  // All C(6,2) = 15 edge pairs give sorted length multisets
  // {1,5} x6, {2,4} x6, {3,3} x3.
  std::map<std::pair<i64, i64>, i64> counts;
  const i64 draws = 100000;
  for (i64 s = 0; s < draws; ++s) {
    auto arcs = sample_cycle_cut(6, 2, mix_seed(11, static_cast<u64>(s)));
    std::sort(arcs.lengths.begin(), arcs.lengths.end());
    ++counts[{arcs.lengths[0], arcs.lengths[1]}];
  }
  REQUIRE(counts.size() == 3);
  const std::vector<i64> observed{counts[{1, 5}], counts[{2, 4}], counts[{3, 3}]};
  const std::vector<double> probs{6.0 / 15.0, 6.0 / 15.0, 3.0 / 15.0};
  const auto test = chi_square_goodness(observed, probs);
  CHECK(test.statistic < chi_square_quantile(0.99, static_cast<double>(test.dof)));
}

TEST_CASE("rejection sampler: n = k accepts immediately") {
  for (u64 s = 0; s < 20; ++s) {
    const auto res = sample_cycle_cut_by_rejection(7, 7, 10, s);
    REQUIRE(res.arcs.has_value());
    CHECK(res.attempts == 1);
    CHECK(res.arcs->lengths == std::vector<i64>(7, 1));
  }
}

TEST_CASE("rejection sampler: acceptance frequency matches the exact probability") {
  // P(M(2,1)) = 1/4.
  const i64 runs = 100000;
  i64 first_try = 0;
  for (i64 s = 0; s < runs; ++s) {
    const auto res = sample_cycle_cut_by_rejection(2, 1, 1, mix_seed(5, static_cast<u64>(s)));
    if (res.arcs) ++first_try;
  }
  const double freq = static_cast<double>(first_try) / static_cast<double>(runs);
  const double p = exact_node_count_probability(2, 1).exact;
  CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
  CHECK(std::abs(freq - p) < 3.0 * se);
}

TEST_CASE("rejection sampler: distribution agrees with the direct sampler") {
  // Two-sample chi-square on sorted length multisets at (12, 3).
  const i64 draws = 30000;
  std::map<std::vector<i64>, std::pair<i64, i64>> counts;
  for (i64 s = 0; s < draws; ++s) {
    auto a = sample_cycle_cut(12, 3, mix_seed(100, static_cast<u64>(s)));
    std::sort(a.lengths.begin(), a.lengths.end());
    ++counts[a.lengths].first;
    const auto res =
        sample_cycle_cut_by_rejection(12, 3, 100000, mix_seed(200, static_cast<u64>(s)));
    REQUIRE(res.arcs.has_value());
    auto b = res.arcs->lengths;
    std::sort(b.begin(), b.end());
    ++counts[b].second;
  }
  std::vector<i64> a_counts, b_counts;
  for (const auto& [key, val] : counts) {
    a_counts.push_back(val.first);
    b_counts.push_back(val.second);
  }
  const auto test = chi_square_two_sample(a_counts, b_counts);
  CHECK(test.statistic < chi_square_quantile(0.99, static_cast<double>(test.dof)));
}

TEST_CASE("node count probability: closed cases and the Stirling ratio") {
  CHECK(exact_node_count_probability(9, 9).exact == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(exact_node_count_probability(2, 1).exact == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(exact_node_count_probability(3, 4), std::invalid_argument);

  const auto p = exact_node_count_probability(400, 20);
  CHECK(p.exact / p.asymptotic > 0.95);
  CHECK(p.exact / p.asymptotic < 1.05);

  // Independent route: accumulate the binomial factor as a plain sum of logs.
  auto brute_log = [](i64 n, i64 k) {
    double lb = 0.0;
    for (i64 i = 1; i <= k - 1; ++i) {
      lb += std::log(static_cast<double>(n - k + i)) - std::log(static_cast<double>(i));
    }
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    double tail = (n == k) ? 0.0 : (nd - kd) * std::log(nd - kd);
    return lb + kd * std::log(kd) + tail - nd * std::log(nd);
  };
  for (auto [n, k] : std::vector<std::pair<i64, i64>>{{2, 1}, {12, 3}, {400, 20}, {977, 31}}) {
    const auto v = exact_node_count_probability(n, k);
    CHECK(std::abs(v.log_exact - brute_log(n, k)) < 1e-12 * std::max(1.0, std::abs(v.log_exact)));
  }
}

TEST_CASE("node count probability: exact/asymptotic ratio approaches 1") {
  double prev_gap = 1e300;
  for (i64 n : {100, 400, 1600, 6400}) {
    const i64 k = static_cast<i64>(std::floor(std::sqrt(static_cast<double>(n))));
    const auto p = exact_node_count_probability(n, k);
    const double gap = std::abs(p.exact / p.asymptotic - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("arc system helpers") {
  ArcSystem arcs{{2, 4, 6}};
  CHECK(arcs.node_count() == 12);
  CHECK(arcs.max_length() == 6);
  CHECK(arcs.length_gcd() == 2);
  CHECK(arcs.count_unit_arcs() == 0);
  ArcSystem bad{{1, 0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
