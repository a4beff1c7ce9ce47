#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hubmix/rng.hpp"
#include "hubmix/stats.hpp"

using namespace hubmix;

TEST_CASE("rng: determinism and ranges") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = c.uniform_open01();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(c.below(7) < 7);
  }
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
}

TEST_CASE("regularized incomplete gamma against reference values") {
  // Reference values from an independent implementation.
  const struct {
    double a, x, p;
  } cases[] = {
      {0.5, 0.5, 0.68268949213708585},   {1.0, 1.0, 0.63212055882855767},
      {2.5, 1.3, 0.23863473215498604},   {7.5, 7.5, 0.54858278877427524},
      {50.0, 40.0, 0.070335066659394943}, {0.5, 12.0, 0.99999903664299139},
      {14.0, 3.0, 3.4019146132435507e-06}};
  for (const auto& c : cases) {
    CHECK(regularized_gamma_p(c.a, c.x) == doctest::Approx(c.p).epsilon(1e-13));
    CHECK(regularized_gamma_q(c.a, c.x) == doctest::Approx(1.0 - c.p).epsilon(1e-12));
  }
}

TEST_CASE("chi-square quantiles against reference values") {
  CHECK(chi_square_quantile(0.99, 2) == doctest::Approx(9.2103403719761801).epsilon(1e-10));
  CHECK(chi_square_quantile(0.99, 14) == doctest::Approx(29.141237740672796).epsilon(1e-10));
  CHECK(chi_square_quantile(0.99, 119) == doctest::Approx(157.79954116016174).epsilon(1e-10));
  CHECK(chi_square_quantile(0.95, 5) == doctest::Approx(11.070497693516351).epsilon(1e-10));
  CHECK(chi_square_quantile(0.5, 10) == doctest::Approx(9.3418177655919692).epsilon(1e-10));
  CHECK(chi_square_cdf(20.0, 14) == doctest::Approx(0.86985857911751696).epsilon(1e-12));
}

TEST_CASE("summary statistics basics") {
  std::vector<double> xs{4.0, 1.0, 3.0, 2.0, 5.0};
  CHECK(mean(xs) == doctest::Approx(3.0));
  CHECK(median(xs) == doctest::Approx(3.0));
  CHECK(percentile(xs, 0.0) == doctest::Approx(1.0));
  CHECK(percentile(xs, 100.0) == doctest::Approx(5.0));
  CHECK(sample_stddev(xs) == doctest::Approx(std::sqrt(2.5)));

  std::vector<double> seq;
  for (int i = 1; i <= 100; ++i) seq.push_back(static_cast<double>(i));
  const auto core = trimmed(seq, 0.05);  // exactly 5 dropped per tail
  CHECK(core.size() == 90);
  CHECK(core.front() == doctest::Approx(6.0));
  CHECK(core.back() == doctest::Approx(95.0));
}

TEST_CASE("chi-square goodness accepts a fair die and rejects a loaded one") {
  Rng rng(99);
  std::vector<i64> counts(6, 0);
  for (int i = 0; i < 60000; ++i) ++counts[rng.below(6)];
  const std::vector<double> fair(6, 1.0 / 6.0);
  const auto ok = chi_square_goodness(counts, fair);
  CHECK(ok.statistic < chi_square_quantile(0.99, 5));

  std::vector<i64> loaded{20000, 8000, 8000, 8000, 8000, 8000};
  const auto bad = chi_square_goodness(loaded, fair);
  CHECK(bad.statistic > chi_square_quantile(0.999, 5));
}

TEST_CASE("two-sample chi-square on identical and disjoint samples") {
  std::vector<i64> a{100, 200, 300};
  const auto same = chi_square_two_sample(a, a);
  CHECK(same.statistic == doctest::Approx(0.0));
  std::vector<i64> b{300, 200, 100};
  const auto diff = chi_square_two_sample(a, b);
  CHECK(diff.statistic > chi_square_quantile(0.999, 2));
}

TEST_CASE("least squares fit recovers exact lines") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double v : x) y.push_back(-0.5 * v + 2.0);
  const auto fit = least_squares_fit(x, y);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}
