#pragma once

#include <span>
#include <vector>

#include "hubmix/types.hpp"

namespace hubmix {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);  // n-1 denominator, 0 if n < 2

// Percentile with linear interpolation between order statistics, p in [0,100].
double percentile(std::vector<double> xs, double p);
double median(std::vector<double> xs);

// Sorts and drops floor(trim * size) values from each tail.
std::vector<double> trimmed(std::vector<double> xs, double trim);

// Regularized incomplete gamma functions (series / continued fraction).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double chi_square_cdf(double x, double dof);
double chi_square_quantile(double p, double dof);

struct ChiSquareTest {
  double statistic = 0.0;
  i64 dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of observed counts against category probabilities.
// Categories with expected count below min_expected are pooled into one.
ChiSquareTest chi_square_goodness(std::span<const i64> counts,
                                  std::span<const double> probs,
                                  double min_expected = 5.0);

// Two-sample homogeneity test on matched category counts. Categories with
// combined count below min_combined are pooled into one.
ChiSquareTest chi_square_two_sample(std::span<const i64> a,
                                    std::span<const i64> b,
                                    double min_combined = 10.0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit least_squares_fit(std::span<const double> x, std::span<const double> y);

}  // namespace hubmix
