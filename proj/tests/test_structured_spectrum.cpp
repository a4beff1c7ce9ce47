#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hubmix/structured_spectrum.hpp"
#include "test_util.hpp"

using namespace hubmix;

TEST_CASE("hub sum: closed evaluations") {
  const ArcSystem a12{{1, 2}};
  CHECK(std::abs(eval_hub_sum(a12, Complex(1.0, 0.0)) - Complex(2.0, 0.0)) < 1e-14);
  CHECK(std::abs(eval_hub_sum(a12, Complex(-0.5, 0.0)) - Complex(2.0, 0.0)) < 1e-14);

  const ArcSystem a333{{3, 3, 3}};
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  CHECK(std::abs(eval_hub_sum(a333, w) - Complex(3.0, 0.0)) < 1e-12);

  CHECK_THROWS_AS(eval_hub_sum(a12, Complex(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("characteristic polynomial: coefficients, terms, and closed families") {
  const auto p12 = char_polynomial(ArcSystem{{1, 2}});
  CHECK(p12.coefficients == std::vector<i64>{1, 1, -2});
  REQUIRE(p12.terms.size() == 2);
  CHECK(p12.terms[0] == std::pair<i64, i64>{0, 1});
  CHECK(p12.terms[1] == std::pair<i64, i64>{1, 1});

  const auto p11 = char_polynomial(ArcSystem{{1, 1}});
  CHECK(p11.coefficients == std::vector<i64>{2, -2});

  const auto pc = char_polynomial(ArcSystem{{4, 4, 4}});
  CHECK(pc.coefficients == std::vector<i64>{3, 0, 0, 0, -3});

  // Coefficients always sum to zero, so z = 1 is a root.
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    ArcSystem arcs{testutil::random_lengths(rng, 6, 10)};
    const auto poly = char_polynomial(arcs);
    i64 sum = 0;
    for (i64 c : poly.coefficients) sum += c;
    CHECK(sum == 0);
    CHECK(poly.coefficients.back() == -arcs.arc_count());
  }
}

TEST_CASE("polynomial_roots: elementary polynomials") {
  // z^2 - 1
  const auto r1 = polynomial_roots(std::vector<double>{-1.0, 0.0, 1.0});
  REQUIRE(r1.size() == 2);
  CHECK(testutil::pairing_distance(r1, {Complex(1, 0), Complex(-1, 0)}) < 1e-12);

  // (z - 1/2)(z - 1/4)(z + 3/4) = z^3 - (7/16) z + 3/32
  const std::vector<double> c{3.0 / 32.0, -7.0 / 16.0, 0.0, 1.0};
  const auto r2 = polynomial_roots(c);
  CHECK(testutil::pairing_distance(
            r2, {Complex(0.5, 0), Complex(0.25, 0), Complex(-0.75, 0)}) < 1e-12);

  // z^6 - 1: all sixth roots of unity.
  std::vector<double> c6(7, 0.0);
  c6[0] = -1.0;
  c6[6] = 1.0;
  const auto r3 = polynomial_roots(c6);
  std::vector<Complex> want;
  for (int j = 0; j < 6; ++j) {
    want.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / 6.0));
  }
  CHECK(testutil::pairing_distance(r3, want) < 1e-12);

  CHECK_THROWS_AS(polynomial_roots(std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("polynomial_roots: iteration cap raises with estimates attached") {
  std::vector<double> c6(7, 0.0);
  c6[0] = -1.0;
  c6[6] = 1.0;
  RootFinderOptions opts;
  opts.max_iterations = 1;
  try {
    polynomial_roots(c6, opts);
    FAIL("expected RootFinderError");
  } catch (const RootFinderError& e) {
    CHECK(e.estimates().size() == 6);
  }
}

TEST_CASE("nonzero eigenvalues: closed instances") {
  const auto e12 = nonzero_eigenvalues(ArcSystem{{1, 2}});
  REQUIRE(e12.size() == 2);
  std::vector<Complex> flat;
  for (const auto& c : e12) flat.push_back(c.value);
  CHECK(testutil::pairing_distance(flat, {Complex(1, 0), Complex(-0.5, 0)}) < 1e-10);

  // Single arc of length m: the m-th roots of unity.
  for (i64 m : {i64{2}, i64{5}, i64{9}}) {
    const auto em = nonzero_eigenvalues(ArcSystem{{m}});
    std::vector<Complex> values, want;
    for (const auto& c : em) {
      for (i64 i = 0; i < c.multiplicity; ++i) values.push_back(c.value);
    }
    for (i64 j = 0; j < m; ++j) {
      want.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                          static_cast<double>(m)));
    }
    CHECK(testutil::pairing_distance(values, want) < 1e-10);
  }

  // gcd 2 family contains -1, and the set is conjugation closed.
  const auto e246 = nonzero_eigenvalues(ArcSystem{{2, 4, 6}});
  bool has_minus_one = false;
  for (const auto& c : e246) {
    if (std::abs(c.value - Complex(-1.0, 0.0)) < 1e-10) has_minus_one = true;
    bool conj_found = false;
    for (const auto& d : e246) {
      if (std::abs(std::conj(c.value) - d.value) < 1e-8) conj_found = true;
    }
    CHECK(conj_found);
  }
  CHECK(has_minus_one);
  CHECK(std::abs(eval_hub_sum(ArcSystem{{2, 4, 6}}, Complex(-1.0, 0.0)) -
                 Complex(3.0, 0.0)) < 1e-14);
}

TEST_CASE("full spectrum: multiplicity bookkeeping and closed cases") {
  const auto s12 = full_spectrum(ArcSystem{{1, 2}});
  CHECK(s12.node_count == 3);
  CHECK(s12.eigenvalues.size() == 3);
  i64 total = 0;
  for (const auto& c : s12.eigenvalues) total += c.multiplicity;
  CHECK(total == 3);

  const auto s11 = full_spectrum(ArcSystem{{1, 1}});
  REQUIRE(s11.eigenvalues.size() == 2);  // 1 and 0, once each
  total = 0;
  for (const auto& c : s11.eigenvalues) total += c.multiplicity;
  CHECK(total == 2);
}

TEST_CASE("full spectrum: structural invariants over random instances") {
  Rng rng(1234);
  for (int t = 0; t < 400; ++t) {
    ArcSystem arcs{testutil::random_lengths(rng, 5, 8)};
    const auto s = full_spectrum(arcs);
    i64 total = 0;
    Complex trace_sum(0.0, 0.0);
    for (const auto& c : s.eigenvalues) {
      total += c.multiplicity;
      trace_sum += static_cast<double>(c.multiplicity) * c.value;
      CHECK(std::abs(c.value) <= 1.0 + 1e-8);
      // conjugation closure
      bool found = false;
      for (const auto& d : s.eigenvalues) {
        if (std::abs(std::conj(c.value) - d.value) < 1e-8) found = true;
      }
      CHECK(found);
    }
    CHECK(total == arcs.node_count());
    const double expected_trace = static_cast<double>(arcs.count_unit_arcs()) /
                                  static_cast<double>(arcs.arc_count());
    CHECK(std::abs(trace_sum - Complex(expected_trace, 0.0)) < 1e-8);
    CHECK(s.max_residual <= 1e-10);
  }
}

TEST_CASE("mixing rate: closed values and the gcd criterion") {
  CHECK(mixing_rate(full_spectrum(ArcSystem{{1, 2}})) ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(mixing_rate(full_spectrum(ArcSystem{{1, 1, 1, 1}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (i64 g : {i64{2}, i64{3}, i64{5}}) {
    // all arcs share length g: unit-modulus roots of unity keep the rate at 0
    const auto s = full_spectrum(ArcSystem{{g, g, g}});
    CHECK(mixing_rate(s) == doctest::Approx(0.0).epsilon(1e-10));
    bool unit_root = false;
    for (const auto& c : s.eigenvalues) {
      if (std::abs(std::abs(c.value) - 1.0) < 1e-10 &&
          std::abs(c.value - Complex(1.0, 0.0)) > 1e-8) {
        unit_root = true;
      }
    }
    CHECK(unit_root);
  }

  // rate = 0 iff gcd > 1 over mixed families
  Rng rng(555);
  for (int t = 0; t < 120; ++t) {
    ArcSystem arcs{testutil::random_lengths(rng, 4, 6)};
    const double rate = mixing_rate(full_spectrum(arcs));
    if (arcs.length_gcd() > 1) {
      CHECK(rate <= 1e-8);
    } else {
      CHECK(rate > 1e-8);
    }
  }

  Spectrum off;
  off.eigenvalues.push_back({Complex(0.5, 0.0), 1});
  off.node_count = 1;
  CHECK_THROWS_AS(mixing_rate(off), SpectrumError);
}

TEST_CASE("deflated polynomial keeps integer structure") {
  // p(1) = 0 exactly, and synthetic division by (z - 1) leaves partial sums.
  const auto poly = char_polynomial(ArcSystem{{2, 3}});
  CHECK(poly.coefficients == std::vector<i64>{1, 1, 0, -2});
  // partial sums from the top: -2, -2, -1; remainder 1 + (-1) = 0.
  const auto roots = nonzero_eigenvalues(ArcSystem{{2, 3}});
  std::vector<Complex> flat;
  for (const auto& c : roots) {
    for (i64 i = 0; i < c.multiplicity; ++i) flat.push_back(c.value);
  }
  CHECK(testutil::pairing_distance(
            flat, {Complex(1, 0), Complex(-0.5, 0.5), Complex(-0.5, -0.5)}) < 1e-10);
}
