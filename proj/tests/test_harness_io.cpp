#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <vector>

#include "hubmix/harness.hpp"
#include "hubmix/io.hpp"
#include "hubmix/structured_spectrum.hpp"
#include "hubmix/thread_pool.hpp"
#include "test_util.hpp"

using namespace hubmix;

TEST_CASE("parallel_for_index covers every index exactly once") {
  std::vector<std::atomic<int>> hits(503);
  parallel_for_index(503, 2, [&](i64 i) { hits[static_cast<std::size_t>(i)]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("parallel_for_index propagates worker exceptions") {
  CHECK_THROWS_AS(parallel_for_index(16, 2,
                                     [&](i64 i) {
                                       if (i == 7) throw std::runtime_error("boom");
                                     }),
                  std::runtime_error);
}

TEST_CASE("group summary trims exactly floor(trim * count) per tail") {
  std::vector<double> values;
  for (int i = 1; i <= 100; ++i) values.push_back(static_cast<double>(i));
  const auto g = summarize_group(10.0, values, 0.05);
  CHECK(g.count == 100);
  CHECK(g.mean == doctest::Approx((6.0 + 95.0) / 2.0));  // mean of 6..95
  CHECK(g.median == doctest::Approx(50.5));
  CHECK(g.p05 == doctest::Approx(percentile(values, 5.0)));
  CHECK(g.p95 == doctest::Approx(percentile(values, 95.0)));
}

TEST_CASE("fit_loglog_slope recovers exact power laws") {
  SweepTable table;
  table.group_label = "n";
  for (i64 n : {50, 100, 200, 400, 800}) {
    GroupStats g;
    g.key = static_cast<double>(n);
    g.count = 10;
    g.median = 3.0 / std::sqrt(static_cast<double>(n));
    table.groups.push_back(g);
  }
  const auto fit = fit_loglog_slope(table);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  for (auto& g : table.groups) g.median = 7.0 / g.key;
  CHECK(fit_loglog_slope(table).slope == doctest::Approx(-1.0).epsilon(1e-12));

  table.groups[2].median = 0.0;
  CHECK_THROWS_AS(fit_loglog_slope(table), std::invalid_argument);

  SweepTable small;
  small.groups.push_back({10.0, 5, 0, 0, 1.0, 0, 0});
  small.groups.push_back({20.0, 5, 0, 0, 0.5, 0, 0});
  CHECK_THROWS_AS(fit_loglog_slope(small), std::invalid_argument);
}

TEST_CASE("ratescan: mini run is sane and thread-count independent") {
  RateScanConfig cfg;
  cfg.n_grid = {24, 48};
  cfg.sigma = 0.5;
  cfg.trials_per_n = 40;
  cfg.trim = 0.05;
  cfg.gamma = 4.1;
  cfg.seed = 31337;
  cfg.threads = 1;
  const auto serial = ratescan(cfg);
  cfg.threads = 2;
  const auto parallel = ratescan(cfg);

  CHECK(serial.drift.attempted == 80);
  CHECK(serial.drift.succeeded + (serial.drift.attempted - serial.drift.succeeded) == 80);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].seed == parallel.records[i].seed);
    CHECK(serial.records[i].lambda == parallel.records[i].lambda);  // bitwise
    CHECK(serial.records[i].ok);
    CHECK(serial.records[i].lambda >= 0.0);
    CHECK(serial.records[i].lambda <= 1.0);
  }
  CHECK(sweep_csv(serial.drift) == sweep_csv(parallel.drift));
  CHECK(sweep_csv(serial.reversible) == sweep_csv(parallel.reversible));

  // the non-reversible chain mixes faster already at these sizes
  for (std::size_t g = 0; g < serial.drift.groups.size(); ++g) {
    CHECK(serial.drift.groups[g].median > serial.reversible.groups[g].median);
  }
}

TEST_CASE("qsweep: paired design, q=1 column equals the structured solver") {
  QSweepConfig cfg;
  cfg.n = 60;
  cfg.k = 6;
  cfg.q_grid = {0.5, 0.75, 1.0};
  cfg.trials = 30;
  cfg.seed = 77;
  cfg.threads = 2;
  const auto result = qsweep(cfg);
  REQUIRE(result.records.size() == 90);
  CHECK(result.table.groups.size() == 3);
  for (i64 g = 0; g < cfg.trials; ++g) {
    const auto& rec = result.records[static_cast<std::size_t>(g * 3 + 2)];
    REQUIRE(rec.ok);
    CHECK(rec.drift_q == 1.0);
    const auto arcs = sample_cycle_cut(cfg.n, cfg.k, rec.seed);
    const double structured_rate = mixing_rate(full_spectrum(arcs));
    CHECK(std::abs(rec.lambda - structured_rate) < 1e-8);
  }
  // same graph across the q row
  for (i64 g = 0; g < cfg.trials; ++g) {
    CHECK(result.records[static_cast<std::size_t>(g * 3)].seed ==
          result.records[static_cast<std::size_t>(g * 3 + 2)].seed);
  }
}

TEST_CASE("trials csv: schema, nan policy, and round trip") {
  std::vector<TrialRecord> records;
  TrialRecord a;
  a.trial_index = 0;
  a.seed = 12345678901234567ull;
  a.n = 100;
  a.k = 10;
  a.drift_q = 0.725;
  a.lambda = 0.012345678901234567;
  a.method = SolveMethod::structured;
  a.residual = 1.25e-13;
  a.wall_ms = 0.5;
  records.push_back(a);
  TrialRecord b = a;
  b.trial_index = 1;
  b.method = SolveMethod::dense;
  b.ok = false;
  b.error = "solver failed";
  records.push_back(b);

  const std::string csv = trials_csv(records);
  CHECK(csv.rfind("seed,n,k,q,lambda,method,residual,wall_ms\n", 0) == 0);
  CHECK(csv.find("nan") != std::string::npos);  // failed trial row kept

  const auto parsed = parse_trials_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].seed == a.seed);
  CHECK(parsed[0].n == a.n);
  CHECK(parsed[0].k == a.k);
  CHECK(parsed[0].drift_q == a.drift_q);      // %.17g round-trips doubles
  CHECK(parsed[0].lambda == a.lambda);
  CHECK(parsed[0].residual == a.residual);
  CHECK(parsed[0].method == SolveMethod::structured);
  CHECK_FALSE(parsed[1].ok);

  CHECK(trials_csv({}) == "seed,n,k,q,lambda,method,residual,wall_ms\n");
}

TEST_CASE("sweep csv: header and float format") {
  SweepTable t;
  t.group_label = "q";
  t.groups.push_back({0.5, 100, 0.25, 0.015625, 0.375, 0.125, 0.75});
  const std::string csv = sweep_csv(t);
  CHECK(csv ==
        "group,count,mean,std,median,p05,p95\n0.5,100,0.25,0.015625,0.375,0.125,0.75\n");
  // 17 significant digits round-trip any double exactly
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("eigenvalue csv carries multiplicities and the method tag") {
  const auto s = full_spectrum(ArcSystem{{1, 2}});
  const std::string csv = eigenvalue_csv(s);
  CHECK(csv.rfind("re,im,mult,method\n", 0) == 0);
  CHECK(csv.find("structured") != std::string::npos);
  CHECK(csv.find("-0.5") != std::string::npos);
}

TEST_CASE("svg outputs are deterministic and carry the drawing primitives") {
  QSweepConfig cfg;
  cfg.n = 40;
  cfg.k = 4;
  cfg.q_grid = {0.5, 0.75, 1.0};
  cfg.trials = 12;
  cfg.seed = 5;
  cfg.threads = 2;
  const auto result = qsweep(cfg);
  const std::string svg1 = svg_curve(result.table);
  const std::string svg2 = svg_curve(result.table);
  CHECK(svg1 == svg2);
  CHECK(svg1.find("<polyline") != std::string::npos);
  CHECK(svg1.find("stroke-dasharray") != std::string::npos);

  const std::string hist = svg_histogram(result.records);
  CHECK(hist.find("<rect") != std::string::npos);
  CHECK(hist == svg_histogram(result.records));
}

TEST_CASE("default q grid covers [1/2, 1] with the requested step") {
  const auto grid = default_q_grid(0.025);
  REQUIRE(grid.size() == 21);
  CHECK(grid.front() == 0.5);
  CHECK(grid.back() == 1.0);
  const auto coarse = default_q_grid(0.25);
  CHECK(coarse == std::vector<double>{0.5, 0.75, 1.0});
}

TEST_CASE("log spaced grid endpoints and monotonicity") {
  const auto grid = log_spaced_grid(54, 2980, 8);
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == 54);
  CHECK(grid.back() == 2980);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}
