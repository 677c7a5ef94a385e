#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tutor_rl/metrics/csv.hpp"
#include "tutor_rl/metrics/metrics.hpp"

using namespace tutor_rl::metrics;

namespace {

// Midpoint Riemann sum of the piecewise-linear curve through (i/(n-1), v_i)
// at `refine` cells per segment.
double riemann_oracle(const std::vector<double>& v, int refine) {
  const std::size_t n = v.size();
  if (n == 1) return v[0];
  const std::size_t cells = (n - 1) * static_cast<std::size_t>(refine);
  const double width = 1.0 / static_cast<double>(cells);
  double sum = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * width;
    const double x = t * static_cast<double>(n - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(x), n - 2);
    const double frac = x - static_cast<double>(i);
    sum += (v[i] * (1.0 - frac) + v[i + 1] * frac) * width;
  }
  return sum;
}

NormalizedCurve as_normalized(std::vector<double> p) {
  NormalizedCurve c;
  for (std::size_t i = 0; i < p.size(); ++i) c.t.push_back(double(i) / double(p.size()));
  c.p_hat = std::move(p);
  return c;
}

}  // namespace

TEST_CASE("normalization examples") {
  const std::vector<PerformanceCurve> one{{{0, 5, 10}, "a"}};
  const auto n = normalize_set(one);
  CHECK(n[0].p_hat == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(n[0].t == std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0});
  CHECK(n[0].run_id == "a");

  const std::vector<PerformanceCurve> two{{{-3, 1, 2}, "a"}, {{0, 7, 0.5}, "b"}};
  const auto m = normalize_set(two);
  CHECK(m[0].p_hat[0] == 0.0);
  CHECK(m[1].p_hat[1] == 1.0);
  CHECK(m[0].p_hat[1] == doctest::Approx(0.4));

  const std::vector<PerformanceCurve> flat{{{2, 2}, "a"}, {{2}, "b"}};
  CHECK_THROWS_AS(normalize_set(flat), DegenerateRange);
  const std::vector<PerformanceCurve> hollow{{{1, 2}, "a"}, {{}, "b"}};
  CHECK_THROWS_AS(normalize_set(hollow), EmptyCurve);
  CHECK_THROWS_AS(normalize_set(std::vector<PerformanceCurve>{}), EmptyCurve);
}

TEST_CASE("convergence score examples") {
  CHECK(convergence_score(as_normalized(std::vector<double>(50, 1.0))) == 1.0);
  std::vector<double> ramp(101);
  for (int i = 0; i <= 100; ++i) ramp[i] = i / 100.0;
  CHECK(convergence_score(as_normalized(ramp)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(convergence_score(as_normalized({0.3})) == 0.3);
  CHECK(convergence_score(as_normalized({0.0, 1.0})) == 0.5);
}

TEST_CASE("convergence score matches a fine Riemann oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(2 + rng() % 999);
    for (auto& x : v) x = u(rng);
    CHECK(std::abs(convergence_score(as_normalized(v)) - riemann_oracle(v, 10)) < 1e-9);
  }
}

TEST_CASE("scores are invariant under a shared increasing affine map") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<PerformanceCurve> curves(5), mapped(5);
  for (int k = 0; k < 5; ++k) {
    for (int i = 0; i < 200; ++i) curves[k].values.push_back(g(rng));
    for (double v : curves[k].values) mapped[k].values.push_back(3.0 * v + 7.0);
  }
  const auto a = normalize_set(curves);
  const auto b = normalize_set(mapped);
  for (int k = 0; k < 5; ++k) {
    CHECK(std::abs(convergence_score(a[k]) - convergence_score(b[k])) < 1e-12);
    for (double p : a[k].p_hat) CHECK((p >= 0.0 && p <= 1.0));
  }
}

TEST_CASE("saved time reproduces the published time table") {
  struct Cell {
    std::uint64_t reuses;
    double latency;
    double minutes;
  };
  const Cell table[] = {{901, 7.33, 110}, {901, 2.48, 37}, {901, 29.94, 450},
                        {172, 8.52, 24},  {172, 3.33, 10}, {172, 208, 596},
                        {97, 7.12, 12},   {97, 3.36, 5},   {97, 28.33, 46}};
  for (const Cell& c : table) {
    CAPTURE(c.reuses);
    CAPTURE(c.latency);
    CHECK(std::abs(saved_time_minutes(c.reuses, c.latency) - c.minutes) <= 1.0);
  }
  CHECK(saved_time_minutes(901, 7.33) == doctest::Approx(110.0717).epsilon(1e-5));

  TimeLedger ledger{3, {1.0, 2.0, 3.0}, 3, {2.0, 2.0, 2.0}};
  CHECK(mean_latency_seconds(ledger) == 2.0);
  CHECK(saved_time_minutes(ledger) == doctest::Approx(0.1));
  CHECK(saved_time_minutes_per_event(ledger) == doctest::Approx(0.1));
  CHECK(saved_time_minutes(TimeLedger{0, {}, 0, {}}) == 0.0);
  CHECK_THROWS_AS(mean_latency_seconds(TimeLedger{}), EmptyLedger);
}

TEST_CASE("pearson against the direct formula") {
  const std::vector<double> xs{1, 2, 3, 4, 5};
  std::vector<double> up, down;
  for (double x : xs) {
    up.push_back(2 * x + 1);
    down.push_back(-x);
  }
  CHECK(pearson(xs, up).r == doctest::Approx(1.0));
  CHECK(pearson(xs, up).p_value == 0.0);
  CHECK(pearson(xs, down).r == doctest::Approx(-1.0));

  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(10), b(10);
  for (int i = 0; i < 10; ++i) {
    a[i] = g(rng);
    b[i] = 0.5 * a[i] + g(rng);
  }
  double ma = 0, mb = 0;
  for (int i = 0; i < 10; ++i) {
    ma += a[i] / 10;
    mb += b[i] / 10;
  }
  double cov = 0, va = 0, vb = 0;
  for (int i = 0; i < 10; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  const PearsonResult r = pearson(a, b);
  CHECK(std::abs(r.r - cov / std::sqrt(va * vb)) < 1e-12);
  CHECK(r.n == 10);
  CHECK((r.p_value > 0.0 && r.p_value < 1.0));

  const std::vector<double> two_x{8, 13}, two_y{0.4, 0.6};
  const PearsonResult two = pearson(two_x, two_y);
  CHECK(two.r == doctest::Approx(1.0));
  CHECK(std::isnan(two.p_value));
  CHECK_FALSE(two.note.empty());

  const std::vector<double> flat{1, 1, 1};
  CHECK_THROWS_AS(pearson(flat, std::vector<double>{1, 2, 3}), ZeroVariance);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
  CHECK_THROWS_AS(pearson(xs, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("pearson over the published tutored scores recovers the reported correlation") {
  // Tutored rows of the published score table, with model sizes in billions
  // of parameters: LLaMA 8, Vicuna 13, DeepSeek 14.
  const std::vector<std::pair<double, double>> rows{
      {13, 0.5821}, {13, 0.5822}, {8, 0.4874}, {8, 0.4932},                                      // blackjack ppo
      {13, 0.6175}, {13, 0.5938}, {8, 0.5152}, {8, 0.5173},                                      // blackjack a2c
      {13, 0.6549}, {13, 0.6494}, {8, 0.5328}, {8, 0.5671}, {14, 0.6211}, {14, 0.6073},          // blackjack dqn
      {13, 0.7259}, {13, 0.7451}, {8, 0.6550}, {8, 0.7455},                                      // connect four ppo
      {13, 0.5252}, {13, 0.5235}, {8, 0.4648}, {8, 0.4326},                                      // connect four a2c
      {13, 0.6620}, {13, 0.6754}, {8, 0.7080}, {8, 0.6824},                                      // connect four dqn
      {13, 0.4551}, {13, 0.4958}, {8, 0.5402}, {8, 0.5092},                                      // snake ppo
      {13, 0.4792}, {13, 0.5226}, {8, 0.5333}, {8, 0.5842},                                      // snake a2c
      {13, 0.5005}, {13, 0.4379}, {8, 0.4192}, {8, 0.3768}, {14, 0.6023}, {14, 0.5926}};         // snake dqn
  REQUIRE(rows.size() == 40);
  std::vector<double> sizes, scores;
  for (const auto& [s, p] : rows) {
    sizes.push_back(s);
    scores.push_back(p);
  }
  const PearsonResult r = pearson(sizes, scores);
  CHECK(std::abs(r.r - 0.24) <= 0.01);
  CHECK(std::abs(r.p_value - 0.14) <= 0.01);
}

TEST_CASE("plot smoothing") {
  const PerformanceCurve impulse{{0, 0, 1, 0, 0}, "x"};
  const auto s = smooth_for_plot(impulse, 3);
  const std::vector<double> expected{0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0};
  REQUIRE(s.values.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(s.values[i] == doctest::Approx(expected[i]));
  CHECK(s.run_id == "x");

  const PerformanceCurve wiggly{{3, 1, 4, 1, 5, 9, 2, 6}, "w"};
  CHECK(smooth_for_plot(wiggly, 1).values == wiggly.values);
  const PerformanceCurve flat{std::vector<double>(9, 2.5), "f"};
  for (double v : smooth_for_plot(flat, 7).values) CHECK(v == doctest::Approx(2.5));
  CHECK_THROWS_AS(smooth_for_plot(wiggly, 4), BadWindow);
  CHECK_THROWS_AS(smooth_for_plot(wiggly, 0), BadWindow);
}

TEST_CASE("summary csv round trip") {
  std::vector<SummaryRow> rows{
      {"snake", "dqn", "scripted:optimal", "on", 1, 0.123456789012345, 10, 30, 0.005, 0.1, 0.01},
      {"blackjack", "ppo", "none", "n/a", 3, 0.5, 0, 0, 0.0, 0.0, 0.0}};
  std::stringstream buffer;
  write_summary(buffer, rows);
  const auto back = read_summary(buffer);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].environment == rows[i].environment);
    CHECK(back[i].algorithm == rows[i].algorithm);
    CHECK(back[i].tutor == rows[i].tutor);
    CHECK(back[i].reuse == rows[i].reuse);
    CHECK(back[i].seed == rows[i].seed);
    CHECK(back[i].convergence_score == rows[i].convergence_score);
    CHECK(back[i].fresh_queries == rows[i].fresh_queries);
    CHECK(back[i].reuses == rows[i].reuses);
    CHECK(back[i].saved_minutes == rows[i].saved_minutes);
    CHECK(back[i].wall_clock_seconds == rows[i].wall_clock_seconds);
    CHECK(back[i].mean_latency_seconds == rows[i].mean_latency_seconds);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");

  std::stringstream empty;
  CHECK_THROWS_AS(read_summary(empty), MissingColumns);
  std::stringstream partial("environment,algorithm\nsnake,dqn\n");
  CHECK_THROWS_AS(read_summary(partial), MissingColumns);
}

TEST_CASE("run csv has one row per episode") {
  const PerformanceCurve raw{{1, 2, 3}, "r"};
  const auto normalized = normalize_set(std::vector<PerformanceCurve>{raw});
  std::stringstream out;
  write_run_csv(out, raw, smooth_for_plot(raw, 3), normalized[0]);
  std::string line;
  std::getline(out, line);
  CHECK(line == "episode_index,raw_return,smoothed_return,t_normalized,p_hat");
  int count = 0;
  while (std::getline(out, line)) ++count;
  CHECK(count == 3);
}
