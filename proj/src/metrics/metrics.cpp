#include "tutor_rl/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace tutor_rl::metrics {

std::vector<NormalizedCurve> normalize_set(std::span<const PerformanceCurve> curves) {
  if (curves.empty()) throw EmptyCurve("normalize_set needs at least one curve");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& curve : curves) {
    if (curve.values.empty()) throw EmptyCurve("curve '" + curve.run_id + "' has no values");
    for (double v : curve.values) {
      if (!std::isfinite(v)) throw std::domain_error("curve '" + curve.run_id + "' has a non-finite value");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) throw DegenerateRange();

  const double range = hi - lo;
  std::vector<NormalizedCurve> out;
  out.reserve(curves.size());
  for (const auto& curve : curves) {
    NormalizedCurve n;
    n.run_id = curve.run_id;
    const std::size_t size = curve.values.size();
    n.t.resize(size);
    n.p_hat.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
      n.t[i] = static_cast<double>(i) / static_cast<double>(size);
      // Pin the extremes exactly so max maps to 1 and min to 0 bit-for-bit.
      const double v = curve.values[i];
      n.p_hat[i] = v == hi ? 1.0 : v == lo ? 0.0 : (v - lo) / range;
    }
    out.push_back(std::move(n));
  }
  return out;
}

double convergence_score(const NormalizedCurve& curve) {
  const auto& p = curve.p_hat;
  if (p.empty()) throw EmptyCurve("cannot score an empty curve");
  if (p.size() == 1) return p.front();
  double inner = 0.0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) inner += p[i];
  // Dividing (rather than multiplying by 1/(n-1)) keeps constant curves exact.
  return (0.5 * (p.front() + p.back()) + inner) / static_cast<double>(p.size() - 1);
}

double mean_latency_seconds(const TimeLedger& ledger) {
  if (ledger.latencies.empty()) throw EmptyLedger();
  return std::accumulate(ledger.latencies.begin(), ledger.latencies.end(), 0.0) /
         static_cast<double>(ledger.latencies.size());
}

double saved_time_minutes(std::uint64_t reuse_count, double mean_latency) {
  return static_cast<double>(reuse_count) * mean_latency / 60.0;
}

double saved_time_minutes(const TimeLedger& ledger) {
  if (ledger.reuse_count == 0) return 0.0;
  return saved_time_minutes(ledger.reuse_count, mean_latency_seconds(ledger));
}

double saved_time_minutes_per_event(const TimeLedger& ledger) {
  return std::accumulate(ledger.reuse_latencies.begin(), ledger.reuse_latencies.end(), 0.0) / 60.0;
}

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson samples differ in length");
  if (xs.size() < 2) throw std::invalid_argument("pearson needs at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVariance();

  PearsonResult result;
  result.n = xs.size();
  result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (xs.size() < 3) {
    result.p_value = std::numeric_limits<double>::quiet_NaN();
    result.note = "p-value undefined for fewer than 3 points";
    return result;
  }
  const double dof = n - 2.0;
  if (std::abs(result.r) == 1.0) {
    result.p_value = 0.0;
    return result;
  }
  const double t = result.r * std::sqrt(dof / (1.0 - result.r * result.r));
  const boost::math::students_t dist(dof);
  result.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return result;
}

PerformanceCurve smooth_for_plot(const PerformanceCurve& curve, int window) {
  if (window < 1 || window % 2 == 0) {
    throw BadWindow("smoothing window must be a positive odd integer, got " + std::to_string(window));
  }
  const std::size_t n = curve.values.size();
  const std::size_t half = static_cast<std::size_t>(window / 2);
  PerformanceCurve out{std::vector<double>(n), curve.run_id};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (std::size_t j = i - h; j <= i + h; ++j) sum += curve.values[j];
    out.values[i] = sum / static_cast<double>(2 * h + 1);
  }
  return out;
}

}  // namespace tutor_rl::metrics
