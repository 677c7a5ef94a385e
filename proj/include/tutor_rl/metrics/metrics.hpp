#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tutor_rl::metrics {

class DegenerateRange : public std::domain_error {
 public:
  DegenerateRange() : std::domain_error("all curve values are equal; min-max normalization is undefined") {}
};

class EmptyCurve : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyLedger : public std::domain_error {
 public:
  EmptyLedger() : std::domain_error("no response latencies recorded") {}
};

class ZeroVariance : public std::domain_error {
 public:
  ZeroVariance() : std::domain_error("pearson correlation needs non-zero variance in both samples") {}
};

class BadWindow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PerformanceCurve {
  std::vector<double> values;  // one per episode (or per step, see runner)
  std::string run_id;
};

struct NormalizedCurve {
  std::vector<double> t;      // i / |v|
  std::vector<double> p_hat;  // (p - min) / (max - min) over the whole set
  std::string run_id;
};

// Global min-max scaling across every value of every curve in the set.
std::vector<NormalizedCurve> normalize_set(std::span<const PerformanceCurve> curves);

// Area under p_hat over normalized training time. The n samples are placed
// evenly on [0, 1] (first at 0, last at 1) and joined linearly, so a constant
// curve scores its value and a ramp from 0 to 1 scores 0.5. A one-sample curve
// scores its only value.
double convergence_score(const NormalizedCurve& curve);

struct TimeLedger {
  std::uint64_t reuse_count = 0;
  std::vector<double> latencies;        // seconds, one per tutor response
  std::uint64_t fresh_query_count = 0;
  std::vector<double> reuse_latencies;  // optional: per reuse, latency of the replayed answer
};

double mean_latency_seconds(const TimeLedger& ledger);

// reuse_count * mean(latencies) / 60.
double saved_time_minutes(const TimeLedger& ledger);
double saved_time_minutes(std::uint64_t reuse_count, double mean_latency_seconds);
// Sum of reuse_latencies / 60.
double saved_time_minutes_per_event(const TimeLedger& ledger);

struct PearsonResult {
  double r = 0.0;
  double p_value = 0.0;  // two-sided, Student t with n-2 degrees of freedom
  std::size_t n = 0;
  std::string note;
};

// Requires n >= 2; with n == 2 the p-value is NaN and `note` says so.
PearsonResult pearson(std::span<const double> xs, std::span<const double> ys);

// Centered moving average; the window shrinks symmetrically near the ends.
PerformanceCurve smooth_for_plot(const PerformanceCurve& curve, int window);

}  // namespace tutor_rl::metrics
