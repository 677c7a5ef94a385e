#pragma once

#include <cstdint>

namespace tutor_rl::tutor {

// Linear decay of the probability of consulting the tutor:
//   P(tau) = p_initial - (tau / theta) * (p_initial - p_final),
// held at p_final once tau >= theta.
class TutorSchedule {
 public:
  TutorSchedule(double p_initial, double p_final, std::int64_t theta);
  explicit TutorSchedule(std::int64_t theta) : TutorSchedule(1.0, 0.1, theta) {}

  double current_probability() const { return probability_at(tau_); }
  double probability_at(std::int64_t tau) const;

  void advance() { ++tau_; }
  std::int64_t tau() const { return tau_; }
  std::int64_t theta() const { return theta_; }
  double p_initial() const { return p_initial_; }
  double p_final() const { return p_final_; }

  // Test and forcing hook.
  void set_tau(std::int64_t tau) { tau_ = tau; }

 private:
  double p_initial_;
  double p_final_;
  std::int64_t theta_;
  std::int64_t tau_ = 0;
};

}  // namespace tutor_rl::tutor
