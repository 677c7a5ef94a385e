#include "tutor_rl/tutor/schedule.hpp"

#include <stdexcept>

namespace tutor_rl::tutor {

TutorSchedule::TutorSchedule(double p_initial, double p_final, std::int64_t theta)
    : p_initial_(p_initial), p_final_(p_final), theta_(theta) {
  if (theta <= 0) throw std::invalid_argument("decay horizon theta must be positive");
  if (!(p_final >= 0.0 && p_final <= p_initial && p_initial <= 1.0)) {
    throw std::invalid_argument("require 0 <= p_final <= p_initial <= 1");
  }
}

double TutorSchedule::probability_at(std::int64_t tau) const {
  if (tau >= theta_) return p_final_;
  const double decayed =
      p_initial_ - (static_cast<double>(tau) / static_cast<double>(theta_)) * (p_initial_ - p_final_);
  return decayed < p_final_ ? p_final_ : decayed;
}

}  // namespace tutor_rl::tutor
