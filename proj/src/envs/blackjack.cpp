#include <algorithm>

#include "tutor_rl/envs/games.hpp"

namespace tutor_rl::envs {

void BlackjackEnv::Hand::add(int card) {
  hard_sum += card;
  if (card == 1) has_ace = true;
}

std::vector<std::string> BlackjackEnv::action_names() const { return {"stick", "hit"}; }

std::string BlackjackEnv::observation_description() const {
  return "player's current sum, the value of the dealer's face-up card (1-10, where 1 is an ace) "
         "and whether the player holds a usable ace";
}

int BlackjackEnv::draw_card() {
  std::uniform_int_distribution<int> rank(1, 13);
  return std::min(rank(rng_), 10);
}

Observation BlackjackEnv::reset(std::uint64_t seed) {
  rng_.seed(seed);
  return reset();
}

Observation BlackjackEnv::reset() {
  player_ = Hand{};
  dealer_ = Hand{};
  player_.add(draw_card());
  player_.add(draw_card());
  dealer_showing_ = draw_card();
  dealer_.add(dealer_showing_);
  dealer_.add(draw_card());
  done_ = false;
  return observe();
}

void BlackjackEnv::force_state(int player_hard_sum, bool player_has_ace, int dealer_showing,
                               int dealer_hidden) {
  player_ = Hand{player_hard_sum, player_has_ace};
  dealer_ = Hand{};
  dealer_showing_ = dealer_showing;
  dealer_.add(dealer_showing);
  dealer_.add(dealer_hidden);
  done_ = false;
}

BlackjackObservation BlackjackEnv::observe() const {
  return BlackjackObservation{player_.value(), dealer_showing_, player_.usable_ace()};
}

StepResult BlackjackEnv::step(ActionId action) {
  if (done_) throw EpisodeFinished();
  if (action.value >= action_count()) throw IllegalAction("blackjack action out of range");

  StepResult result;
  if (action.value == kHit) {
    player_.add(draw_card());
    if (player_.value() > 21) {
      done_ = true;
      result.reward = -1.0;
      result.terminated = true;
    }
  } else {
    while (dealer_.value() < 17) dealer_.add(draw_card());
    const int player = player_.value();
    const int dealer = dealer_.value();
    if (dealer > 21 || player > dealer) {
      result.reward = 1.0;
    } else if (player < dealer) {
      result.reward = -1.0;
    }
    done_ = true;
    result.terminated = true;
  }
  result.observation = observe();
  return result;
}

std::vector<double> BlackjackEnv::encode(const Observation& obs) const {
  const auto& o = std::get<BlackjackObservation>(obs);
  return {o.player_sum / 21.0, o.dealer_card / 10.0, o.usable_ace ? 1.0 : 0.0};
}

}  // namespace tutor_rl::envs
