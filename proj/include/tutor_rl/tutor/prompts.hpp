#pragma once

#include <map>
#include <string>
#include <vector>

#include "tutor_rl/envs/environment.hpp"

namespace tutor_rl::tutor {

// Python-style dict literal, e.g. {0: 'stick', 1: 'hit'}.
std::string format_action_dictionary(const std::map<int, std::string>& actions);

// Teacher system message for one environment. Throws std::invalid_argument on
// an empty environment name, observation description or action dictionary.
std::string build_system_prompt(const std::string& env_name, const std::string& observation_description,
                                const std::map<int, std::string>& actions);

std::string build_system_prompt(const envs::Environment& env);

// Model-file text registering the system message server-side.
std::string make_modelfile(const std::string& base_model, const std::string& system_prompt);

}  // namespace tutor_rl::tutor
