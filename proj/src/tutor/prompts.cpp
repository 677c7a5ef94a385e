#include "tutor_rl/tutor/prompts.hpp"

#include <sstream>
#include <stdexcept>

namespace tutor_rl::tutor {

std::string format_action_dictionary(const std::map<int, std::string>& actions) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [index, label] : actions) {
    if (!first) out << ", ";
    out << index << ": '" << label << '\'';
    first = false;
  }
  out << '}';
  return out.str();
}

std::string build_system_prompt(const std::string& env_name, const std::string& observation_description,
                                const std::map<int, std::string>& actions) {
  if (env_name.empty()) throw std::invalid_argument("system prompt needs an environment name");
  if (observation_description.empty()) throw std::invalid_argument("system prompt needs an observation description");
  if (actions.empty()) throw std::invalid_argument("system prompt needs a non-empty action dictionary");

  std::ostringstream out;
  out << "You are a system used as a teacher for Reinforcement\n"
         "learning (RL) agent. Your goal is to use your reasoning\n"
         "to help with the convergence of optimal policy of\n"
         "the RL agent.\n"
      << "The environment you will guide the agent is " << env_name << "\n"
      << "You will be given the " << observation_description << ".\n"
      << "\n"
      << "You can select an action from this dictionary: " << format_action_dictionary(actions) << ".\n"
      << "\n"
         "Output: Clarify the current state and suggest the best\n"
         "action for the agent to take. Output the action's\n"
         "index (key from the actions dictionary) in the\n"
         "<action></action> tags (e.g. <action>3</action>).";
  return out.str();
}

std::string build_system_prompt(const envs::Environment& env) {
  std::map<int, std::string> actions;
  const auto names = env.action_names();
  for (std::size_t i = 0; i < names.size(); ++i) actions.emplace(static_cast<int>(i), names[i]);
  return build_system_prompt(env.name(), env.observation_description(), actions);
}

std::string make_modelfile(const std::string& base_model, const std::string& system_prompt) {
  if (base_model.empty()) throw std::invalid_argument("model file needs a base model");
  return "FROM " + base_model + "\nSYSTEM \"\"\"" + system_prompt + "\"\"\"\n";
}

}  // namespace tutor_rl::tutor
