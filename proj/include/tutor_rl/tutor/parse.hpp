#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "tutor_rl/envs/types.hpp"

namespace tutor_rl::tutor {

enum class ParseFailure { missing_tags, not_integer, out_of_range };

std::string to_string(ParseFailure failure);

using ParsedAction = std::variant<envs::ActionId, ParseFailure>;

// Extracts the advised action from free-form tutor text.
//
// The first <action>N</action> pair whose body (surrounding whitespace
// ignored) is a base-10 integer wins, and N must satisfy
// 0 <= N < action_count. Classification when nothing usable is found:
//   missing_tags  - no <action>...</action> pair at all
//   not_integer   - pairs exist but none holds an integer
//   out_of_range  - the first integer pair is outside the action set
// Never throws.
ParsedAction parse_action(std::string_view raw, std::size_t action_count);

}  // namespace tutor_rl::tutor
