#include "tutor_rl/tutor/parse.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace tutor_rl::tutor {

namespace {

constexpr std::string_view kOpen = "<action>";
constexpr std::string_view kClose = "</action>";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

enum class IntegerKind { not_integer, in_range_of_int64, overflow };

struct IntegerBody {
  IntegerKind kind = IntegerKind::not_integer;
  long long value = 0;
};

IntegerBody parse_integer(std::string_view body) {
  body = trim(body);
  std::string_view digits = body;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (digits.empty()) return {};
  for (char c : digits) {
    if (c < '0' || c > '9') return {};
  }
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) return {IntegerKind::overflow, 0};
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return {};
  return {IntegerKind::in_range_of_int64, negative ? -value : value};
}

}  // namespace

std::string to_string(ParseFailure failure) {
  switch (failure) {
    case ParseFailure::missing_tags: return "missing_tags";
    case ParseFailure::not_integer: return "not_integer";
    case ParseFailure::out_of_range: return "out_of_range";
  }
  return "unknown";
}

ParsedAction parse_action(std::string_view raw, std::size_t action_count) {
  bool saw_pair = false;
  std::size_t cursor = 0;
  while (true) {
    const std::size_t open = raw.find(kOpen, cursor);
    if (open == std::string_view::npos) break;
    const std::size_t body_start = open + kOpen.size();
    const std::size_t close = raw.find(kClose, body_start);
    if (close == std::string_view::npos) break;
    const std::string_view body = raw.substr(body_start, close - body_start);
    // A nested opening tag means this opener is stray; resume at the inner one.
    if (const std::size_t inner = body.find(kOpen); inner != std::string_view::npos) {
      cursor = body_start + inner;
      continue;
    }
    saw_pair = true;
    const IntegerBody parsed = parse_integer(body);
    if (parsed.kind == IntegerKind::overflow) return ParseFailure::out_of_range;
    if (parsed.kind == IntegerKind::in_range_of_int64) {
      if (parsed.value < 0 || static_cast<unsigned long long>(parsed.value) >= action_count) {
        return ParseFailure::out_of_range;
      }
      return envs::ActionId{static_cast<std::size_t>(parsed.value)};
    }
    cursor = close + kClose.size();
  }
  return saw_pair ? ParseFailure::not_integer : ParseFailure::missing_tags;
}

}  // namespace tutor_rl::tutor
