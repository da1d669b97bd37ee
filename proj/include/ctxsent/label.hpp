#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace ctxsent {

// Sentiment polarity. Only the two polar classes exist; there is no neutral.
enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

// -1 for negative, +1 for positive.
constexpr int score(Label l) { return l == Label::Positive ? 1 : -1; }

constexpr Label opposite(Label l) {
  return l == Label::Positive ? Label::Negative : Label::Positive;
}

constexpr std::string_view to_string(Label l) {
  return l == Label::Positive ? "positive" : "negative";
}

constexpr std::optional<Label> parse_label(std::string_view s) {
  if (s == "positive" || s == "pos" || s == "+1" || s == "1") return Label::Positive;
  if (s == "negative" || s == "neg" || s == "-1") return Label::Negative;
  return std::nullopt;
}

}  // namespace ctxsent
