#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "ctxsent/label.hpp"

namespace ctxsent {

// The six emoticons used for distant supervision. Three-character forms are
// listed first so matching is longest-first.
inline constexpr std::array<std::string_view, 3> kPositiveEmoticons{":-)", ": )", ":)"};
inline constexpr std::array<std::string_view, 3> kNegativeEmoticons{":-(", ": (", ":("};

namespace detail {

// Length of the emoticon starting at text[pos] (0 if none) and its polarity.
inline std::size_t match_emoticon(std::string_view text, std::size_t pos, Label* polarity) {
  if (text[pos] != ':') return 0;
  for (std::size_t len : {3u, 2u}) {
    if (pos + len > text.size()) continue;
    auto candidate = text.substr(pos, len);
    for (auto e : kPositiveEmoticons) {
      if (e == candidate) {
        if (polarity) *polarity = Label::Positive;
        return len;
      }
    }
    for (auto e : kNegativeEmoticons) {
      if (e == candidate) {
        if (polarity) *polarity = Label::Negative;
        return len;
      }
    }
  }
  return 0;
}

}  // namespace detail

struct EmoticonScan {
  bool positive = false;
  bool negative = false;
};

// Which polarities occur, matching longest-first and consuming matched text.
inline EmoticonScan scan_emoticons(std::string_view text) {
  EmoticonScan found;
  for (std::size_t i = 0; i < text.size();) {
    Label l{};
    if (auto n = detail::match_emoticon(text, i, &l)) {
      (l == Label::Positive ? found.positive : found.negative) = true;
      i += n;
    } else {
      ++i;
    }
  }
  return found;
}

// Distant-supervision label. Absent when the text carries no emoticon or
// carries emoticons of both polarities.
inline std::optional<Label> label_by_emoticon(std::string_view text) {
  const auto found = scan_emoticons(text);
  if (found.positive == found.negative) return std::nullopt;
  return found.positive ? Label::Positive : Label::Negative;
}

// Removes every emoticon occurrence. Removal is repeated until no emoticon
// remains, since deleting one can splice a new one together (":-:))").
inline std::string strip_emoticons(std::string_view text) {
  std::string cur(text);
  for (;;) {
    std::string out;
    out.reserve(cur.size());
    bool removed = false;
    for (std::size_t i = 0; i < cur.size();) {
      if (auto n = detail::match_emoticon(cur, i, nullptr)) {
        i += n;
        removed = true;
      } else {
        out.push_back(cur[i++]);
      }
    }
    if (!removed) return out;
    cur = std::move(out);
  }
}

}  // namespace ctxsent
