#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ctxsent/emoticons.hpp"
#include "ctxsent/porter.hpp"

namespace ctxsent {

// Bumped whenever any normalization rule changes; stored in model bundles.
inline constexpr std::string_view kPreprocessVersion = "pp-1";

inline constexpr std::string_view kUrlToken = "URL";
inline constexpr std::string_view kUsernameToken = "USERNAME";

using TokenSequence = std::vector<std::string>;

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}
inline bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}
inline bool is_sentinel(std::string_view s) { return s == kUrlToken || s == kUsernameToken; }

inline std::string_view trim_punct(std::string_view s) {
  while (!s.empty() && is_ascii_punct(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ascii_punct(s.back())) s.remove_suffix(1);
  return s;
}

inline bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

}  // namespace detail

// Replaces links with "URL". A link is a scheme "http://" or "https://"
// followed by non-whitespace, or "www." not preceded by a word character and
// followed by non-whitespace. Scheme and "www" match case-insensitively.
inline std::string replace_urls(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t prefix = 0;
    if (detail::starts_with_ci(text, i, "https://")) {
      prefix = 8;
    } else if (detail::starts_with_ci(text, i, "http://")) {
      prefix = 7;
    } else if (detail::starts_with_ci(text, i, "www.") &&
               (i == 0 || !detail::is_word_char(text[i - 1]))) {
      prefix = 4;
    }
    if (prefix && i + prefix < text.size() && !detail::is_space(text[i + prefix])) {
      std::size_t j = i + prefix;
      while (j < text.size() && !detail::is_space(text[j])) ++j;
      out.append(kUrlToken);
      i = j;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

// Replaces "@name" with "USERNAME" when the "@" begins a whitespace-delimited
// token and is followed by at least one word character.
inline std::string replace_mentions(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const bool at_token_start = i == 0 || detail::is_space(text[i - 1]);
    if (text[i] == '@' && at_token_start && i + 1 < text.size() &&
        detail::is_word_char(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < text.size() && detail::is_word_char(text[j])) ++j;
      out.append(kUsernameToken);
      i = j;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

// ASCII lowercase, except whitespace-delimited chunks whose core (punctuation
// trimmed) is a sentinel token.
inline std::string lowercase(std::string_view text) {
  std::string out(text);
  std::size_t i = 0;
  while (i < out.size()) {
    if (detail::is_space(out[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < out.size() && !detail::is_space(out[j])) ++j;
    if (!detail::is_sentinel(detail::trim_punct(std::string_view(out).substr(i, j - i)))) {
      for (std::size_t k = i; k < j; ++k) {
        if (out[k] >= 'A' && out[k] <= 'Z') out[k] = static_cast<char>(out[k] - 'A' + 'a');
      }
    }
    i = j;
  }
  return out;
}

// Shortens every run of one repeated character longer than two to exactly two.
inline std::string squash_repeats(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    run = (i > 0 && text[i] == text[i - 1]) ? run + 1 : 1;
    if (run <= 2) out.push_back(text[i]);
  }
  return out;
}

// Splits on whitespace and trims leading/trailing ASCII punctuation from each
// piece; internal characters (apostrophes included) are kept. Pieces that are
// all punctuation vanish.
inline TokenSequence tokenize(std::string_view text) {
  TokenSequence tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !detail::is_space(text[j])) ++j;
    if (j > i) {
      auto core = detail::trim_punct(text.substr(i, j - i));
      if (!core.empty()) tokens.emplace_back(core);
    }
    i = j;
  }
  return tokens;
}

// A token the stemmer would erase entirely (a lone "s") is kept as is.
inline std::string stem(std::string_view token) {
  if (detail::is_sentinel(token)) return std::string(token);
  std::string s = porter_stem(token);
  return s.empty() ? std::string(token) : s;
}

// Full normalization pipeline. The stage order is fixed:
// emoticons, links, mentions, case, repeats, tokenization, stemming.
// An empty result means the record carries no usable text.
inline TokenSequence preprocess(std::string_view text) {
  std::string s = strip_emoticons(text);
  s = replace_urls(s);
  s = replace_mentions(s);
  s = lowercase(s);
  s = squash_repeats(s);
  TokenSequence tokens = tokenize(s);
  for (auto& t : tokens) t = stem(t);
  return tokens;
}

}  // namespace ctxsent
