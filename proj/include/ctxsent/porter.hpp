#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <utility>

namespace ctxsent {

// Porter (1980) suffix-stripping stemmer, original five-step formulation
// (no later departures such as the "logi" rule or the short-word guard).
// Input must be lowercase ASCII letters; anything else is returned as is.
class PorterStemmer {
 public:
  std::string operator()(std::string_view token) const {
    if (token.empty() || !std::all_of(token.begin(), token.end(),
                                      [](char c) { return c >= 'a' && c <= 'z'; })) {
      return std::string(token);
    }
    std::string w(token);
    step1a(w);
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5a(w);
    step5b(w);
    return w;
  }

 private:
  using Rule = std::pair<std::string_view, std::string_view>;

  static bool is_consonant(const std::string& w, std::size_t i) {
    switch (w[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !is_consonant(w, i - 1);
      default:
        return true;
    }
  }

  // m in [C](VC){m}[V], over the first `len` letters.
  static int measure(const std::string& w, std::size_t len) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < len; ++i) {
      const bool c = is_consonant(w, i);
      if (c && prev_vowel) ++m;
      prev_vowel = !c;
    }
    return m;
  }

  static bool has_vowel(const std::string& w, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i)
      if (!is_consonant(w, i)) return true;
    return false;
  }

  // *d: ends with a double consonant.
  static bool ends_double_consonant(const std::string& w, std::size_t len) {
    return len >= 2 && w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
  }

  // *o: ends cvc, where the final c is not w, x or y.
  static bool ends_cvc(const std::string& w, std::size_t len) {
    if (len < 3) return false;
    if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1))
      return false;
    const char last = w[len - 1];
    return last != 'w' && last != 'x' && last != 'y';
  }

  static bool ends_with(const std::string& w, std::string_view s) {
    return w.size() >= s.size() && std::string_view(w).substr(w.size() - s.size()) == s;
  }

  // Finds the longest matching suffix among `rules` and, when the stem left
  // after removing it has measure > min_m, substitutes the replacement.
  // Returns true if some suffix matched (whether or not it was replaced).
  template <std::size_t N>
  static bool apply_longest(std::string& w, const std::array<Rule, N>& rules, int min_m) {
    const Rule* best = nullptr;
    for (const auto& r : rules) {
      if (ends_with(w, r.first) && (!best || r.first.size() > best->first.size())) best = &r;
    }
    if (!best) return false;
    const std::size_t stem_len = w.size() - best->first.size();
    if (measure(w, stem_len) > min_m) {
      w.resize(stem_len);
      w.append(best->second);
    }
    return true;
  }

  static void step1a(std::string& w) {
    if (ends_with(w, "sses")) {
      w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
      w.resize(w.size() - 2);
    } else if (ends_with(w, "ss")) {
      // unchanged
    } else if (ends_with(w, "s")) {
      w.pop_back();
    }
  }

  static void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
      if (measure(w, w.size() - 3) > 0) w.pop_back();
      return;
    }
    bool stripped = false;
    if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
      w.resize(w.size() - 2);
      stripped = true;
    } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
      w.resize(w.size() - 3);
      stripped = true;
    }
    if (!stripped) return;

    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w.push_back('e');
    } else if (ends_double_consonant(w, w.size())) {
      const char last = w.back();
      if (last != 'l' && last != 's' && last != 'z') w.pop_back();
    } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
      w.push_back('e');
    }
  }

  static void step1c(std::string& w) {
    if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';
  }

  static void step2(std::string& w) {
    static constexpr std::array<Rule, 20> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_longest(w, rules, 0);
  }

  static void step3(std::string& w) {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_longest(w, rules, 0);
  }

  static void step4(std::string& w) {
    static constexpr std::array<Rule, 18> rules{{
        {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},  {"able", ""},
        {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""}, {"ent", ""}, {"ou", ""},
        {"ism", ""},  {"ate", ""},  {"iti", ""},  {"ous", ""}, {"ive", ""}, {"ize", ""},
    }};
    // (m>1 and (*S or *T)) ION competes with the table above on length;
    // "ion" shares no suffix with those entries, so it can be checked first.
    if (ends_with(w, "ion")) {
      const std::size_t stem_len = w.size() - 3;
      if (stem_len > 0 && (w[stem_len - 1] == 's' || w[stem_len - 1] == 't') &&
          measure(w, stem_len) > 1) {
        w.resize(stem_len);
      }
      return;
    }
    apply_longest(w, rules, 1);
  }

  static void step5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    const std::size_t stem_len = w.size() - 1;
    const int m = measure(w, stem_len);
    if (m > 1 || (m == 1 && !ends_cvc(w, stem_len))) w.pop_back();
  }

  static void step5b(std::string& w) {
    if (measure(w, w.size()) > 1 && ends_double_consonant(w, w.size()) && w.back() == 'l')
      w.pop_back();
  }
};

inline std::string porter_stem(std::string_view token) { return PorterStemmer{}(token); }

}  // namespace ctxsent
