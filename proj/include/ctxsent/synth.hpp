#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ctxsent/corpus.hpp"
#include "ctxsent/emoticons.hpp"
#include "ctxsent/error.hpp"
#include "ctxsent/localtime.hpp"
#include "ctxsent/priors.hpp"
#include "ctxsent/random.hpp"
#include "ctxsent/states.hpp"

namespace ctxsent {

// Parameters of a synthetic corpus. Sentiment of each tweet is drawn from
//
//   P(positive) = clamp(logistic(logit(base) + sum of cell shifts), 0.01, 0.99)
//
// where each state, hour, day, month and author cell carries an additive
// log-odds shift. Random shifts are drawn uniformly from [-scale, scale] per
// category; explicit `shift.<category>.<cell>` entries override them.
struct SynthConfig {
  std::uint64_t n_tweets = 100000;
  std::uint64_t seed = 1;
  double base_positive_rate = 0.62;

  std::size_t lexicon_size = 2000;
  double word_zipf_exponent = 1.0;
  double sentiment_word_fraction = 0.15;
  double word_polarity_strength = 1.0;
  std::size_t min_length = 4;
  std::size_t max_length = 12;

  std::size_t n_authors = 5000;
  double author_zipf_exponent = 1.1;

  double state_scale = 0.0;
  double hour_scale = 0.0;
  double dow_scale = 0.0;
  double month_scale = 0.0;
  double author_scale = 0.0;
  // State x hour interaction shifts, which the per-category model cannot
  // represent.
  double interaction_scale = 0.0;

  std::map<std::string, double> shifts;  // "state.CA", "hour.13", "dow.4", "month.7", "author.7"

  std::int64_t start_ts = 1325376000;  // 2012-01-01T00:00Z
  std::int64_t end_ts = 1420070400;    // 2015-01-01T00:00Z

  double url_rate = 0.05;
  double mention_rate = 0.05;

  void validate() const {
    auto fail = [](const std::string& m) { throw InputError("synth config: " + m); };
    if (n_tweets == 0) fail("n_tweets must be > 0");
    if (!(base_positive_rate > 0.0 && base_positive_rate < 1.0)) fail("base_positive_rate must be in (0, 1)");
    if (lexicon_size < 2) fail("lexicon_size must be >= 2");
    if (!(sentiment_word_fraction >= 0.0 && sentiment_word_fraction <= 1.0))
      fail("sentiment_word_fraction must be in [0, 1]");
    if (min_length < 1 || min_length > max_length) fail("need 1 <= min_length <= max_length");
    if (n_authors < 1) fail("n_authors must be >= 1");
    if (end_ts <= start_ts) fail("end_ts must exceed start_ts");
    for (double s : {state_scale, hour_scale, dow_scale, month_scale, author_scale, interaction_scale,
                     word_polarity_strength, word_zipf_exponent, author_zipf_exponent})
      if (!(s >= 0.0) || !std::isfinite(s)) fail("scales and exponents must be finite and >= 0");
    for (double r : {url_rate, mention_rate})
      if (!(r >= 0.0 && r <= 1.0)) fail("rates must be in [0, 1]");
    for (const auto& [k, v] : shifts) {
      if (!std::isfinite(v)) fail("shift " + k + " is not finite");
      parse_shift_key(k);
    }
  }

  struct ShiftKey {
    Category category;
    std::size_t cell;
  };

  // "state.CA" -> (State, index of CA); calendar cells are numeric, days 0-6
  // from Monday, months 1-12, authors by rank from 0.
  ShiftKey parse_shift_key(const std::string& key) const {
    auto dot = key.find('.');
    auto bad = [&]() { return InputError("synth config: bad shift key \"" + key + "\""); };
    if (dot == std::string::npos) throw bad();
    auto cat = parse_category(key.substr(0, dot));
    const std::string cell = key.substr(dot + 1);
    if (!cat) throw bad();
    if (*cat == Category::State) {
      auto s = StateCode::parse(cell);
      if (!s) throw bad();
      return {*cat, s->index()};
    }
    std::size_t v = 0, used = 0;
    try {
      v = std::stoul(cell, &used);
    } catch (...) {
      throw bad();
    }
    if (used != cell.size()) throw bad();
    switch (*cat) {
      case Category::Hour: if (v > 23) throw bad(); return {*cat, v};
      case Category::Dow: if (v > 6) throw bad(); return {*cat, v};
      case Category::Month: if (v < 1 || v > 12) throw bad(); return {*cat, v - 1};
      default: if (v >= n_authors) throw bad(); return {*cat, v};
    }
  }

  // Flat "key = value" lines; '#' starts a comment.
  static SynthConfig parse(std::istream& in) {
    SynthConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw InputError("synth config line " + std::to_string(lineno) + ": expected key = value");
      c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    c.validate();
    return c;
  }

  void set(const std::string& key, const std::string& value) {
    auto num = [&]() {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(value, &used);
      } catch (...) {
        used = 0;
      }
      if (used == 0 || used != value.size()) throw InputError("synth config: bad value for " + key);
      return v;
    };
    auto count = [&]() {
      const double v = num();
      if (v < 0 || v != std::floor(v)) throw InputError("synth config: " + key + " must be a non-negative integer");
      return static_cast<std::uint64_t>(v);
    };
    if (key.rfind("shift.", 0) == 0) {
      shifts[key.substr(6)] = num();
      return;
    }
    std::map<std::string, double*> reals{
        {"base_positive_rate", &base_positive_rate}, {"word_zipf_exponent", &word_zipf_exponent},
        {"sentiment_word_fraction", &sentiment_word_fraction}, {"word_polarity_strength", &word_polarity_strength},
        {"author_zipf_exponent", &author_zipf_exponent}, {"state_scale", &state_scale},
        {"hour_scale", &hour_scale}, {"dow_scale", &dow_scale}, {"month_scale", &month_scale},
        {"author_scale", &author_scale}, {"interaction_scale", &interaction_scale},
        {"url_rate", &url_rate}, {"mention_rate", &mention_rate}};
    if (auto it = reals.find(key); it != reals.end()) {
      *it->second = num();
      return;
    }
    if (key == "n_tweets") n_tweets = count();
    else if (key == "seed") seed = count();
    else if (key == "lexicon_size") lexicon_size = count();
    else if (key == "min_length") min_length = count();
    else if (key == "max_length") max_length = count();
    else if (key == "n_authors") n_authors = count();
    else if (key == "start_ts") start_ts = static_cast<std::int64_t>(num());
    else if (key == "end_ts") end_ts = static_cast<std::int64_t>(num());
    else throw InputError("synth config: unknown key " + key);
  }

  // Canonical "key = value" rendering; parse(to_string()) round-trips.
  std::string to_string() const {
    std::ostringstream o;
    o.precision(17);
    o << "n_tweets = " << n_tweets << "\nseed = " << seed << "\nbase_positive_rate = " << base_positive_rate
      << "\nlexicon_size = " << lexicon_size << "\nword_zipf_exponent = " << word_zipf_exponent
      << "\nsentiment_word_fraction = " << sentiment_word_fraction
      << "\nword_polarity_strength = " << word_polarity_strength << "\nmin_length = " << min_length
      << "\nmax_length = " << max_length << "\nn_authors = " << n_authors
      << "\nauthor_zipf_exponent = " << author_zipf_exponent << "\nstate_scale = " << state_scale
      << "\nhour_scale = " << hour_scale << "\ndow_scale = " << dow_scale << "\nmonth_scale = " << month_scale
      << "\nauthor_scale = " << author_scale << "\ninteraction_scale = " << interaction_scale
      << "\nstart_ts = " << start_ts << "\nend_ts = " << end_ts << "\nurl_rate = " << url_rate
      << "\nmention_rate = " << mention_rate << "\n";
    for (const auto& [k, v] : shifts) o << "shift." << k << " = " << v << "\n";
    return o.str();
  }
};

inline constexpr double kSynthMinRate = 0.01;
inline constexpr double kSynthMaxRate = 0.99;

// The sampled "world": cell shifts, lexicon and word distributions.
class SynthWorld {
 public:
  explicit SynthWorld(const SynthConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(cfg_.seed);
    auto draw = [&](std::vector<double>& v, std::size_t n, double scale) {
      v.resize(n);
      for (auto& x : v) x = scale > 0.0 ? rng.uniform(-scale, scale) : 0.0;
    };
    draw(shifts_[idx(Category::State)], StateCode::kCount, cfg_.state_scale);
    draw(shifts_[idx(Category::Hour)], 24, cfg_.hour_scale);
    draw(shifts_[idx(Category::Dow)], 7, cfg_.dow_scale);
    draw(shifts_[idx(Category::Month)], 12, cfg_.month_scale);
    draw(shifts_[idx(Category::Author)], cfg_.n_authors, cfg_.author_scale);
    draw(interaction_, StateCode::kCount * 24, cfg_.interaction_scale);
    for (const auto& [k, v] : cfg_.shifts) {
      const auto key = cfg_.parse_shift_key(k);
      shifts_[idx(key.category)][key.cell] = v;
    }

    std::vector<double> author_w(cfg_.n_authors);
    for (std::size_t i = 0; i < author_w.size(); ++i)
      author_w[i] = 1.0 / std::pow(static_cast<double>(i + 1), cfg_.author_zipf_exponent);
    authors_ = DiscreteSampler(author_w);

    // Lexicon: "w<n>" for n without a run of three equal digits, so tokens
    // pass through normalization unchanged.
    for (std::uint64_t n = 1; lexicon_.size() < cfg_.lexicon_size; ++n) {
      const std::string s = "w" + std::to_string(n);
      bool triple = false;
      for (std::size_t i = 2; i < s.size(); ++i) triple |= s[i] == s[i - 1] && s[i] == s[i - 2];
      if (!triple) lexicon_.push_back(s);
    }
    polarity_.resize(cfg_.lexicon_size);
    std::vector<double> pos_w(cfg_.lexicon_size), neg_w(cfg_.lexicon_size);
    for (std::size_t i = 0; i < cfg_.lexicon_size; ++i) {
      if (rng.bernoulli(cfg_.sentiment_word_fraction)) polarity_[i] = rng.bernoulli(0.5) ? 1 : -1;
      const double base = 1.0 / std::pow(static_cast<double>(i + 1), cfg_.word_zipf_exponent);
      pos_w[i] = base * std::exp(cfg_.word_polarity_strength * polarity_[i]);
      neg_w[i] = base * std::exp(-cfg_.word_polarity_strength * polarity_[i]);
    }
    pos_words_ = DiscreteSampler(pos_w);
    neg_words_ = DiscreteSampler(neg_w);
  }

  const SynthConfig& config() const { return cfg_; }

  double shift(Category c, std::size_t cell) const {
    return shifts_[idx(c)][cell];
  }
  double interaction(std::size_t state, int hour) const {
    return interaction_[state * 24 + static_cast<std::size_t>(hour)];
  }

  // Probability that a tweet with this context is positive.
  double positive_probability(StateCode state, const LocalTime& lt, std::size_t author) const {
    const double base = std::log(cfg_.base_positive_rate / (1.0 - cfg_.base_positive_rate));
    const double z = base + shift(Category::State, state.index()) +
                     shift(Category::Hour, static_cast<std::size_t>(lt.hour)) +
                     shift(Category::Dow, static_cast<std::size_t>(lt.dow)) +
                     shift(Category::Month, static_cast<std::size_t>(lt.month - 1)) +
                     shift(Category::Author, author) + interaction(state.index(), lt.hour);
    return std::clamp(1.0 / (1.0 + std::exp(-z)), kSynthMinRate, kSynthMaxRate);
  }

  static std::string author_id(std::size_t rank) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%05zu", rank);
    return buf;
  }

  const std::vector<std::string>& lexicon() const { return lexicon_; }
  int polarity(std::size_t word) const { return polarity_[word]; }

  // Draws the records. Text carries an emoticon matching the sampled label.
  std::vector<RawRecord> generate() const {
    Rng rng(cfg_.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<RawRecord> out;
    out.reserve(cfg_.n_tweets);
    const auto span = static_cast<std::uint64_t>(cfg_.end_ts - cfg_.start_ts);
    for (std::uint64_t i = 0; i < cfg_.n_tweets; ++i) {
      RawRecord r;
      r.timestamp_utc = cfg_.start_ts + static_cast<std::int64_t>(rng.below(span));
      r.state = StateCode::from_index(rng.below(StateCode::kCount));
      const std::size_t author = authors_(rng);
      r.author_id = author_id(author);
      const double p = positive_probability(r.state, localize(r.timestamp_utc, r.state), author);
      const bool positive = rng.bernoulli(p);

      std::string text;
      if (rng.bernoulli(cfg_.mention_rate)) text += "@friend" + std::to_string(rng.below(100)) + " ";
      const std::size_t len = cfg_.min_length + rng.below(cfg_.max_length - cfg_.min_length + 1);
      const auto& words = positive ? pos_words_ : neg_words_;
      for (std::size_t k = 0; k < len; ++k) {
        if (k) text += ' ';
        text += lexicon_[words(rng)];
      }
      if (rng.bernoulli(cfg_.url_rate)) text += " http://t.co/" + std::to_string(rng.below(1000000));
      const auto& emoticons = positive ? kPositiveEmoticons : kNegativeEmoticons;
      text += ' ';
      text += emoticons[rng.below(emoticons.size())];
      r.text = std::move(text);
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  static std::size_t idx(Category c) { return static_cast<std::size_t>(c); }

  SynthConfig cfg_;
  std::array<std::vector<double>, 5> shifts_;  // by Category
  std::vector<double> interaction_;
  DiscreteSampler authors_{std::vector<double>{1.0}};
  std::vector<std::string> lexicon_;
  std::vector<int> polarity_;
  DiscreteSampler pos_words_{std::vector<double>{1.0}};
  DiscreteSampler neg_words_{std::vector<double>{1.0}};
};

inline std::vector<RawRecord> generate(const SynthConfig& cfg) { return SynthWorld(cfg).generate(); }

// Writes records in the corpus file format, one per line.
inline void write_corpus(std::ostream& out, const std::vector<RawRecord>& records) {
  for (const auto& r : records) out << format_record(r) << '\n';
}

}  // namespace ctxsent
