#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ranges>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctxsent/corpus.hpp"
#include "ctxsent/error.hpp"
#include "ctxsent/label.hpp"

namespace ctxsent {

enum class Category : std::uint8_t { State, Hour, Dow, Month, Author };

inline constexpr std::array<Category, 5> kAllCategories{
    Category::State, Category::Hour, Category::Dow, Category::Month, Category::Author};

constexpr std::string_view to_string(Category c) {
  switch (c) {
    case Category::State: return "state";
    case Category::Hour: return "hour";
    case Category::Dow: return "dow";
    case Category::Month: return "month";
    case Category::Author: return "author";
  }
  return "?";
}

inline std::optional<Category> parse_category(std::string_view s) {
  for (auto c : kAllCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

// Subset of the five context categories.
class CategorySet {
 public:
  constexpr CategorySet() = default;
  constexpr CategorySet(std::initializer_list<Category> cs) {
    for (auto c : cs) insert(c);
  }
  static constexpr CategorySet all() {
    return {Category::State, Category::Hour, Category::Dow, Category::Month, Category::Author};
  }
  static constexpr CategorySet none() { return {}; }

  // Comma-separated names, e.g. "state,hour". Empty string gives the empty set.
  static CategorySet parse(std::string_view s) {
    CategorySet out;
    while (!s.empty()) {
      auto comma = s.find(',');
      auto part = s.substr(0, comma);
      if (!part.empty()) {
        auto c = parse_category(part);
        if (!c) throw InputError("unknown category: " + std::string(part));
        out.insert(*c);
      }
      if (comma == std::string_view::npos) break;
      s.remove_prefix(comma + 1);
    }
    return out;
  }

  constexpr void insert(Category c) { bits_ |= bit(c); }
  constexpr void erase(Category c) { bits_ &= static_cast<std::uint8_t>(~bit(c)); }
  constexpr bool contains(Category c) const { return (bits_ & bit(c)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr CategorySet without(Category c) const {
    CategorySet s = *this;
    s.erase(c);
    return s;
  }

  std::string to_string() const {
    std::string out;
    for (auto c : kAllCategories) {
      if (!contains(c)) continue;
      if (!out.empty()) out += ',';
      out += ctxsent::to_string(c);
    }
    return out;
  }

  friend constexpr bool operator==(CategorySet, CategorySet) = default;

 private:
  static constexpr std::uint8_t bit(Category c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

struct CellCounts {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  std::uint64_t total() const { return pos + neg; }
  std::uint64_t of(Label l) const { return l == Label::Positive ? pos : neg; }
  void add(Label l) { ++(l == Label::Positive ? pos : neg); }

  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

inline constexpr std::uint64_t kDefaultAuthorMinTweets = 50;

// Day names in report order.
inline constexpr std::array<std::string_view, 7> kDayNames{"Mon", "Tue", "Wed", "Thu",
                                                           "Fri", "Sat", "Sun"};

struct ReportRow {
  std::string cell;
  std::optional<double> avg_sentiment;  // absent for empty cells
  std::uint64_t count;
};

// Per-category positive/negative counts of a labelled corpus, from which the
// class prior and the per-category context likelihoods are estimated.
class ContextTable {
 public:
  static constexpr double kLaplaceAlpha = 1.0;

  explicit ContextTable(std::uint64_t author_min_tweets = kDefaultAuthorMinTweets)
      : author_min_tweets_(author_min_tweets) {}

  // Counts `records`, each of which must have a complete context.
  template <std::ranges::input_range R>
  static ContextTable fit(const R& records,
                          std::uint64_t author_min_tweets = kDefaultAuthorMinTweets) {
    ContextTable t(author_min_tweets);
    for (const LabeledTweet& r : records) t.add(r.context, r.label);
    if (t.totals_.total() == 0) throw TrainingError("cannot fit context table on an empty corpus");
    return t;
  }

  void add(const Context& ctx, Label label) {
    if (!ctx.complete()) throw InputError("context table requires a complete context");
    if (*ctx.hour < 0 || *ctx.hour > 23 || *ctx.dow < 0 || *ctx.dow > 6 || *ctx.month < 1 ||
        *ctx.month > 12)
      throw InputError("context field out of range");
    state_[ctx.state->index()].add(label);
    hour_[static_cast<std::size_t>(*ctx.hour)].add(label);
    dow_[static_cast<std::size_t>(*ctx.dow)].add(label);
    month_[static_cast<std::size_t>(*ctx.month - 1)].add(label);
    author_[*ctx.author].add(label);
    totals_.add(label);
  }

  const CellCounts& totals() const { return totals_; }
  std::uint64_t author_min_tweets() const { return author_min_tweets_; }
  const std::array<CellCounts, 50>& states() const { return state_; }
  const std::array<CellCounts, 24>& hours() const { return hour_; }
  const std::array<CellCounts, 7>& days() const { return dow_; }
  const std::array<CellCounts, 12>& months() const { return month_; }
  const std::map<std::string, CellCounts>& authors() const { return author_; }

  // Pr(label) over the whole corpus.
  double class_prior(Label label) const {
    return static_cast<double>(totals_.of(label)) / static_cast<double>(totals_.total());
  }

  // An author contributes evidence only with enough tweets behind them.
  bool author_informative(const std::string& author) const {
    auto it = author_.find(author);
    return it != author_.end() && it->second.total() >= author_min_tweets_;
  }

  // log P(cell | label) for one category with add-one smoothing over the
  // category's cell universe. Absent when the context field is missing, or
  // (for authors) the author is unseen or below the tweet threshold.
  std::optional<double> category_log_likelihood(Category c, const Context& ctx, Label label) const {
    const CellCounts* cell = lookup(c, ctx);
    if (!cell) return std::nullopt;
    if (c == Category::Author && cell->total() < author_min_tweets_) return std::nullopt;
    const double num = static_cast<double>(cell->of(label)) + kLaplaceAlpha;
    const double den = static_cast<double>(totals_.of(label)) +
                       kLaplaceAlpha * static_cast<double>(cell_universe(c));
    return std::log(num / den);
  }

  // Sum over the selected categories of log P(cell_c | label).
  double context_log_likelihood(const Context& ctx, Label label,
                                CategorySet categories = CategorySet::all()) const {
    double total = 0.0;
    for (auto c : kAllCategories) {
      if (!categories.contains(c)) continue;
      if (auto ll = category_log_likelihood(c, ctx, label)) total += *ll;
    }
    return total;
  }

  // Number of cells the smoothing spreads over: fixed for the calendar and
  // state categories, the number of distinct authors seen for authors.
  std::size_t cell_universe(Category c) const {
    switch (c) {
      case Category::State: return state_.size();
      case Category::Hour: return hour_.size();
      case Category::Dow: return dow_.size();
      case Category::Month: return month_.size();
      case Category::Author: return author_.size();
    }
    return 0;
  }

  // Cell counts by report key ("CA", "13", "Fri", "7", author id).
  std::optional<CellCounts> cell(Category c, std::string_view key) const {
    switch (c) {
      case Category::State:
        if (auto s = StateCode::parse(key)) return state_[s->index()];
        return std::nullopt;
      case Category::Hour:
        if (auto i = parse_index(key, 0, 23)) return hour_[*i];
        return std::nullopt;
      case Category::Dow:
        for (std::size_t i = 0; i < kDayNames.size(); ++i)
          if (kDayNames[i] == key) return dow_[i];
        return std::nullopt;
      case Category::Month:
        if (auto i = parse_index(key, 1, 12)) return month_[*i - 1];
        return std::nullopt;
      case Category::Author: {
        auto it = author_.find(std::string(key));
        if (it == author_.end()) return std::nullopt;
        return it->second;
      }
    }
    return std::nullopt;
  }

  // (pos - neg) / (pos + neg) of a cell; absent for unknown or empty cells.
  std::optional<double> average_sentiment(Category c, std::string_view key) const {
    auto counts = cell(c, key);
    if (!counts || counts->total() == 0) return std::nullopt;
    return average_sentiment(*counts);
  }

  static double average_sentiment(const CellCounts& counts) {
    return (static_cast<double>(counts.pos) - static_cast<double>(counts.neg)) /
           static_cast<double>(counts.total());
  }

  // One row per cell in natural order: states by code, hours 0-23,
  // Monday..Sunday, months 1-12, authors by id.
  std::vector<ReportRow> report(Category c) const {
    std::vector<ReportRow> rows;
    auto push = [&](std::string key, const CellCounts& counts) {
      std::optional<double> avg;
      if (counts.total() > 0) avg = average_sentiment(counts);
      rows.push_back({std::move(key), avg, counts.total()});
    };
    switch (c) {
      case Category::State:
        for (std::size_t i = 0; i < state_.size(); ++i)
          push(std::string(StateCode::from_index(i).code()), state_[i]);
        break;
      case Category::Hour:
        for (std::size_t i = 0; i < hour_.size(); ++i) push(std::to_string(i), hour_[i]);
        break;
      case Category::Dow:
        for (std::size_t i = 0; i < dow_.size(); ++i) push(std::string(kDayNames[i]), dow_[i]);
        break;
      case Category::Month:
        for (std::size_t i = 0; i < month_.size(); ++i) push(std::to_string(i + 1), month_[i]);
        break;
      case Category::Author:
        for (const auto& [a, counts] : author_) push(a, counts);
        break;
    }
    return rows;
  }

  void save(std::ostream& out) const {
    nlohmann::ordered_json j;
    j["format"] = "ctxsent-context";
    j["version"] = 1;
    j["author_min_tweets"] = author_min_tweets_;
    j["totals"] = {totals_.pos, totals_.neg};
    auto dump_array = [](const auto& cells) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& c : cells) a.push_back({c.pos, c.neg});
      return a;
    };
    j["state"] = dump_array(state_);
    j["hour"] = dump_array(hour_);
    j["dow"] = dump_array(dow_);
    j["month"] = dump_array(month_);
    nlohmann::json authors = nlohmann::json::array();
    for (const auto& [a, c] : author_) authors.push_back({a, c.pos, c.neg});
    j["author"] = std::move(authors);
    out << j.dump(1) << "\n";
  }

  static ContextTable load(std::istream& in) {
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      if (j.at("format") != "ctxsent-context" || j.at("version") != 1)
        throw InputError("context table: unrecognized format");
      ContextTable t(j.at("author_min_tweets").get<std::uint64_t>());
      t.totals_ = {j.at("totals").at(0).get<std::uint64_t>(), j.at("totals").at(1).get<std::uint64_t>()};
      auto read_array = [&](const char* name, auto& cells) {
        const auto& a = j.at(name);
        if (a.size() != cells.size()) throw InputError(std::string("context table: bad size for ") + name);
        for (std::size_t i = 0; i < cells.size(); ++i)
          cells[i] = {a.at(i).at(0).get<std::uint64_t>(), a.at(i).at(1).get<std::uint64_t>()};
      };
      read_array("state", t.state_);
      read_array("hour", t.hour_);
      read_array("dow", t.dow_);
      read_array("month", t.month_);
      for (const auto& e : j.at("author"))
        t.author_[e.at(0).get<std::string>()] = {e.at(1).get<std::uint64_t>(), e.at(2).get<std::uint64_t>()};
      return t;
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("context table: ") + e.what());
    }
  }

  friend bool operator==(const ContextTable&, const ContextTable&) = default;

 private:
  static std::optional<std::size_t> parse_index(std::string_view s, std::size_t lo, std::size_t hi) {
    if (s.empty() || s.size() > 2) return std::nullopt;
    std::size_t v = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') return std::nullopt;
      v = v * 10 + static_cast<std::size_t>(ch - '0');
    }
    if (v < lo || v > hi) return std::nullopt;
    return v;
  }

  const CellCounts* lookup(Category c, const Context& ctx) const {
    switch (c) {
      case Category::State:
        return ctx.state ? &state_[ctx.state->index()] : nullptr;
      case Category::Hour:
        return ctx.hour && *ctx.hour >= 0 && *ctx.hour < 24 ? &hour_[static_cast<std::size_t>(*ctx.hour)]
                                                            : nullptr;
      case Category::Dow:
        return ctx.dow && *ctx.dow >= 0 && *ctx.dow < 7 ? &dow_[static_cast<std::size_t>(*ctx.dow)] : nullptr;
      case Category::Month:
        return ctx.month && *ctx.month >= 1 && *ctx.month <= 12
                   ? &month_[static_cast<std::size_t>(*ctx.month - 1)]
                   : nullptr;
      case Category::Author: {
        if (!ctx.author) return nullptr;
        auto it = author_.find(*ctx.author);
        return it == author_.end() ? nullptr : &it->second;
      }
    }
    return nullptr;
  }

  std::uint64_t author_min_tweets_;
  CellCounts totals_;
  std::array<CellCounts, 50> state_{};
  std::array<CellCounts, 24> hour_{};
  std::array<CellCounts, 7> dow_{};
  std::array<CellCounts, 12> month_{};
  std::map<std::string, CellCounts> author_;
};

// CSV with header "cell,avg_sentiment,count"; empty cells leave the average blank.
inline void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "cell,avg_sentiment,count\n";
  char buf[64];
  for (const auto& r : rows) {
    bool quote = r.cell.find_first_of(",\"\n") != std::string::npos;
    if (quote) {
      out << '"';
      for (char ch : r.cell) {
        if (ch == '"') out << '"';
        out << ch;
      }
      out << '"';
    } else {
      out << r.cell;
    }
    out << ',';
    if (r.avg_sentiment) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.avg_sentiment);
      out << buf;
    }
    out << ',' << r.count << "\n";
  }
}

}  // namespace ctxsent
