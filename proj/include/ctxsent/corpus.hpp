#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ctxsent/emoticons.hpp"
#include "ctxsent/error.hpp"
#include "ctxsent/label.hpp"
#include "ctxsent/localtime.hpp"
#include "ctxsent/preprocess.hpp"
#include "ctxsent/states.hpp"

namespace ctxsent {

// One line of a corpus file, before labelling.
struct RawRecord {
  std::string text;
  std::int64_t timestamp_utc = 0;
  std::string author_id;
  StateCode state = StateCode::from_index(0);
};

// Contextual variables of a tweet. Any field may be missing at
// classification time; a missing field carries no evidence.
struct Context {
  std::optional<StateCode> state;
  std::optional<int> hour;   // 0-23 local
  std::optional<int> dow;    // 0 = Monday
  std::optional<int> month;  // 1-12
  std::optional<std::string> author;

  bool complete() const { return state && hour && dow && month && author; }

  friend bool operator==(const Context&, const Context&) = default;
};

inline Context make_context(const RawRecord& r) {
  const LocalTime lt = localize(r.timestamp_utc, r.state);
  return Context{r.state, lt.hour, lt.dow, lt.month, r.author_id};
}

struct LabeledTweet {
  TokenSequence tokens;
  Label label;
  Context context;
};

struct IngestStats {
  std::uint64_t total_lines = 0;
  std::uint64_t accepted = 0;
  std::uint64_t accepted_positive = 0;
  std::uint64_t discarded_conflict = 0;
  std::uint64_t discarded_unlabelled = 0;
  std::uint64_t discarded_empty = 0;  // nothing left after preprocessing
  std::uint64_t malformed = 0;

  std::uint64_t discarded() const {
    return discarded_conflict + discarded_unlabelled + discarded_empty;
  }
  double positive_share() const {
    return accepted ? static_cast<double>(accepted_positive) / static_cast<double>(accepted) : 0.0;
  }
};

struct IngestOptions {
  bool strict = false;  // throw on the first malformed line
  // Accepted timestamp range, [min, max).
  std::int64_t min_timestamp = 536457600;   // 1987-01-01T00:00Z
  std::int64_t max_timestamp = 4102444800;  // 2100-01-01T00:00Z
};

// Parses one corpus line. Returns the diagnostic in `error` on failure.
inline std::optional<RawRecord> parse_record(const std::string& line, const IngestOptions& opts,
                                             std::string* error = nullptr) {
  auto fail = [&](std::string msg) -> std::optional<RawRecord> {
    if (error) *error = std::move(msg);
    return std::nullopt;
  };
  auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return fail("not a JSON object");

  auto text = j.find("text");
  auto ts = j.find("ts");
  auto author = j.find("author");
  auto state = j.find("state");
  if (text == j.end() || !text->is_string()) return fail("missing or non-string \"text\"");
  if (ts == j.end() || !ts->is_number_integer()) return fail("missing or non-integer \"ts\"");
  if (author == j.end() || !author->is_string()) return fail("missing or non-string \"author\"");
  if (state == j.end() || !state->is_string()) return fail("missing or non-string \"state\"");

  RawRecord r;
  r.text = text->get<std::string>();
  if (r.text.empty()) return fail("empty text");
  if (ts->is_number_unsigned() && ts->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    return fail("timestamp out of range");
  r.timestamp_utc = ts->get<std::int64_t>();
  if (r.timestamp_utc < opts.min_timestamp || r.timestamp_utc >= opts.max_timestamp)
    return fail("timestamp out of range");
  r.author_id = author->get<std::string>();
  const auto code = state->get<std::string>();
  auto sc = StateCode::parse(code);
  if (!sc) return fail("unknown state code \"" + code + "\"");
  r.state = *sc;
  return r;
}

inline std::string format_record(const RawRecord& r) {
  nlohmann::ordered_json j;
  j["text"] = r.text;
  j["ts"] = r.timestamp_utc;
  j["author"] = r.author_id;
  j["state"] = std::string(r.state.code());
  return j.dump();
}

// Streams a corpus, labelling each record by emoticon and normalizing its
// text. Calls `sink` for every accepted record, in file order.
inline IngestStats ingest_stream(std::istream& in, const IngestOptions& opts,
                                 const std::function<void(LabeledTweet&&)>& sink) {
  IngestStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.total_lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string why;
    auto rec = parse_record(line, opts, &why);
    if (!rec) {
      if (opts.strict)
        throw InputError("line " + std::to_string(stats.total_lines) + ": " + why);
      ++stats.malformed;
      continue;
    }
    const auto [has_pos, has_neg] = scan_emoticons(rec->text);
    if (has_pos && has_neg) {
      ++stats.discarded_conflict;
      continue;
    }
    if (!has_pos && !has_neg) {
      ++stats.discarded_unlabelled;
      continue;
    }
    TokenSequence tokens = preprocess(rec->text);
    if (tokens.empty()) {
      ++stats.discarded_empty;
      continue;
    }
    ++stats.accepted;
    const Label label = has_pos ? Label::Positive : Label::Negative;
    if (label == Label::Positive) ++stats.accepted_positive;
    sink(LabeledTweet{std::move(tokens), label, make_context(*rec)});
  }
  return stats;
}

struct Corpus {
  std::vector<LabeledTweet> records;
  IngestStats stats;
};

inline Corpus ingest(std::istream& in, const IngestOptions& opts = {}) {
  Corpus c;
  c.stats = ingest_stream(in, opts, [&](LabeledTweet&& t) { c.records.push_back(std::move(t)); });
  return c;
}

inline Corpus ingest(const std::string& path, const IngestOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file: " + path);
  return ingest(in, opts);
}

}  // namespace ctxsent
