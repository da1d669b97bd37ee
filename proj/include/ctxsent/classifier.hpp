#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "ctxsent/corpus.hpp"
#include "ctxsent/error.hpp"
#include "ctxsent/ngram.hpp"
#include "ctxsent/priors.hpp"

namespace ctxsent {

// Which evidence enters the decision. Baseline uses text and the global
// class prior; Contextual adds the selected context categories.
struct ClassifierMode {
  bool contextual = false;
  CategorySet categories;

  static ClassifierMode baseline() { return {}; }
  static ClassifierMode with(CategorySet cs) { return {true, cs}; }

  std::string name() const {
    if (!contextual) return "baseline";
    return "contextual[" + categories.to_string() + "]";
  }

  friend bool operator==(const ClassifierMode&, const ClassifierMode&) = default;
};

struct TrainOptions {
  std::uint64_t min_token_count = kDefaultMinTokenCount;
  std::uint64_t author_min_tweets = kDefaultAuthorMinTweets;
  bool use_bos = true;
};

struct Prediction {
  Label label;
  double margin;  // score(positive) - score(negative), in nats

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Two class-conditional bigram models plus context counts. Decision rule:
//
//   score(s) = log P(W | s) + log P(s) [+ sum_c log P(cell_c | s)]
//
// with ties going to Positive.
class SentimentClassifier {
 public:
  SentimentClassifier(BigramModel positive, BigramModel negative, ContextTable table,
                      ClassifierMode mode = ClassifierMode::baseline())
      : pos_(std::move(positive)), neg_(std::move(negative)), table_(std::move(table)), mode_(mode) {}

  // Trains everything from `records` alone: shared vocabulary, one bigram
  // model per class, and the context table.
  static SentimentClassifier train(std::span<const LabeledTweet> records, const TrainOptions& opts = {},
                                   ClassifierMode mode = ClassifierMode::baseline()) {
    if (records.empty()) throw TrainingError("cannot train on an empty corpus");
    const auto has = [&](Label l) {
      return std::any_of(records.begin(), records.end(), [l](const auto& r) { return r.label == l; });
    };
    if (!has(Label::Positive) || !has(Label::Negative))
      throw TrainingError("training data must contain both positive and negative records");

    const auto tokens_of = [](const LabeledTweet& r) -> const TokenSequence& { return r.tokens; };
    Vocabulary vocab = Vocabulary::build(records, opts.min_token_count, tokens_of);
    const auto of_label = [&](Label l) {
      return records | std::views::filter([l](const LabeledTweet& r) { return r.label == l; });
    };
    BigramOptions lm_opts;
    lm_opts.use_bos = opts.use_bos;
    BigramModel pos = BigramModel::train(vocab, of_label(Label::Positive), lm_opts, tokens_of);
    BigramModel neg = BigramModel::train(std::move(vocab), of_label(Label::Negative), lm_opts, tokens_of);
    ContextTable table = ContextTable::fit(records, opts.author_min_tweets);
    return SentimentClassifier(std::move(pos), std::move(neg), std::move(table), mode);
  }

  Prediction classify(const TokenSequence& tokens, const Context* ctx, const ClassifierMode& mode) const {
    double pos = pos_.score_sequence(tokens) + std::log(table_.class_prior(Label::Positive));
    double neg = neg_.score_sequence(tokens) + std::log(table_.class_prior(Label::Negative));
    if (mode.contextual && ctx) {
      pos += table_.context_log_likelihood(*ctx, Label::Positive, mode.categories);
      neg += table_.context_log_likelihood(*ctx, Label::Negative, mode.categories);
    }
    const double margin = pos - neg;
    return {margin >= 0.0 ? Label::Positive : Label::Negative, margin};
  }

  Prediction classify(const TokenSequence& tokens, const Context* ctx = nullptr) const {
    return classify(tokens, ctx, mode_);
  }

  Prediction classify(const LabeledTweet& r) const { return classify(r.tokens, &r.context, mode_); }

  // Order-preserving map of classify over `records`, split across
  // `threads` workers (0 picks the hardware concurrency).
  std::vector<Prediction> classify_batch(std::span<const LabeledTweet> records, const ClassifierMode& mode,
                                         unsigned threads = 0) const {
    std::vector<Prediction> out(records.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t chunk = std::max<std::size_t>(1024, (records.size() + threads - 1) / threads);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) out[i] = classify(records[i].tokens, &records[i].context, mode);
    };
    if (threads == 1 || records.size() <= chunk) {
      work(0, records.size());
      return out;
    }
    std::vector<std::jthread> pool;
    for (std::size_t begin = 0; begin < records.size(); begin += chunk)
      pool.emplace_back(work, begin, std::min(records.size(), begin + chunk));
    pool.clear();
    return out;
  }

  std::vector<Prediction> classify_batch(std::span<const LabeledTweet> records, unsigned threads = 0) const {
    return classify_batch(records, mode_, threads);
  }

  const BigramModel& model(Label l) const { return l == Label::Positive ? pos_ : neg_; }
  const ContextTable& table() const { return table_; }
  const ClassifierMode& mode() const { return mode_; }
  void set_mode(ClassifierMode m) { mode_ = m; }

 private:
  BigramModel pos_;
  BigramModel neg_;
  ContextTable table_;
  ClassifierMode mode_;
};

}  // namespace ctxsent
