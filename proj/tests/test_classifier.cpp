#include <gtest/gtest.h>

#include <random>

#include "ctxsent/classifier.hpp"
#include "test_support.hpp"

namespace ctxsent {
namespace {

using testing::BruteForceBayes;

std::vector<LabeledTweet> tweets_of(const std::vector<BruteForceBayes::Rec>& recs) {
  std::vector<LabeledTweet> out;
  for (const auto& r : recs) out.push_back(testing::to_tweet(r));
  return out;
}

LabeledTweet simple(Label l, TokenSequence t, const std::string& state = "CA") {
  return LabeledTweet{std::move(t), l, Context{StateCode::parse(state), 12, 2, 6, "someone"}};
}

TEST(Classify, EmptyTokensFallBackToPrior) {
  std::vector<LabeledTweet> v;
  for (int i = 0; i < 62; ++i) v.push_back(simple(Label::Positive, {"good", "day"}));
  for (int i = 0; i < 38; ++i) v.push_back(simple(Label::Negative, {"bad", "day"}));
  auto clf = SentimentClassifier::train(v);
  auto p = clf.classify(TokenSequence{});
  EXPECT_EQ(p.label, Label::Positive);
  EXPECT_NEAR(p.margin, std::log(0.62 / 0.38), 1e-15);
}

TEST(Classify, MirrorCorpus) {
  std::vector<LabeledTweet> v;
  for (int i = 0; i < 10; ++i) {
    v.push_back(simple(Label::Positive, {"happy", "sun", "happy"}));
    v.push_back(simple(Label::Negative, {"gloom", "rain", "gloom"}));
  }
  auto clf = SentimentClassifier::train(v);
  EXPECT_EQ(clf.classify(TokenSequence{"happy", "sun"}).label, Label::Positive);
  EXPECT_EQ(clf.classify(TokenSequence{"gloom", "rain"}).label, Label::Negative);
  // Mirror images score symmetrically.
  EXPECT_NEAR(clf.classify(TokenSequence{"happy", "sun"}).margin, -clf.classify(TokenSequence{"gloom", "rain"}).margin,
              1e-12);
}

TEST(Classify, TieGoesToPositive) {
  std::vector<LabeledTweet> v = {simple(Label::Positive, {"a"}), simple(Label::Negative, {"a"})};
  TrainOptions opts;
  opts.min_token_count = 1;
  auto clf = SentimentClassifier::train(v, opts);
  auto p = clf.classify(TokenSequence{"a"});
  EXPECT_EQ(p.margin, 0.0);
  EXPECT_EQ(p.label, Label::Positive);
}

TEST(Train, RejectsDegenerateData) {
  EXPECT_THROW(SentimentClassifier::train(std::vector<LabeledTweet>{}), TrainingError);
  std::vector<LabeledTweet> one = {simple(Label::Positive, {"a"}), simple(Label::Positive, {"b"})};
  EXPECT_THROW(SentimentClassifier::train(one), TrainingError);
}

TEST(Classify, MatchesBruteForceBayes) {
  std::mt19937_64 rng(21);
  const std::vector<std::pair<ClassifierMode, std::array<bool, 5>>> modes = {
      {ClassifierMode::baseline(), {false, false, false, false, false}},
      {ClassifierMode::with(CategorySet::all()), {true, true, true, true, true}},
      {ClassifierMode::with(CategorySet::parse("state,dow")), {true, false, true, false, false}},
      {ClassifierMode::with(CategorySet::parse("hour,month,author")), {false, true, false, true, true}},
  };
  for (int trial = 0; trial < 25; ++trial) {
    auto recs = testing::random_records(rng, 20);
    const bool bos = trial % 2 == 0;
    TrainOptions opts;
    opts.min_token_count = 1 + rng() % 4;
    opts.author_min_tweets = 3 + rng() % 4;
    opts.use_bos = bos;
    const auto tweets = tweets_of(recs);
    bool has_pos = false, has_neg = false;
    for (const auto& r : recs) (r.positive ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) continue;
    auto clf = SentimentClassifier::train(tweets, opts);
    BruteForceBayes oracle(recs, opts.min_token_count, opts.author_min_tweets, bos);
    auto queries = testing::random_records(rng, 10);
    queries.insert(queries.end(), recs.begin(), recs.end());
    for (const auto& [mode, enabled] : modes)
      for (const auto& q : queries) {
        const auto t = testing::to_tweet(q);
        const auto p = clf.classify(t.tokens, &t.context, mode);
        const double expected = oracle.margin(q, enabled.data());
        ASSERT_NEAR(p.margin, expected, 1e-10) << mode.name();
        if (std::abs(expected) > 1e-9) {
          EXPECT_EQ(p.label, expected > 0 ? Label::Positive : Label::Negative);
        }
      }
  }
}

class Batch : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(31);
    train_ = tweets_of(testing::random_records(rng, 400));
    queries_ = tweets_of(testing::random_records(rng, 5000));
    TrainOptions opts;
    opts.author_min_tweets = 20;
    clf_.emplace(SentimentClassifier::train(train_, opts, ClassifierMode::with(CategorySet::all())));
  }
  std::vector<LabeledTweet> train_, queries_;
  std::optional<SentimentClassifier> clf_;
};

TEST_F(Batch, EmptyBatch) { EXPECT_TRUE(clf_->classify_batch(std::span<const LabeledTweet>{}).empty()); }

TEST_F(Batch, EqualsSequentialLoop) {
  const std::span<const LabeledTweet> first(queries_.data(), 1000);
  const auto batch = clf_->classify_batch(first, 1);
  ASSERT_EQ(batch.size(), 1000u);
  for (std::size_t i = 0; i < 1000; ++i) EXPECT_EQ(batch[i], clf_->classify(first[i]));
  for (unsigned threads : {2u, 3u, 8u}) EXPECT_EQ(clf_->classify_batch(queries_, threads), clf_->classify_batch(queries_, 1));
}

TEST_F(Batch, ConcatenationLaw) {
  const std::span<const LabeledTweet> all(queries_);
  auto a = clf_->classify_batch(all.subspan(0, 1234), 4);
  auto b = clf_->classify_batch(all.subspan(1234), 4);
  a.insert(a.end(), b.begin(), b.end());
  EXPECT_EQ(a, clf_->classify_batch(all, 4));
}

TEST_F(Batch, EmptyCategorySetIsBaseline) {
  const auto none = ClassifierMode::with(CategorySet::none());
  for (const auto& q : queries_) {
    const auto a = clf_->classify(q.tokens, &q.context, none);
    const auto b = clf_->classify(q.tokens, &q.context, ClassifierMode::baseline());
    ASSERT_EQ(a, b);
  }
}

TEST_F(Batch, BaselineIgnoresContext) {
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& q = queries_[i];
    EXPECT_EQ(clf_->classify(q.tokens, &q.context, ClassifierMode::baseline()),
              clf_->classify(q.tokens, nullptr, ClassifierMode::baseline()));
  }
}

// With both classes sharing one language model, the text adds the same amount
// to both scores and must not move the decision.
TEST_F(Batch, CommonTermLeavesDecisionUnchanged) {
  const auto& lm = clf_->model(Label::Positive);
  SentimentClassifier shared(lm, lm, clf_->table(), clf_->mode());
  for (std::size_t i = 0; i < 500; ++i) {
    const auto& q = queries_[i];
    const auto with_text = shared.classify(q.tokens, &q.context);
    const auto without = shared.classify(TokenSequence{}, &q.context);
    EXPECT_EQ(with_text.label, without.label);
    EXPECT_NEAR(with_text.margin, without.margin, 1e-9);
  }
}

TEST_F(Batch, MorePositiveEvidenceNeverFlipsToNegative) {
  std::mt19937_64 rng(41);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& q = queries_[i];
    ContextTable table = clf_->table();
    SentimentClassifier before(clf_->model(Label::Positive), clf_->model(Label::Negative), table, clf_->mode());
    auto prev = before.classify(q);
    for (int step = 0; step < 5; ++step) {
      const auto extra = 1 + rng() % 20;
      for (std::size_t k = 0; k < extra; ++k) table.add(q.context, Label::Positive);
      SentimentClassifier after(clf_->model(Label::Positive), clf_->model(Label::Negative), table, clf_->mode());
      auto now = after.classify(q);
      EXPECT_GE(now.margin, prev.margin);
      if (prev.label == Label::Positive) {
        EXPECT_EQ(now.label, Label::Positive);
      }
      prev = now;
    }
  }
}

TEST_F(Batch, LongSequencesStayFinite) {
  std::mt19937_64 rng(51);
  TokenSequence longest;
  static const char* words[] = {"a", "b", "c", "d", "e", "f", "g", "h", "unheard"};
  for (int i = 0; i < 10000; ++i) longest.push_back(words[rng() % 9]);
  const auto p = clf_->classify(longest, &queries_[0].context);
  EXPECT_TRUE(std::isfinite(p.margin));
  EXPECT_TRUE(std::isfinite(clf_->model(Label::Negative).score_sequence(longest)));
  EXPECT_LT(clf_->model(Label::Negative).score_sequence(longest), -1000.0);
}

TEST(ClassifierMode, Names) {
  EXPECT_EQ(ClassifierMode::baseline().name(), "baseline");
  EXPECT_EQ(ClassifierMode::with(CategorySet::parse("dow,state")).name(), "contextual[state,dow]");
}

}  // namespace
}  // namespace ctxsent
