#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "ctxsent/classifier.hpp"
#include "ctxsent/error.hpp"
#include "ctxsent/random.hpp"

namespace ctxsent {

// 2x2 confusion matrix with Positive as the reference class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;  // predicted positive, truly positive
  std::uint64_t fn = 0;  // predicted negative, truly positive
  std::uint64_t fp = 0;  // predicted positive, truly negative
  std::uint64_t tn = 0;  // predicted negative, truly negative

  void add(Label truth, Label predicted) {
    if (truth == Label::Positive)
      ++(predicted == Label::Positive ? tp : fn);
    else
      ++(predicted == Label::Positive ? fp : tn);
  }

  std::uint64_t n() const { return tp + fn + fp + tn; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fn += o.fn;
    fp += o.fp;
    tn += o.tn;
    return *this;
  }
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

namespace detail {
inline double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
inline ClassMetrics metrics(std::uint64_t hit, std::uint64_t false_alarm, std::uint64_t miss) {
  ClassMetrics m;
  m.precision = ratio(hit, hit + false_alarm);
  m.recall = ratio(hit, hit + miss);
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}
}  // namespace detail

struct EvalReport {
  std::string name;
  ConfusionMatrix confusion;           // pooled over folds
  std::vector<ConfusionMatrix> folds;  // per fold, in fold order

  std::uint64_t n() const { return confusion.n(); }
  double accuracy() const { return detail::ratio(confusion.tp + confusion.tn, confusion.n()); }
  ClassMetrics metrics(Label l) const {
    const auto& c = confusion;
    return l == Label::Positive ? detail::metrics(c.tp, c.fp, c.fn) : detail::metrics(c.tn, c.fn, c.fp);
  }
};

inline EvalReport make_report(std::string name, const ConfusionMatrix& c) {
  return EvalReport{std::move(name), c, {c}};
}

// Deterministic shuffled k-way partition of record indices.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> assignment;  // record index -> fold

  std::vector<std::size_t> test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] == fold) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] != fold) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> fold_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto f : assignment) ++sizes[f];
    return sizes;
  }
};

inline FoldPlan kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("k-fold requires k >= 2");
  if (n < k) throw InputError("corpus has fewer records (" + std::to_string(n) + ") than folds (" +
                              std::to_string(k) + ")");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.shuffle(std::span<std::uint32_t>(order));
  FoldPlan plan{k, seed, std::vector<std::uint32_t>(n)};
  for (std::size_t pos = 0; pos < n; ++pos) plan.assignment[order[pos]] = static_cast<std::uint32_t>(pos % k);
  return plan;
}

// One row of an evaluation: either the majority-class baseline or a trained
// classifier in some mode.
struct Variant {
  std::string name;
  bool majority = false;
  ClassifierMode mode;

  static Variant majority_class() { return {"Baseline-Majority", true, {}}; }
  static Variant of(std::string name, ClassifierMode m) { return {std::move(name), false, m}; }
};

// The rows of the standard ablation: majority, text only, each single
// category, all categories, and all but state.
inline std::vector<Variant> ablation_variants() {
  std::vector<Variant> v{Variant::majority_class(), Variant::of("Baseline-Bigram", ClassifierMode::baseline())};
  const std::pair<const char*, Category> singles[] = {{"Contextual-DoW", Category::Dow},
                                                      {"Contextual-Month", Category::Month},
                                                      {"Contextual-Hour", Category::Hour},
                                                      {"Contextual-Author", Category::Author},
                                                      {"Contextual-State", Category::State}};
  for (const auto& [name, c] : singles) v.push_back(Variant::of(name, ClassifierMode::with({c})));
  v.push_back(Variant::of("Contextual-All", ClassifierMode::with(CategorySet::all())));
  v.push_back(Variant::of("Contextual-NoState", ClassifierMode::with(CategorySet::all().without(Category::State))));
  return v;
}

namespace detail {

inline std::vector<ConfusionMatrix> evaluate_fold(std::span<const LabeledTweet> corpus, const FoldPlan& plan,
                                                  std::size_t fold, const TrainOptions& opts,
                                                  std::span<const Variant> variants) {
  std::vector<LabeledTweet> train;
  std::vector<LabeledTweet> test;
  for (std::size_t i = 0; i < corpus.size(); ++i) (plan.assignment[i] == fold ? test : train).push_back(corpus[i]);

  std::uint64_t train_pos = 0;
  for (const auto& r : train) train_pos += r.label == Label::Positive;
  if (train_pos == 0 || train_pos == train.size())
    throw TrainingError("fold " + std::to_string(fold) + ": training data holds a single class");
  const Label majority = 2 * train_pos >= train.size() ? Label::Positive : Label::Negative;

  const bool need_model = std::any_of(variants.begin(), variants.end(), [](const Variant& v) { return !v.majority; });
  std::optional<SentimentClassifier> clf;
  if (need_model) clf.emplace(SentimentClassifier::train(train, opts));

  std::vector<ConfusionMatrix> out(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    if (variants[v].majority) {
      for (const auto& r : test) out[v].add(r.label, majority);
    } else {
      const auto preds = clf->classify_batch(test, variants[v].mode, 1);
      for (std::size_t i = 0; i < test.size(); ++i) out[v].add(test[i].label, preds[i].label);
    }
  }
  return out;
}

}  // namespace detail

// k-fold cross-validation. Every fold retrains vocabulary, language models
// and context counts from its training part only; held-out predictions are
// pooled into one confusion matrix per variant.
inline std::vector<EvalReport> evaluate(std::span<const LabeledTweet> corpus, const FoldPlan& plan,
                                        std::span<const Variant> variants, const TrainOptions& opts = {},
                                        bool parallel = true) {
  if (plan.assignment.size() != corpus.size()) throw InputError("fold plan does not match corpus size");
  std::vector<std::vector<ConfusionMatrix>> per_fold(plan.k);
  if (parallel && std::thread::hardware_concurrency() > 1) {
    std::vector<std::future<std::vector<ConfusionMatrix>>> jobs;
    for (std::size_t f = 0; f < plan.k; ++f)
      jobs.push_back(std::async(std::launch::async, detail::evaluate_fold, corpus, std::cref(plan), f,
                                std::cref(opts), variants));
    for (std::size_t f = 0; f < plan.k; ++f) per_fold[f] = jobs[f].get();
  } else {
    for (std::size_t f = 0; f < plan.k; ++f) per_fold[f] = detail::evaluate_fold(corpus, plan, f, opts, variants);
  }

  std::vector<EvalReport> reports;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    EvalReport r{variants[v].name, {}, {}};
    for (std::size_t f = 0; f < plan.k; ++f) {
      r.folds.push_back(per_fold[f][v]);
      r.confusion += per_fold[f][v];
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

inline EvalReport evaluate(std::span<const LabeledTweet> corpus, const FoldPlan& plan, const Variant& variant,
                           const TrainOptions& opts = {}) {
  return evaluate(corpus, plan, std::span<const Variant>(&variant, 1), opts).front();
}

// Table with one row per report: accuracy and per-class P/R/F1.
inline void write_report_table(std::ostream& out, std::span<const EvalReport> reports) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %8s %8s %8s %8s %8s %8s %8s %8s\n", "Model", "Accuracy", "Pos-P",
                "Pos-R", "Pos-F1", "Neg-P", "Neg-R", "Neg-F1", "N");
  out << buf;
  for (const auto& r : reports) {
    const auto p = r.metrics(Label::Positive);
    const auto q = r.metrics(Label::Negative);
    std::snprintf(buf, sizeof buf, "%-22s %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %8llu\n", r.name.c_str(),
                  r.accuracy(), p.precision, p.recall, p.f1, q.precision, q.recall, q.f1,
                  static_cast<unsigned long long>(r.n()));
    out << buf;
  }
}

inline void write_report_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "model,accuracy,pos_precision,pos_recall,pos_f1,neg_precision,neg_recall,neg_f1,tp,fn,fp,tn,n\n";
  char buf[512];
  for (const auto& r : reports) {
    const auto p = r.metrics(Label::Positive);
    const auto q = r.metrics(Label::Negative);
    const auto& c = r.confusion;
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%llu,%llu,%llu,%llu,%llu\n", r.name.c_str(),
                  r.accuracy(), p.precision, p.recall, p.f1, q.precision, q.recall, q.f1,
                  static_cast<unsigned long long>(c.tp), static_cast<unsigned long long>(c.fn),
                  static_cast<unsigned long long>(c.fp), static_cast<unsigned long long>(c.tn),
                  static_cast<unsigned long long>(c.n()));
    out << buf;
  }
}

// Fleiss' kappa. ratings[i][r] is the category rater r gave item i; every
// item needs the same number (>= 2) of ratings.
inline double fleiss_kappa(const std::vector<std::vector<int>>& ratings) {
  if (ratings.empty()) throw InputError("fleiss_kappa: no items");
  const std::size_t n = ratings.front().size();
  if (n < 2) throw InputError("fleiss_kappa: need at least two raters per item");
  std::map<int, std::uint64_t> category_totals;
  double p_bar = 0.0;
  for (const auto& item : ratings) {
    if (item.size() != n) throw InputError("fleiss_kappa: items have unequal rater counts");
    std::map<int, std::uint64_t> counts;
    for (int c : item) ++counts[c];
    std::uint64_t agree = 0;
    for (const auto& [c, nij] : counts) {
      agree += nij * (nij - 1);
      category_totals[c] += nij;
    }
    p_bar += static_cast<double>(agree) / static_cast<double>(n * (n - 1));
  }
  const double items = static_cast<double>(ratings.size());
  p_bar /= items;
  double p_e = 0.0;
  for (const auto& [c, total] : category_totals) {
    const double pj = static_cast<double>(total) / (items * static_cast<double>(n));
    p_e += pj * pj;
  }
  // A single category used throughout: agreement is perfect by construction.
  if (p_e >= 1.0) return 1.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

struct Correlation {
  double r;
  double p_value;  // two-sided, t-distribution with n - 2 degrees of freedom
};

inline Correlation pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("pearson_r: length mismatch");
  if (x.size() < 3) throw InputError("pearson_r: need at least 3 points");
  // Sums in long double: for data that are linear up to input rounding,
  // 1 - |r| is second order in the rounding and r comes out as exactly +-1.
  using ld = long double;
  const ld n = static_cast<ld>(x.size());
  ld mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  ld sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const ld dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw InputError("pearson_r: zero variance");
  const double r = std::clamp(static_cast<double>(sxy / std::sqrt(sxx * syy)), -1.0, 1.0);
  const double df = static_cast<double>(x.size()) - 2.0;
  if (std::abs(r) == 1.0) return {r, 0.0};
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return {r, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)))};
}

}  // namespace ctxsent
