// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctxsent/ctxsent.hpp"
#include "test_support.hpp"

#ifndef CTXSENT_SAMPLES_DIR
#define CTXSENT_SAMPLES_DIR "samples"
#endif

namespace ctxsent {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome agreement_fixture() {
  const auto r = make_report("agreement", ConfusionMatrix{1597, 148, 281, 882});
  const double acc = r.accuracy();
  return {std::abs(acc - 0.8525) <= 0.0005, "accuracy " + fmt("%.6f", acc)};
}

Outcome majority_identity() {
  // Exact 62/38 split.
  std::mt19937_64 rng(62);
  auto recs = testing::random_records(rng, 1000);
  std::vector<LabeledTweet> corpus;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    recs[i].positive = i < 620;
    corpus.push_back(testing::to_tweet(recs[i]));
  }
  const auto exact = evaluate(corpus, kfold(corpus.size(), 5, 1), Variant::majority_class());
  const bool ok_exact = std::abs(exact.accuracy() - 0.62) <= 1.0 / double(corpus.size());

  // Synthetic 62/38 corpus: majority accuracy equals the positive share.
  SynthConfig cfg;
  cfg.n_tweets = 20000;
  cfg.seed = 1;
  std::stringstream text;
  write_corpus(text, generate(cfg));
  const auto synth = ingest(text);
  const auto rep = evaluate(synth.records, kfold(synth.records.size(), 5, 1), Variant::majority_class());
  const double n = double(synth.records.size());
  const bool ok_synth = std::abs(rep.accuracy() - synth.stats.positive_share()) <= 1.0 / n &&
                        std::abs(rep.accuracy() - 0.62) <= 0.01;
  return {ok_exact && ok_synth, "exact corpus " + fmt("%.4f", exact.accuracy()) + ", synthetic " +
                                    fmt("%.4f", rep.accuracy()) + " vs share " +
                                    fmt("%.4f", synth.stats.positive_share())};
}

Outcome kn_normalization() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TokenSequence> corpus;
    for (std::size_t i = 0, n = 1 + rng() % 30; i < n; ++i) {
      TokenSequence s;
      for (std::size_t k = 0, len = 1 + rng() % 10; k < len; ++k) s.push_back("t" + std::to_string(rng() % 15));
      corpus.push_back(s);
    }
    BigramOptions opts;
    opts.use_bos = rng() % 2 == 0;
    const auto m = BigramModel::train(Vocabulary::build(corpus, 1 + rng() % 3), corpus, opts);
    for (TokenId h = 0; h < m.vocabulary().size(); ++h) {
      double total = 0;
      for (TokenId w = 0; w < m.vocabulary().size(); ++w) total += std::exp(m.log_prob(h, w));
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10.0, "max |sum - 1| = " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  double worst = 0;
  std::size_t decisions = 0, mismatched = 0, corpora = 0;
  const bool all_on[5] = {true, true, true, true, true};
  while (corpora < 25) {
    auto recs = testing::random_records(rng, 1 + rng() % 20);
    bool pos = false, neg = false;
    for (const auto& r : recs) (r.positive ? pos : neg) = true;
    if (!pos || !neg) continue;
    ++corpora;
    std::vector<LabeledTweet> tweets;
    for (const auto& r : recs) tweets.push_back(testing::to_tweet(r));
    TrainOptions opts;
    opts.min_token_count = 1 + rng() % 3;
    opts.author_min_tweets = 2 + rng() % 3;
    const auto clf = SentimentClassifier::train(tweets, opts, ClassifierMode::with(CategorySet::all()));
    const testing::BruteForceBayes oracle(recs, opts.min_token_count, opts.author_min_tweets, true);
    auto queries = testing::random_records(rng, 10);
    queries.insert(queries.end(), recs.begin(), recs.end());
    for (const auto& q : queries) {
      const auto t = testing::to_tweet(q);
      const auto p = clf.classify(t);
      const double expected = oracle.margin(q, all_on);
      worst = std::max(worst, std::abs(p.margin - expected));
      ++decisions;
      if (p.label != (expected >= 0 ? Label::Positive : Label::Negative)) ++mismatched;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && mismatched == 0 && secs < 30.0,
          std::to_string(decisions) + " decisions, " + std::to_string(mismatched) + " mismatched, max margin error " +
              fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

struct Ablation {
  std::map<std::string, double> acc;
  double seconds = 0;
};

const Ablation& ablation() {
  static const Ablation result = [] {
    const auto t0 = Clock::now();
    std::ifstream conf(CTXSENT_SAMPLES_DIR "/contextual.conf");
    auto cfg = SynthConfig::parse(conf);
    cfg.seed = 5;
    cfg.n_tweets = 100000;
    std::stringstream text;
    write_corpus(text, generate(cfg));
    const auto corpus = ingest(text);
    const auto variants = ablation_variants();
    const auto reports = evaluate(corpus.records, kfold(corpus.records.size(), 5, 1), variants);
    Ablation a;
    for (const auto& r : reports) a.acc[r.name] = r.accuracy();
    a.seconds = seconds_since(t0);
    return a;
  }();
  return result;
}

Outcome ablation_ordering() {
  const auto& a = ablation();
  const double base = a.acc.at("Baseline-Bigram"), all = a.acc.at("Contextual-All");
  bool ok = all - base >= 0.02 && a.seconds < 300.0;
  std::string detail = "Baseline-Bigram " + fmt("%.4f", base);
  for (const char* v : {"Contextual-DoW", "Contextual-Month", "Contextual-Hour", "Contextual-Author",
                        "Contextual-State"}) {
    const double x = a.acc.at(v);
    ok = ok && base < x && x <= all;
    detail += std::string(", ") + (v + 11) + " " + fmt("%.4f", x);
  }
  detail += ", All " + fmt("%.4f", all) + " (+" + fmt("%.4f", all - base) + "), " + fmt("%.1f", a.seconds) + " s";
  return {ok, detail};
}

Outcome geoless_variant() {
  const auto& a = ablation();
  const double base = a.acc.at("Baseline-Bigram"), all = a.acc.at("Contextual-All"),
               nostate = a.acc.at("Contextual-NoState");
  return {base < nostate && nostate < all, "Baseline " + fmt("%.4f", base) + " < NoState " + fmt("%.4f", nostate) +
                                               " < All " + fmt("%.4f", all)};
}

// Fleiss' kappa from integer counts: (A*D2 - B*D1) / (D1 * (D2 - B)).
double exact_kappa(const std::vector<std::vector<int>>& ratings) {
  const long long items = static_cast<long long>(ratings.size());
  const long long n = static_cast<long long>(ratings[0].size());
  std::map<int, long long> totals;
  long long a = 0;
  for (const auto& item : ratings) {
    std::map<int, long long> counts;
    for (int c : item) ++counts[c];
    for (const auto& [c, k] : counts) {
      a += k * (k - 1);
      totals[c] += k;
    }
  }
  long long b = 0;
  for (const auto& [c, t] : totals) b += t * t;
  const long long d1 = items * n * (n - 1), d2 = (items * n) * (items * n);
  return static_cast<double>(static_cast<long double>(a * d2 - b * d1) / static_cast<long double>(d1 * (d2 - b)));
}

Outcome fleiss_fixtures() {
  const double perfect = fleiss_kappa({{1, 1, 1}, {0, 0, 0}, {2, 2, 2}, {1, 1, 1}});
  const double chance = fleiss_kappa({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const std::vector<std::vector<int>> ten = {{0, 0, 0}, {0, 0, 1}, {1, 1, 1}, {0, 1, 2}, {2, 2, 2},
                                             {1, 1, 0}, {0, 0, 0}, {2, 2, 1}, {1, 1, 1}, {0, 2, 2}};
  const double got = fleiss_kappa(ten), want = exact_kappa(ten);
  const bool ok = perfect == 1.0 && std::abs(chance) <= 1e-12 && std::abs(got - want) <= 1e-12;
  return {ok, "perfect " + fmt("%.17g", perfect) + ", chance " + fmt("%.3g", chance) + ", 10x3 " + fmt("%.15f", got) +
                  " vs " + fmt("%.15f", want)};
}

Outcome pearson_fixtures() {
  const std::vector<double> x = {2.1, 3.4, 1.9, 5.6, 4.4, 6.1, 7.3, 5.0, 8.2, 6.6};
  const std::vector<double> y = {1.0, 2.9, 2.2, 4.1, 3.0, 6.8, 5.9, 3.3, 7.7, 4.9};
  std::vector<double> lin, neg;
  for (double v : x) {
    lin.push_back(2.0 * v + 1.0);
    neg.push_back(-3.0 * v + 4.0);
  }
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += (long double)x[i] * x[i];
    syy += (long double)y[i] * y[i];
    sxy += (long double)x[i] * y[i];
  }
  const long double n = (long double)x.size();
  const double want = double((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
  const double up = pearson_r(x, lin).r, down = pearson_r(x, neg).r, got = pearson_r(x, y).r;
  const bool ok = up == 1.0 && down == -1.0 && std::abs(got - want) <= 1e-12;
  return {ok, "r(+) " + fmt("%.17g", up) + ", r(-) " + fmt("%.17g", down) + ", fixture " + fmt("%.15f", got) +
                  " vs " + fmt("%.15f", want)};
}

Outcome golden_file() {
  std::ifstream in(testing::data_path("preprocess_golden.jsonl"));
  std::vector<std::pair<std::string, TokenSequence>> cases;
  std::string line;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    cases.emplace_back(j["text"].get<std::string>(), j["tokens"].get<TokenSequence>());
  }
  auto render = [&] {
    std::string s;
    for (const auto& [text, expected] : cases) {
      for (const auto& t : preprocess(text)) s += t + ' ';
      s += '\n';
    }
    return s;
  };
  std::size_t matched = 0;
  for (const auto& [text, expected] : cases) matched += preprocess(text) == expected;
  const bool same = render() == render();
  return {cases.size() == 50 && matched == 50 && same,
          std::to_string(matched) + "/" + std::to_string(cases.size()) + " lines match" +
              (same ? ", repeat run identical" : ", repeat run differs")};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

Outcome determinism() {
  SynthConfig cfg;
  cfg.n_tweets = 20000;
  cfg.seed = 10;
  cfg.state_scale = 1.0;
  cfg.author_scale = 1.0;
  std::stringstream text;
  write_corpus(text, generate(cfg));
  const auto corpus = ingest(text);
  const auto dir = fs::temp_directory_path() / "ctxsent-acceptance";
  fs::remove_all(dir);
  const TrainOptions opts;
  const auto mode = ClassifierMode::with(CategorySet::all());
  save_bundle(dir / "a", SentimentClassifier::train(corpus.records, opts, mode), opts);
  save_bundle(dir / "b", SentimentClassifier::train(corpus.records, opts, mode), opts);
  bool same = true;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    ++files;
    same = same && slurp(entry.path()) == slurp(dir / "b" / entry.path().filename());
  }
  fs::remove_all(dir);
  const bool folds = kfold(100000, 5, 7).assignment == kfold(100000, 5, 7).assignment;
  return {same && files >= 4 && folds, std::to_string(files) + " bundle files " +
                                           (same ? "identical" : "differ") + ", fold plan " +
                                           (folds ? "identical" : "differs")};
}

}  // namespace
}  // namespace ctxsent

int main() {
  using namespace ctxsent;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"metric fixture (human vs emoticon labels)", agreement_fixture},
      {"majority baseline identity", majority_identity},
      {"Kneser-Ney normalization", kn_normalization},
      {"brute-force Bayes equivalence", oracle_equivalence},
      {"synthetic ablation ordering", ablation_ordering},
      {"geo-less variant", geoless_variant},
      {"Fleiss' kappa fixtures", fleiss_fixtures},
      {"Pearson fixtures", pearson_fixtures},
      {"preprocessing golden file", golden_file},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
