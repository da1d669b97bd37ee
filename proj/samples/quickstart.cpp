// Train on a corpus file, or on a synthetic corpus when none is given, then
// classify a few records with and without context.
//
//   quickstart [corpus.jsonl]

#include <cstdio>
#include <iostream>
#include <sstream>

#include "ctxsent/ctxsent.hpp"

int main(int argc, char** argv) {
  using namespace ctxsent;
  try {
    std::vector<LabeledTweet> records;
    if (argc > 1) {
      records = ingest(std::string(argv[1])).records;
    } else {
      SynthConfig cfg;
      cfg.n_tweets = 20000;
      cfg.seed = 1;
      cfg.state_scale = 1.5;
      std::stringstream text;
      write_corpus(text, generate(cfg));
      records = ingest(text).records;
    }

    const auto clf = SentimentClassifier::train(records, {}, ClassifierMode::with(CategorySet::all()));
    std::printf("trained on %zu tweets, vocabulary %zu\n", records.size(),
                clf.model(Label::Positive).vocabulary().size());

    for (std::size_t i = 0; i < 5 && i < records.size(); ++i) {
      const auto& r = records[i];
      const auto text_only = clf.classify(r.tokens, nullptr, ClassifierMode::baseline());
      const auto with_ctx = clf.classify(r);
      std::printf("%-9s baseline %-8s (%+.3f)  contextual %-8s (%+.3f)  %s\n",
                  std::string(to_string(r.label)).c_str(), std::string(to_string(text_only.label)).c_str(),
                  text_only.margin, std::string(to_string(with_ctx.label)).c_str(), with_ctx.margin,
                  std::string(r.context.state->code()).c_str());
    }

    std::puts("\naverage sentiment by day of week:");
    write_report_csv(std::cout, clf.table().report(Category::Dow));
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
