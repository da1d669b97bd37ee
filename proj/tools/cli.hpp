#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctxsent/ctxsent.hpp"

namespace ctxsent::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,  // missing or unreadable files, malformed input
  kUsageError = 2,  // unknown flags, bad flag values
  kTrainError = 3,  // training or evaluation aborted
};

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string model;
  std::string config;
  std::string mode = "baseline";
  std::string categories;
  std::string category;
  std::size_t k = 5;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_tweets;
  std::uint64_t min_author_tweets = kDefaultAuthorMinTweets;
  std::uint64_t min_count = kDefaultMinTokenCount;
  bool no_bos = false;
  bool strict = false;
  bool ablation = false;
  int verbosity = 0;

  std::string describe() const {
    std::ostringstream o;
    o << "# ctxsent " << subcommand << " input=" << (input.empty() ? "-" : input)
      << " output=" << (output.empty() ? "-" : output) << " model=" << (model.empty() ? "-" : model);
    if (!config.empty()) o << " config=" << config;
    o << " mode=" << mode << " categories=" << (categories.empty() ? "-" : categories) << " k=" << k
      << " seed=" << (seed ? std::to_string(*seed) : "-") << " min_author_tweets=" << min_author_tweets
      << " min_count=" << min_count << " bos=" << (no_bos ? 0 : 1) << " strict=" << (strict ? 1 : 0)
      << " preprocess=" << kPreprocessVersion;
    return o.str();
  }

  TrainOptions train_options() const { return {min_count, min_author_tweets, !no_bos}; }
  IngestOptions ingest_options() const {
    IngestOptions o;
    o.strict = strict;
    return o;
  }
  ClassifierMode classifier_mode() const {
    if (mode == "baseline") return ClassifierMode::baseline();
    return ClassifierMode::with(categories.empty() ? CategorySet::all() : CategorySet::parse(categories));
  }
};

namespace detail {

inline void require_file(const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path) || std::filesystem::is_directory(path))
    throw InputError("input file not found: " + (path.empty() ? std::string("<none>") : path));
}

inline std::string format_margin(double m) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", m);
  return buf;
}

inline void print_stats(std::ostream& out, const IngestStats& s) {
  char share[32];
  std::snprintf(share, sizeof share, "%.4f", s.positive_share());
  out << "total_lines " << s.total_lines << "\naccepted " << s.accepted << "\naccepted_positive "
      << s.accepted_positive << "\naccepted_negative " << s.accepted - s.accepted_positive
      << "\npositive_share " << share << "\ndiscarded_conflict " << s.discarded_conflict
      << "\ndiscarded_unlabelled " << s.discarded_unlabelled << "\ndiscarded_empty " << s.discarded_empty
      << "\nmalformed " << s.malformed << "\n";
}

// Writes to --output when given, otherwise to `fallback`.
template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot write " + path);
  body(f);
}

inline int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_file(cfg.input);
  std::ifstream in(cfg.input);
  auto stats = ingest_stream(in, cfg.ingest_options(), [](LabeledTweet&&) {});
  print_stats(out, stats);
  if (cfg.verbosity > 0) err << "ingested " << stats.accepted << " records\n";
  return kOk;
}

inline int cmd_preprocess(const RunConfig& cfg, std::istream& in, std::ostream& out) {
  auto run = [&](std::istream& src) {
    std::string line;
    while (std::getline(src, line)) {
      const auto tokens = preprocess(line);
      for (std::size_t i = 0; i < tokens.size(); ++i) out << (i ? " " : "") << tokens[i];
      out << "\n";
    }
  };
  if (cfg.input.empty()) {
    run(in);
  } else {
    require_file(cfg.input);
    std::ifstream f(cfg.input);
    run(f);
  }
  return kOk;
}

inline int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_file(cfg.input);
  const std::string dest = cfg.output.empty() ? cfg.model : cfg.output;
  if (dest.empty()) throw CLI::ValidationError("train needs --output (or --model) for the bundle directory");
  auto corpus = ingest(cfg.input, cfg.ingest_options());
  if (cfg.verbosity > 0) print_stats(err, corpus.stats);
  const auto opts = cfg.train_options();
  auto clf = SentimentClassifier::train(corpus.records, opts, cfg.classifier_mode());
  save_bundle(dest, clf, opts);
  out << "trained on " << corpus.records.size() << " records; vocabulary "
      << clf.model(Label::Positive).vocabulary().size() << "; bundle " << dest << "\n";
  return kOk;
}

inline int cmd_classify(const RunConfig& cfg, bool mode_given, std::istream& in, std::ostream& out) {
  if (cfg.model.empty()) throw CLI::ValidationError("classify needs --model");
  if (!std::filesystem::is_directory(cfg.model)) throw InputError("model bundle not found: " + cfg.model);
  auto bundle = load_bundle(cfg.model);
  if (mode_given) bundle.classifier.set_mode(cfg.classifier_mode());
  const auto& clf = bundle.classifier;

  auto emit = [&](const Prediction& p) { out << to_string(p.label) << '\t' << format_margin(p.margin) << '\n'; };
  const IngestOptions io = cfg.ingest_options();

  if (!cfg.input.empty()) {
    // Corpus file: every well-formed record is classified.
    require_file(cfg.input);
    std::ifstream f(cfg.input);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      std::string why;
      auto rec = parse_record(line, io, &why);
      if (!rec) {
        if (cfg.strict) throw InputError("line " + std::to_string(lineno) + ": " + why);
        continue;
      }
      const Context ctx = make_context(*rec);
      emit(clf.classify(preprocess(rec->text), &ctx));
    }
    return kOk;
  }
  // Stdin: corpus-format lines keep their context; anything else is raw text.
  std::string line;
  while (std::getline(in, line)) {
    std::optional<RawRecord> rec;
    if (!line.empty() && line.front() == '{') rec = parse_record(line, io);
    if (rec) {
      const Context ctx = make_context(*rec);
      emit(clf.classify(preprocess(rec->text), &ctx));
    } else {
      emit(clf.classify(preprocess(line), nullptr));
    }
  }
  return kOk;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_file(cfg.input);
  if (!cfg.seed) throw CLI::ValidationError("evaluate needs --seed");
  auto corpus = ingest(cfg.input, cfg.ingest_options());
  if (cfg.verbosity > 0) print_stats(err, corpus.stats);
  std::vector<Variant> variants;
  if (cfg.ablation) {
    variants = ablation_variants();
  } else {
    variants.push_back(Variant::majority_class());
    const auto mode = cfg.classifier_mode();
    variants.push_back(Variant::of(mode.contextual ? "Contextual[" + mode.categories.to_string() + "]"
                                                   : std::string("Baseline-Bigram"),
                                   mode));
  }
  const auto plan = kfold(corpus.records.size(), cfg.k, *cfg.seed);
  const auto reports = evaluate(corpus.records, plan, variants, cfg.train_options());
  write_report_table(out, reports);
  if (!cfg.output.empty()) with_output(cfg.output, out, [&](std::ostream& o) { write_report_csv(o, reports); });
  return kOk;
}

inline int cmd_priors(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.input);
  auto corpus = ingest(cfg.input, cfg.ingest_options());
  const auto table = ContextTable::fit(corpus.records, cfg.min_author_tweets);
  if (!cfg.category.empty()) {
    auto c = parse_category(cfg.category);
    if (!c) throw CLI::ValidationError("unknown category: " + cfg.category);
    with_output(cfg.output, out, [&](std::ostream& o) { write_report_csv(o, table.report(*c)); });
    return kOk;
  }
  if (cfg.output.empty()) throw CLI::ValidationError("priors without --category needs --output directory");
  std::filesystem::create_directories(cfg.output);
  for (auto c : kAllCategories) {
    const auto path = std::filesystem::path(cfg.output) / (std::string(to_string(c)) + ".csv");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + path.string());
    write_report_csv(f, table.report(c));
  }
  out << "wrote " << kAllCategories.size() << " reports to " << cfg.output << "\n";
  return kOk;
}

inline int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SynthConfig sc;
  if (!cfg.config.empty()) {
    require_file(cfg.config);
    std::ifstream f(cfg.config);
    sc = SynthConfig::parse(f);
  }
  if (!cfg.seed) throw CLI::ValidationError("synth needs --seed");
  sc.seed = *cfg.seed;
  if (cfg.n_tweets) sc.n_tweets = *cfg.n_tweets;
  sc.validate();
  if (cfg.verbosity > 0) err << sc.to_string();
  const auto records = generate(sc);
  with_output(cfg.output, out, [&](std::ostream& o) { write_corpus(o, records); });
  return kOk;
}

}  // namespace detail

// Runs the command line `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contextual sentiment classification with bigram language models", "ctxsent"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("-v,--verbose", cfg.verbosity, "Print extra diagnostics");
  };
  auto add_training = [&](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "baseline or contextual")
        ->check(CLI::IsMember({"baseline", "contextual"}));
    sub->add_option("--categories", cfg.categories, "Context categories: state,hour,dow,month,author");
    sub->add_option("--min-author-tweets", cfg.min_author_tweets, "Tweets needed for an author prior");
    sub->add_option("--min-count", cfg.min_count, "Minimum token count to enter the vocabulary");
    sub->add_flag("--no-bos", cfg.no_bos, "Do not score the first token against <s>");
  };

  auto* ingest_cmd = app.add_subcommand("ingest", "Label and count a corpus file");
  ingest_cmd->add_option("--input", cfg.input, "Corpus file")->required();
  ingest_cmd->add_flag("--strict", cfg.strict, "Fail on the first malformed line");

  auto* pre_cmd = app.add_subcommand("preprocess", "Normalize text lines (stdin or --input) into tokens");
  pre_cmd->add_option("--input", cfg.input, "Text file, one item per line");

  auto* train_cmd = app.add_subcommand("train", "Train language models and context priors");
  train_cmd->add_option("--input", cfg.input, "Corpus file")->required();
  train_cmd->add_option("--output", cfg.output, "Bundle directory");
  train_cmd->add_option("--model", cfg.model, "Bundle directory (alias of --output)");
  train_cmd->add_option("--seed", cfg.seed, "Recorded for reproducibility");
  train_cmd->add_flag("--strict", cfg.strict, "Fail on the first malformed line");
  add_training(train_cmd);

  auto* cls_cmd = app.add_subcommand("classify", "Classify a corpus file or stdin lines");
  cls_cmd->add_option("--model", cfg.model, "Bundle directory")->required();
  cls_cmd->add_option("--input", cfg.input, "Corpus file (default: stdin lines)");
  cls_cmd->add_flag("--strict", cfg.strict, "Fail on the first malformed line");
  auto* cls_mode = cls_cmd->add_option("--mode", cfg.mode, "Override the bundle's mode")
                       ->check(CLI::IsMember({"baseline", "contextual"}));
  auto* cls_cats = cls_cmd->add_option("--categories", cfg.categories, "Override the bundle's categories");

  auto* eval_cmd = app.add_subcommand("evaluate", "k-fold cross-validation report");
  eval_cmd->add_option("--input", cfg.input, "Corpus file")->required();
  eval_cmd->add_option("--output", cfg.output, "Write the report as CSV");
  eval_cmd->add_option("--k", cfg.k, "Number of folds")->check(CLI::Range(2, 1000));
  eval_cmd->add_option("--seed", cfg.seed, "Fold assignment seed");
  eval_cmd->add_flag("--ablation", cfg.ablation, "Evaluate every context category variant");
  eval_cmd->add_flag("--strict", cfg.strict, "Fail on the first malformed line");
  add_training(eval_cmd);

  auto* priors_cmd = app.add_subcommand("priors", "Average sentiment per context cell as CSV");
  priors_cmd->add_option("--input", cfg.input, "Corpus file")->required();
  priors_cmd->add_option("--category", cfg.category, "One category (default: all, into --output dir)");
  priors_cmd->add_option("--output", cfg.output, "CSV file, or directory when no --category");
  priors_cmd->add_option("--min-author-tweets", cfg.min_author_tweets, "Tweets needed for an author prior");
  priors_cmd->add_flag("--strict", cfg.strict, "Fail on the first malformed line");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--config", cfg.config, "key = value configuration file");
  synth_cmd->add_option("--output", cfg.output, "Corpus file (default: stdout)");
  synth_cmd->add_option("--seed", cfg.seed, "Random seed");
  synth_cmd->add_option("--n", cfg.n_tweets, "Override n_tweets");

  for (auto* sub : {ingest_cmd, pre_cmd, train_cmd, cls_cmd, eval_cmd, priors_cmd, synth_cmd}) add_common(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.subcommand = chosen->get_name();
  err << cfg.describe() << "\n";
  try {
    if (cfg.mode == "baseline" && !cfg.categories.empty() && cfg.subcommand != "classify")
      throw CLI::ValidationError("--categories requires --mode contextual");
    if (!cfg.categories.empty()) {
      try {
        CategorySet::parse(cfg.categories);
      } catch (const InputError& e) {
        throw CLI::ValidationError(e.what());
      }
    }
    if (chosen == ingest_cmd) return detail::cmd_ingest(cfg, out, err);
    if (chosen == pre_cmd) return detail::cmd_preprocess(cfg, in, out);
    if (chosen == train_cmd) return detail::cmd_train(cfg, out, err);
    if (chosen == cls_cmd) {
      if (cls_cats->count() > 0 && cls_mode->count() == 0) cfg.mode = "contextual";
      return detail::cmd_classify(cfg, cls_mode->count() > 0 || cls_cats->count() > 0, in, out);
    }
    if (chosen == eval_cmd) return detail::cmd_evaluate(cfg, out, err);
    if (chosen == priors_cmd) return detail::cmd_priors(cfg, out);
    if (chosen == synth_cmd) return detail::cmd_synth(cfg, out, err);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const TrainingError& e) {
    err << "error: training aborted: " << e.what() << "\n";
    return kTrainError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kUsageError;
}

}  // namespace ctxsent::cli
