#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ctxsent/classifier.hpp"
#include "ctxsent/error.hpp"
#include "ctxsent/preprocess.hpp"

namespace ctxsent {

// A trained classifier on disk: one directory holding
//   manifest.json  format/version, preprocessing tag, mode, training options
//   positive.lm    negative.lm    bigram models
//   context.json   context table
struct Bundle {
  SentimentClassifier classifier;
  TrainOptions options;
};

inline constexpr int kBundleVersion = 1;

inline void save_bundle(const std::filesystem::path& dir, const SentimentClassifier& clf,
                        const TrainOptions& opts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create bundle directory " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    return out;
  };
  nlohmann::ordered_json m;
  m["format"] = "ctxsent-bundle";
  m["version"] = kBundleVersion;
  m["preprocess"] = std::string(kPreprocessVersion);
  m["mode"] = clf.mode().contextual ? "contextual" : "baseline";
  m["categories"] = clf.mode().categories.to_string();
  m["min_token_count"] = opts.min_token_count;
  m["author_min_tweets"] = opts.author_min_tweets;
  m["use_bos"] = opts.use_bos;
  {
    auto out = open("manifest.json");
    out << m.dump(2) << "\n";
  }
  {
    auto out = open("positive.lm");
    clf.model(Label::Positive).save(out);
  }
  {
    auto out = open("negative.lm");
    clf.model(Label::Negative).save(out);
  }
  {
    auto out = open("context.json");
    clf.table().save(out);
  }
}

inline Bundle load_bundle(const std::filesystem::path& dir) {
  auto open = [&](const char* name) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw InputError("cannot read " + (dir / name).string());
    return in;
  };
  nlohmann::json m;
  {
    auto in = open("manifest.json");
    m = nlohmann::json::parse(in, nullptr, false);
  }
  if (m.is_discarded() || !m.is_object() || m.value("format", "") != "ctxsent-bundle")
    throw InputError("not a model bundle: " + dir.string());
  if (m.value("version", 0) != kBundleVersion)
    throw InputError("unsupported bundle version in " + dir.string());
  const std::string pp = m.value("preprocess", "");
  if (pp != kPreprocessVersion)
    throw InputError("bundle was built with preprocessing \"" + pp + "\" but this build uses \"" +
                     std::string(kPreprocessVersion) + "\"");
  try {
    TrainOptions opts;
    opts.min_token_count = m.at("min_token_count").get<std::uint64_t>();
    opts.author_min_tweets = m.at("author_min_tweets").get<std::uint64_t>();
    opts.use_bos = m.at("use_bos").get<bool>();
    ClassifierMode mode;
    mode.contextual = m.at("mode").get<std::string>() == "contextual";
    mode.categories = CategorySet::parse(m.at("categories").get<std::string>());
    auto pin = open("positive.lm");
    auto nin = open("negative.lm");
    auto cin = open("context.json");
    auto pos = BigramModel::load(pin);
    auto neg = BigramModel::load(nin);
    auto table = ContextTable::load(cin);
    return Bundle{SentimentClassifier(std::move(pos), std::move(neg), std::move(table), mode), opts};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad bundle manifest: ") + e.what());
  }
}

}  // namespace ctxsent
