#pragma once

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <ranges>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxsent/error.hpp"
#include "ctxsent/preprocess.hpp"

namespace ctxsent {

using TokenId = std::uint32_t;

// Tokens seen fewer times than this in training collapse to <unk>.
inline constexpr std::uint64_t kDefaultMinTokenCount = 6;

// Token <-> dense id map. Ids 0 and 1 are reserved for <unk> and <s>; the
// remaining ids follow the sorted token order, so a vocabulary is fully
// determined by its token set.
class Vocabulary {
 public:
  static constexpr TokenId kUnk = 0;
  static constexpr TokenId kBos = 1;
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kBosToken = "<s>";

  Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

  // `tokens` are the regular entries; order is irrelevant.
  explicit Vocabulary(std::vector<std::string> tokens) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    tokens_.reserve(tokens.size() + 2);
    tokens_.emplace_back(kUnkToken);
    tokens_.emplace_back(kBosToken);
    for (auto& t : tokens) {
      if (t == kUnkToken || t == kBosToken) continue;
      tokens_.push_back(std::move(t));
    }
    index_.reserve(tokens_.size());
    for (TokenId i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
  }

  // Keeps every token whose corpus count reaches `min_count`.
  template <std::ranges::input_range R, class Proj = std::identity>
  static Vocabulary build(R&& sequences, std::uint64_t min_count = kDefaultMinTokenCount,
                          Proj proj = {}) {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t n = 0;
    for (auto&& s : sequences) {
      for (const std::string& t : std::invoke(proj, s)) {
        ++counts[t];
        ++n;
      }
    }
    if (n == 0) throw TrainingError("cannot build a vocabulary from an empty corpus");
    std::vector<std::string> kept;
    for (auto& [tok, c] : counts)
      if (c >= min_count) kept.push_back(tok);
    return Vocabulary(std::move(kept));
  }

  TokenId id(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? kUnk : it->second;
  }
  bool contains(std::string_view token) const { return index_.count(std::string(token)) > 0; }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

struct BigramOptions {
  // Prepend <s> so the first word is scored too. Off reproduces the plain
  // product over i = 2..l.
  bool use_bos = true;
  // Use this discount instead of estimating it from count-of-counts.
  std::optional<double> fixed_discount;
};

// Bigram language model with interpolated Kneser-Ney smoothing:
//
//   P(w|h) = max(c(h,w) - D, 0) / c(h) + D * N1+(h .) / c(h) * Pcont(w)
//   Pcont(w) = N1+(. w) / N1+(. .)
//
// and P(w|h) = Pcont(w) when h was never seen as a history. Vocabulary
// entries with no left context (other than <s>) get a continuation count of
// one so that nothing scores -inf.
class BigramModel {
 public:
  static constexpr double kFallbackDiscount = 0.75;

  BigramModel() = default;

  template <std::ranges::input_range R, class Proj = std::identity>
  static BigramModel train(Vocabulary vocab, R&& sequences, BigramOptions opts = {},
                           Proj proj = {}) {
    BigramModel m;
    m.vocab_ = std::move(vocab);
    m.use_bos_ = opts.use_bos;
    if (opts.fixed_discount) {
      if (!(*opts.fixed_discount > 0.0 && *opts.fixed_discount < 1.0))
        throw TrainingError("discount must lie strictly between 0 and 1");
      m.fixed_discount_ = opts.fixed_discount;
    }
    std::vector<TokenId> ids;
    for (auto&& s : sequences) {
      const TokenSequence& seq = std::invoke(proj, s);
      ids.clear();
      if (m.use_bos_) ids.push_back(Vocabulary::kBos);
      for (const auto& t : seq) ids.push_back(m.vocab_.id(t));
      m.total_tokens_ += seq.size();
      for (std::size_t i = 1; i < ids.size(); ++i) ++m.bigrams_[key(ids[i - 1], ids[i])];
    }
    if (m.total_tokens_ == 0) throw TrainingError("cannot train a bigram model on an empty corpus");
    m.finalize();
    return m;
  }

  // Probability of `w` following `h`.
  double prob(TokenId h, TokenId w) const {
    const double pcont = static_cast<double>(effective_continuation(w)) / continuation_total_;
    const std::uint64_t ch = history_counts_[h];
    if (ch == 0) return pcont;
    const double c_h = static_cast<double>(ch);
    const double c_hw = static_cast<double>(bigram_count(h, w));
    const double backoff = discount_ * static_cast<double>(distinct_successors_[h]) / c_h;
    return std::max(c_hw - discount_, 0.0) / c_h + backoff * pcont;
  }

  double log_prob(TokenId h, TokenId w) const { return std::log(prob(h, w)); }

  // Out-of-vocabulary tokens are looked up as <unk>.
  double log_prob(std::string_view history, std::string_view token) const {
    return log_prob(vocab_.id(history), vocab_.id(token));
  }

  // Sum of log P(w_i | w_{i-1}) over the sequence (prefixed with <s> when
  // the model uses it). An empty sequence scores 0.
  double score_sequence(const TokenSequence& tokens) const {
    if (tokens.empty()) return 0.0;
    double total = 0.0;
    TokenId prev = Vocabulary::kBos;
    std::size_t i = 0;
    if (!use_bos_) prev = vocab_.id(tokens[i++]);
    for (; i < tokens.size(); ++i) {
      const TokenId cur = vocab_.id(tokens[i]);
      total += log_prob(prev, cur);
      prev = cur;
    }
    return total;
  }

  const Vocabulary& vocabulary() const { return vocab_; }
  bool uses_bos() const { return use_bos_; }
  double discount() const { return discount_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::uint64_t bigram_count(TokenId h, TokenId w) const {
    auto it = bigrams_.find(key(h, w));
    return it == bigrams_.end() ? 0 : it->second;
  }
  // c(h): occurrences of h as a history, i.e. the sum of its bigram counts.
  std::uint64_t history_count(TokenId h) const { return history_counts_[h]; }
  // N1+(h .): number of distinct successors of h.
  std::uint64_t distinct_successors(TokenId h) const { return distinct_successors_[h]; }
  // N1+(. w): number of distinct left contexts of w, before flooring.
  std::uint64_t continuation_count(TokenId w) const { return continuations_[w]; }
  std::uint64_t distinct_bigrams() const { return bigrams_.size(); }
  std::uint64_t count_of_counts(std::uint64_t c) const {
    return static_cast<std::uint64_t>(std::count_if(
        bigrams_.begin(), bigrams_.end(), [c](const auto& kv) { return kv.second == c; }));
  }

  // D = n1 / (n1 + 2 n2) over bigram count-of-counts, or the fallback when
  // that is not strictly inside (0, 1).
  static double estimate_discount(std::uint64_t n1, std::uint64_t n2) {
    if (n1 == 0 || n2 == 0) return kFallbackDiscount;
    return static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2);
  }

  // Text format, see docs/FORMATS.md. Output is a pure function of the counts.
  void save(std::ostream& out) const {
    out << "ctxsent-bigram 1\n";
    out << "use_bos " << (use_bos_ ? 1 : 0) << "\n";
    std::ostringstream d;
    d << std::hexfloat << discount_;
    out << "discount " << d.str() << (fixed_discount_ ? " fixed" : " estimated") << "\n";
    out << "vocab " << vocab_.size() << "\n";
    for (const auto& t : vocab_.tokens()) out << t << "\n";
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(bigrams_.begin(), bigrams_.end());
    std::sort(sorted.begin(), sorted.end());
    out << "bigrams " << sorted.size() << "\n";
    for (const auto& [k, c] : sorted) out << (k >> 32) << ' ' << (k & 0xffffffffu) << ' ' << c << "\n";
    out << "total_tokens " << total_tokens_ << "\n";
  }

  static BigramModel load(std::istream& in) {
    auto bad = [](const std::string& what) { return InputError("bigram model: " + what); };
    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != "ctxsent-bigram" || version != 1)
      throw bad("unrecognized header");
    BigramModel m;
    int bos = 0;
    std::string discount_text, discount_source;
    std::size_t vocab_size = 0;
    if (!(in >> word >> bos) || word != "use_bos") throw bad("expected use_bos");
    if (!(in >> word >> discount_text >> discount_source) || word != "discount" ||
        (discount_source != "fixed" && discount_source != "estimated"))
      throw bad("expected discount");
    const double stored_discount = std::strtod(discount_text.c_str(), nullptr);
    if (discount_source == "fixed") m.fixed_discount_ = stored_discount;
    if (!(in >> word >> vocab_size) || word != "vocab" || vocab_size < 2) throw bad("expected vocab");
    std::vector<std::string> tokens(vocab_size);
    for (auto& t : tokens)
      if (!(in >> t)) throw bad("truncated vocabulary");
    if (tokens[0] != Vocabulary::kUnkToken || tokens[1] != Vocabulary::kBosToken)
      throw bad("reserved tokens missing");
    m.vocab_ = Vocabulary(std::vector<std::string>(tokens.begin() + 2, tokens.end()));
    if (m.vocab_.tokens() != tokens) throw bad("vocabulary not in canonical order");
    std::size_t n = 0;
    if (!(in >> word >> n) || word != "bigrams") throw bad("expected bigrams");
    m.bigrams_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t h = 0, w = 0, c = 0;
      if (!(in >> h >> w >> c)) throw bad("truncated bigram table");
      if (h >= vocab_size || w >= vocab_size || c == 0) throw bad("bigram entry out of range");
      m.bigrams_[key(static_cast<TokenId>(h), static_cast<TokenId>(w))] = c;
    }
    if (!(in >> word >> m.total_tokens_) || word != "total_tokens") throw bad("expected total_tokens");
    m.use_bos_ = bos != 0;
    m.finalize();
    if (stored_discount != m.discount_)
      throw bad("stored discount disagrees with counts");
    return m;
  }

 private:
  static std::uint64_t key(TokenId h, TokenId w) {
    return (static_cast<std::uint64_t>(h) << 32) | w;
  }

  std::uint64_t effective_continuation(TokenId w) const {
    if (w == Vocabulary::kBos) return 0;
    return std::max<std::uint64_t>(continuations_[w], 1);
  }

  void finalize() {
    const std::size_t v = vocab_.size();
    history_counts_.assign(v, 0);
    distinct_successors_.assign(v, 0);
    continuations_.assign(v, 0);
    std::uint64_t n1 = 0, n2 = 0;
    for (const auto& [k, c] : bigrams_) {
      const auto h = static_cast<TokenId>(k >> 32);
      const auto w = static_cast<TokenId>(k & 0xffffffffu);
      history_counts_[h] += c;
      ++distinct_successors_[h];
      ++continuations_[w];
      if (c == 1) ++n1;
      if (c == 2) ++n2;
    }
    discount_ = fixed_discount_ ? *fixed_discount_ : estimate_discount(n1, n2);
    continuation_total_ = 0.0;
    for (TokenId w = 0; w < v; ++w) continuation_total_ += static_cast<double>(effective_continuation(w));
  }

  Vocabulary vocab_;
  bool use_bos_ = true;
  std::unordered_map<std::uint64_t, std::uint64_t> bigrams_;
  std::vector<std::uint64_t> history_counts_;
  std::vector<std::uint64_t> distinct_successors_;
  std::vector<std::uint64_t> continuations_;
  std::uint64_t total_tokens_ = 0;
  double discount_ = kFallbackDiscount;
  std::optional<double> fixed_discount_;
  double continuation_total_ = 1.0;
};

}  // namespace ctxsent
