// Copyright 2026 The slukit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slukit/ngram_lm.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "slukit/errors.hpp"
#include "slukit/logmath.hpp"

namespace slukit {

namespace {

using TokenSeq = NGramModel::TokenSeq;
using GramMap = NGramModel::GramMap;
using CountMap = std::map<TokenSeq, std::uint64_t>;

// The stored log10 value of the never-predicted <s> unigram.
constexpr double kSentStartLog10 = -99.0;

// Raw counts of every k-token window, k = 1..order, over padded sentences.
std::vector<CountMap> count_windows(
    const std::vector<std::vector<std::string>>& corpus, int order) {
  std::vector<CountMap> raw(order);
  for (const std::vector<std::string>& sent : corpus) {
    TokenSeq padded;
    padded.reserve(sent.size() + 2);
    padded.push_back(kSentStart);
    padded.insert(padded.end(), sent.begin(), sent.end());
    padded.push_back(kSentEnd);
    for (int k = 1; k <= order; ++k) {
      const std::size_t width = static_cast<std::size_t>(k);
      if (padded.size() < width) continue;
      for (std::size_t i = 0; i + width <= padded.size(); ++i) {
        ++raw[k - 1][TokenSeq(padded.begin() + i, padded.begin() + i + width)];
      }
    }
  }
  return raw;
}

// Back-off query over a (possibly partially built) gram table.  `context`
// and `token` must already be in-vocabulary.
double backoff_log_prob(const std::vector<GramMap>& grams, TokenSeq context,
                        const std::string& token) {
  double accumulated = 0.0;
  for (;;) {
    TokenSeq gram = context;
    gram.push_back(token);
    const GramMap& level = grams[gram.size() - 1];
    if (auto it = level.find(gram); it != level.end()) {
      return accumulated + it->second.log10_prob;
    }
    if (context.empty()) return kNegInf;
    const GramMap& ctx_level = grams[context.size() - 1];
    if (auto it = ctx_level.find(context); it != ctx_level.end()) {
      if (it->second.log10_backoff) accumulated += *it->second.log10_backoff;
    }
    context.erase(context.begin());
  }
}

NGramModel train_mle(const std::vector<CountMap>& raw, int order) {
  std::vector<GramMap> grams(order);

  double denom1 = 0.0;
  for (const auto& [gram, count] : raw[0]) {
    if (gram[0] != kSentStart) denom1 += static_cast<double>(count);
  }
  for (const auto& [gram, count] : raw[0]) {
    const double lp = gram[0] == kSentStart
                          ? kSentStartLog10
                          : std::log10(static_cast<double>(count) / denom1);
    grams[0][gram] = NGramEntry{lp, std::nullopt};
  }
  // Unknown events are impossible under maximum likelihood.
  grams[0][{kUnknown}] = NGramEntry{kNegInf, std::nullopt};

  for (int k = 2; k <= order; ++k) {
    CountMap context_totals;
    for (const auto& [gram, count] : raw[k - 1]) {
      context_totals[TokenSeq(gram.begin(), gram.end() - 1)] += count;
    }
    for (const auto& [gram, count] : raw[k - 1]) {
      const std::uint64_t total =
          context_totals[TokenSeq(gram.begin(), gram.end() - 1)];
      grams[k - 1][gram] = NGramEntry{
          std::log10(static_cast<double>(count) / static_cast<double>(total)),
          std::nullopt};
    }
  }
  return NGramModel(order, std::move(grams), /*has_backoff=*/false);
}

NGramModel train_kneser_ney(const std::vector<CountMap>& raw, int order,
                            double discount) {
  // Adjusted counts: raw occurrence counts at the top order; at each lower
  // order the number of distinct one-token left extensions (continuation
  // counts), except that grams starting with <s> keep raw counts since
  // nothing can ever precede <s>.
  std::vector<CountMap> adjusted(order);
  adjusted[order - 1] = raw[order - 1];
  for (int length = 1; length < order; ++length) {
    CountMap& out = adjusted[length - 1];
    for (const auto& [extension, count] : raw[length]) {
      (void)count;  // each distinct extension contributes exactly one
      ++out[TokenSeq(extension.begin() + 1, extension.end())];
    }
    for (const auto& [gram, count] : raw[length - 1]) {
      if (gram[0] == kSentStart) out[gram] = count;
    }
    assert(out.size() == raw[length - 1].size());
  }

  std::vector<GramMap> grams(order);
  const double d = discount;

  // Unigrams: interpolate with the uniform distribution over the
  // prediction vocabulary (seen tokens except <s>, plus <unk>).
  double denom1 = 0.0;
  std::size_t distinct1 = 0;
  for (const auto& [gram, count] : adjusted[0]) {
    if (gram[0] == kSentStart) continue;
    denom1 += static_cast<double>(count);
    ++distinct1;
  }
  const double p_uniform = 1.0 / static_cast<double>(distinct1 + 1);
  const double gamma1 = d * static_cast<double>(distinct1) / denom1;
  for (const auto& [gram, count] : adjusted[0]) {
    const double lp =
        gram[0] == kSentStart
            ? kSentStartLog10
            : std::log10((static_cast<double>(count) - d) / denom1 +
                         gamma1 * p_uniform);
    grams[0][gram] = NGramEntry{lp, std::nullopt};
  }
  grams[0][{kUnknown}] = NGramEntry{std::log10(gamma1 * p_uniform),
                                    std::nullopt};

  // Higher orders, lowest first: every level only queries the finished
  // levels below it for the interpolation term.
  for (int k = 2; k <= order; ++k) {
    const CountMap& level_counts = adjusted[k - 1];

    struct ContextStats {
      double total = 0.0;
      std::size_t distinct = 0;
    };
    std::map<TokenSeq, ContextStats> context_stats;
    for (const auto& [gram, count] : level_counts) {
      ContextStats& s =
          context_stats[TokenSeq(gram.begin(), gram.end() - 1)];
      s.total += static_cast<double>(count);
      s.distinct += 1;
    }

    // The reserved mass of each context becomes its back-off weight,
    // attached to the (k-1)-gram entry (which exists by construction).
    for (const auto& [context, stats] : context_stats) {
      const double gamma =
          d * static_cast<double>(stats.distinct) / stats.total;
      auto it = grams[k - 2].find(context);
      assert(it != grams[k - 2].end());
      it->second.log10_backoff = std::log10(gamma);
    }

    for (const auto& [gram, count] : level_counts) {
      const ContextStats& s =
          context_stats.at(TokenSeq(gram.begin(), gram.end() - 1));
      const double lower = std::pow(
          10.0, backoff_log_prob(grams,
                                 TokenSeq(gram.begin() + 1, gram.end() - 1),
                                 gram.back()));
      const double p = (static_cast<double>(count) - d +
                        d * static_cast<double>(s.distinct) * lower) /
                       s.total;
      grams[k - 1][gram] = NGramEntry{std::log10(p), std::nullopt};
    }
  }
  return NGramModel(order, std::move(grams), /*has_backoff=*/true);
}

}  // namespace

NGramModel::NGramModel(int order, std::vector<GramMap> grams,
                       bool has_backoff)
    : order_(order), grams_(std::move(grams)), has_backoff_(has_backoff) {
  if (order_ < 1 || grams_.size() != static_cast<std::size_t>(order_)) {
    throw std::invalid_argument("NGramModel: order/table mismatch");
  }
  for (const auto& [gram, entry] : grams_[0]) {
    (void)entry;
    vocab_.insert(gram[0]);
  }
}

const NGramModel::GramMap& NGramModel::grams(int k) const {
  if (k < 1 || k > order_) {
    throw std::invalid_argument("NGramModel::grams: order out of range");
  }
  return grams_[k - 1];
}

bool NGramModel::in_vocab(const std::string& token) const {
  return vocab_.count(token) > 0;
}

double NGramModel::log_prob(std::span<const std::string> context,
                            const std::string& token) const {
  const std::size_t max_context = static_cast<std::size_t>(order_ - 1);
  const std::size_t start =
      context.size() > max_context ? context.size() - max_context : 0;

  TokenSeq ctx;
  ctx.reserve(context.size() - start);
  for (std::size_t i = start; i < context.size(); ++i) {
    ctx.push_back(in_vocab(context[i]) ? context[i] : kUnknown);
  }
  const std::string& event = in_vocab(token) ? token : kUnknown;

  double accumulated = 0.0;
  for (;;) {
    TokenSeq gram = ctx;
    gram.push_back(event);
    const GramMap& level = grams_[gram.size() - 1];
    if (auto it = level.find(gram); it != level.end()) {
      return accumulated + it->second.log10_prob;
    }
    if (ctx.empty()) {
      // Only reachable when <unk> itself is not modeled (e.g. a model
      // loaded from an external ARPA file without an <unk> entry).
      return kNegInf;
    }
    if (!has_backoff_) return kNegInf;
    const GramMap& ctx_level = grams_[ctx.size() - 1];
    if (auto it = ctx_level.find(ctx); it != ctx_level.end()) {
      if (it->second.log10_backoff) accumulated += *it->second.log10_backoff;
    }
    ctx.erase(ctx.begin());
  }
}

double NGramModel::sequence_score(
    std::span<const std::string> tokens) const {
  TokenSeq history;
  history.reserve(tokens.size() + 1);
  history.push_back(kSentStart);
  double total = 0.0;
  for (const std::string& token : tokens) {
    total += log_prob(history, token);
    history.push_back(token);
  }
  total += log_prob(history, kSentEnd);
  return total;
}

NGramModel train(const std::vector<std::vector<std::string>>& corpus,
                 int order, const Smoothing& smoothing) {
  if (order < 1) throw std::invalid_argument("train: order must be >= 1");
  if (corpus.empty()) {
    throw EmptyCorpusError("cannot train on an empty corpus");
  }
  const std::vector<CountMap> raw = count_windows(corpus, order);
  if (smoothing.kind == SmoothingKind::kMle) {
    return train_mle(raw, order);
  }
  if (!(smoothing.discount >= 0.0 && smoothing.discount < 1.0)) {
    throw InvalidDiscountError(
        "Kneser-Ney discount must lie in [0, 1), got " +
        std::to_string(smoothing.discount));
  }
  return train_kneser_ney(raw, order, smoothing.discount);
}

double perplexity(const NGramModel& model,
                  const std::vector<std::vector<std::string>>& corpus) {
  if (corpus.empty()) {
    throw EmptyCorpusError("perplexity of an empty corpus is undefined");
  }
  double total = 0.0;
  std::size_t events = 0;
  for (const std::vector<std::string>& sent : corpus) {
    total += model.sequence_score(sent);
    events += sent.size() + 1;  // words plus </s>
  }
  return std::pow(10.0, -total / static_cast<double>(events));
}

}  // namespace slukit
