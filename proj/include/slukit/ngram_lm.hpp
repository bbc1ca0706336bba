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
//
// Back-off n-gram language models with ARPA serialization.
//
// Sentence-marker conventions (shared by training, querying and scoring):
//   * every training sentence is padded as  <s> w1 ... wn </s>;
//   * <s> is never predicted: its unigram is stored at log10 prob -99 and
//     it is excluded from the normalization denominator;
//   * </s> is predicted like an ordinary event, so the prediction
//     vocabulary is {seen tokens except <s>} plus <unk>;
//   * tokens unseen in training map to <unk> for queries.
//
// Smoothing is interpolated Kneser-Ney with a single fixed discount,
// expressed in standard back-off (ARPA) form, or unsmoothed maximum
// likelihood, in which case no back-off mass exists and unseen events have
// probability zero (log prob -inf).

#ifndef SLUKIT_NGRAM_LM_HPP_
#define SLUKIT_NGRAM_LM_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace slukit {

inline constexpr const char* kSentStart = "<s>";
inline constexpr const char* kSentEnd = "</s>";
inline constexpr const char* kUnknown = "<unk>";

// One stored n-gram.  Probabilities and back-off weights are log10, as in
// the ARPA format.  A missing back-off weight means "no mass reserved here"
// and reads as log10(1) = 0 during queries.
struct NGramEntry {
  double log10_prob = 0.0;
  std::optional<double> log10_backoff;

  friend bool operator==(const NGramEntry&, const NGramEntry&) = default;
};

enum class SmoothingKind { kMle, kInterpolatedKneserNey };

struct Smoothing {
  SmoothingKind kind = SmoothingKind::kInterpolatedKneserNey;
  double discount = 0.75;  // Kneser-Ney only; must lie in [0, 1)

  static Smoothing mle() { return {SmoothingKind::kMle, 0.0}; }
  static Smoothing kneser_ney(double discount = 0.75) {
    return {SmoothingKind::kInterpolatedKneserNey, discount};
  }
};

class NGramModel {
 public:
  using TokenSeq = std::vector<std::string>;
  // std::map keeps entries in lexicographic token order, which makes ARPA
  // output deterministic.
  using GramMap = std::map<TokenSeq, NGramEntry>;

  NGramModel(int order, std::vector<GramMap> grams, bool has_backoff);

  int order() const { return order_; }

  // False for maximum-likelihood models: unseen n-grams then score -inf
  // instead of backing off.
  bool has_backoff() const { return has_backoff_; }

  // Stored k-grams, k in [1, order()].
  const GramMap& grams(int k) const;

  bool in_vocab(const std::string& token) const;

  // log10 P(token | context).  Longer contexts are truncated to the last
  // order()-1 tokens; unknown tokens (in the context or as the event) map
  // to <unk>.  Total over any input; -inf encodes probability zero.
  double log_prob(std::span<const std::string> context,
                  const std::string& token) const;

  // log10 P(tokens </s> | <s>): sum of conditional scores across the
  // sentence including the end marker.
  double sequence_score(std::span<const std::string> tokens) const;

 private:
  int order_;
  std::vector<GramMap> grams_;
  bool has_backoff_;
  std::unordered_set<std::string> vocab_;
};

// Trains a model of the given order on tokenized sentences (no markers; the
// padding above is applied internally).
//
// Throws EmptyCorpusError when `corpus` has no sentences,
// InvalidDiscountError when a Kneser-Ney discount lies outside [0, 1), and
// std::invalid_argument when order < 1.
NGramModel train(const std::vector<std::vector<std::string>>& corpus,
                 int order, const Smoothing& smoothing = {});

// Corpus perplexity: 10^(-total log10 score / event count), where every
// sentence contributes its word count plus one </s> event.  Throws
// EmptyCorpusError on an empty corpus.  Infinite when any event has
// probability zero.
double perplexity(const NGramModel& model,
                  const std::vector<std::vector<std::string>>& corpus);

// ARPA text form.  Probabilities and back-off weights are written as
// shortest round-trip decimals, so load(save(m)) reproduces every stored
// value bit for bit; save(load(text)) is byte-identical for files this
// library wrote.
std::string to_arpa(const NGramModel& model);

// Parses ARPA text.  Throws ArpaParseError (with a 1-based line number) on
// structural problems: missing \data\ or \end\, section/entry count
// mismatches, malformed entries, duplicate n-grams, or a k-gram (k > 1)
// whose (k-1)-gram prefix is absent.
NGramModel from_arpa(std::string_view text);

// File convenience wrappers; throw IoError when the file cannot be
// accessed.  Writing is atomic (temp file + rename).
NGramModel read_arpa_file(const std::string& path);
void write_arpa_file(const std::string& path, const NGramModel& model);

}  // namespace slukit

#endif  // SLUKIT_NGRAM_LM_HPP_
