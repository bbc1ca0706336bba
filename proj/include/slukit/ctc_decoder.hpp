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
// CTC decoding over log-posterior matrices: best-path (greedy) decoding and
// prefix beam search with optional n-gram language-model fusion, plus
// n-best rescoring.
//
// All scores are natural-log.  Language models score log10 (ARPA
// convention); fusion converts via ln(10).

#ifndef SLUKIT_CTC_DECODER_HPP_
#define SLUKIT_CTC_DECODER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slukit/ngram_lm.hpp"

namespace slukit {

// Decoder symbol inventory.  Symbols may be words or characters; a symbol
// spelled "<space>" marks the word delimiter of a character-level
// vocabulary and switches language-model tokenization to whole words.
struct Vocab {
  std::vector<std::string> symbols;
  std::size_t blank_index = 0;
  std::optional<std::size_t> space_index;

  // Validates and builds the inventory: at least two symbols, all distinct
  // and non-empty, blank_index in range.  Throws FormatError otherwise.
  static Vocab from_symbols(std::vector<std::string> symbols,
                            std::size_t blank_index = 0);

  std::size_t size() const { return symbols.size(); }
  const std::string& symbol(std::size_t i) const { return symbols[i]; }
  std::optional<std::size_t> index_of(std::string_view symbol) const;
};

// Row-major frames x vocabulary matrix of natural-log posteriors.
struct LogPosteriorMatrix {
  std::size_t frames = 0;
  std::size_t vocab_size = 0;
  std::vector<double> values;  // frames * vocab_size entries

  static LogPosteriorMatrix create(std::size_t frames,
                                   std::size_t vocab_size);

  double at(std::size_t t, std::size_t v) const {
    return values[t * vocab_size + v];
  }
  double& at(std::size_t t, std::size_t v) {
    return values[t * vocab_size + v];
  }

  // Every frame must log-sum-exp to 0 within `tolerance`.  Throws
  // NormalizationError (with the offending frame) or FormatError for shape
  // problems.
  void validate(double tolerance = 1e-4) const;
};

// How a language model participates in beam search.
enum class FusionMode {
  kFused,        // LM scores folded into the beam during the search
  kRescoreOnly,  // acoustic-only search; apply rescore_nbest afterwards
};

struct DecodeParams {
  std::size_t beam_width = 100;
  double lm_weight = 0.5;        // alpha: weight on ln-converted LM scores
  double insertion_bonus = 0.0;  // beta: added once per emitted LM token
  std::size_t nbest = 10;        // returned hypotheses (<= beam_width)
  FusionMode fusion_mode = FusionMode::kFused;
};

struct ScoredSequence {
  std::vector<std::string> symbols;
  double score;  // natural-log; combined when an LM participated

  friend bool operator==(const ScoredSequence&,
                         const ScoredSequence&) = default;
};

// Collapses a frame-level label path: merges adjacent repeats, then removes
// blanks.  Throws std::invalid_argument for out-of-range labels.
std::vector<std::string> collapse(std::span<const std::size_t> path,
                                  const Vocab& vocab);

// Best label per frame (ties broken toward the lowest index), collapsed.
std::vector<std::string> greedy_decode(const LogPosteriorMatrix& posteriors,
                                       const Vocab& vocab);

// Prefix beam search.  Per-prefix probabilities keep separate
// ending-in-blank and ending-in-symbol masses so that prefixes merge
// exactly; the returned score of each hypothesis is the natural-log total
// probability of all paths collapsing to it, plus the weighted LM terms
// when `lm` is present and params.fusion_mode == kFused (the LM also
// scores the sentence-end event at finalization).
//
// Hypotheses are ordered by score (descending), then lexicographically by
// symbol indices; at most params.nbest are returned.  With a beam width of
// at least the number of distinct prefixes alive at every step the search
// is exact.
//
// Throws std::invalid_argument for parameter/shape problems and
// LmTokenizationError when fused LM tokens would contain whitespace.
std::vector<ScoredSequence> prefix_beam_decode(
    const LogPosteriorMatrix& posteriors, const Vocab& vocab,
    const NGramModel* lm = nullptr, const DecodeParams& params = {});

// Re-ranks hypotheses by  acoustic + alpha * ln(10) * lm sequence score
// + beta * token count.  Tokenization: with a vocabulary that has a
// "<space>" symbol, character runs join into words; otherwise each symbol
// is one LM token.  The sort is stable, so equal combined scores keep
// their input order.
//
// Throws std::invalid_argument when `nbest` is empty and
// LmTokenizationError when a token contains whitespace.
std::vector<ScoredSequence> rescore_nbest(std::vector<ScoredSequence> nbest,
                                          const NGramModel& lm,
                                          double lm_weight,
                                          double insertion_bonus,
                                          const Vocab* vocab = nullptr);

// The LM token sequence of a decoded symbol sequence under `vocab` (word
// joining at "<space>" for character-level vocabularies).
std::vector<std::string> lm_tokens(std::span<const std::string> symbols,
                                   const Vocab& vocab);

}  // namespace slukit

#endif  // SLUKIT_CTC_DECODER_HPP_
