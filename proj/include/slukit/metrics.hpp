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
// Error-rate metrics for concept-enriched transcriptions:
//
//   WER   on the word sequences with markup stripped;
//   CER   (concept error rate) on the concept-tag sequences alone;
//   CVER  (concept-value error rate) on (tag, value) pairs, where a pair
//         matches only when both the tag and the normalized value match.
//
// All rates are (S + I + D) / N with N the reference length of the scored
// unit; corpus rates pool the raw counts over utterances (micro-average).
// Since any CVER alignment induces a tag alignment of equal or lower cost,
// CVER >= CER on every pair of transcripts.

#ifndef SLUKIT_METRICS_HPP_
#define SLUKIT_METRICS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slukit/alignment.hpp"
#include "slukit/annotation.hpp"
#include "slukit/corpus_io.hpp"

namespace slukit {

// Edit counts for one scored unit (words, tags, or pairs).
struct ErrorRateReport {
  std::size_t matches = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_count = 0;  // N; matches + substitutions + deletions

  std::size_t errors() const {
    return substitutions + insertions + deletions;
  }
  bool defined() const { return ref_count > 0; }
  // errors() / ref_count; may exceed 1 when insertions dominate.
  // Throws UndefinedRateError when ref_count == 0.
  double rate() const;

  friend bool operator==(const ErrorRateReport&,
                         const ErrorRateReport&) = default;
};

ErrorRateReport report_from_alignment(const Alignment& a);

// Normalization applied to words (for WER) and concept values (for CVER)
// before comparison.  Values additionally join their words with single
// spaces, so original inter-word spacing never matters.
struct NormOptions {
  bool case_fold = false;
  bool strip_accents = false;
};

ErrorRateReport word_error_rate(std::span<const std::string> ref,
                                std::span<const std::string> hyp,
                                const NormOptions& norm = {});
ErrorRateReport concept_error_rate(const EnrichedTranscript& ref,
                                   const EnrichedTranscript& hyp);
ErrorRateReport concept_value_error_rate(const EnrichedTranscript& ref,
                                         const EnrichedTranscript& hyp,
                                         const NormOptions& norm = {});

// Half-width of the two-sided normal-approximation confidence interval of
// a binomial rate estimated from n units: z * sqrt(rate*(1-rate)/n).
// z is the standard normal critical value (1.959964 at the default 0.95
// level).  Requires rate in [0, 1], n >= 1 and level in (0, 1); throws
// std::invalid_argument otherwise.
double confidence_margin(double rate, std::size_t n, double level = 0.95);

// Per-concept attribution from the CER alignments: substitutions and
// deletions count against the reference tag, insertions against the
// hypothesis tag.
struct ConceptCounts {
  std::size_t matches = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  friend bool operator==(const ConceptCounts&,
                         const ConceptCounts&) = default;
};

struct UtteranceScore {
  std::string utt_id;
  ErrorRateReport wer;
  ErrorRateReport cer;
  ErrorRateReport cver;
  bool empty_hypothesis = false;  // no hypothesis line; scored as all-deletion
};

struct ScoreOptions {
  NormOptions norm;
  std::size_t jobs = 1;  // worker threads; results are order-independent
  double confidence_level = 0.95;
};

struct ScoreReport {
  ErrorRateReport wer;
  ErrorRateReport cer;
  ErrorRateReport cver;
  // Margins at the configured confidence level, over pooled counts; absent
  // when the corresponding rate is undefined.  Rates above 1 are clamped
  // to 1 for the margin (the binomial model does not extend past it).
  std::optional<double> cer_margin;
  std::optional<double> cver_margin;
  std::map<std::string, ConceptCounts> per_concept;
  std::vector<UtteranceScore> per_utterance;  // reference order
  std::size_t empty_hypotheses = 0;
  ScoreOptions options;
};

// Scores `hyps` against `refs`:
//   * every hypothesis id must exist in the references, else
//     MissingReferenceError;
//   * references without a hypothesis line are scored against the empty
//     transcript (pure deletions) and flagged.
// Output is identical for any jobs count.
ScoreReport score_corpus(const Corpus& refs, const Corpus& hyps,
                         const ScoreOptions& options = {});

// Versioned, line-oriented machine format ("SLUSCORE 1"); stable byte-wise
// across runs for equal inputs.  Rates use 6 fractional digits; undefined
// rates and margins print as "undefined".
std::string render_report(const ScoreReport& report);

}  // namespace slukit

#endif  // SLUKIT_METRICS_HPP_
