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
// Line-oriented corpus and posterior-matrix files.
//
// Transcript file, one utterance per line:
//
//   utt_id<TAB>enriched text ...
//
// '#'-initial lines are comments; blank lines are skipped; an empty text
// field denotes an empty hypothesis.  Durations sidecar: utt_id<TAB>seconds.
//
// Posterior file ("CTCPOST 1"):
//
//   CTCPOST 1
//   vocab: <blank> sym1 sym2 ...
//   frames: T
//   <V natural-log posteriors>        (T lines, space-separated)
//
// The first vocabulary symbol is always the CTC blank.  Every frame must
// log-sum-exp to 0 within 1e-4.  Values are written as shortest
// round-trip decimals, so a load/save cycle is byte-identical.

#ifndef SLUKIT_CORPUS_IO_HPP_
#define SLUKIT_CORPUS_IO_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "slukit/annotation.hpp"
#include "slukit/ctc_decoder.hpp"

namespace slukit {

// An ordered collection of utterances with unique ids, plus optional
// durations in seconds.
class Corpus {
 public:
  using Entry = std::pair<std::string, EnrichedTranscript>;

  // Throws DuplicateUttIdError when utt_id is already present.
  void add(const std::string& utt_id, EnrichedTranscript transcript);

  bool contains(const std::string& utt_id) const;
  const EnrichedTranscript* find(const std::string& utt_id) const;

  const std::vector<Entry>& utterances() const { return utterances_; }
  std::size_t size() const { return utterances_.size(); }
  bool empty() const { return utterances_.empty(); }

  // utt_id -> seconds; populated by load_durations or by hand.
  std::map<std::string, double>& durations() { return durations_; }
  const std::map<std::string, double>& durations() const {
    return durations_;
  }

 private:
  std::vector<Entry> utterances_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::string, double> durations_;
};

struct CorpusStats {
  std::size_t n_words = 0;       // words outside markup
  std::size_t n_utterances = 0;
  std::size_t n_concepts = 0;    // tagged segments
  std::optional<double> total_seconds;  // absent without duration data
};

// Parses transcript text.  Throws CorpusParseError (1-based line numbers)
// for malformed lines, including annotation errors, and
// DuplicateUttIdError for repeated ids.
Corpus parse_corpus(std::string_view text);
Corpus load_corpus(const std::string& path);

std::string serialize_corpus(const Corpus& corpus, const TagFormat& fmt = {});
void save_corpus(const std::string& path, const Corpus& corpus,
                 const TagFormat& fmt = {});

// Reads a durations sidecar into corpus.durations().  Every id must exist
// in the corpus and every duration must be a finite number > 0.
void load_durations(const std::string& path, Corpus* corpus);
void parse_durations(std::string_view text, Corpus* corpus);

// Corpus-level counts; total_seconds is present when at least one
// utterance has a duration (and sums only over utterances that do).
CorpusStats corpus_stats(const Corpus& corpus);

// Renders seconds as hours and zero-padded minutes, e.g. "2h59m"
// (total minutes rounded to nearest).
std::string format_hours(double seconds);

// A posterior matrix with its vocabulary, as stored in a CTCPOST file.
struct PosteriorFile {
  Vocab vocab;
  LogPosteriorMatrix matrix;
};

// Throws FormatError for structural problems and NormalizationError when a
// frame does not log-sum-exp to 0 within 1e-4.
PosteriorFile parse_posteriors(std::string_view text);
PosteriorFile load_posteriors(const std::string& path);

std::string serialize_posteriors(const Vocab& vocab,
                                 const LogPosteriorMatrix& matrix);
void save_posteriors(const std::string& path, const Vocab& vocab,
                     const LogPosteriorMatrix& matrix);

// Decode manifest: utt_id<TAB>posterior-file-name (relative names are
// resolved against the posterior directory by the caller).  Comments and
// blank lines as in transcript files; ids must be unique.
std::vector<std::pair<std::string, std::string>> parse_manifest(
    std::string_view text);
std::vector<std::pair<std::string, std::string>> load_manifest(
    const std::string& path);

// Whole-file helpers.  Writing goes through a temp file in the same
// directory followed by an atomic rename, so a failed run never leaves a
// partial output file.
std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path,
                            std::string_view content);

}  // namespace slukit

#endif  // SLUKIT_CORPUS_IO_HPP_
