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

#include "slukit/corpus_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "slukit/errors.hpp"
#include "slukit/logmath.hpp"
#include "slukit/version.hpp"

namespace slukit {

namespace {

struct Line {
  std::size_t number;  // 1-based
  std::string_view text;
};

// Content lines only: comments ('#' in column one) and blank lines are
// dropped; trailing '\r' is stripped.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    start = end + 1;
    if (!line.empty() && line[0] == '#') continue;
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    }
    if (blank) continue;
    lines.push_back(Line{number, line});
  }
  return lines;
}

// Splits "id<TAB>rest"; the id must be non-empty and whitespace-free.
std::pair<std::string_view, std::string_view> split_id_line(
    const Line& line) {
  const std::size_t tab = line.text.find('\t');
  if (tab == std::string_view::npos) {
    throw CorpusParseError(line.number, "missing TAB after utterance id");
  }
  const std::string_view id = line.text.substr(0, tab);
  if (id.empty()) {
    throw CorpusParseError(line.number, "empty utterance id");
  }
  for (char c : id) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw CorpusParseError(line.number,
                             "utterance id contains whitespace");
    }
  }
  return {id, line.text.substr(tab + 1)};
}

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "0";
  return std::string(buf, ptr);
}

bool parse_double(std::string_view text, double* value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, *value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

void Corpus::add(const std::string& utt_id, EnrichedTranscript transcript) {
  if (!index_.emplace(utt_id, utterances_.size()).second) {
    throw DuplicateUttIdError(0, utt_id);
  }
  utterances_.emplace_back(utt_id, std::move(transcript));
}

bool Corpus::contains(const std::string& utt_id) const {
  return index_.count(utt_id) > 0;
}

const EnrichedTranscript* Corpus::find(const std::string& utt_id) const {
  const auto it = index_.find(utt_id);
  return it == index_.end() ? nullptr : &utterances_[it->second].second;
}

Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  for (const Line& line : content_lines(text)) {
    const auto [id, rest] = split_id_line(line);
    EnrichedTranscript transcript;
    if (!is_blank(rest)) {
      try {
        transcript = parse_enriched(rest);
      } catch (const TagError& e) {
        throw CorpusParseError(line.number, e.what());
      }
    }
    // else: an empty text field denotes an empty hypothesis.
    try {
      corpus.add(std::string(id), std::move(transcript));
    } catch (const DuplicateUttIdError& e) {
      throw DuplicateUttIdError(line.number, e.utt_id());
    }
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  return parse_corpus(read_text_file(path));
}

std::string serialize_corpus(const Corpus& corpus, const TagFormat& fmt) {
  std::string out;
  for (const auto& [utt_id, transcript] : corpus.utterances()) {
    out += utt_id;
    out += '\t';
    out += serialize_enriched(transcript, fmt);
    out += '\n';
  }
  return out;
}

void save_corpus(const std::string& path, const Corpus& corpus,
                 const TagFormat& fmt) {
  write_text_file_atomic(path, serialize_corpus(corpus, fmt));
}

void parse_durations(std::string_view text, Corpus* corpus) {
  for (const Line& line : content_lines(text)) {
    const auto [id, rest] = split_id_line(line);
    const std::string utt_id(id);
    if (!corpus->contains(utt_id)) {
      throw CorpusParseError(line.number, "duration for unknown utterance '" +
                                              utt_id + "'");
    }
    double seconds = 0.0;
    if (!parse_double(rest, &seconds) || !std::isfinite(seconds) ||
        seconds <= 0.0) {
      throw CorpusParseError(line.number,
                             "duration must be a finite number > 0");
    }
    if (!corpus->durations().emplace(utt_id, seconds).second) {
      throw CorpusParseError(line.number, "duplicate duration for '" +
                                              utt_id + "'");
    }
  }
}

void load_durations(const std::string& path, Corpus* corpus) {
  parse_durations(read_text_file(path), corpus);
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.n_utterances = corpus.size();
  for (const auto& [utt_id, transcript] : corpus.utterances()) {
    (void)utt_id;
    for (const Segment& seg : transcript.segments) {
      stats.n_words += seg.words.size();
      if (seg.tag) ++stats.n_concepts;
    }
  }
  if (!corpus.durations().empty()) {
    double total = 0.0;
    for (const auto& [utt_id, seconds] : corpus.durations()) {
      (void)utt_id;
      total += seconds;
    }
    stats.total_seconds = total;
  }
  return stats;
}

std::string format_hours(double seconds) {
  const long long total_minutes = std::llround(seconds / 60.0);
  const long long hours = total_minutes / 60;
  const long long minutes = total_minutes % 60;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lldh%02lldm", hours, minutes);
  return buf;
}

PosteriorFile parse_posteriors(std::string_view text) {
  std::vector<Line> lines;
  {
    // Posterior files do not allow comments or blank lines; split plainly.
    std::size_t start = 0;
    std::size_t number = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++number;
      start = end + 1;
      lines.push_back(Line{number, line});
    }
    while (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  }

  if (lines.empty() || lines[0].text != "CTCPOST 1") {
    throw FormatError("expected 'CTCPOST 1' header");
  }
  if (lines.size() < 3) throw FormatError("truncated posterior file");

  if (!lines[1].text.starts_with("vocab: ")) {
    throw FormatError("expected 'vocab: <blank> ...' on line 2");
  }
  std::vector<std::string> symbols;
  {
    std::string_view rest = lines[1].text.substr(7);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t space = rest.find(' ', pos);
      if (space == std::string_view::npos) space = rest.size();
      if (space > pos) symbols.emplace_back(rest.substr(pos, space - pos));
      pos = space + 1;
    }
  }
  if (symbols.empty() || symbols[0] != "<blank>") {
    throw FormatError("first vocabulary symbol must be <blank>");
  }
  const Vocab vocab = Vocab::from_symbols(std::move(symbols), 0);

  if (!lines[2].text.starts_with("frames: ")) {
    throw FormatError("expected 'frames: T' on line 3");
  }
  std::size_t frames = 0;
  {
    const std::string_view rest = lines[2].text.substr(8);
    const auto r =
        std::from_chars(rest.data(), rest.data() + rest.size(), frames);
    if (r.ec != std::errc() || r.ptr != rest.data() + rest.size()) {
      throw FormatError("bad frame count");
    }
  }
  if (lines.size() != 3 + frames) {
    throw FormatError("expected " + std::to_string(frames) +
                      " posterior rows, found " +
                      std::to_string(lines.size() - 3));
  }

  LogPosteriorMatrix matrix =
      LogPosteriorMatrix::create(frames, vocab.size());
  for (std::size_t t = 0; t < frames; ++t) {
    const Line& line = lines[3 + t];
    std::size_t pos = 0;
    std::size_t v = 0;
    const std::string_view row = line.text;
    while (pos < row.size()) {
      std::size_t space = row.find(' ', pos);
      if (space == std::string_view::npos) space = row.size();
      if (space > pos) {
        if (v >= vocab.size()) {
          throw FormatError("line " + std::to_string(line.number) +
                            ": too many posterior values");
        }
        double value = 0.0;
        if (!parse_double(row.substr(pos, space - pos), &value)) {
          throw FormatError("line " + std::to_string(line.number) +
                            ": bad posterior value");
        }
        matrix.at(t, v++) = value;
      }
      pos = space + 1;
    }
    if (v != vocab.size()) {
      throw FormatError("line " + std::to_string(line.number) + ": expected "
                        + std::to_string(vocab.size()) + " values, found " +
                        std::to_string(v));
    }
  }
  matrix.validate();
  return PosteriorFile{vocab, std::move(matrix)};
}

PosteriorFile load_posteriors(const std::string& path) {
  return parse_posteriors(read_text_file(path));
}

std::string serialize_posteriors(const Vocab& vocab,
                                 const LogPosteriorMatrix& matrix) {
  if (matrix.vocab_size != vocab.size()) {
    throw FormatError("matrix width does not match vocabulary");
  }
  if (vocab.blank_index != 0 || vocab.symbols[0] != "<blank>") {
    throw FormatError(
        "posterior files store the blank as symbol 0, spelled <blank>");
  }
  matrix.validate();
  std::string out = "CTCPOST 1\nvocab:";
  for (const std::string& s : vocab.symbols) {
    out += ' ';
    out += s;
  }
  out += "\nframes: " + std::to_string(matrix.frames) + "\n";
  for (std::size_t t = 0; t < matrix.frames; ++t) {
    for (std::size_t v = 0; v < matrix.vocab_size; ++v) {
      if (v > 0) out += ' ';
      out += format_double(matrix.at(t, v));
    }
    out += '\n';
  }
  return out;
}

void save_posteriors(const std::string& path, const Vocab& vocab,
                     const LogPosteriorMatrix& matrix) {
  write_text_file_atomic(path, serialize_posteriors(vocab, matrix));
}

std::vector<std::pair<std::string, std::string>> parse_manifest(
    std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::unordered_map<std::string, std::size_t> seen;
  for (const Line& line : content_lines(text)) {
    const auto [id, rest] = split_id_line(line);
    if (is_blank(rest)) {
      throw CorpusParseError(line.number, "missing posterior file name");
    }
    std::string utt_id(id);
    if (!seen.emplace(utt_id, line.number).second) {
      throw DuplicateUttIdError(line.number, utt_id);
    }
    entries.emplace_back(std::move(utt_id), std::string(rest));
  }
  return entries;
}

std::vector<std::pair<std::string, std::string>> load_manifest(
    const std::string& path) {
  return parse_manifest(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

void write_text_file_atomic(const std::string& path,
                            std::string_view content) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + temp + "' for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::remove(temp.c_str());
      throw IoError("error while writing '" + temp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::remove(temp.c_str());
    throw IoError("cannot rename '" + temp + "' to '" + path + "': " +
                  ec.message());
  }
}

}  // namespace slukit
