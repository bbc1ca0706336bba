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
// ARPA reader/writer.  Numbers are emitted with std::to_chars (shortest
// decimal that round-trips), so every stored probability and back-off
// weight survives a save/load cycle bit for bit.

#include <charconv>
#include <string>
#include <vector>

#include "slukit/corpus_io.hpp"
#include "slukit/errors.hpp"
#include "slukit/ngram_lm.hpp"

namespace slukit {

namespace {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "0";  // cannot happen with a 64-byte buffer
  return std::string(buf, ptr);
}

bool parse_double(std::string_view text, double* value) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, *value);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_on(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

std::string to_arpa(const NGramModel& model) {
  std::string out;
  out += "\\data\\\n";
  for (int k = 1; k <= model.order(); ++k) {
    out += "ngram " + std::to_string(k) + "=" +
           std::to_string(model.grams(k).size()) + "\n";
  }
  for (int k = 1; k <= model.order(); ++k) {
    out += "\n\\" + std::to_string(k) + "-grams:\n";
    for (const auto& [gram, entry] : model.grams(k)) {
      out += format_double(entry.log10_prob);
      out += '\t';
      for (std::size_t i = 0; i < gram.size(); ++i) {
        if (i > 0) out += ' ';
        out += gram[i];
      }
      if (entry.log10_backoff) {
        out += '\t';
        out += format_double(*entry.log10_backoff);
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

NGramModel from_arpa(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  std::size_t i = 0;
  auto line_no = [&]() { return i + 1; };

  // Anything before \data\ is ignored (some tools write a banner there).
  while (i < lines.size() && lines[i] != "\\data\\") ++i;
  if (i == lines.size()) {
    throw ArpaParseError(lines.size(), "missing \\data\\ header");
  }
  ++i;

  std::vector<std::size_t> declared;  // declared[k-1] = entry count
  while (i < lines.size() && !lines[i].empty()) {
    std::string_view line = lines[i];
    if (!line.starts_with("ngram ")) {
      throw ArpaParseError(line_no(), "expected 'ngram k=count' line");
    }
    line.remove_prefix(6);
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ArpaParseError(line_no(), "expected 'ngram k=count' line");
    }
    int k = 0;
    std::size_t count = 0;
    const auto kr = std::from_chars(line.data(), line.data() + eq, k);
    const auto cr = std::from_chars(line.data() + eq + 1,
                                    line.data() + line.size(), count);
    if (kr.ec != std::errc() || kr.ptr != line.data() + eq ||
        cr.ec != std::errc() || cr.ptr != line.data() + line.size() ||
        k != static_cast<int>(declared.size()) + 1) {
      throw ArpaParseError(line_no(), "bad 'ngram k=count' line");
    }
    declared.push_back(count);
    ++i;
  }
  if (declared.empty()) {
    throw ArpaParseError(line_no(), "no 'ngram k=count' lines after \\data\\");
  }
  const int order = static_cast<int>(declared.size());

  std::vector<NGramModel::GramMap> grams(order);
  for (int k = 1; k <= order; ++k) {
    const std::string header = "\\" + std::to_string(k) + "-grams:";
    while (i < lines.size() && lines[i].empty()) ++i;
    if (i == lines.size() || lines[i] != header) {
      throw ArpaParseError(i < lines.size() ? line_no() : lines.size(),
                           "expected section " + header);
    }
    ++i;
    NGramModel::GramMap& level = grams[k - 1];
    while (i < lines.size() && !lines[i].empty() && lines[i][0] != '\\') {
      const std::vector<std::string_view> fields = split_on(lines[i], '\t');
      if (fields.size() < 2 || fields.size() > 3) {
        throw ArpaParseError(line_no(),
                             "expected 'prob<TAB>tokens[<TAB>backoff]'");
      }
      NGramEntry entry;
      if (!parse_double(fields[0], &entry.log10_prob)) {
        throw ArpaParseError(line_no(), "bad probability field");
      }
      if (fields.size() == 3) {
        double bow = 0.0;
        if (!parse_double(fields[2], &bow)) {
          throw ArpaParseError(line_no(), "bad back-off field");
        }
        entry.log10_backoff = bow;
      }
      std::vector<std::string> tokens;
      for (std::string_view tok : split_on(fields[1], ' ')) {
        if (tok.empty()) {
          throw ArpaParseError(line_no(), "empty token in n-gram");
        }
        tokens.emplace_back(tok);
      }
      if (tokens.size() != static_cast<std::size_t>(k)) {
        throw ArpaParseError(line_no(),
                             "token count does not match section order");
      }
      if (!level.emplace(std::move(tokens), entry).second) {
        throw ArpaParseError(line_no(), "duplicate n-gram");
      }
      ++i;
    }
    if (level.size() != declared[k - 1]) {
      throw ArpaParseError(
          line_no(), "section " + header + " has " +
                         std::to_string(level.size()) + " entries, header "
                         "declared " + std::to_string(declared[k - 1]));
    }
  }

  while (i < lines.size() && lines[i].empty()) ++i;
  if (i == lines.size() || lines[i] != "\\end\\") {
    throw ArpaParseError(i < lines.size() ? line_no() : lines.size(),
                         "missing \\end\\ marker");
  }

  // Structural invariant: every k-gram's (k-1)-gram prefix is stored.
  for (int k = 2; k <= order; ++k) {
    for (const auto& [gram, entry] : grams[k - 1]) {
      (void)entry;
      const NGramModel::TokenSeq prefix(gram.begin(), gram.end() - 1);
      if (grams[k - 2].find(prefix) == grams[k - 2].end()) {
        throw ArpaParseError(0, "n-gram prefix missing at order " +
                                    std::to_string(k - 1));
      }
    }
  }

  return NGramModel(order, std::move(grams), /*has_backoff=*/true);
}

NGramModel read_arpa_file(const std::string& path) {
  return from_arpa(read_text_file(path));
}

void write_arpa_file(const std::string& path, const NGramModel& model) {
  write_text_file_atomic(path, to_arpa(model));
}

}  // namespace slukit
