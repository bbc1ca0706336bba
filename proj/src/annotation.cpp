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

#include "slukit/annotation.hpp"

#include <cctype>

#include "slukit/errors.hpp"

namespace slukit {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

bool valid_tag_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == '<' || c == '>') return false;
    if (std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

EnrichedTranscript parse_enriched(std::string_view text) {
  const std::vector<std::string_view> tokens = split_whitespace(text);
  if (tokens.empty()) {
    throw TagError(TagErrorKind::kEmptySpan, "transcript has no tokens");
  }

  EnrichedTranscript out;
  std::optional<ConceptTag> open;
  std::vector<std::string> words;

  auto flush = [&](std::optional<ConceptTag> tag) {
    out.segments.push_back(Segment{std::move(tag), std::move(words)});
    words.clear();
  };

  auto close_span = [&](std::string_view marker) {
    if (!open) {
      throw TagError(TagErrorKind::kUnbalancedTag,
                     "close marker '" + std::string(marker) +
                         "' without an open span");
    }
    if (words.empty()) {
      throw TagError(TagErrorKind::kEmptySpan,
                     "span <" + open->name + "> contains no words");
    }
    flush(std::move(open));
    open.reset();
  };

  for (std::string_view tok : tokens) {
    if (tok == ">") {
      close_span(tok);
    } else if (tok.size() >= 2 && tok[0] == '<' && tok[1] == '/') {
      if (tok.back() != '>' ||
          !valid_tag_name(tok.substr(2, tok.size() - 3))) {
        throw TagError(TagErrorKind::kBadTagName,
                       "malformed close marker '" + std::string(tok) + "'");
      }
      const std::string_view name = tok.substr(2, tok.size() - 3);
      if (open && open->name != name) {
        throw TagError(TagErrorKind::kUnbalancedTag,
                       "close marker '" + std::string(tok) +
                           "' does not match open span <" + open->name + ">");
      }
      close_span(tok);
    } else if (tok.front() == '<') {
      if (tok.back() != '>' ||
          !valid_tag_name(tok.substr(1, tok.size() - 2))) {
        throw TagError(TagErrorKind::kBadTagName,
                       "malformed open marker '" + std::string(tok) + "'");
      }
      if (open) {
        throw TagError(TagErrorKind::kNestedTag,
                       "span '" + std::string(tok) + "' opened inside <" +
                           open->name + ">");
      }
      if (!words.empty()) flush(std::nullopt);
      open = ConceptTag{std::string(tok.substr(1, tok.size() - 2))};
    } else {
      words.emplace_back(tok);
    }
  }

  if (open) {
    throw TagError(TagErrorKind::kUnbalancedTag,
                   "span <" + open->name + "> is never closed");
  }
  if (!words.empty()) flush(std::nullopt);
  return out;
}

std::string serialize_enriched(const EnrichedTranscript& transcript,
                               const TagFormat& fmt) {
  std::string out;
  auto append = [&](std::string_view tok) {
    if (!out.empty()) out += ' ';
    out += tok;
  };
  for (const Segment& seg : transcript.segments) {
    if (seg.tag) append("<" + seg.tag->name + ">");
    for (const std::string& w : seg.words) append(w);
    if (seg.tag) {
      if (fmt.close_style == CloseStyle::kGeneric) {
        append(">");
      } else {
        append("</" + seg.tag->name + ">");
      }
    }
  }
  return out;
}

std::vector<ConceptValuePair> extract_pairs(const EnrichedTranscript& t) {
  std::vector<ConceptValuePair> pairs;
  for (const Segment& seg : t.segments) {
    if (seg.tag) pairs.push_back(ConceptValuePair{*seg.tag, seg.words});
  }
  return pairs;
}

std::vector<std::string> strip_tags(const EnrichedTranscript& t) {
  std::vector<std::string> words;
  for (const Segment& seg : t.segments) {
    words.insert(words.end(), seg.words.begin(), seg.words.end());
  }
  return words;
}

std::vector<ConceptTag> concept_sequence(const EnrichedTranscript& t) {
  std::vector<ConceptTag> tags;
  for (const Segment& seg : t.segments) {
    if (seg.tag) tags.push_back(*seg.tag);
  }
  return tags;
}

}  // namespace slukit
