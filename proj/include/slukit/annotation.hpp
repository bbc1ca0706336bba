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
// Concept-enriched transcriptions: a flat sequence of words where contiguous
// spans may carry a semantic concept tag.  The inline text form is
//
//   <reservation> i would like to book </reservation> one double room
//
// Markup tokens are whitespace-delimited like words.  `<name>` opens a span;
// it is closed either by the matching `</name>` token or by the single
// generic token `>` (both forms are always accepted by the parser; the
// serializer picks one according to TagFormat).  Spans never nest and never
// overlap, and every span contains at least one word.

#ifndef SLUKIT_ANNOTATION_HPP_
#define SLUKIT_ANNOTATION_HPP_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slukit {

// A semantic concept label, e.g. "amount-payment".  Valid names are
// non-empty and contain neither whitespace nor '<' nor '>'.
struct ConceptTag {
  std::string name;

  friend bool operator==(const ConceptTag&, const ConceptTag&) = default;
  friend std::strong_ordering operator<=>(const ConceptTag&,
                                          const ConceptTag&) = default;
};

bool valid_tag_name(std::string_view name);

// A maximal run of words under one tag (or under no tag).  `words` is never
// empty in a well-formed transcript.
struct Segment {
  std::optional<ConceptTag> tag;
  std::vector<std::string> words;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// A parsed transcript.  Canonical form has no two adjacent untagged
// segments (the parser merges them); tagged segments with equal names may
// be adjacent and stay distinct.  An empty transcript (no segments) is the
// representation of an empty hypothesis.
struct EnrichedTranscript {
  std::vector<Segment> segments;

  friend bool operator==(const EnrichedTranscript&,
                         const EnrichedTranscript&) = default;
};

// One concept occurrence with its supporting words, in utterance order.
struct ConceptValuePair {
  ConceptTag tag;
  std::vector<std::string> value;

  friend bool operator==(const ConceptValuePair&,
                         const ConceptValuePair&) = default;
};

// How span closers are written when serializing.
enum class CloseStyle {
  kExplicit,  // </name>
  kGeneric,   // >
};

struct TagFormat {
  CloseStyle close_style = CloseStyle::kExplicit;
};

// Parses one line of enriched text into segments.
//
// Throws TagError:
//   kEmptySpan      - no tokens at all, or a tagged span without words
//   kUnbalancedTag  - close without open, mismatched </name>, unclosed span
//   kNestedTag      - open marker inside an open span
//   kBadTagName     - token starting with '<' that is not well-formed markup
EnrichedTranscript parse_enriched(std::string_view text);

// Inverse of parse_enriched on canonical transcripts: tokens joined by
// single spaces, spans closed per `fmt`.  An empty transcript serializes to
// the empty string.
std::string serialize_enriched(const EnrichedTranscript& transcript,
                               const TagFormat& fmt = {});

// Concept/value pairs of the tagged segments, in order.
std::vector<ConceptValuePair> extract_pairs(const EnrichedTranscript& t);

// All words with markup removed, in order.
std::vector<std::string> strip_tags(const EnrichedTranscript& t);

// The tag sequence of the tagged segments, in order.
std::vector<ConceptTag> concept_sequence(const EnrichedTranscript& t);

}  // namespace slukit

#endif  // SLUKIT_ANNOTATION_HPP_
