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

#include "slukit/errors.hpp"

namespace slukit {

namespace {

std::string with_line(std::size_t line, const std::string& message) {
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

const char* tag_error_kind_name(TagErrorKind kind) {
  switch (kind) {
    case TagErrorKind::kUnbalancedTag:
      return "UnbalancedTag";
    case TagErrorKind::kNestedTag:
      return "NestedTag";
    case TagErrorKind::kEmptySpan:
      return "EmptySpan";
    case TagErrorKind::kBadTagName:
      return "BadTagName";
  }
  return "UnknownTagError";
}

TagError::TagError(TagErrorKind kind, const std::string& message)
    : Error(std::string(tag_error_kind_name(kind)) + ": " + message),
      kind_(kind) {}

CorpusParseError::CorpusParseError(std::size_t line, const std::string& message)
    : Error(with_line(line, message)), line_(line) {}

DuplicateUttIdError::DuplicateUttIdError(std::size_t line,
                                         const std::string& utt_id)
    : Error(line == 0 ? "duplicate utterance id '" + utt_id + "'"
                      : with_line(line, "duplicate utterance id '" + utt_id +
                                            "'")),
      line_(line),
      utt_id_(utt_id) {}

MissingReferenceError::MissingReferenceError(const std::string& utt_id)
    : Error("hypothesis utterance '" + utt_id + "' has no reference"),
      utt_id_(utt_id) {}

ArpaParseError::ArpaParseError(std::size_t line, const std::string& message)
    : Error(with_line(line, message)), line_(line) {}

NormalizationError::NormalizationError(std::size_t frame,
                                       const std::string& message)
    : Error("frame " + std::to_string(frame) + ": " + message),
      frame_(frame) {}

}  // namespace slukit
