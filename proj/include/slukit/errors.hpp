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

#ifndef SLUKIT_ERRORS_HPP_
#define SLUKIT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slukit {

// Base class for errors caused by user input (files, corpora, models).
// The command-line driver maps these to exit code 2; anything else that
// escapes is a bug and maps to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Annotation markup
// ---------------------------------------------------------------------------

enum class TagErrorKind {
  kUnbalancedTag,  // close without open, open without close, or name mismatch
  kNestedTag,      // open marker while another span is still open
  kEmptySpan,      // tagged span with no words, or a transcript with no tokens
  kBadTagName,     // malformed markup token or invalid tag name
};

// Stable identifier used in messages and validation reports.
const char* tag_error_kind_name(TagErrorKind kind);

class TagError : public Error {
 public:
  TagError(TagErrorKind kind, const std::string& message);
  TagErrorKind kind() const { return kind_; }

 private:
  TagErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Files and corpora
// ---------------------------------------------------------------------------

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A line of a line-oriented file failed to parse.  Lines are 1-based.
class CorpusParseError : public Error {
 public:
  CorpusParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// The same utterance id appeared twice.  line() is 0 when the duplicate was
// introduced programmatically rather than from a file.
class DuplicateUttIdError : public Error {
 public:
  DuplicateUttIdError(std::size_t line, const std::string& utt_id);
  std::size_t line() const { return line_; }
  const std::string& utt_id() const { return utt_id_; }

 private:
  std::size_t line_;
  std::string utt_id_;
};

// A hypothesis utterance has no reference to be scored against.
class MissingReferenceError : public Error {
 public:
  explicit MissingReferenceError(const std::string& utt_id);
  const std::string& utt_id() const { return utt_id_; }

 private:
  std::string utt_id_;
};

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

// A rate was requested for a report whose reference count is zero.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Language models
// ---------------------------------------------------------------------------

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

// Kneser-Ney discount outside [0, 1).
class InvalidDiscountError : public Error {
 public:
  using Error::Error;
};

class ArpaParseError : public Error {
 public:
  ArpaParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Decoder symbols cannot serve as language-model tokens (e.g. a word-level
// symbol that contains whitespace).
class LmTokenizationError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Posterior matrices
// ---------------------------------------------------------------------------

// Structural problem in a posterior file or vocabulary.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A posterior frame does not describe a probability distribution.
class NormalizationError : public Error {
 public:
  NormalizationError(std::size_t frame, const std::string& message);
  std::size_t frame() const { return frame_; }

 private:
  std::size_t frame_;
};

}  // namespace slukit

#endif  // SLUKIT_ERRORS_HPP_
