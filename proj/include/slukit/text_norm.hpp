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
// Lightweight UTF-8 normalization for scoring.  Covers ASCII plus the
// Latin-1 Supplement and the Latin Extended-A letters needed for French
// (including œ/Œ); anything else passes through unchanged, as do bytes that
// are not valid UTF-8.

#ifndef SLUKIT_TEXT_NORM_HPP_
#define SLUKIT_TEXT_NORM_HPP_

#include <string>
#include <string_view>

namespace slukit {

// Lowercases ASCII and accented Latin letters: "États-Unis" -> "états-unis".
std::string fold_case_utf8(std::string_view s);

// Replaces accented Latin letters by their base letters; the ligatures œ/æ
// expand to "oe"/"ae".  Case is preserved: "déjà" -> "deja", "Œuvre" ->
// "OEuvre".
std::string strip_accents_utf8(std::string_view s);

}  // namespace slukit

#endif  // SLUKIT_TEXT_NORM_HPP_
