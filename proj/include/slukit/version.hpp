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

#ifndef SLUKIT_VERSION_HPP_
#define SLUKIT_VERSION_HPP_

namespace slukit {

inline constexpr const char* kVersion = "1.0.0";

// Versions of the file formats this build reads and writes.  Bump only with
// a format change; readers reject files whose major version they do not know.
inline constexpr int kPosteriorFormatVersion = 1;  // "CTCPOST 1"
inline constexpr int kScoreReportVersion = 1;      // "SLUSCORE 1"

}  // namespace slukit

#endif  // SLUKIT_VERSION_HPP_
