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

#ifndef SLUKIT_LOGMATH_HPP_
#define SLUKIT_LOGMATH_HPP_

#include <cmath>
#include <limits>

namespace slukit {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln(10); converts log10 language-model scores to natural log.
inline const double kLn10 = std::log(10.0);

// log(exp(a) + exp(b)) computed without leaving log space.
inline double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace slukit

#endif  // SLUKIT_LOGMATH_HPP_
