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
// Levenshtein alignment with unit costs and a deterministic backtrace.

#ifndef SLUKIT_ALIGNMENT_HPP_
#define SLUKIT_ALIGNMENT_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace slukit {

enum class AlignOpKind : std::uint8_t {
  kMatch,
  kSubstitute,
  kDelete,  // reference symbol with no hypothesis counterpart
  kInsert,  // hypothesis symbol with no reference counterpart
};

// One alignment step.  Indices point into the input sequences and are -1 on
// the side that does not take part (hyp for deletions, ref for insertions).
struct AlignOp {
  AlignOpKind kind;
  std::ptrdiff_t ref_index;
  std::ptrdiff_t hyp_index;

  friend bool operator==(const AlignOp&, const AlignOp&) = default;
};

struct Alignment {
  std::vector<AlignOp> ops;
  std::size_t matches = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  std::size_t cost() const { return substitutions + insertions + deletions; }
};

// Minimal-cost alignment of `hyp` against `ref` (substitution, insertion and
// deletion all cost 1).  Among equal-cost paths the backtrace, walking from
// the ends of both sequences, prefers Match, then Substitute, then Delete,
// then Insert, which makes the returned operation list deterministic.
template <typename Sym, typename Eq = std::equal_to<>>
Alignment align(std::span<const Sym> ref, std::span<const Sym> hyp,
                Eq eq = {}) {
  const std::size_t m = ref.size();
  const std::size_t n = hyp.size();
  std::vector<std::uint32_t> d((m + 1) * (n + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& {
    return d[i * (n + 1) + j];
  };

  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::uint32_t sub_cost = eq(ref[i - 1], hyp[j - 1]) ? 0 : 1;
      at(i, j) = std::min({at(i - 1, j - 1) + sub_cost, at(i - 1, j) + 1,
                           at(i, j - 1) + 1});
    }
  }

  Alignment a;
  std::size_t i = m;
  std::size_t j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && eq(ref[i - 1], hyp[j - 1]) &&
        at(i, j) == at(i - 1, j - 1)) {
      a.ops.push_back({AlignOpKind::kMatch, static_cast<std::ptrdiff_t>(i - 1),
                       static_cast<std::ptrdiff_t>(j - 1)});
      --i;
      --j;
    } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1 &&
               !eq(ref[i - 1], hyp[j - 1])) {
      a.ops.push_back({AlignOpKind::kSubstitute,
                       static_cast<std::ptrdiff_t>(i - 1),
                       static_cast<std::ptrdiff_t>(j - 1)});
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      a.ops.push_back(
          {AlignOpKind::kDelete, static_cast<std::ptrdiff_t>(i - 1), -1});
      --i;
    } else {
      a.ops.push_back(
          {AlignOpKind::kInsert, -1, static_cast<std::ptrdiff_t>(j - 1)});
      --j;
    }
  }
  std::reverse(a.ops.begin(), a.ops.end());

  for (const AlignOp& op : a.ops) {
    switch (op.kind) {
      case AlignOpKind::kMatch: ++a.matches; break;
      case AlignOpKind::kSubstitute: ++a.substitutions; break;
      case AlignOpKind::kDelete: ++a.deletions; break;
      case AlignOpKind::kInsert: ++a.insertions; break;
    }
  }
  return a;
}

template <typename Sym, typename Eq = std::equal_to<>>
Alignment align(const std::vector<Sym>& ref, const std::vector<Sym>& hyp,
                Eq eq = {}) {
  return align(std::span<const Sym>(ref), std::span<const Sym>(hyp), eq);
}

}  // namespace slukit

#endif  // SLUKIT_ALIGNMENT_HPP_
