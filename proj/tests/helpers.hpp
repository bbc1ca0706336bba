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
// Shared test utilities: reference oracles implemented independently of the
// library (straight from the defining formulas), plus data generators and
// process helpers.

#ifndef SLUKIT_TESTS_HELPERS_HPP_
#define SLUKIT_TESTS_HELPERS_HPP_

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "slukit/annotation.hpp"
#include "slukit/ctc_decoder.hpp"
#include "slukit/logmath.hpp"
#include "slukit/ngram_lm.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// Worked hotel-booking example used across the metric tests.
// ---------------------------------------------------------------------------

inline constexpr const char* kHotelBookingEnriched =
    "<reservation> i would like to book </reservation> "
    "<number-room> one </number-room> "
    "<room-type> double room </room-type> "
    "in paris "
    "<comparative-payment> up to </comparative-payment> "
    "<amount-payment> one hundred and thirty </amount-payment> "
    "<currency-payment> euros </currency-payment>";

inline constexpr const char* kHotelBookingPlain =
    "i would like to book one double room in paris up to one hundred and "
    "thirty euros";

// ---------------------------------------------------------------------------
// Edit-distance oracle: the textbook recursion, straight from the
// definition.  Only for short sequences.
// ---------------------------------------------------------------------------

template <typename T>
std::size_t edit_distance_recursive(std::span<const T> a,
                                    std::span<const T> b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::size_t best = edit_distance_recursive(a.subspan(1), b.subspan(1)) +
                     (a.front() == b.front() ? 0 : 1);
  best = std::min(best, edit_distance_recursive(a.subspan(1), b) + 1);
  best = std::min(best, edit_distance_recursive(a, b.subspan(1)) + 1);
  return best;
}

template <typename T>
std::size_t edit_distance_recursive(const std::vector<T>& a,
                                    const std::vector<T>& b) {
  return edit_distance_recursive(std::span<const T>(a),
                                 std::span<const T>(b));
}

// ---------------------------------------------------------------------------
// CTC oracle: enumerate every length-T path, collapse it, and accumulate
// the total natural-log probability per collapsed sequence.
// ---------------------------------------------------------------------------

inline std::map<std::vector<std::size_t>, double> ctc_enumerate(
    const slukit::LogPosteriorMatrix& post, std::size_t blank) {
  std::map<std::vector<std::size_t>, double> total;
  std::vector<std::size_t> path(post.frames);
  std::function<void(std::size_t, double)> walk = [&](std::size_t t,
                                                      double acc) {
    if (acc == slukit::kNegInf) return;
    if (t == post.frames) {
      std::vector<std::size_t> seq;
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0 && path[i] == path[i - 1]) continue;  // merge repeats
        if (path[i] == blank) continue;                 // then drop blanks
        seq.push_back(path[i]);
      }
      auto [it, inserted] = total.emplace(std::move(seq), acc);
      if (!inserted) it->second = slukit::logaddexp(it->second, acc);
      return;
    }
    for (std::size_t v = 0; v < post.vocab_size; ++v) {
      path[t] = v;
      walk(t + 1, acc + post.at(t, v));
    }
  };
  walk(0, 0.0);
  return total;
}

// Top collapsed sequence by probability, ties toward the lexicographically
// smaller sequence.
inline std::pair<std::vector<std::size_t>, double> ctc_oracle_best(
    const std::map<std::vector<std::size_t>, double>& dist) {
  std::pair<std::vector<std::size_t>, double> best{{},
                                                   slukit::kNegInf};
  bool first = true;
  for (const auto& [seq, lp] : dist) {
    // map iteration is lexicographic, so strict improvement keeps the
    // smaller sequence on ties
    if (first || lp > best.second) {
      best = {seq, lp};
      first = false;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Kneser-Ney oracle: interpolated probabilities computed directly from raw
// window counts by the defining recursion - no back-off representation, no
// stored weights.
// ---------------------------------------------------------------------------

class KnOracle {
 public:
  KnOracle(const std::vector<std::vector<std::string>>& corpus, int order,
           double discount)
      : order_(order), d_(discount) {
    raw_.resize(order);
    for (const auto& sent : corpus) {
      std::vector<std::string> padded;
      padded.push_back("<s>");
      padded.insert(padded.end(), sent.begin(), sent.end());
      padded.push_back("</s>");
      for (int k = 1; k <= order; ++k) {
        const std::size_t width = static_cast<std::size_t>(k);
        for (std::size_t i = 0; i + width <= padded.size(); ++i) {
          ++raw_[k - 1][std::vector<std::string>(padded.begin() + i,
                                                 padded.begin() + i + width)];
        }
      }
    }
    for (const auto& [g, c] : raw_[0]) {
      if (g[0] != "<s>") vocab_.insert(g[0]);
    }
  }

  // Prediction vocabulary size: seen tokens except <s>, plus <unk>.
  std::size_t vpred() const { return vocab_.size() + 1; }

  bool known(const std::string& w) const { return vocab_.count(w) > 0; }

  // Full interpolated P(w | context) in linear space.  Maps out-of-
  // vocabulary tokens to <unk> and truncates long contexts, like the model.
  double prob(std::vector<std::string> context, std::string w) const {
    const std::size_t max_ctx = static_cast<std::size_t>(order_ - 1);
    if (context.size() > max_ctx) {
      context.erase(context.begin(),
                    context.end() - static_cast<std::ptrdiff_t>(max_ctx));
    }
    for (auto& tok : context) {
      if (tok != "<s>" && !known(tok)) tok = "<unk>";
    }
    if (!known(w)) w = "<unk>";
    return p(context, w);
  }

  // All contexts (of length < order) that have at least one continuation.
  std::vector<std::vector<std::string>> contexts() const {
    std::set<std::vector<std::string>> out;
    out.insert({});
    for (int k = 2; k <= order_; ++k) {
      for (const auto& [g, c] : raw_[k - 1]) {
        out.insert(std::vector<std::string>(g.begin(), g.end() - 1));
      }
    }
    return {out.begin(), out.end()};
  }

  std::vector<std::string> prediction_vocab() const {
    std::vector<std::string> v(vocab_.begin(), vocab_.end());
    v.push_back("<unk>");
    return v;
  }

 private:
  using Counts = std::map<std::vector<std::string>, std::uint64_t>;

  double raw_count(const std::vector<std::string>& gram) const {
    const Counts& level = raw_[gram.size() - 1];
    const auto it = level.find(gram);
    return it == level.end() ? 0.0 : static_cast<double>(it->second);
  }

  // Adjusted count: raw at the top order and for <s>-initial grams;
  // distinct left extensions elsewhere.
  double adjusted(const std::vector<std::string>& gram) const {
    if (static_cast<int>(gram.size()) == order_ || gram[0] == "<s>") {
      return raw_count(gram);
    }
    std::set<std::string> lefts;
    for (const auto& [g, c] : raw_[gram.size()]) {
      (void)c;
      if (std::equal(g.begin() + 1, g.end(), gram.begin(), gram.end())) {
        lefts.insert(g[0]);
      }
    }
    return static_cast<double>(lefts.size());
  }

  double p(const std::vector<std::string>& ctx,
           const std::string& w) const {
    if (ctx.empty()) {
      double denom = 0.0;
      std::size_t distinct = 0;
      for (const auto& [g, c] : raw_[0]) {
        (void)c;
        if (g[0] == "<s>") continue;
        denom += adjusted(g);
        ++distinct;
      }
      const double a = w == "<unk>" ? 0.0 : adjusted({w});
      const double gamma = d_ * static_cast<double>(distinct) / denom;
      return std::max(a - d_, 0.0) / denom +
             gamma / static_cast<double>(vpred());
    }
    double denom = 0.0;
    std::size_t distinct = 0;
    for (const auto& [g, c] : raw_[ctx.size()]) {
      (void)c;
      if (std::equal(g.begin(), g.end() - 1, ctx.begin(), ctx.end())) {
        denom += adjusted(g);
        ++distinct;
      }
    }
    std::vector<std::string> gram = ctx;
    gram.push_back(w);
    const double a = raw_count(gram) > 0 ? adjusted(gram) : 0.0;
    const double gamma = d_ * static_cast<double>(distinct) / denom;
    const std::vector<std::string> shorter(ctx.begin() + 1, ctx.end());
    return std::max(a - d_, 0.0) / denom + gamma * p(shorter, w);
  }

  int order_;
  double d_;
  std::vector<Counts> raw_;
  std::set<std::string> vocab_;
};

// ---------------------------------------------------------------------------
// Deterministic random data.  All draws go through explicit uniform
// transforms of std::mt19937 output so the streams do not depend on
// library-specific distribution implementations.
// ---------------------------------------------------------------------------

inline std::size_t rand_index(std::mt19937& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

inline double rand_unit(std::mt19937& rng) {
  return (static_cast<double>(rng()) + 0.5) / 4294967296.0;
}

// A random valid posterior matrix: per frame, exponential draws normalized
// into a probability distribution, stored as natural logs.
inline slukit::LogPosteriorMatrix random_posteriors(std::mt19937& rng,
                                                    std::size_t frames,
                                                    std::size_t vocab_size) {
  auto m = slukit::LogPosteriorMatrix::create(frames, vocab_size);
  for (std::size_t t = 0; t < frames; ++t) {
    double total = 0.0;
    std::vector<double> raw(vocab_size);
    for (std::size_t v = 0; v < vocab_size; ++v) {
      raw[v] = -std::log(rand_unit(rng));
      total += raw[v];
    }
    for (std::size_t v = 0; v < vocab_size; ++v) {
      m.at(t, v) = std::log(raw[v] / total);
    }
  }
  return m;
}

inline std::vector<std::vector<std::string>> random_sentences(
    std::mt19937& rng, std::size_t count, std::size_t max_len,
    const std::vector<std::string>& words) {
  std::vector<std::vector<std::string>> corpus(count);
  for (auto& sent : corpus) {
    const std::size_t len = rand_index(rng, max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
      sent.push_back(words[rand_index(rng, words.size())]);
    }
  }
  return corpus;
}

// A random canonical transcript: segments alternate freely between tagged
// and untagged, but no two adjacent untagged segments.
inline slukit::EnrichedTranscript random_transcript(
    std::mt19937& rng, const std::vector<std::string>& tags,
    const std::vector<std::string>& words, std::size_t max_segments = 5) {
  slukit::EnrichedTranscript t;
  const std::size_t segments = rand_index(rng, max_segments + 1);
  bool last_untagged = false;
  for (std::size_t s = 0; s < segments; ++s) {
    slukit::Segment seg;
    const bool tagged = last_untagged || rand_index(rng, 3) > 0;
    if (tagged) {
      seg.tag = slukit::ConceptTag{tags[rand_index(rng, tags.size())]};
    }
    const std::size_t len = 1 + rand_index(rng, 3);
    for (std::size_t i = 0; i < len; ++i) {
      seg.words.push_back(words[rand_index(rng, words.size())]);
    }
    last_untagged = !tagged;
    t.segments.push_back(std::move(seg));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Process and filesystem helpers.
// ---------------------------------------------------------------------------

struct CommandResult {
  int exit_code;
  std::string output;  // stdout and stderr merged
};

inline CommandResult run_command(const std::string& command) {
  const std::string full = command + " 2>&1";
  FILE* pipe = ::popen(full.c_str(), "r");
  CommandResult result{-1, {}};
  if (!pipe) return result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = ::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    result.output.append(buf, n);
  }
  const int status = ::pclose(pipe);
  if (status >= 0 && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  return result;
}

class TempDir {
 public:
  explicit TempDir(const std::string& hint = "slukit_test") {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / (hint + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil

#endif  // SLUKIT_TESTS_HELPERS_HPP_
