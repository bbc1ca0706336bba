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

#include "slukit/ctc_decoder.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "slukit/errors.hpp"
#include "slukit/logmath.hpp"

namespace slukit {

namespace {

constexpr const char* kSpaceSymbol = "<space>";

bool contains_whitespace(std::string_view s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

// Symbols that act as LM tokens (or concatenate into them) must be free of
// whitespace, otherwise the produced token stream would be ambiguous.
void check_lm_units(const Vocab& vocab) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (i == vocab.blank_index) continue;
    if (contains_whitespace(vocab.symbols[i])) {
      throw LmTokenizationError("vocabulary symbol '" + vocab.symbols[i] +
                                "' contains whitespace and cannot form "
                                "language-model tokens");
    }
  }
}

using Prefix = std::vector<std::size_t>;

struct BeamState {
  double log_pb = kNegInf;   // total prob of paths ending in blank
  double log_pnb = kNegInf;  // total prob of paths ending in the last symbol
  // Fused language-model bookkeeping.  `history` starts at <s> and grows by
  // one entry per completed LM token; `partial` holds the characters of the
  // current word in character-level mode.  All fields are functions of the
  // prefix, so merging paths never conflicts.
  double lm_log10 = 0.0;
  std::size_t lm_token_count = 0;
  std::vector<std::string> history;
  std::string partial;

  double total() const { return logaddexp(log_pb, log_pnb); }
};

using Beams = std::map<Prefix, BeamState>;

struct Fusion {
  const NGramModel* lm = nullptr;
  const Vocab* vocab = nullptr;
  bool char_level = false;

  bool active() const { return lm != nullptr; }

  // LM bookkeeping for the prefix `parent + [sym]`.
  void extend(const BeamState& parent, std::size_t sym, BeamState* out) const {
    out->lm_log10 = parent.lm_log10;
    out->lm_token_count = parent.lm_token_count;
    out->history = parent.history;
    out->partial = parent.partial;
    if (!active()) return;
    const std::string& symbol = vocab->symbols[sym];
    if (!char_level) {
      out->lm_log10 += lm->log_prob(out->history, symbol);
      out->history.push_back(symbol);
      ++out->lm_token_count;
    } else if (vocab->space_index && sym == *vocab->space_index) {
      if (!out->partial.empty()) {
        out->lm_log10 += lm->log_prob(out->history, out->partial);
        out->history.push_back(out->partial);
        ++out->lm_token_count;
        out->partial.clear();
      }
    } else {
      out->partial += symbol;
    }
  }

  // Total weighted LM contribution at finalization: any trailing partial
  // word plus the sentence-end event.
  double final_log10(const BeamState& st, std::size_t* token_count) const {
    double v = st.lm_log10;
    std::size_t n = st.lm_token_count;
    if (char_level && !st.partial.empty()) {
      std::vector<std::string> history = st.history;
      v += lm->log_prob(history, st.partial);
      history.push_back(st.partial);
      ++n;
      v += lm->log_prob(history, kSentEnd);
    } else {
      v += lm->log_prob(st.history, kSentEnd);
    }
    *token_count = n;
    return v;
  }
};

BeamState& touch_same(Beams& next, const Prefix& prefix,
                      const BeamState& source) {
  auto [it, inserted] = next.try_emplace(prefix);
  if (inserted) {
    BeamState& st = it->second;
    st.lm_log10 = source.lm_log10;
    st.lm_token_count = source.lm_token_count;
    st.history = source.history;
    st.partial = source.partial;
  }
  return it->second;
}

BeamState& touch_extended(Beams& next, const Prefix& parent_prefix,
                          std::size_t sym, const BeamState& parent,
                          const Fusion& fusion) {
  Prefix extended = parent_prefix;
  extended.push_back(sym);
  auto [it, inserted] = next.try_emplace(std::move(extended));
  if (inserted) fusion.extend(parent, sym, &it->second);
  return it->second;
}

}  // namespace

Vocab Vocab::from_symbols(std::vector<std::string> symbols,
                          std::size_t blank_index) {
  if (symbols.size() < 2) {
    throw FormatError("vocabulary needs at least a blank and one symbol");
  }
  if (blank_index >= symbols.size()) {
    throw FormatError("blank index out of range");
  }
  Vocab v;
  v.symbols = std::move(symbols);
  v.blank_index = blank_index;
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < v.symbols.size(); ++i) {
    if (v.symbols[i].empty()) {
      throw FormatError("vocabulary symbol " + std::to_string(i) +
                        " is empty");
    }
    if (!seen.emplace(v.symbols[i], i).second) {
      throw FormatError("duplicate vocabulary symbol '" + v.symbols[i] +
                        "'");
    }
    if (v.symbols[i] == kSpaceSymbol) v.space_index = i;
  }
  if (v.space_index && *v.space_index == v.blank_index) {
    throw FormatError("the blank cannot double as the space symbol");
  }
  return v;
}

std::optional<std::size_t> Vocab::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] == symbol) return i;
  }
  return std::nullopt;
}

LogPosteriorMatrix LogPosteriorMatrix::create(std::size_t frames,
                                              std::size_t vocab_size) {
  LogPosteriorMatrix m;
  m.frames = frames;
  m.vocab_size = vocab_size;
  m.values.assign(frames * vocab_size, kNegInf);
  return m;
}

void LogPosteriorMatrix::validate(double tolerance) const {
  if (values.size() != frames * vocab_size) {
    throw FormatError("posterior matrix shape does not match its buffer");
  }
  for (std::size_t t = 0; t < frames; ++t) {
    double lse = kNegInf;
    for (std::size_t v = 0; v < vocab_size; ++v) {
      const double x = at(t, v);
      if (std::isnan(x) || x == -kNegInf) {
        throw NormalizationError(t, "posterior is not a log probability");
      }
      lse = logaddexp(lse, x);
    }
    if (!(std::abs(lse) <= tolerance)) {
      throw NormalizationError(
          t, "frame posteriors log-sum-exp to " + std::to_string(lse) +
                 ", expected 0 within " + std::to_string(tolerance));
    }
  }
}

std::vector<std::string> collapse(std::span<const std::size_t> path,
                                  const Vocab& vocab) {
  std::vector<std::string> out;
  std::size_t prev = static_cast<std::size_t>(-1);
  for (std::size_t label : path) {
    if (label >= vocab.size()) {
      throw std::invalid_argument("collapse: label out of range");
    }
    if (label != prev && label != vocab.blank_index) {
      out.push_back(vocab.symbols[label]);
    }
    prev = label;
  }
  return out;
}

std::vector<std::string> greedy_decode(const LogPosteriorMatrix& posteriors,
                                       const Vocab& vocab) {
  if (posteriors.vocab_size != vocab.size()) {
    throw std::invalid_argument(
        "greedy_decode: matrix width does not match vocabulary");
  }
  std::vector<std::size_t> path(posteriors.frames);
  for (std::size_t t = 0; t < posteriors.frames; ++t) {
    std::size_t best = 0;
    for (std::size_t v = 1; v < posteriors.vocab_size; ++v) {
      if (posteriors.at(t, v) > posteriors.at(t, best)) best = v;
    }
    path[t] = best;
  }
  return collapse(path, vocab);
}

std::vector<ScoredSequence> prefix_beam_decode(
    const LogPosteriorMatrix& posteriors, const Vocab& vocab,
    const NGramModel* lm, const DecodeParams& params) {
  if (posteriors.vocab_size != vocab.size()) {
    throw std::invalid_argument(
        "prefix_beam_decode: matrix width does not match vocabulary");
  }
  if (params.beam_width < 1) {
    throw std::invalid_argument("prefix_beam_decode: beam width must be >= 1");
  }
  if (params.nbest < 1 || params.nbest > params.beam_width) {
    throw std::invalid_argument(
        "prefix_beam_decode: nbest must lie in [1, beam_width]");
  }

  Fusion fusion;
  if (lm && params.fusion_mode == FusionMode::kFused) {
    check_lm_units(vocab);
    fusion.lm = lm;
    fusion.vocab = &vocab;
    fusion.char_level = vocab.space_index.has_value();
  }
  const double alpha = params.lm_weight;
  const double beta = params.insertion_bonus;

  // Pruning uses the combined score so that strong LM evidence can keep a
  // prefix alive; without fusion it is the pure acoustic mass.
  auto pruning_score = [&](const BeamState& st) {
    double s = st.total();
    if (fusion.active()) {
      if (alpha != 0.0) s += alpha * kLn10 * st.lm_log10;
      s += beta * static_cast<double>(st.lm_token_count);
    }
    return s;
  };

  Beams beams;
  {
    BeamState root;
    root.log_pb = 0.0;  // the empty path has probability 1
    if (fusion.active()) root.history.push_back(kSentStart);
    beams.emplace(Prefix{}, std::move(root));
  }

  for (std::size_t t = 0; t < posteriors.frames; ++t) {
    Beams next;
    for (const auto& [prefix, st] : beams) {
      const double total = st.total();
      for (std::size_t sym = 0; sym < posteriors.vocab_size; ++sym) {
        const double lp = posteriors.at(t, sym);
        if (lp == kNegInf) continue;
        // Guards against -inf sources keep zero-probability prefixes from
        // ever entering the beam.
        if (sym == vocab.blank_index) {
          BeamState& ns = touch_same(next, prefix, st);
          ns.log_pb = logaddexp(ns.log_pb, total + lp);
        } else if (!prefix.empty() && sym == prefix.back()) {
          // Repeat without separating blank: same prefix.
          if (st.log_pnb != kNegInf) {
            BeamState& ns = touch_same(next, prefix, st);
            ns.log_pnb = logaddexp(ns.log_pnb, st.log_pnb + lp);
          }
          // Paths that ended in blank emit a second copy.
          if (st.log_pb != kNegInf) {
            BeamState& ne = touch_extended(next, prefix, sym, st, fusion);
            ne.log_pnb = logaddexp(ne.log_pnb, st.log_pb + lp);
          }
        } else {
          BeamState& ne = touch_extended(next, prefix, sym, st, fusion);
          ne.log_pnb = logaddexp(ne.log_pnb, total + lp);
        }
      }
    }

    if (next.size() > params.beam_width) {
      // std::map iterates prefixes in lexicographic order; the stable sort
      // therefore breaks score ties toward the lexicographically smaller
      // prefix.
      std::vector<Beams::iterator> order;
      order.reserve(next.size());
      for (auto it = next.begin(); it != next.end(); ++it) {
        order.push_back(it);
      }
      std::stable_sort(order.begin(), order.end(),
                       [&](const auto& a, const auto& b) {
                         return pruning_score(a->second) >
                                pruning_score(b->second);
                       });
      Beams pruned;
      for (std::size_t i = 0; i < params.beam_width; ++i) {
        pruned.insert(next.extract(order[i]));
      }
      next = std::move(pruned);
    }
    beams = std::move(next);
    assert(!beams.empty());
  }

  struct Final {
    const Prefix* prefix;
    double score;
  };
  std::vector<Final> finals;
  finals.reserve(beams.size());
  for (const auto& [prefix, st] : beams) {
    double score = st.total();
    if (fusion.active()) {
      std::size_t tokens = 0;
      const double lm_total = fusion.final_log10(st, &tokens);
      if (alpha != 0.0) score += alpha * kLn10 * lm_total;
      score += beta * static_cast<double>(tokens);
    }
    finals.push_back({&prefix, score});
  }
  std::stable_sort(finals.begin(), finals.end(),
                   [](const Final& a, const Final& b) {
                     return a.score > b.score;
                   });

  std::vector<ScoredSequence> out;
  const std::size_t n = std::min(params.nbest, finals.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ScoredSequence seq;
    seq.score = finals[i].score;
    seq.symbols.reserve(finals[i].prefix->size());
    for (std::size_t label : *finals[i].prefix) {
      seq.symbols.push_back(vocab.symbols[label]);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<std::string> lm_tokens(std::span<const std::string> symbols,
                                   const Vocab& vocab) {
  if (!vocab.space_index) {
    return std::vector<std::string>(symbols.begin(), symbols.end());
  }
  const std::string& space = vocab.symbols[*vocab.space_index];
  std::vector<std::string> words;
  std::string current;
  for (const std::string& s : symbols) {
    if (s == space) {
      if (!current.empty()) {
        words.push_back(std::move(current));
        current.clear();
      }
    } else {
      current += s;
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<ScoredSequence> rescore_nbest(std::vector<ScoredSequence> nbest,
                                          const NGramModel& lm,
                                          double lm_weight,
                                          double insertion_bonus,
                                          const Vocab* vocab) {
  if (nbest.empty()) {
    throw std::invalid_argument("rescore_nbest: empty hypothesis list");
  }
  if (vocab) check_lm_units(*vocab);
  for (ScoredSequence& hyp : nbest) {
    std::vector<std::string> tokens =
        vocab ? lm_tokens(hyp.symbols, *vocab)
              : std::vector<std::string>(hyp.symbols.begin(),
                                         hyp.symbols.end());
    for (const std::string& tok : tokens) {
      if (contains_whitespace(tok)) {
        throw LmTokenizationError("hypothesis token '" + tok +
                                  "' contains whitespace");
      }
    }
    if (lm_weight != 0.0) {
      hyp.score += lm_weight * kLn10 * lm.sequence_score(tokens);
    }
    hyp.score += insertion_bonus * static_cast<double>(tokens.size());
  }
  std::stable_sort(nbest.begin(), nbest.end(),
                   [](const ScoredSequence& a, const ScoredSequence& b) {
                     return a.score > b.score;
                   });
  return nbest;
}

}  // namespace slukit
