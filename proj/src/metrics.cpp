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

#include "slukit/metrics.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "slukit/errors.hpp"
#include "slukit/text_norm.hpp"

namespace slukit {

namespace {

std::string normalize_word(const std::string& word,
                           const NormOptions& norm) {
  std::string out = word;
  if (norm.case_fold) out = fold_case_utf8(out);
  if (norm.strip_accents) out = strip_accents_utf8(out);
  return out;
}

std::vector<std::string> normalize_words(std::vector<std::string> words,
                                         const NormOptions& norm) {
  if (norm.case_fold || norm.strip_accents) {
    for (std::string& w : words) w = normalize_word(w, norm);
  }
  return words;
}

// A concept occurrence reduced to what CVER compares: the tag and the
// normalized, space-joined value.
struct NormPair {
  std::string tag;
  std::string value;

  friend bool operator==(const NormPair&, const NormPair&) = default;
};

std::vector<NormPair> normalized_pairs(const EnrichedTranscript& t,
                                       const NormOptions& norm) {
  std::vector<NormPair> pairs;
  for (const ConceptValuePair& p : extract_pairs(t)) {
    std::string value;
    for (const std::string& w : p.value) {
      if (!value.empty()) value += ' ';
      value += normalize_word(w, norm);
    }
    pairs.push_back(NormPair{p.tag.name, std::move(value)});
  }
  return pairs;
}

// Acklam's rational approximation to the standard normal quantile,
// polished with two Halley steps against erfc so the result is accurate to
// machine precision.
double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
         c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
         a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
  }
  return x;
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void append_metric_line(std::string* out, const char* name,
                        const ErrorRateReport& r,
                        const std::optional<double>& margin,
                        bool with_margin) {
  *out += name;
  *out += " errors " + std::to_string(r.errors());
  *out += " subs " + std::to_string(r.substitutions);
  *out += " ins " + std::to_string(r.insertions);
  *out += " dels " + std::to_string(r.deletions);
  *out += " refs " + std::to_string(r.ref_count);
  *out += " rate ";
  *out += r.defined() ? format_fixed(r.rate(), 6) : "undefined";
  if (with_margin) {
    *out += " margin ";
    *out += margin ? format_fixed(*margin, 6) : "undefined";
  }
  *out += '\n';
}

}  // namespace

double ErrorRateReport::rate() const {
  if (ref_count == 0) {
    throw UndefinedRateError(
        "error rate undefined: reference has no scored units");
  }
  return static_cast<double>(errors()) / static_cast<double>(ref_count);
}

ErrorRateReport report_from_alignment(const Alignment& a) {
  ErrorRateReport r;
  r.matches = a.matches;
  r.substitutions = a.substitutions;
  r.insertions = a.insertions;
  r.deletions = a.deletions;
  r.ref_count = a.matches + a.substitutions + a.deletions;
  return r;
}

ErrorRateReport word_error_rate(std::span<const std::string> ref,
                                std::span<const std::string> hyp,
                                const NormOptions& norm) {
  const std::vector<std::string> r =
      normalize_words({ref.begin(), ref.end()}, norm);
  const std::vector<std::string> h =
      normalize_words({hyp.begin(), hyp.end()}, norm);
  return report_from_alignment(align<std::string>(r, h));
}

ErrorRateReport concept_error_rate(const EnrichedTranscript& ref,
                                   const EnrichedTranscript& hyp) {
  return report_from_alignment(
      align<ConceptTag>(concept_sequence(ref), concept_sequence(hyp)));
}

ErrorRateReport concept_value_error_rate(const EnrichedTranscript& ref,
                                         const EnrichedTranscript& hyp,
                                         const NormOptions& norm) {
  return report_from_alignment(align<NormPair>(normalized_pairs(ref, norm),
                                               normalized_pairs(hyp, norm)));
}

double confidence_margin(double rate, std::size_t n, double level) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("confidence_margin: rate must be in [0, 1]");
  }
  if (n == 0) {
    throw std::invalid_argument("confidence_margin: n must be >= 1");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument(
        "confidence_margin: level must lie in (0, 1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  return z * std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

namespace {

struct UttDetail {
  UtteranceScore score;
  std::map<std::string, ConceptCounts> per_concept;
};

UttDetail score_utterance(const std::string& utt_id,
                          const EnrichedTranscript& ref,
                          const EnrichedTranscript* hyp_ptr,
                          const NormOptions& norm) {
  static const EnrichedTranscript kEmpty;
  const EnrichedTranscript& hyp = hyp_ptr ? *hyp_ptr : kEmpty;

  UttDetail detail;
  detail.score.utt_id = utt_id;
  detail.score.empty_hypothesis = hyp_ptr == nullptr;
  detail.score.wer = word_error_rate(strip_tags(ref), strip_tags(hyp), norm);

  const std::vector<ConceptTag> ref_tags = concept_sequence(ref);
  const std::vector<ConceptTag> hyp_tags = concept_sequence(hyp);
  const Alignment tag_alignment = align<ConceptTag>(ref_tags, hyp_tags);
  detail.score.cer = report_from_alignment(tag_alignment);
  for (const AlignOp& op : tag_alignment.ops) {
    switch (op.kind) {
      case AlignOpKind::kMatch:
        ++detail.per_concept[ref_tags[op.ref_index].name].matches;
        break;
      case AlignOpKind::kSubstitute:
        ++detail.per_concept[ref_tags[op.ref_index].name].substitutions;
        break;
      case AlignOpKind::kDelete:
        ++detail.per_concept[ref_tags[op.ref_index].name].deletions;
        break;
      case AlignOpKind::kInsert:
        ++detail.per_concept[hyp_tags[op.hyp_index].name].insertions;
        break;
    }
  }

  detail.score.cver = concept_value_error_rate(ref, hyp, norm);
  return detail;
}

void accumulate(const ErrorRateReport& part, ErrorRateReport* total) {
  total->matches += part.matches;
  total->substitutions += part.substitutions;
  total->insertions += part.insertions;
  total->deletions += part.deletions;
  total->ref_count += part.ref_count;
}

std::optional<double> pooled_margin(const ErrorRateReport& r, double level) {
  if (!r.defined()) return std::nullopt;
  const double rate = std::min(r.rate(), 1.0);
  return confidence_margin(rate, r.ref_count, level);
}

}  // namespace

ScoreReport score_corpus(const Corpus& refs, const Corpus& hyps,
                         const ScoreOptions& options) {
  for (const auto& [utt_id, transcript] : hyps.utterances()) {
    (void)transcript;
    if (!refs.contains(utt_id)) throw MissingReferenceError(utt_id);
  }

  const std::size_t n = refs.size();
  std::vector<UttDetail> details(n);

  auto worker_body = [&](std::size_t i) {
    const auto& [utt_id, ref] = refs.utterances()[i];
    details[i] = score_utterance(utt_id, ref, hyps.find(utt_id),
                                 options.norm);
  };

  const std::size_t jobs =
      std::max<std::size_t>(1, std::min(options.jobs, n == 0 ? 1 : n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) worker_body(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= n) return;
        try {
          worker_body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(run);
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  ScoreReport report;
  report.options = options;
  for (UttDetail& detail : details) {
    accumulate(detail.score.wer, &report.wer);
    accumulate(detail.score.cer, &report.cer);
    accumulate(detail.score.cver, &report.cver);
    if (detail.score.empty_hypothesis) ++report.empty_hypotheses;
    for (const auto& [name, counts] : detail.per_concept) {
      ConceptCounts& total = report.per_concept[name];
      total.matches += counts.matches;
      total.substitutions += counts.substitutions;
      total.insertions += counts.insertions;
      total.deletions += counts.deletions;
    }
    report.per_utterance.push_back(std::move(detail.score));
  }
  report.cer_margin = pooled_margin(report.cer, options.confidence_level);
  report.cver_margin = pooled_margin(report.cver, options.confidence_level);
  return report;
}

std::string render_report(const ScoreReport& report) {
  std::string out;
  out += "SLUSCORE 1\n";
  out += "utterances " + std::to_string(report.per_utterance.size()) + "\n";
  out += "empty-hypotheses " + std::to_string(report.empty_hypotheses) +
         "\n";
  out += "case-fold " + std::to_string(report.options.norm.case_fold ? 1 : 0)
         + "\n";
  out += "strip-accents " +
         std::to_string(report.options.norm.strip_accents ? 1 : 0) + "\n";
  out += "confidence-level " +
         format_fixed(report.options.confidence_level, 6) + "\n";
  append_metric_line(&out, "wer", report.wer, std::nullopt, false);
  append_metric_line(&out, "cer", report.cer, report.cer_margin, true);
  append_metric_line(&out, "cver", report.cver, report.cver_margin, true);
  out += "concepts " + std::to_string(report.per_concept.size()) + "\n";
  for (const auto& [name, counts] : report.per_concept) {
    out += "concept " + name;
    out += " matches " + std::to_string(counts.matches);
    out += " subs " + std::to_string(counts.substitutions);
    out += " ins " + std::to_string(counts.insertions);
    out += " dels " + std::to_string(counts.deletions);
    out += '\n';
  }
  for (const UtteranceScore& u : report.per_utterance) {
    out += "utterance " + u.utt_id;
    out += " wer " + std::to_string(u.wer.errors()) + "/" +
           std::to_string(u.wer.ref_count);
    out += " cer " + std::to_string(u.cer.errors()) + "/" +
           std::to_string(u.cer.ref_count);
    out += " cver " + std::to_string(u.cver.errors()) + "/" +
           std::to_string(u.cver.ref_count);
    if (u.empty_hypothesis) out += " empty-hyp";
    out += '\n';
  }
  out += "end\n";
  return out;
}

}  // namespace slukit
