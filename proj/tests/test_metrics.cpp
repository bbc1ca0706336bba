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

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "slukit/errors.hpp"

using namespace slukit;

namespace {

Corpus make_corpus(
    const std::vector<std::pair<std::string, std::string>>& lines) {
  Corpus corpus;
  for (const auto& [id, text] : lines) {
    corpus.add(id, text.empty() ? EnrichedTranscript{}
                                : parse_enriched(text));
  }
  return corpus;
}

}  // namespace

TEST_CASE("word error rate on plain sequences") {
  const std::vector<std::string> ref = {"the", "cat", "sat"};
  SUBCASE("perfect hypothesis") {
    const auto r = word_error_rate(ref, ref);
    CHECK(r.errors() == 0);
    CHECK(r.ref_count == 3);
    CHECK(r.rate() == 0.0);
  }
  SUBCASE("one substitution") {
    const auto r =
        word_error_rate(ref, std::vector<std::string>{"the", "dog", "sat"});
    CHECK(r.substitutions == 1);
    CHECK(r.rate() == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("insertions can push the rate above one") {
    const auto r = word_error_rate(
        std::vector<std::string>{"a"},
        std::vector<std::string>{"x", "y", "z"});
    CHECK(r.rate() > 1.0);
  }
  SUBCASE("empty reference rate is undefined") {
    const auto r = word_error_rate({}, ref);
    CHECK(!r.defined());
    CHECK_THROWS_AS(r.rate(), UndefinedRateError);
  }
}

TEST_CASE("case folding and accent stripping are opt-in") {
  const std::vector<std::string> ref = {"Déjà", "Vu"};
  const std::vector<std::string> hyp = {"deja", "vu"};
  CHECK(word_error_rate(ref, hyp).errors() == 2);
  CHECK(word_error_rate(ref, hyp, {true, false}).errors() == 1);
  CHECK(word_error_rate(ref, hyp, {true, true}).errors() == 0);
}

TEST_CASE("the worked example scores itself perfectly") {
  const auto t = parse_enriched(testutil::kHotelBookingEnriched);
  const auto cer = concept_error_rate(t, t);
  CHECK(cer.ref_count == 6);
  CHECK(cer.matches == 6);
  CHECK(cer.rate() == 0.0);
  const auto cver = concept_value_error_rate(t, t);
  CHECK(cver.ref_count == 6);
  CHECK(cver.rate() == 0.0);
  const auto wer = word_error_rate(strip_tags(t), strip_tags(t));
  CHECK(wer.ref_count == 17);
  CHECK(wer.rate() == 0.0);
}

TEST_CASE("CER ignores values; CVER does not") {
  const auto ref = parse_enriched("<a> un deux </a> et <b> trois </b>");
  const auto hyp = parse_enriched("<a> un DEUX </a> et <b> trois </b>");
  CHECK(concept_error_rate(ref, hyp).errors() == 0);
  CHECK(concept_value_error_rate(ref, hyp).errors() == 1);
  CHECK(concept_value_error_rate(ref, hyp, {true, false}).errors() == 0);
}

TEST_CASE("CVER pairs are atomic: tag and value must both match") {
  const auto ref = parse_enriched("<a> x </a> <b> y </b>");
  SUBCASE("tag swap is two substitutions") {
    const auto hyp = parse_enriched("<b> x </b> <a> y </a>");
    CHECK(concept_error_rate(ref, hyp).errors() == 2);
    CHECK(concept_value_error_rate(ref, hyp).errors() == 2);
  }
  SUBCASE("value swap keeps CER clean") {
    const auto hyp = parse_enriched("<a> y </a> <b> x </b>");
    CHECK(concept_error_rate(ref, hyp).errors() == 0);
    CHECK(concept_value_error_rate(ref, hyp).errors() == 2);
  }
}

TEST_CASE("CVER is never below CER") {
  std::mt19937 rng(97);
  const std::vector<std::string> tags = {"a", "b", "c"};
  const std::vector<std::string> words = {"x", "y", "z", "w"};
  for (int i = 0; i < 400; ++i) {
    const auto ref = testutil::random_transcript(rng, tags, words);
    const auto hyp = testutil::random_transcript(rng, tags, words);
    const auto cer = concept_error_rate(ref, hyp);
    const auto cver = concept_value_error_rate(ref, hyp);
    REQUIRE(cver.errors() >= cer.errors());
    if (cer.defined()) {
      REQUIRE(cver.rate() >= cer.rate());
    }
  }
}

TEST_CASE("confidence margins") {
  SUBCASE("normal critical values") {
    // margin(r, n) / sqrt(r(1-r)/n) recovers z; check known quantiles.
    const double z95 = confidence_margin(0.5, 4, 0.95) / 0.25;
    CHECK(z95 == doctest::Approx(1.959964).epsilon(1e-6));
    const double z90 = confidence_margin(0.5, 4, 0.90) / 0.25;
    CHECK(z90 == doctest::Approx(1.6448536).epsilon(1e-6));
    const double z99 = confidence_margin(0.5, 4, 0.99) / 0.25;
    CHECK(z99 == doctest::Approx(2.5758293).epsilon(1e-6));
  }
  SUBCASE("published operating point") {
    // Around 8.8k scored concepts, rates of 13.6% and 18.5% carry margins
    // of about 0.7 and 0.8 percentage points.
    CHECK(confidence_margin(0.136, 8800) ==
          doctest::Approx(0.0071621).epsilon(1e-4));
    CHECK(confidence_margin(0.185, 8800) ==
          doctest::Approx(0.0081129).epsilon(1e-4));
  }
  SUBCASE("degenerate rates have zero margin") {
    CHECK(confidence_margin(0.0, 100) == 0.0);
    CHECK(confidence_margin(1.0, 100) == 0.0);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(confidence_margin(-0.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(confidence_margin(1.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(confidence_margin(0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(confidence_margin(0.5, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(confidence_margin(0.5, 10, 1.0), std::invalid_argument);
  }
}

TEST_CASE("score_corpus pools counts and attributes concepts") {
  const Corpus refs = make_corpus({
      {"u1", "<a> x y </a> w <b> z </b>"},
      {"u2", "q <c> r </c>"},
      {"u3", "<a> s </a>"},
  });
  const Corpus hyps = make_corpus({
      {"u1", "<a> x y </a> w <c> z </c>"},
      {"u2", "q <c> rr </c>"},
  });

  const ScoreReport report = score_corpus(refs, hyps);

  CHECK(report.wer.ref_count == 7);
  CHECK(report.wer.substitutions == 1);
  CHECK(report.wer.deletions == 1);
  CHECK(report.wer.insertions == 0);
  CHECK(report.wer.rate() == doctest::Approx(2.0 / 7.0));

  CHECK(report.cer.ref_count == 4);
  CHECK(report.cer.errors() == 2);
  CHECK(report.cer.rate() == doctest::Approx(0.5));

  CHECK(report.cver.ref_count == 4);
  CHECK(report.cver.errors() == 3);
  CHECK(report.cver.rate() == doctest::Approx(0.75));

  REQUIRE(report.cer_margin.has_value());
  CHECK(*report.cer_margin == doctest::Approx(0.489991).epsilon(1e-5));

  CHECK(report.empty_hypotheses == 1);
  REQUIRE(report.per_utterance.size() == 3);
  CHECK(report.per_utterance[2].empty_hypothesis);
  CHECK(report.per_utterance[2].wer.deletions == 1);

  REQUIRE(report.per_concept.size() == 3);
  const auto& a = report.per_concept.at("a");
  CHECK(a.matches == 1);
  CHECK(a.deletions == 1);
  const auto& b = report.per_concept.at("b");
  CHECK(b.substitutions == 1);
  const auto& c = report.per_concept.at("c");
  CHECK(c.matches == 1);
  CHECK(c.insertions == 0);
}

TEST_CASE("hypotheses without references are rejected") {
  const Corpus refs = make_corpus({{"u1", "x"}});
  const Corpus hyps = make_corpus({{"u1", "x"}, {"zz", "y"}});
  CHECK_THROWS_AS(score_corpus(refs, hyps), MissingReferenceError);
}

TEST_CASE("scoring against a fully empty hypothesis corpus") {
  const Corpus refs = make_corpus({
      {"u1", "<a> x </a> y"},
      {"u2", "<b> z </b>"},
  });
  const ScoreReport report = score_corpus(refs, Corpus{});
  CHECK(report.cer.rate() == 1.0);
  CHECK(report.cer.deletions == 2);
  CHECK(report.wer.rate() == 1.0);
  CHECK(report.empty_hypotheses == 2);
}

TEST_CASE("parallel scoring matches single-threaded byte for byte") {
  std::mt19937 rng(2468);
  const std::vector<std::string> tags = {"a", "b", "c", "d"};
  const std::vector<std::string> words = {"p", "q", "r", "s", "t"};
  Corpus refs;
  Corpus hyps;
  for (int i = 0; i < 60; ++i) {
    const std::string id = "utt" + std::to_string(i);
    auto ref = testutil::random_transcript(rng, tags, words, 6);
    refs.add(id, std::move(ref));
    if (i % 5 != 0) {
      hyps.add(id, testutil::random_transcript(rng, tags, words, 6));
    }
  }
  ScoreOptions seq;
  seq.jobs = 1;
  ScoreOptions par;
  par.jobs = 4;
  const std::string a = render_report(score_corpus(refs, hyps, seq));
  const std::string b = render_report(score_corpus(refs, hyps, par));
  CHECK(a == b);
}

TEST_CASE("render_report is stable and complete") {
  const Corpus refs = make_corpus({
      {"u1", "<a> x y </a> w <b> z </b>"},
      {"u2", "q <c> r </c>"},
      {"u3", "<a> s </a>"},
  });
  const Corpus hyps = make_corpus({
      {"u1", "<a> x y </a> w <c> z </c>"},
      {"u2", "q <c> rr </c>"},
  });
  const std::string text = render_report(score_corpus(refs, hyps));
  const std::string expected =
      "SLUSCORE 1\n"
      "utterances 3\n"
      "empty-hypotheses 1\n"
      "case-fold 0\n"
      "strip-accents 0\n"
      "confidence-level 0.950000\n"
      "wer errors 2 subs 1 ins 0 dels 1 refs 7 rate 0.285714\n"
      "cer errors 2 subs 1 ins 0 dels 1 refs 4 rate 0.500000 "
      "margin 0.489991\n"
      "cver errors 3 subs 2 ins 0 dels 1 refs 4 rate 0.750000 "
      "margin 0.424345\n"
      "concepts 3\n"
      "concept a matches 1 subs 0 ins 0 dels 1\n"
      "concept b matches 0 subs 1 ins 0 dels 0\n"
      "concept c matches 1 subs 0 ins 0 dels 0\n"
      "utterance u1 wer 0/4 cer 1/2 cver 1/2\n"
      "utterance u2 wer 1/2 cer 0/1 cver 1/1\n"
      "utterance u3 wer 1/1 cer 1/1 cver 1/1 empty-hyp\n"
      "end\n";
  CHECK(text == expected);
}

TEST_CASE("report with no concepts leaves rates undefined") {
  const Corpus refs = make_corpus({{"u1", "plain words only"}});
  const Corpus hyps = make_corpus({{"u1", "plain words only"}});
  const ScoreReport report = score_corpus(refs, hyps);
  CHECK(!report.cer.defined());
  CHECK(!report.cer_margin.has_value());
  const std::string text = render_report(report);
  CHECK(text.find("cer errors 0 subs 0 ins 0 dels 0 refs 0 rate undefined "
                  "margin undefined\n") != std::string::npos);
}
