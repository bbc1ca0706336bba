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
// The slukit command-line front end.
//
// Exit codes: 0 success, 1 usage problems, 2 data problems (unreadable or
// malformed files, scoring without references, ...), 3 internal errors.

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "slukit/annotation.hpp"
#include "slukit/corpus_io.hpp"
#include "slukit/ctc_decoder.hpp"
#include "slukit/errors.hpp"
#include "slukit/metrics.hpp"
#include "slukit/ngram_lm.hpp"
#include "slukit/version.hpp"

namespace {

using namespace slukit;

std::string version_line() {
  std::ostringstream os;
  os << "slukit " << kVersion << " (transcript v1, CTCPOST v"
     << kPosteriorFormatVersion << ", SLUSCORE v" << kScoreReportVersion
     << ", ARPA)";
  return os.str();
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string format_pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
  return buf;
}

// Runs worker(0..n-1) on `jobs` threads; any index may fail, the first
// exception wins.  Workers write only to their own result slot, so the
// output is identical for every job count.
void run_parallel(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& worker) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n == 0 ? 1 : n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) worker(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= n) return;
      try {
        worker(i);
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

// The token stream an utterance contributes to language-model training and
// perplexity: the serialized annotation (tags are ordinary tokens), or the
// bare words with --strip-tags.
std::vector<std::vector<std::string>> lm_sentences(const Corpus& corpus,
                                                   bool strip_tags_flag,
                                                   const TagFormat& fmt) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(corpus.size());
  for (const auto& [utt_id, transcript] : corpus.utterances()) {
    (void)utt_id;
    if (strip_tags_flag) {
      sentences.push_back(strip_tags(transcript));
      continue;
    }
    std::vector<std::string> tokens;
    std::istringstream in(serialize_enriched(transcript, fmt));
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    sentences.push_back(std::move(tokens));
  }
  return sentences;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string ref_path;
  std::string hyp_path;
  std::string metric = "all";
  bool case_fold = false;
  bool strip_accents = false;
  std::string report_path;
  std::size_t jobs = 1;
};

void print_metric(const std::string& label, const ErrorRateReport& r,
                  const std::optional<double>& margin) {
  std::cout << '%' << label << ' ';
  if (r.defined()) {
    std::cout << format_pct(r.rate());
    if (margin) std::cout << " ±" << format_pct(*margin);
  } else {
    std::cout << "undefined";
  }
  std::cout << " [ " << r.errors() << " / " << r.ref_count << ", "
            << r.insertions << " ins, " << r.deletions << " del, "
            << r.substitutions << " sub ]\n";
}

int cmd_score(const ScoreArgs& a) {
  const Corpus refs = load_corpus(a.ref_path);
  const Corpus hyps = load_corpus(a.hyp_path);
  ScoreOptions options;
  options.norm.case_fold = a.case_fold;
  options.norm.strip_accents = a.strip_accents;
  options.jobs = a.jobs;
  const ScoreReport report = score_corpus(refs, hyps, options);

  if (a.metric == "all" || a.metric == "wer") {
    print_metric("WER", report.wer, std::nullopt);
  }
  if (a.metric == "all" || a.metric == "cer") {
    print_metric("CER", report.cer, report.cer_margin);
  }
  if (a.metric == "all" || a.metric == "cver") {
    print_metric("CVER", report.cver, report.cver_margin);
  }
  std::cout << "scored " << report.per_utterance.size() << " utterances, "
            << report.empty_hypotheses << " against an empty hypothesis\n";

  if (!a.report_path.empty()) {
    write_text_file_atomic(a.report_path, render_report(report));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

struct DecodeArgs {
  std::string post_dir;
  std::string manifest;
  std::string out;
  bool greedy = false;
  std::size_t beam = 100;
  std::string lm_path;
  double alpha = 0.5;
  double beta = 0.0;
  std::size_t nbest = 10;
  std::string fusion = "fused";
  std::size_t jobs = 1;
};

int cmd_decode(const DecodeArgs& a) {
  const auto entries = load_manifest(a.manifest);
  std::optional<NGramModel> lm;
  if (!a.lm_path.empty()) lm = read_arpa_file(a.lm_path);

  DecodeParams params;
  params.beam_width = a.beam;
  params.nbest = std::min(a.nbest, a.beam);
  params.lm_weight = a.alpha;
  params.insertion_bonus = a.beta;
  params.fusion_mode = a.fusion == "rescore" ? FusionMode::kRescoreOnly
                                             : FusionMode::kFused;

  std::vector<std::string> lines(entries.size());
  run_parallel(entries.size(), a.jobs, [&](std::size_t i) {
    const auto& [utt_id, file_name] = entries[i];
    const PosteriorFile pf =
        load_posteriors((std::filesystem::path(a.post_dir) / file_name)
                            .string());
    std::vector<std::string> symbols;
    if (a.greedy) {
      symbols = greedy_decode(pf.matrix, pf.vocab);
    } else {
      auto hyps = prefix_beam_decode(pf.matrix, pf.vocab,
                                     lm ? &*lm : nullptr, params);
      if (lm && params.fusion_mode == FusionMode::kRescoreOnly) {
        hyps = rescore_nbest(std::move(hyps), *lm, params.lm_weight,
                             params.insertion_bonus, &pf.vocab);
      }
      symbols = hyps.front().symbols;
    }
    lines[i] =
        utt_id + "\t" + join_tokens(lm_tokens(symbols, pf.vocab)) + "\n";
  });

  std::string out;
  for (const std::string& line : lines) out += line;
  write_text_file_atomic(a.out, out);
  std::cout << "decoded " << entries.size() << " utterances -> " << a.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// lm train / lm perplexity
// ---------------------------------------------------------------------------

struct LmArgs {
  std::string input;
  std::string model;
  int order = 3;
  double discount = 0.75;
  bool mle = false;
  bool strip_tags = false;
  std::string close_style = "explicit";
};

TagFormat tag_format(const std::string& close_style) {
  return TagFormat{close_style == "generic" ? CloseStyle::kGeneric
                                            : CloseStyle::kExplicit};
}

int cmd_lm_train(const LmArgs& a) {
  const Corpus corpus = load_corpus(a.input);
  const auto sentences =
      lm_sentences(corpus, a.strip_tags, tag_format(a.close_style));
  const Smoothing smoothing =
      a.mle ? Smoothing::mle() : Smoothing::kneser_ney(a.discount);
  const NGramModel model = train(sentences, a.order, smoothing);
  write_arpa_file(a.model, model);
  std::cout << "trained " << a.order << "-gram model on "
            << sentences.size() << " utterances -> " << a.model << "\n";
  return 0;
}

int cmd_lm_perplexity(const LmArgs& a) {
  const NGramModel model = read_arpa_file(a.model);
  const Corpus corpus = load_corpus(a.input);
  const auto sentences =
      lm_sentences(corpus, a.strip_tags, tag_format(a.close_style));
  const double ppl = perplexity(model, sentences);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "perplexity %.6f\n", ppl);
  std::cout << buf;
  return 0;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string corpus;
  std::string durations;
};

int cmd_stats(const StatsArgs& a) {
  Corpus corpus = load_corpus(a.corpus);
  if (!a.durations.empty()) load_durations(a.durations, &corpus);
  const CorpusStats s = corpus_stats(corpus);
  std::cout << "utterances\twords\tconcepts\thours\n"
            << s.n_utterances << '\t' << s.n_words << '\t' << s.n_concepts
            << '\t'
            << (s.total_seconds ? format_hours(*s.total_seconds) : "-")
            << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path) {
  const std::string text = read_text_file(path);
  std::size_t line_no = 0;
  std::size_t utterances = 0;
  std::size_t invalid = 0;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      const Corpus one = parse_corpus(line + "\n");
      const std::string& utt_id = one.utterances().front().first;
      if (seen.insert(utt_id).second) {
        ++utterances;
      } else {
        ++invalid;
        std::cout << "line " << line_no << ": duplicate utterance id '"
                  << utt_id << "'\n";
      }
    } catch (const Error& e) {
      ++invalid;
      std::string message = e.what();
      if (const std::string prefix = "line 1: ";
          message.rfind(prefix, 0) == 0) {
        message.erase(0, prefix.size());
      }
      std::cout << "line " << line_no << ": " << message << "\n";
    }
  }
  if (utterances == 0 && invalid == 0) {
    std::cout << "warning: corpus is empty\n";
  }
  std::cout << utterances << " utterances, " << invalid
            << " invalid lines\n";
  return invalid > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoding and evaluation for concept-enriched speech "
               "transcription"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_line());

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand(
      "score", "Score hypothesis transcripts against references");
  score->add_option("ref", score_args.ref_path, "Reference transcript file")
      ->required();
  score->add_option("hyp", score_args.hyp_path, "Hypothesis transcript file")
      ->required();
  score->add_option("--metric", score_args.metric, "Metric selection")
      ->check(CLI::IsMember({"all", "wer", "cer", "cver"}))
      ->capture_default_str();
  score->add_flag("--case-fold", score_args.case_fold,
                  "Fold case before comparing");
  score->add_flag("--strip-accents", score_args.strip_accents,
                  "Strip accents before comparing");
  score->add_option("--report", score_args.report_path,
                    "Write a full SLUSCORE report to this file");
  score->add_option("--jobs", score_args.jobs, "Scoring threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  DecodeArgs decode_args;
  CLI::App* decode = app.add_subcommand(
      "decode", "Decode CTC posterior files into transcripts");
  decode
      ->add_option("post_dir", decode_args.post_dir,
                   "Directory holding posterior files")
      ->required();
  decode
      ->add_option("manifest", decode_args.manifest,
                   "Manifest: utt_id<TAB>posterior-file")
      ->required();
  decode->add_option("out", decode_args.out, "Output transcript file")
      ->required();
  CLI::Option* greedy_flag = decode->add_flag(
      "--greedy", decode_args.greedy, "Best-path decoding (no beam)");
  CLI::Option* beam_opt =
      decode->add_option("--beam", decode_args.beam, "Beam width")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
  CLI::Option* lm_opt =
      decode->add_option("--lm", decode_args.lm_path, "ARPA language model");
  decode
      ->add_option("--alpha", decode_args.alpha,
                   "Language-model weight")
      ->capture_default_str();
  decode
      ->add_option("--beta", decode_args.beta,
                   "Per-token insertion bonus")
      ->capture_default_str();
  decode
      ->add_option("--nbest", decode_args.nbest,
                   "Hypotheses kept per utterance (capped at the beam "
                   "width)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  decode
      ->add_option("--fusion", decode_args.fusion,
                   "LM integration: during the search or by rescoring")
      ->check(CLI::IsMember({"fused", "rescore"}))
      ->capture_default_str();
  decode->add_option("--jobs", decode_args.jobs, "Decoding threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  greedy_flag->excludes(beam_opt);
  greedy_flag->excludes(lm_opt);

  CLI::App* lm = app.add_subcommand("lm", "Train or query language models");
  lm->require_subcommand(1);

  LmArgs train_args;
  CLI::App* lm_train = lm->add_subcommand(
      "train", "Train a back-off n-gram model and write it as ARPA");
  lm_train->add_option("--input", train_args.input, "Transcript file")
      ->required();
  lm_train->add_option("--model", train_args.model, "Output ARPA file")
      ->required();
  lm_train->add_option("--order", train_args.order, "Model order")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI::Option* discount_opt =
      lm_train
          ->add_option("--discount", train_args.discount,
                       "Kneser-Ney discount")
          ->capture_default_str();
  lm_train
      ->add_flag("--mle", train_args.mle,
                 "Unsmoothed maximum likelihood (no back-off)")
      ->excludes(discount_opt);
  lm_train->add_flag("--strip-tags", train_args.strip_tags,
                     "Train on bare words, dropping concept markup");
  lm_train
      ->add_option("--close-style", train_args.close_style,
                   "Closing-tag spelling used for tag tokens")
      ->check(CLI::IsMember({"explicit", "generic"}))
      ->capture_default_str();

  LmArgs ppl_args;
  CLI::App* lm_ppl = lm->add_subcommand(
      "perplexity", "Corpus perplexity under an ARPA model");
  lm_ppl->add_option("--model", ppl_args.model, "ARPA file")->required();
  lm_ppl->add_option("--input", ppl_args.input, "Transcript file")
      ->required();
  lm_ppl->add_flag("--strip-tags", ppl_args.strip_tags,
                   "Score bare words, dropping concept markup");
  lm_ppl
      ->add_option("--close-style", ppl_args.close_style,
                   "Closing-tag spelling used for tag tokens")
      ->check(CLI::IsMember({"explicit", "generic"}))
      ->capture_default_str();

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("corpus", stats_args.corpus, "Transcript file")
      ->required();
  stats->add_option("--durations", stats_args.durations,
                    "Durations sidecar: utt_id<TAB>seconds");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a transcript file line by line");
  validate->add_option("corpus", validate_path, "Transcript file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (score->parsed()) return cmd_score(score_args);
    if (decode->parsed()) return cmd_decode(decode_args);
    if (lm->parsed()) {
      if (lm_train->parsed()) return cmd_lm_train(train_args);
      return cmd_lm_perplexity(ppl_args);
    }
    if (stats->parsed()) return cmd_stats(stats_args);
    return cmd_validate(validate_path);
  } catch (const InvalidDiscountError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
