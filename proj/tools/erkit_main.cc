// Copyright 2026 The erkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// erkit: command-line driver for the entity curation and decoding pipeline.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 provider failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "erkit/error.h"
#include "erkit/pipeline.h"
#include "erkit/simd/kernels.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;

std::optional<std::filesystem::path> OptionalPath(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity curation, constrained decoding and evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  bool resume = false;
  app.add_option("--config", config_path, "Pipeline configuration (JSON)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_flag("--resume", resume, "Resume from the checkpoint in --out");

  std::string vocab_path;

  auto* match = app.add_subcommand("match", "Assign candidate entities to captioned images");
  std::string corpus_path;
  match->add_option("--corpus", corpus_path, "Corpus JSON-lines")->required();
  match->add_option("--vocab", vocab_path, "Entity vocabulary")->required();

  auto* refine = app.add_subcommand("refine", "Verify/correct candidates and generate QA pairs");
  std::string assignments_path;
  std::string proxies_path;
  std::size_t stop_after = 0;
  refine->add_option("--assignments", assignments_path, "Output of match")->required();
  refine->add_option("--vocab", vocab_path, "Entity vocabulary")->required();
  refine->add_option("--proxies", proxies_path,
                     "Caption proxies {image_id, proxy} for text-only models");
  refine->add_option("--stop-after", stop_after,
                     "Process at most N new records, then stop (resumable)");

  auto* build = app.add_subcommand("build", "Expand refined records into sharded training data");
  std::string records_path;
  std::string eval_emb_path;
  std::string record_emb_path;
  std::string seen_path;
  build->add_option("--records", records_path, "records.jsonl from refine")->required();
  build->add_option("--vocab", vocab_path, "Entity vocabulary")->required();
  build->add_option("--eval-embeddings", eval_emb_path, "Evaluation image embeddings");
  build->add_option("--record-embeddings", record_emb_path, "Training image embeddings");
  build->add_option("--seen-entities", seen_path, "Seen entity list; splits output");

  auto* decode = app.add_subcommand("decode", "Beam-search entity names for queries");
  std::string queries_path;
  std::string scorer_path;
  std::string trie_path;
  std::string save_trie_path;
  std::string mode;
  std::optional<long long> beam;
  std::optional<long long> max_len;
  decode->add_option("--queries", queries_path, "Queries {query_id, question}")->required();
  decode->add_option("--vocab", vocab_path, "Entity vocabulary")->required();
  decode->add_option("--scorer", scorer_path, "Scorer fixture (JSON)")->required();
  decode->add_option("--trie", trie_path, "Prebuilt trie file");
  decode->add_option("--save-trie", save_trie_path, "Write the built trie here");
  decode->add_option("--mode", mode, "none | last-step | full");
  decode->add_option("--beam", beam, "Beam size (default 30)");
  decode->add_option("--max-len", max_len, "Maximum tokens incl. eos (default 32)");

  auto* eval = app.add_subcommand("eval", "Seen/unseen top-k accuracy and harmonic mean");
  std::string predictions_path;
  std::string gold_path;
  std::string mapping_path;
  bool allow_empty_split = false;
  eval->add_option("--predictions", predictions_path, "Predictions JSON-lines")->required();
  eval->add_option("--gold", gold_path, "Gold JSON-lines")->required();
  eval->add_option("--mapping", mapping_path, "Class label -> entity mapping (TSV)");
  eval->add_option("--vocab", vocab_path, "Entity vocabulary");
  eval->add_flag("--allow-empty-split", allow_empty_split,
                 "Report the non-empty split's accuracy as HM when one split is empty");

  auto* grad = app.add_subcommand("grad-check", "Finite-difference check of the loss gradient");
  std::uint64_t seed = 0;
  std::size_t instances = 20;
  double epsilon = -1.0;
  grad->add_option("--seed", seed, "Random seed");
  grad->add_option("--instances", instances, "Number of random instances")->capture_default_str();
  grad->add_option("--epsilon", epsilon, "Label smoothing (default from config)");

  auto* stats = app.add_subcommand("stats", "Summarize a refine output directory");
  std::string stats_dir;
  stats->add_option("dir", stats_dir, "Refine output directory (default --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    erkit::PipelineConfig config;
    if (!config_path.empty()) config = erkit::PipelineConfig::LoadFile(config_path);

    if (match->parsed()) {
      auto s = erkit::RunMatch(config, corpus_path, vocab_path, out_dir);
      std::printf("matched %zu images -> %zu assignments (%s)\n", s.images, s.assignments,
                  s.output.string().c_str());
      return 0;
    }
    if (refine->parsed()) {
      erkit::RefineOptions options;
      options.resume = resume;
      if (stop_after > 0) options.stop_after = stop_after;
      options.caption_proxies = OptionalPath(proxies_path);
      auto s = erkit::RunRefine(config, assignments_path, vocab_path, out_dir, options);
      std::printf("refined %zu/%zu: %zu accepted, %zu rejected (%zu provider failures)%s\n",
                  s.accepted + s.rejected, s.total, s.accepted, s.rejected, s.provider_failures,
                  s.complete ? "" : " [incomplete, rerun with --resume]");
      if (s.correction_rate) std::printf("correction rate %.4f\n", *s.correction_rate);
      return s.provider_failures > 0 ? kExitProvider : 0;
    }
    if (build->parsed()) {
      erkit::BuildOptions options;
      options.eval_embeddings = OptionalPath(eval_emb_path);
      options.record_embeddings = OptionalPath(record_emb_path);
      options.seen_entities = OptionalPath(seen_path);
      auto s = erkit::RunBuild(config, records_path, vocab_path, out_dir, options);
      std::printf("%zu records, %zu removed by leak filter, %zu examples in %zu shards\n",
                  s.records, s.removed, s.examples, s.shards);
      return 0;
    }
    if (decode->parsed()) {
      if (!mode.empty()) config.decode_mode = mode;
      if (beam) {
        if (*beam < 1) {
          std::fprintf(stderr, "error: --beam must be >= 1\n");
          return kExitUsage;
        }
        config.beam_size = static_cast<std::size_t>(*beam);
      }
      if (max_len) {
        if (*max_len < 1) {
          std::fprintf(stderr, "error: --max-len must be >= 1\n");
          return kExitUsage;
        }
        config.max_len = static_cast<std::size_t>(*max_len);
      }
      config.Validate();
      erkit::DecodeOptions options;
      options.trie = OptionalPath(trie_path);
      options.save_trie = OptionalPath(save_trie_path);
      auto n = erkit::RunDecode(config, queries_path, vocab_path, scorer_path, out_dir, options);
      std::printf("decoded %zu queries (mode %s, beam %zu, simd %s)\n", n,
                  config.decode_mode.c_str(), config.beam_size,
                  std::string(erkit::simd::IsaName(erkit::simd::ActiveIsa())).c_str());
      return 0;
    }
    if (eval->parsed()) {
      erkit::EvalFiles files{predictions_path, gold_path, OptionalPath(mapping_path),
                             OptionalPath(vocab_path)};
      erkit::EvalOptions options;
      options.allow_empty_split = allow_empty_split;
      auto report = erkit::RunEval(files, options, out_dir);
      std::fputs(erkit::ReportToText(report).c_str(), stdout);
      return 0;
    }
    if (grad->parsed()) {
      const double eps = epsilon >= 0.0 ? epsilon : config.label_smoothing;
      auto s = erkit::RunGradCheck(seed, instances, eps);
      std::printf("grad-check: %zu instances, epsilon %.3f, max relative error %.3e\n",
                  s.instances, eps, s.max_relative_error);
      return s.max_relative_error <= 1e-5 ? 0 : kExitData;
    }
    if (stats->parsed()) {
      std::cout << erkit::RefineStats(stats_dir.empty() ? out_dir : stats_dir).dump(2) << "\n";
      return 0;
    }
  } catch (const erkit::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.code()) {
      case erkit::ErrorCode::kInvalidArgument:
      case erkit::ErrorCode::kZeroBeam:
        return kExitUsage;
      case erkit::ErrorCode::kProviderError:
        return kExitProvider;
      default:
        return kExitData;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
