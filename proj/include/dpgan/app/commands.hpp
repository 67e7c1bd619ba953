#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dpgan/app/config.hpp"
#include "dpgan/corpus/dataset.hpp"

namespace dpgan::app {

namespace fs = std::filesystem;

inline constexpr const char* kVersionTag = "dpgan 1.0";

struct RunManifest {
  std::string command;
  std::string config;  // canonical config text
  std::uint64_t seed = 0;
  std::map<std::string, std::string> fingerprints;  // input path -> FNV-1a hex
  std::vector<std::string> artifacts;
  std::string version = kVersionTag;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

fs::path manifest_path(const fs::path& dir, const std::string& command);
// Refuses to replace an existing manifest unless `force` is set.
void write_manifest(const fs::path& dir, const RunManifest& m, bool force);
std::string fingerprint(const fs::path& file);

// ---- prepare ----

struct PrepareReport {
  std::size_t documents = 0;
  std::size_t pairs = 0;
  std::map<std::string, std::size_t> skipped;  // reason -> count
  std::array<std::size_t, 3> split_sizes{};
  std::size_t vocabulary = 0;
};

// Reads the raw corpus into pairs; malformed input names its line number.
std::vector<corpus::RawPair> read_corpus(const std::string& content, const std::string& origin,
                                         const DataConfig& c, PrepareReport& report);

// Writes vocab.txt, {train,valid,test}.pairs, {split}.source.txt,
// {split}.target.txt, prepare_report.tsv and the manifest.
PrepareReport cmd_prepare(const AppConfig& c, const fs::path& out_dir, bool force);

// ---- training ----

struct TrainOptions {
  fs::path data_dir;
  fs::path out_dir;
  bool force = false;
  bool resume = false;
  bool pretrain_only = false;
};

// Writes generator.ckpt, the discriminator checkpoints the baseline uses,
// run_log.jsonl and the manifest. Checkpoints are refreshed after
// pretraining and every `checkpoint_every` adversarial iterations.
train::Progress cmd_train(const AppConfig& c, const TrainOptions& o);

// ---- generation and analysis ----

// One output line per input line, manifest `<output name>.manifest.json`
// beside it; sentences are TAB-separated, tokens
// space-separated. Empty input lines give empty output lines.
void cmd_generate(const AppConfig& c, const fs::path& checkpoint, const fs::path& vocab, const fs::path& input,
                  const fs::path& output, bool force = false);

// Reads a TAB/space text file into token sentences, one text per line.
std::vector<std::vector<corpus::TokenSentence>> read_texts(const fs::path& path);

struct EvaluateOptions {
  fs::path generated;
  fs::path reference;
  fs::path out_dir;
  bool bleu = false;  // line-aligned BLEU against the reference
  bool force = false;
};

// diversity.tsv, frequency_bins.tsv, optional bleu.tsv, and a summary
// returned as text.
std::string cmd_evaluate(const AppConfig& c, const EvaluateOptions& o);

// frequency_profile.tsv and frequency_bins.tsv.
void cmd_analyze_frequency(const AppConfig& c, const fs::path& generated, const fs::path& reference,
                           const fs::path& out_dir, bool force = false);

struct RewardAnalysisOptions {
  fs::path generator;
  fs::path lm;
  fs::path classifier;
  fs::path data_dir;
  std::string split = "test";
  fs::path out_dir;
  bool force = false;
};

// reward_histogram.tsv and reward_summary.tsv over real and generated
// sentences of the chosen split.
void cmd_analyze_rewards(const AppConfig& c, const RewardAnalysisOptions& o);

// Entry point shared by the executable and the tests. Exit codes: 0 success,
// 2 config or usage error, 3 I/O error, 4 contract violation.
int run_cli(const std::vector<std::string>& args);

}  // namespace dpgan::app
