#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dpgan/evaluation/metrics.hpp"
#include "dpgan/training/training.hpp"

namespace dpgan::app {

enum class CorpusFormat { kReview, kDialogue, kPairs };

std::string format_name(CorpusFormat f);
CorpusFormat parse_format(const std::string& s);

struct DataConfig {
  CorpusFormat format = CorpusFormat::kReview;
  std::string corpus;   // raw input for prepare
  std::string dir;      // prepared data directory
  std::size_t vocab_size = 1000;
  std::size_t min_response_words = 0;
  double split_train = 0.8;
  double split_valid = 0.1;
  double split_test = 0.1;
};

struct ModelConfig {
  std::size_t embedding = 32;
  std::size_t hidden = 64;
  double init_scale = 0.08;
};

struct AppConfig {
  std::uint64_t seed = 1;
  DataConfig data;
  ModelConfig model;
  train::TrainConfig train;
  std::size_t checkpoint_every = 1;  // adversarial iterations between checkpoints
  std::vector<eval::RankBin> rank_bins = eval::default_rank_bins();
  std::size_t bleu_max_n = 4;
  std::size_t histogram_bins = 50;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Every accepted key with its default rendering, in schema order.
std::vector<std::pair<std::string, std::string>> schema();

// `key = value` lines; `#` starts a comment. Throws ConfigError with the line
// number for malformed lines and duplicate keys.
std::map<std::string, std::string> parse_entries(const std::string& text, const std::string& origin);

// Applies entries over the defaults. Unknown keys are rejected together in a
// single ConfigError that lists all of them.
AppConfig from_entries(const std::map<std::string, std::string>& entries);
AppConfig parse_config(const std::string& text, const std::string& origin = "<config>");
AppConfig load_config(const std::string& path);

// Canonical `key = value` text; parse_config(to_text(c)) reproduces c.
std::string to_text(const AppConfig& c);

}  // namespace dpgan::app
