#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace dpgan::train {

// One completed step. Kinds: pretrain_gen, pretrain_disc, pg, tf, disc,
// classifier, mle, pg_bleu, seqgan.
struct Record {
  std::string kind;
  std::size_t iteration = 0;  // adversarial iteration or pretraining epoch
  std::size_t index = 0;      // position inside the iteration
  std::size_t step = 0;       // global step counter
  double loss = 0.0;
  std::optional<double> real_reward;
  std::optional<double> generated_reward;
  std::optional<double> accuracy;
  std::optional<double> validation_nll;
  std::optional<std::size_t> dist1;
  std::optional<std::size_t> dist2;
  std::optional<double> seconds;  // only when timings are enabled

  std::string to_json() const;
  static Record from_json(const std::string& line);
};

// Append-only record list, optionally mirrored line by line to a JSONL file.
class RunLog {
 public:
  RunLog() = default;
  // Opens `path` for appending. `truncate` starts a fresh file.
  explicit RunLog(const std::filesystem::path& path, bool truncate = true);

  void append(Record r);
  const std::vector<Record>& records() const noexcept { return records_; }
  std::size_t count(const std::string& kind) const;
  std::string to_jsonl() const;

  static std::vector<Record> read(const std::filesystem::path& path);

 private:
  std::vector<Record> records_;
  std::optional<std::ofstream> sink_;
};

}  // namespace dpgan::train
