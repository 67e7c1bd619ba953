#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dpgan/discriminators/discriminators.hpp"
#include "dpgan/generator/model.hpp"
#include "dpgan/numerics/adagrad.hpp"
#include "dpgan/training/training.hpp"

namespace dpgan::app {

enum class ModelKind : std::uint32_t { kGenerator = 1, kLmDiscriminator = 2, kClassifier = 3 };

std::string kind_name(ModelKind k);

struct NamedTensor {
  std::string name;
  num::Tensor value;
  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

// One model with its optimizer state and the run progress at save time.
struct Checkpoint {
  ModelKind kind = ModelKind::kGenerator;
  std::vector<std::uint64_t> dims;  // vocab, embedding, hidden
  std::vector<NamedTensor> tensors;
  std::vector<num::Tensor> accumulators;
  train::Progress progress;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// "DPGN", u32 version, u32 kind, dimension header, tensors as little-endian
// f64 in parameter order, accumulators, progress, trailing FNV-1a checksum.
std::string encode(const Checkpoint& c);
// Throws IoError for truncated or corrupt input and version mismatches.
Checkpoint decode(const std::string& bytes, const std::string& origin = "<checkpoint>");

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);
// Also refuses a checkpoint of another kind, naming both kinds.
Checkpoint load_checkpoint(const std::filesystem::path& path, ModelKind expected);

Checkpoint capture(const gen::GeneratorModel& m, const num::Adagrad& opt, const train::Progress& p);
Checkpoint capture(const disc::LmDiscriminator& d, const num::Adagrad& opt, const train::Progress& p);
Checkpoint capture(const disc::ClassifierDiscriminator& d, const num::Adagrad& opt, const train::Progress& p);

// Rebuilds the model from the checkpoint and copies the optimizer accumulators.
gen::GeneratorModel restore_generator(const Checkpoint& c, num::Adagrad* opt = nullptr);
disc::LmDiscriminator restore_lm(const Checkpoint& c, num::Adagrad* opt = nullptr);
disc::ClassifierDiscriminator restore_classifier(const Checkpoint& c, num::Adagrad* opt = nullptr);

}  // namespace dpgan::app
