#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpgan/corpus/dataset.hpp"

namespace dpgan::corpus {

// Padded id batch. Sources are [B x source_len]; targets are model texts
// (markers included, see to_model_text) laid out as
// [B x sentences x words]. Masks hold 1 for real tokens and 0 for PAD.
struct Batch {
  std::vector<std::size_t> pair_indices;
  std::size_t source_len = 0;
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::vector<TokenId> source;
  std::vector<std::uint8_t> source_mask;
  std::vector<TokenId> target;
  std::vector<std::uint8_t> target_mask;

  std::size_t size() const noexcept { return pair_indices.size(); }
  Sentence source_of(std::size_t b) const;
  Text target_of(std::size_t b) const;
  std::size_t real_target_tokens() const;
};

// Builds a batch from the given pairs. `extra_padding` widens every padded
// dimension beyond the minimum.
Batch make_batch(const Dataset& data, std::span<const std::size_t> indices,
                 std::size_t extra_padding = 0);

// Epoch-wise shuffled batches. The permutation of epoch e depends only on
// (seed, e), so any batch can be recomputed from its global index.
class BatchIterator {
 public:
  BatchIterator(const Dataset& data, std::size_t batch_size, std::uint64_t seed);

  std::size_t batches_per_epoch() const noexcept;
  std::vector<std::size_t> epoch_order(std::size_t epoch) const;
  std::vector<Batch> epoch(std::size_t epoch) const;
  // Batch number `index` counted across epochs.
  Batch batch(std::size_t index) const;

 private:
  const Dataset* data_;
  std::size_t batch_size_;
  std::uint64_t seed_;
};

}  // namespace dpgan::corpus
