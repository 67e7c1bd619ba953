#include "dpgan/corpus/batch.hpp"

#include <algorithm>

#include "dpgan/errors.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::corpus {

Sentence Batch::source_of(std::size_t b) const {
  Sentence s;
  for (std::size_t i = 0; i < source_len; ++i) {
    const std::size_t at = b * source_len + i;
    if (source_mask[at]) s.push_back(source[at]);
  }
  return s;
}

Text Batch::target_of(std::size_t b) const {
  Text t;
  for (std::size_t s = 0; s < sentences; ++s) {
    Sentence sent;
    for (std::size_t w = 0; w < words; ++w) {
      const std::size_t at = (b * sentences + s) * words + w;
      if (target_mask[at]) sent.push_back(target[at]);
    }
    if (!sent.empty()) t.push_back(std::move(sent));
  }
  return t;
}

std::size_t Batch::real_target_tokens() const {
  return static_cast<std::size_t>(std::count(target_mask.begin(), target_mask.end(), 1));
}

Batch make_batch(const Dataset& data, std::span<const std::size_t> indices, std::size_t extra_padding) {
  Batch b;
  b.pair_indices.assign(indices.begin(), indices.end());
  std::vector<Text> texts;
  texts.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= data.size()) throw ContractViolation("make_batch: index out of range");
    const TextPair& p = data.pairs[i];
    texts.push_back(to_model_text(p.target));
    b.source_len = std::max(b.source_len, p.source.size());
    b.sentences = std::max(b.sentences, texts.back().size());
    for (const auto& s : texts.back()) b.words = std::max(b.words, s.size());
  }
  b.source_len += extra_padding;
  b.sentences += extra_padding;
  b.words += extra_padding;
  const std::size_t n = indices.size();
  b.source.assign(n * b.source_len, special::kPad);
  b.source_mask.assign(n * b.source_len, 0);
  b.target.assign(n * b.sentences * b.words, special::kPad);
  b.target_mask.assign(n * b.sentences * b.words, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const Sentence& src = data.pairs[indices[k]].source;
    for (std::size_t i = 0; i < src.size(); ++i) {
      b.source[k * b.source_len + i] = src[i];
      b.source_mask[k * b.source_len + i] = 1;
    }
    const Text& t = texts[k];
    for (std::size_t s = 0; s < t.size(); ++s) {
      for (std::size_t w = 0; w < t[s].size(); ++w) {
        const std::size_t at = (k * b.sentences + s) * b.words + w;
        b.target[at] = t[s][w];
        b.target_mask[at] = 1;
      }
    }
  }
  return b;
}

BatchIterator::BatchIterator(const Dataset& data, std::size_t batch_size, std::uint64_t seed)
    : data_(&data), batch_size_(batch_size), seed_(seed) {
  if (data.empty()) throw ContractViolation("batch_iter: empty dataset");
  if (batch_size == 0) throw ContractViolation("batch_iter: batch size must be positive");
}

std::size_t BatchIterator::batches_per_epoch() const noexcept {
  return (data_->size() + batch_size_ - 1) / batch_size_;
}

std::vector<std::size_t> BatchIterator::epoch_order(std::size_t epoch) const {
  num::Rng rng(num::mix_seed(seed_, {0xba7c, epoch}));
  return num::permutation(rng, data_->size());
}

std::vector<Batch> BatchIterator::epoch(std::size_t epoch) const {
  const auto order = epoch_order(epoch);
  std::vector<Batch> out;
  for (std::size_t start = 0; start < order.size(); start += batch_size_) {
    const std::size_t len = std::min(batch_size_, order.size() - start);
    out.push_back(make_batch(*data_, std::span(order).subspan(start, len)));
  }
  return out;
}

Batch BatchIterator::batch(std::size_t index) const {
  const std::size_t per = batches_per_epoch();
  const auto order = epoch_order(index / per);
  const std::size_t start = (index % per) * batch_size_;
  const std::size_t len = std::min(batch_size_, order.size() - start);
  return make_batch(*data_, std::span(order).subspan(start, len));
}

}  // namespace dpgan::corpus
