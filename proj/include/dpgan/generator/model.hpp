#pragma once

#include <cstddef>
#include <cstdint>

#include "dpgan/corpus/types.hpp"
#include "dpgan/numerics/graph.hpp"
#include "dpgan/numerics/lstm.hpp"

namespace dpgan::gen {

using corpus::Sentence;
using corpus::Text;
using corpus::TokenId;

struct GeneratorDims {
  std::size_t vocab = 0;
  std::size_t embedding = 32;
  std::size_t hidden = 64;

  bool operator==(const GeneratorDims&) const = default;
};

// Encoder, hierarchical decoder (sentence level over word level) and the
// attention/output layers of the word decoder.
struct GeneratorModel {
  GeneratorDims dims;
  num::Parameter embedding;     // {V, E}, shared by encoder and word decoder
  num::LstmCell encoder;        // input E
  num::LstmCell sentence;       // input H: last word-level hidden of the previous sentence
  num::LstmCell word;           // input E: previous word
  num::Parameter attention;     // {H, H}, bilinear score h_enc . (W h_dec)
  num::Parameter combine;       // {H, 2H}
  num::Parameter combine_bias;  // {H}
  num::Parameter output;        // {V, H}
  num::Parameter output_bias;   // {V}

  GeneratorModel() = default;
  GeneratorModel(GeneratorDims dims, std::uint64_t seed, double init_scale = 0.08);

  // Fixed order; checkpoints and optimizer state follow it.
  num::ParameterList parameters();
  num::ConstParameterList parameters() const;
};

// Throws ContractViolation unless every id is inside the vocabulary.
void check_ids(const GeneratorModel& m, const Sentence& s, const char* what);

}  // namespace dpgan::gen
