#include "dpgan/generator/model.hpp"

#include <string>

#include "dpgan/errors.hpp"
#include "dpgan/numerics/random.hpp"

namespace dpgan::gen {

GeneratorModel::GeneratorModel(GeneratorDims d, std::uint64_t seed, double init_scale) : dims(d) {
  if (d.vocab <= corpus::special::kCount || d.embedding == 0 || d.hidden == 0) {
    throw ContractViolation("generator: vocab must exceed the reserved ids and dims must be positive");
  }
  num::Rng rng(num::mix_seed(seed, {0x6e11}));
  const std::size_t v = d.vocab, e = d.embedding, h = d.hidden;
  embedding = {"gen.embedding", num::uniform_tensor({v, e}, init_scale, rng)};
  encoder = num::LstmCell("gen.encoder", e, h, init_scale, rng);
  sentence = num::LstmCell("gen.sentence", h, h, init_scale, rng);
  word = num::LstmCell("gen.word", e, h, init_scale, rng);
  attention = {"gen.attention", num::uniform_tensor({h, h}, init_scale, rng)};
  combine = {"gen.combine", num::uniform_tensor({h, 2 * h}, init_scale, rng)};
  combine_bias = {"gen.combine_bias", num::uniform_tensor({h}, init_scale, rng)};
  output = {"gen.output", num::uniform_tensor({v, h}, init_scale, rng)};
  output_bias = {"gen.output_bias", num::uniform_tensor({v}, init_scale, rng)};
}

num::ParameterList GeneratorModel::parameters() {
  return {&embedding,   &encoder.weight, &encoder.bias, &sentence.weight,
          &sentence.bias, &word.weight,  &word.bias,    &attention,
          &combine,     &combine_bias,   &output,       &output_bias};
}

num::ConstParameterList GeneratorModel::parameters() const {
  auto list = const_cast<GeneratorModel*>(this)->parameters();
  return {list.begin(), list.end()};
}

void check_ids(const GeneratorModel& m, const Sentence& s, const char* what) {
  for (TokenId id : s) {
    if (id < 0 || static_cast<std::size_t>(id) >= m.dims.vocab) {
      throw ContractViolation(std::string(what) + ": token id " + std::to_string(id) +
                              " outside vocabulary of size " + std::to_string(m.dims.vocab));
    }
  }
}

}  // namespace dpgan::gen
