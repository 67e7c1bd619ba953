#include "dpgan/generator/decoder.hpp"

#include "dpgan/errors.hpp"
#include "dpgan/numerics/ops.hpp"

namespace dpgan::gen {

Encoding encode(num::Graph& g, const GeneratorModel& m, const Sentence& source) {
  if (source.empty()) throw ContractViolation("encode: empty source");
  check_ids(m, source, "encode");
  num::Var table = g.param(m.embedding);
  num::LstmState state = m.encoder.zero_state(g);
  std::vector<num::Var> rows;
  rows.reserve(source.size());
  for (TokenId id : source) {
    state = m.encoder.step(g, num::embedding(table, id), state);
    rows.push_back(state.h);
  }
  return {num::stack_rows(rows), state};
}

Decoder::Decoder(num::Graph& g, const GeneratorModel& m, const Sentence& source)
    : g_(&g), m_(&m) {
  Encoding enc = encode(g, m, source);
  enc_ = enc.states;
  enc_t_ = num::transpose(enc_);
  sentence_ = enc.final;
  word_ = enc.final;
}

void Decoder::begin_sentence() {
  num::Var input = started_ ? word_.h : g_->constant(num::Tensor({m_->dims.hidden}));
  sentence_ = m_->sentence.step(*g_, input, sentence_);
  word_ = sentence_;
  started_ = true;
}

num::Var Decoder::step(TokenId input) {
  if (!started_) throw ContractViolation("decoder: step before begin_sentence");
  if (input < 0 || static_cast<std::size_t>(input) >= m_->dims.vocab) {
    throw ContractViolation("decoder: token id " + std::to_string(input) + " outside vocabulary");
  }
  num::Graph& g = *g_;
  word_ = m_->word.step(g, num::embedding(g.param(m_->embedding), input), word_);
  num::Var h = word_.h;
  num::Var query = num::matmul(g.param(m_->attention), h);
  num::Var weights = num::softmax(num::matmul(enc_, query));
  num::Var context = num::matmul(enc_t_, weights);
  num::Var att = num::tanh(num::add(num::matmul(g.param(m_->combine), num::concat({h, context})),
                                    g.param(m_->combine_bias)));
  return num::add(num::matmul(g.param(m_->output), att), g.param(m_->output_bias));
}

Decoder Decoder::fork(num::Graph& target) const {
  Decoder d(target, *m_);
  d.enc_ = target.constant(enc_.value());
  d.enc_t_ = target.constant(enc_t_.value());
  d.sentence_ = {target.constant(sentence_.h.value()), target.constant(sentence_.c.value())};
  d.word_ = {target.constant(word_.h.value()), target.constant(word_.c.value())};
  d.started_ = started_;
  return d;
}

}  // namespace dpgan::gen
