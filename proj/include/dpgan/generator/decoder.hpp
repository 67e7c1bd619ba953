#pragma once

#include "dpgan/generator/model.hpp"

namespace dpgan::gen {

struct Encoding {
  num::Var states;            // {m, H}, one row per source token
  num::LstmState final;       // initial sentence-level state
};

// Runs the encoder over a non-empty source.
Encoding encode(num::Graph& g, const GeneratorModel& m, const Sentence& source);

// Incremental decoder over one graph. Per sentence: begin_sentence(), then
// step(BOS), step(w1), ... where each step returns the logits of the next word.
class Decoder {
 public:
  Decoder(num::Graph& g, const GeneratorModel& m, const Sentence& source);

  void begin_sentence();
  num::Var step(TokenId input);

  // Same decoder state, re-rooted in another graph as constants.
  Decoder fork(num::Graph& target) const;

  num::Graph& graph() const { return *g_; }
  const GeneratorModel& model() const { return *m_; }
  const num::LstmState& sentence_state() const { return sentence_; }
  const num::LstmState& word_state() const { return word_; }
  num::Var encoder_states() const { return enc_; }

 private:
  Decoder(num::Graph& g, const GeneratorModel& m) : g_(&g), m_(&m) {}

  num::Graph* g_;
  const GeneratorModel* m_;
  num::Var enc_;
  num::Var enc_t_;
  num::LstmState sentence_;
  num::LstmState word_;
  bool started_ = false;
};

}  // namespace dpgan::gen
