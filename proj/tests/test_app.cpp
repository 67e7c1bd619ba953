#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dpgan/app/checkpoint.hpp"
#include "dpgan/app/commands.hpp"
#include "dpgan/app/config.hpp"
#include "dpgan/corpus/tokenizer.hpp"
#include "dpgan/corpus/vocabulary.hpp"
#include "dpgan/errors.hpp"
#include "dpgan/evaluation/metrics.hpp"
#include "dpgan/io.hpp"
#include "test_util.hpp"

using namespace dpgan;
using namespace dpgan::app;
namespace sp = corpus::special;

namespace {

std::string slurp(const fs::path& p) { return io::read_file(p); }

void write(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::istringstream in(slurp(p));
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line, char sep = '\t') {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, sep)) out.push_back(f);
  return out;
}

int cli(std::vector<std::string> args) { return run_cli(args); }

const char* kTinyConfig =
    "data.format = review\n"
    "model.embedding = 6\n"
    "model.hidden = 8\n"
    "train.iterations = 2\n"
    "train.discriminator_steps = 2\n"
    "train.batch_size = 6\n"
    "train.pretrain_generator_epochs = 1\n"
    "train.pretrain_discriminator_epochs = 1\n"
    "generation.max_sentences = 3\n"
    "generation.max_words = 6\n";

std::string review_corpus(std::size_t n) {
  const char* words[] = {"good", "bad", "food", "place", "service", "great", "slow", "staff"};
  std::string out;
  num::Rng rng(3);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t sentences = 2 + num::uniform_index(rng, 2);
    for (std::size_t s = 0; s < sentences; ++s) {
      const std::size_t len = 2 + num::uniform_index(rng, 4);
      for (std::size_t w = 0; w < len; ++w) out += std::string(words[num::uniform_index(rng, 8)]) + (w + 1 < len ? " " : ". ");
    }
    out += "\n";
  }
  return out;
}

// Prepared data plus a config file inside a fresh directory.
struct Workspace {
  fs::path root, config, data;
  explicit Workspace(const std::string& name, const std::string& extra = "") {
    root = test_util::scratch_dir(name);
    config = root / "run.conf";
    data = root / "data";
    auto entries = parse_entries(kTinyConfig, "tiny");
    for (const auto& [k, v] : parse_entries(extra, "extra")) entries[k] = v;
    std::string text;
    for (const auto& [k, v] : entries) text += k + " = " + v + "\n";
    write(config, text);
    write(root / "reviews.txt", review_corpus(40));
    REQUIRE(cli({"--config", config.string(), "--out-dir", data.string(), "prepare", "--input",
                 (root / "reviews.txt").string()}) == 0);
  }
};

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults round trip through the canonical text") {
  const AppConfig c;
  const auto again = parse_config(to_text(c));
  CHECK(to_text(again) == to_text(c));
  CHECK(schema().size() == parse_entries(to_text(c), "x").size());
}

TEST_CASE("values are applied and rendered back") {
  const auto c = parse_config(
      "# comment\n"
      "run.seed = 42\n"
      "train.gamma = 0.5   # trailing\n"
      "train.reward_mode = W\n"
      "train.baseline = seqgan\n"
      "generation.mode = greedy\n"
      "evaluation.rank_bins = 1-10, 11-20\n"
      "optimizer.learning_rate = 0.05\n");
  CHECK(c.seed == 42);
  CHECK(c.train.seed == 42);
  CHECK(c.train.gamma == 0.5);
  CHECK(c.train.mode == rewards::RewardMode::kW);
  CHECK(c.train.baseline == train::Baseline::kSeqGan);
  CHECK(c.train.generation.mode == gen::DecodeMode::kGreedy);
  REQUIRE(c.rank_bins.size() == 2);
  CHECK(c.rank_bins[1].last == 20);
  CHECK(c.train.optimizer.learning_rate == 0.05);
  CHECK(to_text(parse_config(to_text(c))) == to_text(c));
}

TEST_CASE("every unknown key is listed in one rejection") {
  try {
    parse_config("foo = 1\ntrain.gamma = 1\ntrain.gama = 2\n");
    FAIL("accepted unknown keys");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("foo") != std::string::npos);
    CHECK(msg.find("train.gama") != std::string::npos);
  }
}

TEST_CASE("malformed lines and values name their location") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text, "cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("run.seed = 1\nno equals sign\n").find("cfg:2") != std::string::npos);
  CHECK(message("run.seed = 1\nrun.seed = 2\n").find("duplicate") != std::string::npos);
  CHECK(message("train.batch_size = many\n").find("train.batch_size") != std::string::npos);
  CHECK(message("train.gamma = 2\n").find("gamma") != std::string::npos);
  CHECK(message("train.teacher_forcing = yes\n").find("train.teacher_forcing") != std::string::npos);
  CHECK(message("evaluation.rank_bins = 10-1\n").find("rank_bins") != std::string::npos);
}

TEST_CASE("shipped presets parse") {
  for (const char* name : {"desk.conf", "full.conf"}) {
    const auto path = fs::path(DPGAN_SOURCE_DIR) / "configs" / name;
    CAPTURE(path.string());
    CHECK_NOTHROW(load_config(path.string()));
  }
  const auto full = load_config((fs::path(DPGAN_SOURCE_DIR) / "configs" / "full.conf").string());
  CHECK(full.model.hidden == 256);
  CHECK(full.model.embedding == 128);
  CHECK(full.data.vocab_size == 50000);
  CHECK(full.train.batch_size == 64);
  CHECK(full.train.optimizer.learning_rate == 0.1);
  CHECK(full.train.generator_steps == 1000);
  CHECK(full.train.discriminator_steps == 5000);
  CHECK(full.train.pretrain_generator_epochs == 10);
  CHECK(full.train.generation.max_sentences == 6);
  CHECK(full.train.generation.max_words == 40);
}

}  // TEST_SUITE

TEST_SUITE("checkpoint") {

TEST_CASE("save and load are bit-exact for every kind") {
  const auto dir = test_util::scratch_dir("ckpt_roundtrip");
  train::TrainConfig tc;
  auto m = train::make_models(20, 4, 5, tc);
  // Give the optimizers non-trivial state.
  num::GradientBuffer grads(m.generator.parameters());
  for (std::size_t i = 0; i < grads.size(); ++i) grads[i].fill(0.01 * static_cast<double>(i + 1));
  m.generator_opt.step(m.generator.parameters(), grads);
  const train::Progress p{3, 1, 7, 42};

  const auto g = capture(m.generator, m.generator_opt, p);
  save_checkpoint(dir / "g.ckpt", g);
  CHECK(load_checkpoint(dir / "g.ckpt") == g);
  num::Adagrad opt;
  const auto restored = restore_generator(load_checkpoint(dir / "g.ckpt"), &opt);
  CHECK(opt.state().accumulators == m.generator_opt.state().accumulators);
  for (std::size_t i = 0; i < restored.parameters().size(); ++i) {
    CHECK(restored.parameters()[i]->value == m.generator.parameters()[i]->value);
  }
  CHECK(encode(capture(restored, opt, p)) == encode(g));

  const auto lm = capture(m.lm, m.lm_opt, p);
  CHECK(decode(encode(lm)) == lm);
  const auto cls = capture(m.classifier, m.classifier_opt, p);
  CHECK(decode(encode(cls)) == cls);
  CHECK(restore_classifier(cls).head.value == m.classifier.head.value);
}

TEST_CASE("truncated, corrupted and mismatched files fail cleanly") {
  train::TrainConfig tc;
  auto m = train::make_models(9, 3, 4, tc);
  const auto bytes = encode(capture(m.lm, m.lm_opt, {}));
  for (std::size_t n = 0; n < bytes.size(); n += 7) {
    CAPTURE(n);
    CHECK_THROWS_AS(decode(bytes.substr(0, n)), IoError);
  }
  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK_THROWS_WITH_AS(decode(flipped), doctest::Contains("checksum"), IoError);
  auto wrong_version = bytes;
  wrong_version[4] = 9;
  CHECK_THROWS_WITH_AS(decode(wrong_version), doctest::Contains("version"), IoError);
  auto wrong_magic = bytes;
  wrong_magic[0] = 'X';
  CHECK_THROWS_AS(decode(wrong_magic), IoError);
  CHECK_THROWS_WITH_AS(restore_generator(decode(bytes)), doctest::Contains("expected generator, got lm_discriminator"),
                       IoError);
}

TEST_CASE("restored generator reproduces generation and NLL exactly") {
  const auto dir = test_util::scratch_dir("ckpt_generate");
  train::TrainConfig tc;
  auto m = train::make_models(15, 5, 6, tc);
  save_checkpoint(dir / "g.ckpt", capture(m.generator, m.generator_opt, {}));
  const auto loaded = restore_generator(load_checkpoint(dir / "g.ckpt", ModelKind::kGenerator));
  num::Rng rng(5);
  gen::GenerationConfig gc;
  gc.max_sentences = 3;
  gc.max_words = 6;
  corpus::Dataset d;
  for (int i = 0; i < 100; ++i) {
    corpus::Sentence src(1 + num::uniform_index(rng, 5));
    for (auto& t : src) t = static_cast<corpus::TokenId>(sp::kCount + num::uniform_index(rng, 10));
    num::Rng a(static_cast<std::uint64_t>(i)), b(static_cast<std::uint64_t>(i));
    const auto x = gen::generate(m.generator, src, gc, a);
    const auto y = gen::generate(loaded, src, gc, b);
    CHECK(x.text == y.text);
    CHECK(x.log_probs == y.log_probs);
    if (i < 10) d.pairs.push_back({src, corpus::strip_markers(x.text), -1});
  }
  std::erase_if(d.pairs, [](const corpus::TextPair& p) { return p.target.empty(); });
  REQUIRE(!d.empty());
  CHECK(train::corpus_nll(loaded, d) == train::corpus_nll(m.generator, d));
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("prepare splits documents and reports skips") {
  const auto dir = test_util::scratch_dir("cli_prepare");
  write(dir / "r.txt", "Great food. Slow service.\nJust one sentence.\nNice place! Would return. Cheap.\n\nBad staff. Never again.\n");
  const std::string conf = (dir / "c.conf").string();
  write(conf, "data.split_train = 1\ndata.split_valid = 1\ndata.split_test = 1\n");
  REQUIRE(cli({"--config", conf, "--out-dir", (dir / "a").string(), "prepare", "--input", (dir / "r.txt").string()}) == 0);
  std::size_t pairs = 0;
  for (const char* s : {"train", "valid", "test"}) pairs += lines(dir / "a" / (std::string(s) + ".pairs")).size();
  CHECK(pairs == 3);
  const auto report = slurp(dir / "a" / "prepare_report.tsv");
  CHECK(report.find("skipped_single_sentence\t1") != std::string::npos);
  CHECK(report.find("documents\t4") != std::string::npos);

  // Refuses to replace the manifest, then reruns byte-identically with --force.
  CHECK(cli({"--config", conf, "--out-dir", (dir / "a").string(), "prepare", "--input", (dir / "r.txt").string()}) == 3);
  const auto before = slurp(dir / "a" / "train.pairs") + slurp(dir / "a" / "vocab.txt");
  REQUIRE(cli({"--config", conf, "--out-dir", (dir / "a").string(), "--force", "prepare", "--input",
               (dir / "r.txt").string()}) == 0);
  CHECK(slurp(dir / "a" / "train.pairs") + slurp(dir / "a" / "vocab.txt") == before);
}

TEST_CASE("dialogue and pairs formats") {
  const auto dir = test_util::scratch_dir("cli_formats");
  write(dir / "d.txt", "hi there how are you\ni am fine thanks for asking\nok\n\nanother talk starts here\nand gets a long reply back\n");
  const std::string conf = (dir / "c.conf").string();
  write(conf, "data.format = dialogue\ndata.min_response_words = 3\ndata.split_train = 1\ndata.split_valid = 0\ndata.split_test = 0\n");
  REQUIRE(cli({"--config", conf, "--out-dir", (dir / "d").string(), "prepare", "--input", (dir / "d.txt").string()}) == 0);
  CHECK(lines(dir / "d" / "train.pairs").size() == 2);
  CHECK(slurp(dir / "d" / "prepare_report.tsv").find("skipped_short_response\t1") != std::string::npos);

  write(dir / "p.txt", "a b\tc d\ne f\n");
  CHECK(cli({"--config", conf, "--out-dir", (dir / "p").string(), "prepare", "--format", "pairs", "--input",
             (dir / "p.txt").string()}) == 3);
  write(dir / "ctl.txt", "fine line. second.\nbad \x01 line. second.\n");
  CHECK(cli({"--out-dir", (dir / "ctl").string(), "prepare", "--input", (dir / "ctl.txt").string()}) == 3);
}

TEST_CASE("usage and configuration errors exit with 2") {
  const auto dir = test_util::scratch_dir("cli_usage");
  CHECK(cli({}) == 2);
  CHECK(cli({"no-such-command"}) == 2);
  CHECK(cli({"generate", "--checkpoint", "x"}) == 2);
  write(dir / "bad.conf", "foo = 1\nbar = 2\n");
  CHECK(cli({"--config", (dir / "bad.conf").string(), "prepare", "--input", "x"}) == 2);
  CHECK(cli({"--config", (dir / "missing.conf").string(), "prepare"}) == 3);
}

TEST_CASE("zero iterations and zero pretraining emit only the initial checkpoint") {
  Workspace w("cli_zero", "train.iterations = 0\ntrain.pretrain_generator_epochs = 0\ntrain.pretrain_discriminator_epochs = 0\n");
  const auto out = w.root / "run";
  REQUIRE(cli({"--config", w.config.string(), "--out-dir", out.string(), "train", "--data", w.data.string()}) == 0);
  CHECK(fs::exists(out / "generator.ckpt"));
  CHECK(fs::exists(out / "lm.ckpt"));
  CHECK(slurp(out / "run_log.jsonl").empty());
  const auto g = load_checkpoint(out / "generator.ckpt");
  CHECK(g.progress == train::Progress{});
  // Same seed, fresh models: identical to a directly built generator.
  auto c = load_config(w.config.string());
  const auto vocab = corpus::Vocabulary::load(w.data / "vocab.txt");
  auto m = train::make_models(vocab.size(), 6, 8, c.train);
  CHECK(encode(capture(m.generator, m.generator_opt, {})) == encode(g));
}

TEST_CASE("MLE baseline produces no discriminator artifacts") {
  Workspace w("cli_mle", "train.baseline = mle\n");
  const auto out = w.root / "run";
  REQUIRE(cli({"--config", w.config.string(), "--out-dir", out.string(), "train", "--data", w.data.string()}) == 0);
  CHECK(fs::exists(out / "generator.ckpt"));
  CHECK_FALSE(fs::exists(out / "lm.ckpt"));
  CHECK_FALSE(fs::exists(out / "classifier.ckpt"));
  for (const auto& r : train::RunLog::read(out / "run_log.jsonl")) CHECK((r.kind == "mle" || r.kind == "pretrain_gen"));
}

TEST_CASE("train is byte-reproducible and resumes without resetting the step counter") {
  Workspace w("cli_resume");
  const auto full = w.root / "full";
  const auto again = w.root / "again";
  const auto split = w.root / "split";
  const std::string conf = w.config.string(), data = w.data.string();
  REQUIRE(cli({"--config", conf, "--out-dir", full.string(), "train", "--data", data}) == 0);
  REQUIRE(cli({"--config", conf, "--out-dir", again.string(), "train", "--data", data}) == 0);
  for (const char* f : {"generator.ckpt", "lm.ckpt", "run_log.jsonl"}) {
    CAPTURE(f);
    CHECK(slurp(full / f) == slurp(again / f));
  }

  REQUIRE(cli({"--config", conf, "--out-dir", split.string(), "pretrain", "--data", data}) == 0);
  const auto mid = load_checkpoint(split / "generator.ckpt");
  CHECK(mid.progress.iterations == 0);
  CHECK(mid.progress.step == 2);
  // Without --resume the existing run is protected.
  CHECK(cli({"--config", conf, "--out-dir", split.string(), "pretrain", "--data", data}) == 3);
  REQUIRE(cli({"--config", conf, "--out-dir", split.string(), "train", "--data", data, "--resume"}) == 0);
  CHECK(slurp(split / "run_log.jsonl") == slurp(full / "run_log.jsonl"));
  CHECK(slurp(split / "generator.ckpt") == slurp(full / "generator.ckpt"));
  CHECK(load_checkpoint(split / "lm.ckpt").progress.step == 10);

  // A different config cannot resume the run.
  write(w.root / "other.conf", std::string(kTinyConfig) + "train.gamma = 0.9\n");
  CHECK(cli({"--config", (w.root / "other.conf").string(), "--out-dir", split.string(), "train", "--data", data,
             "--resume"}) == 2);
}

TEST_CASE("generate respects limits, determinism and checkpoint kinds") {
  Workspace w("cli_generate", "train.iterations = 0\n");
  const auto run = w.root / "run";
  REQUIRE(cli({"--config", w.config.string(), "--out-dir", run.string(), "pretrain", "--data", w.data.string()}) == 0);
  const std::string ckpt = (run / "generator.ckpt").string(), vocab = (w.data / "vocab.txt").string();
  const std::string input = (w.data / "train.source.txt").string();
  auto gen_to = [&](const std::string& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"--config", w.config.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    for (auto s : {"generate", "--checkpoint", ckpt.c_str(), "--vocab", vocab.c_str(), "--input", input.c_str(), "--output"})
      args.emplace_back(s);
    args.push_back(out);
    return cli(args);
  };
  REQUIRE(gen_to((w.root / "a.txt").string()) == 0);
  REQUIRE(gen_to((w.root / "b.txt").string()) == 0);
  REQUIRE(gen_to((w.root / "c.txt").string(), {"--seed", "99"}) == 0);
  CHECK(slurp(w.root / "a.txt") == slurp(w.root / "b.txt"));
  CHECK(slurp(w.root / "a.txt") != slurp(w.root / "c.txt"));
  CHECK(gen_to((w.root / "a.txt").string()) == 3);

  const auto out = lines(w.root / "a.txt");
  CHECK(out.size() == lines(input).size());
  for (const auto& l : out) {
    const auto sentences = fields(l);
    CHECK(sentences.size() <= 3);
    for (const auto& s : sentences) CHECK(fields(s, ' ').size() <= 6);
  }

  write(w.root / "empty.txt", "");
  std::vector<std::string> args{"generate", "--checkpoint", ckpt, "--vocab", vocab, "--input",
                                (w.root / "empty.txt").string(), "--output", (w.root / "e.txt").string()};
  REQUIRE(cli(args) == 0);
  CHECK(slurp(w.root / "e.txt").empty());

  args[2] = (run / "lm.ckpt").string();
  args.back() = (w.root / "f.txt").string();
  CHECK(cli(args) == 3);
  CHECK_FALSE(fs::exists(w.root / "f.txt"));

  write(w.root / "v.txt", "<pad>\n<unk>\n<bos>\n<eos>\n<eosent>\nx\n");
  args[2] = ckpt;
  args[4] = (w.root / "v.txt").string();
  CHECK(cli(args) == 4);
}

TEST_CASE("evaluate matches library metrics") {
  const auto dir = test_util::scratch_dir("cli_evaluate");
  write(dir / "gen.txt", "the cat sat\tthe dog\na cat\n");
  write(dir / "gen2.txt", "the cat sat\tthe dog\na cat\nthe cat sat\tthe dog\na cat\n");
  write(dir / "ref.txt", "the cat sat down\tthe dog ran\nthe cat\n");
  REQUIRE(cli({"--out-dir", (dir / "one").string(), "evaluate", "--generated", (dir / "gen.txt").string(), "--reference",
               (dir / "ref.txt").string(), "--bleu"}) == 0);
  REQUIRE(cli({"--out-dir", (dir / "two").string(), "evaluate", "--generated", (dir / "gen2.txt").string(),
               "--reference", (dir / "ref.txt").string()}) == 0);
  const auto one = fields(lines(dir / "one" / "diversity.tsv")[1]);
  const auto two = fields(lines(dir / "two" / "diversity.tsv")[1]);
  CHECK(one[2] == "7");
  CHECK(two[2] == "14");
  for (int i : {3, 4, 5, 6}) CHECK(one[i] == two[i]);

  // Direct library path on the same sentences.
  corpus::Vocabulary v;
  auto ids = [&](std::initializer_list<const char*> toks) {
    corpus::Sentence s;
    for (auto t : toks) s.push_back(v.add(t));
    return s;
  };
  const std::vector<corpus::Sentence> gen{ids({"the", "cat", "sat"}), ids({"the", "dog"}), ids({"a", "cat"})};
  const auto d = eval::diversity_report(std::span<const corpus::Sentence>(gen));
  CHECK(one[3] == std::to_string(d.dist1));
  CHECK(one[4] == std::to_string(d.dist2));
  CHECK(one[5] == std::to_string(d.dist3));
  CHECK(one[6] == std::to_string(d.dist_s));

  const auto bleu_rows = lines(dir / "one" / "bleu.tsv");
  REQUIRE(bleu_rows.size() == 3);
  const double expected = eval::bleu(ids({"the", "cat", "sat", "the", "dog"}),
                                     std::vector<corpus::Sentence>{ids({"the", "cat", "sat", "down", "the", "dog", "ran"})});
  CHECK(std::stod(fields(bleu_rows[1])[1]) == doctest::Approx(expected).epsilon(1e-12));

  REQUIRE(cli({"--out-dir", (dir / "self").string(), "evaluate", "--generated", (dir / "ref.txt").string(),
               "--reference", (dir / "ref.txt").string()}) == 0);
  const auto bins = lines(dir / "self" / "frequency_bins.tsv");
  REQUIRE(bins.size() == 5);
  CHECK(std::stod(fields(bins[1])[3]) == doctest::Approx(1.0).epsilon(1e-12));

  REQUIRE(cli({"--out-dir", (dir / "freq").string(), "analyze-frequency", "--generated", (dir / "gen.txt").string(),
               "--reference", (dir / "ref.txt").string()}) == 0);
  const auto profile = lines(dir / "freq" / "frequency_profile.tsv");
  CHECK(profile.size() == 1 + 6);  // distinct reference words
  CHECK(fields(profile[1])[1] == "the");
}

TEST_CASE("analyze-rewards reports both discriminators") {
  Workspace w("cli_rewards", "train.iterations = 0\nanalysis.histogram_bins = 7\n");
  const auto run = w.root / "run";
  REQUIRE(cli({"--config", w.config.string(), "--out-dir", run.string(), "pretrain", "--data", w.data.string()}) == 0);
  const auto vocab = corpus::Vocabulary::load(w.data / "vocab.txt");
  disc::ClassifierDiscriminator cls({vocab.size(), 6, 8}, 1);
  cls.head.value.fill(0.0);
  cls.head_bias.value.fill(0.0);
  save_checkpoint(run / "classifier.ckpt", capture(cls, num::Adagrad{}, {}));

  const auto out = w.root / "rewards";
  REQUIRE(cli({"--config", w.config.string(), "--out-dir", out.string(), "analyze-rewards", "--generator",
               (run / "generator.ckpt").string(), "--lm", (run / "lm.ckpt").string(), "--classifier",
               (run / "classifier.ckpt").string(), "--data", w.data.string(), "--split", "train"}) == 0);
  CHECK(lines(out / "reward_histogram.tsv").size() == 1 + 2 * 2 * 7);
  const auto summary = lines(out / "reward_summary.tsv");
  REQUIRE(summary.size() == 5);
  for (int row : {3, 4}) {
    const auto f = fields(summary[static_cast<std::size_t>(row)]);
    CHECK(f[0] == "classifier");
    CHECK(std::stod(f[3]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::stod(f[4]) == doctest::Approx(0.0));
  }

  // Same numbers as the library on the same sentences.
  const auto g = restore_generator(load_checkpoint(run / "generator.ckpt"));
  const auto lm = restore_lm(load_checkpoint(run / "lm.ckpt"));
  const auto data = corpus::load_dataset(w.data / "train.pairs", vocab, corpus::Split::train);
  const auto c = load_config(w.config.string());
  std::vector<corpus::Sentence> real, generated;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (auto& s : train::content_sentences(corpus::to_model_text(data.pairs[i].target))) real.push_back(s);
    num::Rng rng(num::mix_seed(c.seed, {i}));
    for (auto& s : train::content_sentences(gen::generate(g, data.pairs[i].source, c.train.generation, rng).text))
      generated.push_back(s);
  }
  const auto h = eval::reward_histogram(real, generated, lm, cls, 7);
  CHECK(std::stod(fields(summary[1])[3]) == doctest::Approx(h.lm.real.summary.mean).epsilon(1e-12));
  CHECK(std::stod(fields(summary[2])[3]) == doctest::Approx(h.lm.generated.summary.mean).epsilon(1e-12));
  CHECK(std::stoul(fields(summary[2])[2]) == generated.size());

  CHECK(cli({"--config", w.config.string(), "--out-dir", (w.root / "bad").string(), "analyze-rewards", "--generator",
             (run / "lm.ckpt").string(), "--lm", (run / "lm.ckpt").string(), "--classifier",
             (run / "classifier.ckpt").string(), "--data", w.data.string()}) == 3);
}

}  // TEST_SUITE
