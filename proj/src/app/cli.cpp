#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "dpgan/app/commands.hpp"
#include "dpgan/errors.hpp"

namespace dpgan::app {

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool force = false;
};

AppConfig resolve(const Globals& g) {
  AppConfig c = g.config.empty() ? AppConfig{} : load_config(g.config);
  if (g.seed) {
    c.seed = *g.seed;
    c.train.seed = *g.seed;
  }
  return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Diversity-promoting adversarial text generation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Configuration file (key = value)");
  app.add_option("--seed", g.seed, "Override run.seed");
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_flag("--force", g.force, "Overwrite existing manifests");

  auto* prepare = app.add_subcommand("prepare", "Tokenize a corpus, build the vocabulary and split it");
  std::string input, format;
  prepare->add_option("--input", input, "Raw corpus (overrides data.corpus)");
  prepare->add_option("--format", format, "review, dialogue or pairs (overrides data.format)");

  std::string data_dir;
  bool resume = false;
  auto* pretrain = app.add_subcommand("pretrain", "Pretrain the generator and discriminator");
  auto* train = app.add_subcommand("train", "Pretrain, then run adversarial training");
  for (auto* sub : {pretrain, train}) {
    sub->add_option("--data", data_dir, "Prepared data directory (overrides data.dir)");
    sub->add_flag("--resume", resume, "Continue from the checkpoints in --out-dir");
  }

  auto* generate = app.add_subcommand("generate", "Generate one text per input line");
  std::string checkpoint, vocab, output;
  generate->add_option("--checkpoint", checkpoint, "Generator checkpoint")->required();
  generate->add_option("--vocab", vocab, "Vocabulary file")->required();
  generate->add_option("--input", input, "Source sentences, one per line")->required();
  generate->add_option("--output", output, "Output file")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Diversity, frequency and BLEU reports");
  std::string generated, reference;
  bool bleu = false;
  evaluate->add_option("--generated", generated, "Generated texts")->required();
  evaluate->add_option("--reference", reference, "Reference texts")->required();
  evaluate->add_flag("--bleu", bleu, "Line-aligned BLEU against the reference");

  auto* rewards = app.add_subcommand("analyze-rewards", "Reward histograms for both discriminators");
  RewardAnalysisOptions ro;
  std::string generator_ckpt, lm_ckpt, classifier_ckpt, split = "test";
  rewards->add_option("--generator", generator_ckpt, "Generator checkpoint")->required();
  rewards->add_option("--lm", lm_ckpt, "Language-model discriminator checkpoint")->required();
  rewards->add_option("--classifier", classifier_ckpt, "Classifier checkpoint")->required();
  rewards->add_option("--data", data_dir, "Prepared data directory (overrides data.dir)");
  rewards->add_option("--split", split, "train, valid or test");

  auto* frequency = app.add_subcommand("analyze-frequency", "Word frequency profile against a reference");
  frequency->add_option("--generated", generated, "Generated texts")->required();
  frequency->add_option("--reference", reference, "Reference texts")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    AppConfig c = resolve(g);
    const fs::path out = g.out_dir;
    if (prepare->parsed()) {
      if (!input.empty()) c.data.corpus = input;
      if (!format.empty()) c.data.format = parse_format(format);
      const auto r = cmd_prepare(c, out, g.force);
      std::cout << "prepared " << r.pairs << " pairs from " << r.documents << " documents (train "
                << r.split_sizes[0] << ", valid " << r.split_sizes[1] << ", test " << r.split_sizes[2]
                << "), vocabulary " << r.vocabulary << "\n";
      for (const auto& [reason, n] : r.skipped) std::cout << "skipped " << n << " (" << reason << ")\n";
    } else if (pretrain->parsed() || train->parsed()) {
      TrainOptions o{data_dir, out, g.force, resume, pretrain->parsed()};
      const auto p = cmd_train(c, o);
      std::cout << "generator epochs " << p.generator_epochs << ", discriminator epochs " << p.discriminator_epochs
                << ", adversarial iterations " << p.iterations << ", steps " << p.step << "\n";
    } else if (generate->parsed()) {
      cmd_generate(c, checkpoint, vocab, input, output, g.force);
    } else if (evaluate->parsed()) {
      std::cout << cmd_evaluate(c, {generated, reference, out, bleu, g.force});
    } else if (rewards->parsed()) {
      ro = {generator_ckpt, lm_ckpt, classifier_ckpt, data_dir, split, out, g.force};
      cmd_analyze_rewards(c, ro);
    } else if (frequency->parsed()) {
      cmd_analyze_frequency(c, generated, reference, out, g.force);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace dpgan::app
