#include "dpgan/app/commands.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <sstream>

#include "dpgan/app/checkpoint.hpp"
#include "dpgan/corpus/tokenizer.hpp"
#include "dpgan/corpus/vocabulary.hpp"
#include "dpgan/errors.hpp"
#include "dpgan/evaluation/metrics.hpp"
#include "dpgan/io.hpp"
#include "json.hpp"

namespace dpgan::app {

namespace {

std::string num_str(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& content) {
  std::vector<std::string> out;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

void check_line(const std::string& line, const std::string& origin, std::size_t n) {
  for (unsigned char ch : line) {
    if (ch < 0x20 && ch != '\t') {
      throw IoError(origin + ":" + std::to_string(n) + ": control character 0x" + io::hex64(ch).substr(14));
    }
  }
}

corpus::TokenSentence flatten(const std::vector<corpus::TokenSentence>& sentences) {
  corpus::TokenSentence out;
  for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::string render(const corpus::Vocabulary& vocab, const corpus::Text& text) {
  std::string out;
  bool first = true;
  for (const auto& s : train::content_sentences(text)) {
    const auto tokens = vocab.decode(s);
    if (tokens.empty()) continue;
    if (!first) out += '\t';
    out += corpus::join_tokens(tokens);
    first = false;
  }
  return out;
}

const char* kSplitNames[3] = {"train", "valid", "test"};

corpus::Dataset load_split(const fs::path& dir, const corpus::Vocabulary& vocab, const std::string& name) {
  corpus::Split split = corpus::Split::train;
  if (name == "valid") split = corpus::Split::valid;
  else if (name == "test") split = corpus::Split::test;
  else if (name != "train") throw ConfigError("unknown split '" + name + "' (expected train, valid or test)");
  return corpus::load_dataset(dir / (name + ".pairs"), vocab, split);
}

// Interns whitespace tokens into ids shared by every file of one evaluation.
struct Interner {
  corpus::Vocabulary vocab;
  std::vector<corpus::Sentence> sentences(const std::vector<std::vector<corpus::TokenSentence>>& texts) {
    std::vector<corpus::Sentence> out;
    for (const auto& t : texts)
      for (const auto& s : t) {
        corpus::Sentence ids;
        for (const auto& tok : s) ids.push_back(vocab.add(tok));
        out.push_back(std::move(ids));
      }
    return out;
  }
};

void begin_manifest(const fs::path& dir, const std::string& command, const AppConfig& c,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& artifacts, bool force) {
  RunManifest m;
  m.command = command;
  m.config = to_text(c);
  m.seed = c.seed;
  for (const auto& p : inputs) m.fingerprints[p.string()] = fingerprint(p);
  for (const auto& p : artifacts) m.artifacts.push_back(p.string());
  write_manifest(dir, m, force);
}

}  // namespace

// ---- manifest ----

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["seed"] = seed;
  j["config"] = config;
  j["fingerprints"] = fingerprints;
  j["artifacts"] = artifacts;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.at("config").get<std::string>();
    m.fingerprints = j.at("fingerprints").get<std::map<std::string, std::string>>();
    m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

fs::path manifest_path(const fs::path& dir, const std::string& command) { return dir / (command + ".manifest.json"); }

void write_manifest(const fs::path& dir, const RunManifest& m, bool force) {
  const auto path = manifest_path(dir, m.command);
  if (fs::exists(path) && !force) {
    throw IoError(path.string() + " already exists; pass --force to overwrite");
  }
  fs::create_directories(dir);
  io::write_file_atomic(path, m.to_json());
}

std::string fingerprint(const fs::path& file) { return io::hex64(io::fnv1a64(io::read_file(file))); }

// ---- prepare ----

std::vector<corpus::RawPair> read_corpus(const std::string& content, const std::string& origin,
                                         const DataConfig& c, PrepareReport& report) {
  std::vector<corpus::RawPair> out;
  const auto lines = lines_of(content);
  for (std::size_t i = 0; i < lines.size(); ++i) check_line(lines[i], origin, i + 1);

  switch (c.format) {
    case CorpusFormat::kPairs: {
      out = corpus::parse_pairs(content, origin);
      report.documents = out.size();
      break;
    }
    case CorpusFormat::kReview: {
      for (const auto& line : lines) {
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ++report.documents;
        auto pair = corpus::split_review(corpus::tokenize(line));
        if (pair) out.push_back(std::move(*pair));
        else ++report.skipped["single_sentence"];
      }
      break;
    }
    case CorpusFormat::kDialogue: {
      std::vector<corpus::TokenSentence> history;
      for (std::size_t i = 0; i <= lines.size(); ++i) {
        const bool blank = i == lines.size() || lines[i].find_first_not_of(" \t") == std::string::npos;
        if (blank) {
          if (!history.empty()) ++report.documents;
          history.clear();
          continue;
        }
        const auto response = corpus::tokenize(lines[i]);
        if (!history.empty()) {
          const std::size_t from = history.size() >= 2 ? history.size() - 2 : 0;
          const std::vector<corpus::TokenSentence> context(history.begin() + static_cast<std::ptrdiff_t>(from),
                                                           history.end());
          auto pair = corpus::split_dialogue(context, response, c.min_response_words);
          if (pair) out.push_back(std::move(*pair));
          else ++report.skipped["short_response"];
        }
        history.push_back(flatten(response));
      }
      break;
    }
  }
  report.pairs = out.size();
  return out;
}

PrepareReport cmd_prepare(const AppConfig& c, const fs::path& out_dir, bool force) {
  if (c.data.corpus.empty()) throw ConfigError("data.corpus: no input corpus given");
  const fs::path input = c.data.corpus;
  std::vector<fs::path> artifacts{out_dir / "vocab.txt", out_dir / "prepare_report.tsv"};
  for (auto name : kSplitNames) {
    for (auto suffix : {".pairs", ".source.txt", ".target.txt"}) artifacts.push_back(out_dir / (std::string(name) + suffix));
  }
  begin_manifest(out_dir, "prepare", c, {input}, artifacts, force);

  PrepareReport report;
  const auto pairs = read_corpus(io::read_file(input), input.string(), c.data, report);
  const auto splits =
      corpus::split_indices(pairs.size(), {c.data.split_train, c.data.split_valid, c.data.split_test}, c.seed);

  std::vector<corpus::TokenSentence> train_sentences;
  for (auto i : splits[0]) {
    train_sentences.push_back(pairs[i].source);
    for (const auto& s : pairs[i].target) train_sentences.push_back(s);
  }
  const auto vocab = corpus::build_vocabulary(train_sentences, c.data.vocab_size);
  vocab.save(out_dir / "vocab.txt");
  report.vocabulary = vocab.size();

  for (std::size_t s = 0; s < 3; ++s) {
    std::vector<corpus::RawPair> chosen;
    std::string sources, targets;
    for (auto i : splits[s]) {
      chosen.push_back(pairs[i]);
      sources += corpus::join_tokens(pairs[i].source) + "\n";
      std::string line;
      for (std::size_t t = 0; t < pairs[i].target.size(); ++t) {
        if (t) line += '\t';
        line += corpus::join_tokens(pairs[i].target[t]);
      }
      targets += line + "\n";
    }
    report.split_sizes[s] = chosen.size();
    const std::string name = kSplitNames[s];
    io::write_file_atomic(out_dir / (name + ".pairs"), corpus::format_pairs(chosen));
    io::write_file_atomic(out_dir / (name + ".source.txt"), sources);
    io::write_file_atomic(out_dir / (name + ".target.txt"), targets);
  }

  std::string tsv = "item\tcount\n";
  tsv += "documents\t" + std::to_string(report.documents) + "\n";
  tsv += "pairs\t" + std::to_string(report.pairs) + "\n";
  for (std::size_t s = 0; s < 3; ++s) tsv += std::string(kSplitNames[s]) + "\t" + std::to_string(report.split_sizes[s]) + "\n";
  tsv += "vocabulary\t" + std::to_string(report.vocabulary) + "\n";
  for (const auto& [reason, n] : report.skipped) tsv += "skipped_" + reason + "\t" + std::to_string(n) + "\n";
  io::write_file_atomic(out_dir / "prepare_report.tsv", tsv);
  return report;
}

// ---- training ----

namespace {

bool uses_lm(train::Baseline b) { return b == train::Baseline::kNone; }
bool uses_classifier(train::Baseline b) { return b == train::Baseline::kSeqGan; }

void save_all(const fs::path& dir, const train::Models& m, const train::Baseline b, const train::Progress& p) {
  save_checkpoint(dir / "generator.ckpt", capture(m.generator, m.generator_opt, p));
  if (uses_lm(b)) save_checkpoint(dir / "lm.ckpt", capture(m.lm, m.lm_opt, p));
  if (uses_classifier(b)) save_checkpoint(dir / "classifier.ckpt", capture(m.classifier, m.classifier_opt, p));
}

}  // namespace

train::Progress cmd_train(const AppConfig& c, const TrainOptions& o) {
  const fs::path data_dir = o.data_dir.empty() ? fs::path(c.data.dir) : o.data_dir;
  if (data_dir.empty()) throw ConfigError("data.dir: no prepared data directory given");
  const std::string command = o.pretrain_only ? "pretrain" : "train";
  const auto vocab = corpus::Vocabulary::load(data_dir / "vocab.txt");
  const auto train_set = corpus::load_dataset(data_dir / "train.pairs", vocab, corpus::Split::train);
  const auto valid_set = corpus::load_dataset(data_dir / "valid.pairs", vocab, corpus::Split::valid);
  if (train_set.empty()) throw ValidationError(data_dir.string() + ": training split is empty");

  auto tc = c.train;
  if (o.pretrain_only) tc.iterations = 0;

  std::vector<fs::path> artifacts{o.out_dir / "generator.ckpt", o.out_dir / "run_log.jsonl"};
  if (uses_lm(tc.baseline)) artifacts.push_back(o.out_dir / "lm.ckpt");
  if (uses_classifier(tc.baseline)) artifacts.push_back(o.out_dir / "classifier.ckpt");
  const std::vector<fs::path> inputs{data_dir / "vocab.txt", data_dir / "train.pairs", data_dir / "valid.pairs"};

  if (o.resume && !fs::exists(o.out_dir / "generator.ckpt")) {
    throw IoError((o.out_dir / "generator.ckpt").string() + " not found; nothing to resume");
  }
  const auto manifest = manifest_path(o.out_dir, command);
  if (o.resume && fs::exists(manifest)) {
    const auto existing = RunManifest::from_json(io::read_file(manifest));
    if (existing.config != to_text(c)) {
      throw ConfigError(manifest.string() + ": configuration differs from the run being resumed");
    }
  } else {
    begin_manifest(o.out_dir, command, c, inputs, artifacts, o.force);
  }

  auto m = train::make_models(vocab.size(), c.model.embedding, c.model.hidden, tc, c.model.init_scale);
  train::Progress p;
  std::vector<train::Record> kept;
  const auto log_path = o.out_dir / "run_log.jsonl";
  if (o.resume) {
    const auto g = load_checkpoint(o.out_dir / "generator.ckpt", ModelKind::kGenerator);
    m.generator = restore_generator(g, &m.generator_opt);
    p = g.progress;
    if (m.generator.dims != gen::GeneratorDims{vocab.size(), c.model.embedding, c.model.hidden}) {
      throw ConfigError("model dimensions differ from the checkpoint being resumed");
    }
    if (uses_lm(tc.baseline)) {
      const auto d = load_checkpoint(o.out_dir / "lm.ckpt", ModelKind::kLmDiscriminator);
      if (!(d.progress == p)) throw IoError("lm.ckpt and generator.ckpt were saved at different steps");
      m.lm = restore_lm(d, &m.lm_opt);
    }
    if (uses_classifier(tc.baseline)) {
      const auto d = load_checkpoint(o.out_dir / "classifier.ckpt", ModelKind::kClassifier);
      if (!(d.progress == p)) throw IoError("classifier.ckpt and generator.ckpt were saved at different steps");
      m.classifier = restore_classifier(d, &m.classifier_opt);
    }
    kept = train::RunLog::read(log_path);
    if (kept.size() < p.step) throw IoError(log_path.string() + ": fewer records than the checkpoint step");
    kept.resize(p.step);
  }

  train::RunLog log(log_path, true);
  for (auto& r : kept) log.append(std::move(r));
  if (!o.resume) save_all(o.out_dir, m, tc.baseline, p);

  train::pretrain(m, train_set, &valid_set, tc, log, p);
  save_all(o.out_dir, m, tc.baseline, p);
  while (p.iterations < tc.iterations) {
    train::adversarial_train(m, train_set, tc, log, p, c.checkpoint_every);
    save_all(o.out_dir, m, tc.baseline, p);
  }
  return p;
}

// ---- generation ----

void cmd_generate(const AppConfig& c, const fs::path& checkpoint, const fs::path& vocab_path, const fs::path& input,
                  const fs::path& output, bool force) {
  const auto model = restore_generator(load_checkpoint(checkpoint, ModelKind::kGenerator));
  const auto vocab = corpus::Vocabulary::load(vocab_path);
  if (vocab.size() != model.dims.vocab) {
    throw ContractViolation("vocabulary size " + std::to_string(vocab.size()) + " does not match the checkpoint's " +
                            std::to_string(model.dims.vocab));
  }
  const auto out_dir = output.has_parent_path() ? output.parent_path() : fs::path(".");
  RunManifest m;
  m.command = output.filename().string();
  m.config = to_text(c);
  m.seed = c.seed;
  m.fingerprints[checkpoint.string()] = fingerprint(checkpoint);
  m.fingerprints[input.string()] = fingerprint(input);
  m.artifacts = {output.string()};
  write_manifest(out_dir, m, force);

  const auto content = io::read_file(input);
  const auto lines = lines_of(content);
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    check_line(lines[i], input.string(), i + 1);
    const auto source = vocab.encode(flatten(corpus::tokenize(lines[i])));
    if (!source.empty()) {
      num::Rng rng(num::mix_seed(c.seed, {i}));
      out += render(vocab, gen::generate(model, source, c.train.generation, rng).text);
    }
    out += '\n';
  }
  io::write_file_atomic(output, out);
}

std::vector<std::vector<corpus::TokenSentence>> read_texts(const fs::path& path) {
  std::vector<std::vector<corpus::TokenSentence>> out;
  const auto lines = lines_of(io::read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    check_line(lines[i], path.string(), i + 1);
    std::vector<corpus::TokenSentence> text;
    for (const auto& field : split_on(lines[i], '\t')) {
      corpus::TokenSentence s;
      std::istringstream in(field);
      std::string tok;
      while (in >> tok) s.push_back(tok);
      if (!s.empty()) text.push_back(std::move(s));
    }
    out.push_back(std::move(text));
  }
  return out;
}

namespace {

std::string bins_table(const eval::FrequencyProfile& f) {
  std::string out = "first\tlast\twords\tcosine\n";
  for (const auto& b : f.bins) {
    out += std::to_string(b.bin.first) + "\t" + std::to_string(b.bin.last) + "\t" + std::to_string(b.words) + "\t" +
           num_str(b.cosine) + "\n";
  }
  return out;
}

std::string diversity_row(const std::string& set, const eval::DiversityReport& d) {
  return set + "\t" + std::to_string(d.sentences) + "\t" + std::to_string(d.tokens) + "\t" + std::to_string(d.dist1) +
         "\t" + std::to_string(d.dist2) + "\t" + std::to_string(d.dist3) + "\t" + std::to_string(d.dist_s) + "\n";
}

}  // namespace

std::string cmd_evaluate(const AppConfig& c, const EvaluateOptions& o) {
  std::vector<fs::path> artifacts{o.out_dir / "diversity.tsv", o.out_dir / "frequency_bins.tsv"};
  if (o.bleu) artifacts.push_back(o.out_dir / "bleu.tsv");
  begin_manifest(o.out_dir, "evaluate", c, {o.generated, o.reference}, artifacts, o.force);

  const auto gen_texts = read_texts(o.generated);
  const auto ref_texts = read_texts(o.reference);
  Interner in;
  const auto generated = in.sentences(gen_texts);
  const auto reference = in.sentences(ref_texts);
  const auto gd = eval::diversity_report(std::span<const corpus::Sentence>(generated));
  const auto rd = eval::diversity_report(std::span<const corpus::Sentence>(reference));
  io::write_file_atomic(o.out_dir / "diversity.tsv", "set\tsentences\ttokens\tdist1\tdist2\tdist3\tdist_s\n" +
                                                         diversity_row("generated", gd) + diversity_row("reference", rd));
  const auto profile = eval::frequency_cosine(reference, generated, c.rank_bins);
  io::write_file_atomic(o.out_dir / "frequency_bins.tsv", bins_table(profile));

  std::ostringstream summary;
  summary << "generated: " << gd.sentences << " sentences, " << gd.tokens << " tokens, Dist-1 " << gd.dist1
          << ", Dist-2 " << gd.dist2 << ", Dist-3 " << gd.dist3 << ", Dist-S " << gd.dist_s << "\n";
  summary << "reference: " << rd.sentences << " sentences, " << rd.tokens << " tokens, Dist-1 " << rd.dist1
          << ", Dist-2 " << rd.dist2 << ", Dist-3 " << rd.dist3 << ", Dist-S " << rd.dist_s << "\n";
  for (const auto& b : profile.bins) {
    summary << "frequency cosine ranks " << b.bin.first << "-" << b.bin.last << ": " << num_str(b.cosine) << "\n";
  }

  if (o.bleu) {
    if (gen_texts.size() != ref_texts.size()) {
      throw ValidationError("BLEU needs line-aligned files: " + std::to_string(gen_texts.size()) + " generated vs " +
                            std::to_string(ref_texts.size()) + " reference lines");
    }
    std::string tsv = "line\tbleu\n";
    double total = 0.0;
    std::size_t scored = 0;
    for (std::size_t i = 0; i < gen_texts.size(); ++i) {
      corpus::Sentence flat_c, flat_r;
      for (const auto& sent : gen_texts[i])
        for (const auto& tok : sent) flat_c.push_back(in.vocab.id(tok));
      for (const auto& sent : ref_texts[i])
        for (const auto& tok : sent) flat_r.push_back(in.vocab.id(tok));
      if (flat_r.empty()) continue;
      const double b = eval::bleu(flat_c, std::vector<corpus::Sentence>{flat_r}, c.bleu_max_n);
      tsv += std::to_string(i + 1) + "\t" + num_str(b) + "\n";
      total += b;
      ++scored;
    }
    io::write_file_atomic(o.out_dir / "bleu.tsv", tsv);
    summary << "BLEU-" << c.bleu_max_n << " (mean over " << scored
            << " lines): " << num_str(scored ? total / static_cast<double>(scored) : 0.0) << "\n";
  }
  return summary.str();
}

void cmd_analyze_frequency(const AppConfig& c, const fs::path& generated_path, const fs::path& reference_path,
                           const fs::path& out_dir, bool force) {
  begin_manifest(out_dir, "analyze-frequency", c, {generated_path, reference_path},
                 {out_dir / "frequency_profile.tsv", out_dir / "frequency_bins.tsv"}, force);
  Interner in;
  const auto reference = in.sentences(read_texts(reference_path));
  const auto generated = in.sentences(read_texts(generated_path));
  const auto profile = eval::frequency_cosine(reference, generated, c.rank_bins);
  std::string tsv = "rank\ttoken\treference_freq\tgenerated_freq\n";
  for (std::size_t r = 0; r < profile.ranked.size(); ++r) {
    tsv += std::to_string(r + 1) + "\t" + in.vocab.token(profile.ranked[r]) + "\t" + num_str(profile.reference_freq[r]) +
           "\t" + num_str(profile.generated_freq[r]) + "\n";
  }
  io::write_file_atomic(out_dir / "frequency_profile.tsv", tsv);
  io::write_file_atomic(out_dir / "frequency_bins.tsv", bins_table(profile));
}

void cmd_analyze_rewards(const AppConfig& c, const RewardAnalysisOptions& o) {
  const fs::path data_dir = o.data_dir.empty() ? fs::path(c.data.dir) : o.data_dir;
  if (data_dir.empty()) throw ConfigError("data.dir: no prepared data directory given");
  const auto g = restore_generator(load_checkpoint(o.generator, ModelKind::kGenerator));
  const auto lm = restore_lm(load_checkpoint(o.lm, ModelKind::kLmDiscriminator));
  const auto cls = restore_classifier(load_checkpoint(o.classifier, ModelKind::kClassifier));
  const auto vocab = corpus::Vocabulary::load(data_dir / "vocab.txt");
  if (g.dims.vocab != vocab.size() || lm.dims.vocab != vocab.size() || cls.dims.vocab != vocab.size()) {
    throw ContractViolation("checkpoint vocabularies do not match " + (data_dir / "vocab.txt").string());
  }
  begin_manifest(o.out_dir, "analyze-rewards", c,
                 {o.generator, o.lm, o.classifier, data_dir / "vocab.txt", data_dir / (o.split + ".pairs")},
                 {o.out_dir / "reward_histogram.tsv", o.out_dir / "reward_summary.tsv"}, o.force);
  const auto data = load_split(data_dir, vocab, o.split);
  if (data.empty()) throw ValidationError(o.split + " split is empty");

  std::vector<corpus::Sentence> real, generated;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (auto& s : train::content_sentences(corpus::to_model_text(data.pairs[i].target))) real.push_back(std::move(s));
    num::Rng rng(num::mix_seed(c.seed, {i}));
    for (auto& s : train::content_sentences(gen::generate(g, data.pairs[i].source, c.train.generation, rng).text)) {
      generated.push_back(std::move(s));
    }
  }
  if (generated.empty()) throw ValidationError("the generator produced no sentences");
  const auto h = eval::reward_histogram(real, generated, lm, cls, c.histogram_bins);

  std::string hist = "discriminator\tsource\tbin\tlow\thigh\tcount\n";
  std::string summary = "discriminator\tsource\tn\tmean\tstddev\tcv\twithin_0.05_of_1\n";
  auto emit = [&](const std::string& name, const eval::RewardPanel& panel) {
    const double width = (panel.high - panel.low) / static_cast<double>(h.n_bins);
    for (auto [source, cell] : {std::pair<const char*, const eval::RewardCell*>{"real", &panel.real},
                                {"generated", &panel.generated}}) {
      for (std::size_t b = 0; b < cell->counts.size(); ++b) {
        hist += name + "\t" + source + "\t" + std::to_string(b) + "\t" + num_str(panel.low + width * static_cast<double>(b)) +
                "\t" + num_str(panel.low + width * static_cast<double>(b + 1)) + "\t" + std::to_string(cell->counts[b]) + "\n";
      }
      const auto near_one = std::count_if(cell->values.begin(), cell->values.end(), [](double v) { return v >= 0.95; });
      summary += name + "\t" + source + "\t" + std::to_string(cell->values.size()) + "\t" + num_str(cell->summary.mean) +
                 "\t" + num_str(cell->summary.stddev) + "\t" + num_str(cell->summary.cv) + "\t" +
                 num_str(static_cast<double>(near_one) / static_cast<double>(cell->values.size())) + "\n";
    }
  };
  emit("lm", h.lm);
  emit("classifier", h.classifier);
  io::write_file_atomic(o.out_dir / "reward_histogram.tsv", hist);
  io::write_file_atomic(o.out_dir / "reward_summary.tsv", summary);
}

}  // namespace dpgan::app
