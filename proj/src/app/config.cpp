#include "dpgan/app/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <sstream>

#include "dpgan/errors.hpp"
#include "dpgan/io.hpp"

namespace dpgan::app {

std::string format_name(CorpusFormat f) {
  switch (f) {
    case CorpusFormat::kReview: return "review";
    case CorpusFormat::kDialogue: return "dialogue";
    case CorpusFormat::kPairs: return "pairs";
  }
  return "?";
}

CorpusFormat parse_format(const std::string& s) {
  if (s == "review") return CorpusFormat::kReview;
  if (s == "dialogue") return CorpusFormat::kDialogue;
  if (s == "pairs") return CorpusFormat::kPairs;
  throw ValidationError("unknown corpus format '" + s + "' (expected review, dialogue or pairs)");
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t to_size(const std::string& v) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ValidationError("expected a non-negative integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ValidationError("expected a non-negative integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ValidationError("expected a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValidationError("expected true or false, got '" + v + "'");
}

std::string show(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}
std::string show(std::uint64_t v) { return std::to_string(v); }
std::string show(bool v) { return v ? "true" : "false"; }

std::string show_bins(const std::vector<eval::RankBin>& bins) {
  std::string out;
  for (const auto& b : bins) {
    if (!out.empty()) out += ',';
    out += std::to_string(b.first) + "-" + std::to_string(b.last);
  }
  return out;
}

std::vector<eval::RankBin> to_bins(const std::string& v) {
  std::vector<eval::RankBin> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw ValidationError("rank bin '" + item + "' is not first-last");
    out.push_back({to_size(trim(item.substr(0, dash))), to_size(trim(item.substr(dash + 1)))});
  }
  if (out.empty()) throw ValidationError("expected at least one rank bin");
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const AppConfig&)> get;
  std::function<void(AppConfig&, const std::string&)> set;
};

#define DPGAN_FIELD(key, member, parse)                                        \
  Field {                                                                      \
    key, [](const AppConfig& c) { return show(c.member); },                    \
        [](AppConfig& c, const std::string& v) { c.member = parse(v); }        \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      DPGAN_FIELD("run.seed", seed, to_u64),
      Field{"data.format", [](const AppConfig& c) { return format_name(c.data.format); },
            [](AppConfig& c, const std::string& v) { c.data.format = parse_format(v); }},
      Field{"data.corpus", [](const AppConfig& c) { return c.data.corpus; },
            [](AppConfig& c, const std::string& v) { c.data.corpus = v; }},
      Field{"data.dir", [](const AppConfig& c) { return c.data.dir; },
            [](AppConfig& c, const std::string& v) { c.data.dir = v; }},
      DPGAN_FIELD("data.vocab_size", data.vocab_size, to_size),
      DPGAN_FIELD("data.min_response_words", data.min_response_words, to_size),
      DPGAN_FIELD("data.split_train", data.split_train, to_double),
      DPGAN_FIELD("data.split_valid", data.split_valid, to_double),
      DPGAN_FIELD("data.split_test", data.split_test, to_double),
      DPGAN_FIELD("model.embedding", model.embedding, to_size),
      DPGAN_FIELD("model.hidden", model.hidden, to_size),
      DPGAN_FIELD("model.init_scale", model.init_scale, to_double),
      DPGAN_FIELD("train.iterations", train.iterations, to_size),
      DPGAN_FIELD("train.generator_steps", train.generator_steps, to_size),
      DPGAN_FIELD("train.discriminator_steps", train.discriminator_steps, to_size),
      DPGAN_FIELD("train.batch_size", train.batch_size, to_size),
      DPGAN_FIELD("train.pretrain_generator_epochs", train.pretrain_generator_epochs, to_size),
      DPGAN_FIELD("train.pretrain_discriminator_epochs", train.pretrain_discriminator_epochs, to_size),
      DPGAN_FIELD("train.gamma", train.gamma, to_double),
      Field{"train.reward_mode", [](const AppConfig& c) { return rewards::mode_name(c.train.mode); },
            [](AppConfig& c, const std::string& v) { c.train.mode = rewards::parse_mode(v); }},
      Field{"train.baseline", [](const AppConfig& c) { return train::baseline_name(c.train.baseline); },
            [](AppConfig& c, const std::string& v) { c.train.baseline = train::parse_baseline(v); }},
      DPGAN_FIELD("train.teacher_forcing", train.teacher_forcing, to_bool),
      DPGAN_FIELD("train.reward_baseline", train.reward_baseline, to_bool),
      DPGAN_FIELD("train.rollouts", train.rollouts, to_size),
      DPGAN_FIELD("train.bleu_epsilon", train.bleu_epsilon, to_double),
      DPGAN_FIELD("train.bleu_max_n", train.bleu_max_n, to_size),
      DPGAN_FIELD("train.log_timings", train.log_timings, to_bool),
      DPGAN_FIELD("train.checkpoint_every", checkpoint_every, to_size),
      DPGAN_FIELD("optimizer.learning_rate", train.optimizer.learning_rate, to_double),
      DPGAN_FIELD("optimizer.epsilon", train.optimizer.epsilon, to_double),
      DPGAN_FIELD("optimizer.clip_norm", train.optimizer.clip_norm, to_double),
      DPGAN_FIELD("generation.max_sentences", train.generation.max_sentences, to_size),
      DPGAN_FIELD("generation.max_words", train.generation.max_words, to_size),
      Field{"generation.mode",
            [](const AppConfig& c) {
              return std::string(c.train.generation.mode == gen::DecodeMode::kGreedy ? "greedy" : "sample");
            },
            [](AppConfig& c, const std::string& v) {
              if (v == "greedy") c.train.generation.mode = gen::DecodeMode::kGreedy;
              else if (v == "sample") c.train.generation.mode = gen::DecodeMode::kSample;
              else throw ValidationError("expected greedy or sample, got '" + v + "'");
            }},
      DPGAN_FIELD("generation.temperature", train.generation.temperature, to_double),
      Field{"evaluation.rank_bins", [](const AppConfig& c) { return show_bins(c.rank_bins); },
            [](AppConfig& c, const std::string& v) { c.rank_bins = to_bins(v); }},
      DPGAN_FIELD("evaluation.bleu_max_n", bleu_max_n, to_size),
      DPGAN_FIELD("analysis.histogram_bins", histogram_bins, to_size),
  };
  return f;
}

#undef DPGAN_FIELD

}  // namespace

void AppConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };
  if (data.vocab_size <= corpus::special::kCount) fail("data.vocab_size", "must exceed the 5 reserved ids");
  for (auto [k, v] : {std::pair{"data.split_train", data.split_train}, {"data.split_valid", data.split_valid},
                      {"data.split_test", data.split_test}}) {
    if (!(v >= 0.0)) fail(k, "must be non-negative");
  }
  if (!(data.split_train + data.split_valid + data.split_test > 0.0)) fail("data.split_*", "ratios sum to zero");
  if (model.embedding == 0) fail("model.embedding", "must be >= 1");
  if (model.hidden == 0) fail("model.hidden", "must be >= 1");
  if (!(model.init_scale >= 0.0)) fail("model.init_scale", "must be non-negative");
  if (checkpoint_every == 0) fail("train.checkpoint_every", "must be >= 1");
  if (bleu_max_n == 0) fail("evaluation.bleu_max_n", "must be >= 1");
  if (histogram_bins == 0) fail("analysis.histogram_bins", "must be >= 1");
  for (const auto& b : rank_bins) {
    if (b.first == 0 || b.last < b.first) fail("evaluation.rank_bins", "bins are 1-based and first <= last");
  }
  for (std::size_t i = 1; i < rank_bins.size(); ++i) {
    if (rank_bins[i].first <= rank_bins[i - 1].last) fail("evaluation.rank_bins", "bins must be ordered and disjoint");
  }
  try {
    train.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::pair<std::string, std::string>> schema() {
  const AppConfig defaults;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(defaults));
  return out;
}

std::map<std::string, std::string> parse_entries(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(n);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

AppConfig from_entries(const std::map<std::string, std::string>& entries) {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : entries) {
    const auto& f = fields();
    if (std::none_of(f.begin(), f.end(), [&](const Field& x) { return x.key == k; })) unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  AppConfig c;
  for (const auto& f : fields()) {
    const auto it = entries.find(f.key);
    if (it == entries.end()) continue;
    try {
      f.set(c, it->second);
    } catch (const ValidationError& e) {
      throw ConfigError(f.key + ": " + e.what());
    }
  }
  c.train.seed = c.seed;
  c.validate();
  return c;
}

AppConfig parse_config(const std::string& text, const std::string& origin) {
  return from_entries(parse_entries(text, origin));
}

AppConfig load_config(const std::string& path) { return parse_config(io::read_file(path), path); }

std::string to_text(const AppConfig& c) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(c) + "\n";
  return out;
}

}  // namespace dpgan::app
