#include "dpgan/app/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "dpgan/errors.hpp"
#include "dpgan/io.hpp"

namespace dpgan::app {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

std::string kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kGenerator: return "generator";
    case ModelKind::kLmDiscriminator: return "lm_discriminator";
    case ModelKind::kClassifier: return "classifier";
  }
  return "unknown(" + std::to_string(static_cast<std::uint32_t>(k)) + ")";
}

namespace {

constexpr char kMagic[4] = {'D', 'P', 'G', 'N'};
constexpr std::uint32_t kMaxRank = 8;

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  void tensor(const num::Tensor& t) {
    put<std::uint32_t>(static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) put<std::uint64_t>(d);
    bytes(t.data(), t.size() * sizeof(double));
  }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view bytes, std::string origin) : in_(bytes), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& why) const { throw IoError(origin_ + ": " + why); }

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) fail("truncated checkpoint");
  }
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string string(std::size_t n) {
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  num::Tensor tensor() {
    const auto rank = get<std::uint32_t>();
    if (rank > kMaxRank) fail("implausible tensor rank " + std::to_string(rank));
    num::Shape shape;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      shape.push_back(get<std::uint64_t>());
      if (shape.back() != 0 && count > (in_.size() / sizeof(double)) / shape.back()) fail("tensor larger than file");
      count *= shape.back();
    }
    need(count * sizeof(double));
    std::vector<double> values(count);
    std::memcpy(values.data(), in_.data() + pos_, count * sizeof(double));
    pos_ += count * sizeof(double);
    return num::Tensor(std::move(shape), std::move(values));
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
  std::string origin_;
};

template <typename Params>
std::vector<NamedTensor> named(const Params& params) {
  std::vector<NamedTensor> out;
  for (const auto* p : params) out.push_back({p->name, p->value});
  return out;
}

void load_into(const Checkpoint& c, ModelKind expected, const num::ParameterList& params, num::Adagrad* opt) {
  if (c.kind != expected) {
    throw IoError("checkpoint kind mismatch: expected " + kind_name(expected) + ", got " + kind_name(c.kind));
  }
  if (c.tensors.size() != params.size()) throw IoError("checkpoint holds the wrong number of tensors");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& t = c.tensors[i];
    if (t.name != params[i]->name || t.value.shape() != params[i]->value.shape()) {
      throw IoError("checkpoint tensor '" + t.name + "' does not match parameter '" + params[i]->name + "'");
    }
    params[i]->value = t.value;
  }
  if (!opt) return;
  if (!c.accumulators.empty() && c.accumulators.size() != params.size()) {
    throw IoError("checkpoint optimizer state does not match the parameters");
  }
  for (std::size_t i = 0; i < c.accumulators.size(); ++i) {
    if (c.accumulators[i].shape() != params[i]->value.shape()) throw IoError("checkpoint accumulator shape mismatch");
  }
  opt->state().accumulators = c.accumulators;
}

std::size_t dim(const Checkpoint& c, std::size_t i) {
  if (c.dims.size() != 3) throw IoError("checkpoint dimension header must hold vocab, embedding, hidden");
  return static_cast<std::size_t>(c.dims[i]);
}

}  // namespace

std::string encode(const Checkpoint& c) {
  Writer w;
  w.bytes(kMagic, 4);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.kind));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.dims.size()));
  for (auto d : c.dims) w.put<std::uint64_t>(d);
  w.put<std::uint64_t>(c.progress.generator_epochs);
  w.put<std::uint64_t>(c.progress.discriminator_epochs);
  w.put<std::uint64_t>(c.progress.iterations);
  w.put<std::uint64_t>(c.progress.step);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.tensors.size()));
  for (const auto& t : c.tensors) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.name.size()));
    w.bytes(t.name.data(), t.name.size());
    w.tensor(t.value);
  }
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.accumulators.size()));
  for (const auto& t : c.accumulators) w.tensor(t);
  w.put<std::uint64_t>(io::fnv1a64(w.str()));
  return std::move(w.str());
}

Checkpoint decode(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < 4 + 4 + 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError(origin + ": not a checkpoint (bad magic)");
    throw IoError(origin + ": truncated checkpoint");
  }
  const std::string_view body(bytes.data(), bytes.size() - 8);
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body.size(), 8);

  Reader r(body, origin);
  r.string(4);
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    r.fail("unsupported checkpoint version " + std::to_string(version) + " (expected " +
           std::to_string(kCheckpointVersion) + ")");
  }
  if (io::fnv1a64(body) != stored) r.fail("checksum mismatch (corrupt or truncated checkpoint)");

  Checkpoint c;
  const auto kind = r.get<std::uint32_t>();
  if (kind < 1 || kind > 3) r.fail("unknown model kind " + std::to_string(kind));
  c.kind = static_cast<ModelKind>(kind);
  const auto n_dims = r.get<std::uint32_t>();
  if (n_dims > kMaxRank) r.fail("implausible dimension header");
  for (std::uint32_t i = 0; i < n_dims; ++i) c.dims.push_back(r.get<std::uint64_t>());
  c.progress.generator_epochs = r.get<std::uint64_t>();
  c.progress.discriminator_epochs = r.get<std::uint64_t>();
  c.progress.iterations = r.get<std::uint64_t>();
  c.progress.step = r.get<std::uint64_t>();
  const auto n_tensors = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    NamedTensor t;
    t.name = r.string(r.get<std::uint32_t>());
    t.value = r.tensor();
    c.tensors.push_back(std::move(t));
  }
  const auto n_acc = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_acc; ++i) c.accumulators.push_back(r.tensor());
  if (!r.done()) r.fail("trailing bytes after checkpoint body");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  io::write_file_atomic(path, encode(c));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode(io::read_file(path), path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path, ModelKind expected) {
  auto c = load_checkpoint(path);
  if (c.kind != expected) {
    throw IoError(path.string() + ": checkpoint kind mismatch: expected " + kind_name(expected) + ", got " +
                  kind_name(c.kind));
  }
  return c;
}

Checkpoint capture(const gen::GeneratorModel& m, const num::Adagrad& opt, const train::Progress& p) {
  return {ModelKind::kGenerator, {m.dims.vocab, m.dims.embedding, m.dims.hidden}, named(m.parameters()),
          opt.state().accumulators, p};
}

Checkpoint capture(const disc::LmDiscriminator& d, const num::Adagrad& opt, const train::Progress& p) {
  return {ModelKind::kLmDiscriminator, {d.dims.vocab, d.dims.embedding, d.dims.hidden}, named(d.parameters()),
          opt.state().accumulators, p};
}

Checkpoint capture(const disc::ClassifierDiscriminator& d, const num::Adagrad& opt, const train::Progress& p) {
  return {ModelKind::kClassifier, {d.dims.vocab, d.dims.embedding, d.dims.hidden}, named(d.parameters()),
          opt.state().accumulators, p};
}

gen::GeneratorModel restore_generator(const Checkpoint& c, num::Adagrad* opt) {
  if (c.kind != ModelKind::kGenerator) {
    throw IoError("checkpoint kind mismatch: expected generator, got " + kind_name(c.kind));
  }
  gen::GeneratorModel m({dim(c, 0), dim(c, 1), dim(c, 2)}, 0, 0.0);
  load_into(c, ModelKind::kGenerator, m.parameters(), opt);
  return m;
}

disc::LmDiscriminator restore_lm(const Checkpoint& c, num::Adagrad* opt) {
  if (c.kind != ModelKind::kLmDiscriminator) {
    throw IoError("checkpoint kind mismatch: expected lm_discriminator, got " + kind_name(c.kind));
  }
  disc::LmDiscriminator d({dim(c, 0), dim(c, 1), dim(c, 2)}, 0, 0.0);
  load_into(c, ModelKind::kLmDiscriminator, d.parameters(), opt);
  return d;
}

disc::ClassifierDiscriminator restore_classifier(const Checkpoint& c, num::Adagrad* opt) {
  if (c.kind != ModelKind::kClassifier) {
    throw IoError("checkpoint kind mismatch: expected classifier, got " + kind_name(c.kind));
  }
  disc::ClassifierDiscriminator d({dim(c, 0), dim(c, 1), dim(c, 2)}, 0, 0.0);
  load_into(c, ModelKind::kClassifier, d.parameters(), opt);
  return d;
}

}  // namespace dpgan::app
