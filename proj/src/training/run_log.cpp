#include "dpgan/training/run_log.hpp"

#include <algorithm>

#include "dpgan/errors.hpp"
#include "json.hpp"

namespace dpgan::train {

namespace {

template <typename T>
void put(nlohmann::ordered_json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key)) v = j.at(key).get<T>();
}

}  // namespace

std::string Record::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["iteration"] = iteration;
  j["index"] = index;
  j["step"] = step;
  j["loss"] = loss;
  put(j, "real_reward", real_reward);
  put(j, "generated_reward", generated_reward);
  put(j, "accuracy", accuracy);
  put(j, "validation_nll", validation_nll);
  put(j, "dist1", dist1);
  put(j, "dist2", dist2);
  put(j, "seconds", seconds);
  return j.dump();
}

Record Record::from_json(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    Record r;
    r.kind = j.at("kind").get<std::string>();
    r.iteration = j.at("iteration").get<std::size_t>();
    r.index = j.at("index").get<std::size_t>();
    r.step = j.at("step").get<std::size_t>();
    r.loss = j.at("loss").get<double>();
    get(j, "real_reward", r.real_reward);
    get(j, "generated_reward", r.generated_reward);
    get(j, "accuracy", r.accuracy);
    get(j, "validation_nll", r.validation_nll);
    get(j, "dist1", r.dist1);
    get(j, "dist2", r.dist2);
    get(j, "seconds", r.seconds);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("run log: malformed record: ") + e.what());
  }
}

RunLog::RunLog(const std::filesystem::path& path, bool truncate) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  sink_.emplace(path, truncate ? std::ios::out | std::ios::trunc : std::ios::out | std::ios::app);
  if (!*sink_) throw IoError("cannot open run log " + path.string());
}

void RunLog::append(Record r) {
  if (sink_) {
    *sink_ << r.to_json() << '\n';
    sink_->flush();
  }
  records_.push_back(std::move(r));
}

std::size_t RunLog::count(const std::string& kind) const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [&](const Record& r) { return r.kind == kind; }));
}

std::string RunLog::to_jsonl() const {
  std::string out;
  for (const auto& r : records_) out += r.to_json() + "\n";
  return out;
}

std::vector<Record> RunLog::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read run log " + path.string());
  std::vector<Record> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(Record::from_json(line));
  }
  return out;
}

}  // namespace dpgan::train
