#include "edospipe/classifier.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "backends.hpp"
#include "edospipe/util.hpp"

namespace edos {

std::string ClassifierConfig::extra(const std::string& key,
                                    const std::string& fallback) const {
  const auto it = extras.find(key);
  return it == extras.end() ? fallback : it->second;
}

double ClassifierConfig::extra_double(const std::string& key,
                                      double fallback) const {
  const auto it = extras.find(key);
  if (it == extras.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("extra \"" + key + "\" is not a number: " + it->second);
  }
}

std::uint64_t ClassifierConfig::extra_u64(const std::string& key,
                                          std::uint64_t fallback) const {
  const auto it = extras.find(key);
  if (it == extras.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw ConfigError("extra \"" + key + "\" is not an integer: " + it->second);
  }
}

std::string ClassifierConfig::canonical_string() const {
  std::ostringstream out;
  out << "backend=" << backend_name << ";lr=" << util::format_double(learning_rate)
      << ";batch=" << batch_size << ";epochs=" << epochs
      << ";optimizer=" << optimizer_name << ";seed=" << seed;
  for (const auto& [k, v] : extras) out << ";" << k << "=" << v;  // map is sorted
  return out.str();
}

void ClassifierConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be > 0");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
}

size_t ProbVector::argmax() const {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

void check_prob_vector(const ProbVector& p, size_t num_classes,
                       double tolerance) {
  if (p.values.size() != num_classes) {
    throw DataError("probability vector has " + std::to_string(p.values.size()) +
                    " entries, schema has " + std::to_string(num_classes));
  }
  double sum = 0.0;
  for (double v : p.values) {
    if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v)) {
      throw DataError("probability outside [0,1]: " + util::format_double(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw DataError("probabilities sum to " + util::format_double(sum));
  }
}

TrainedClassifier::TrainedClassifier(TaskSchema schema, ClassifierConfig config,
                                     std::string fingerprint)
    : schema_(std::move(schema)),
      config_(std::move(config)),
      fingerprint_(std::move(fingerprint)) {}

std::vector<std::string> TrainedClassifier::predict_label(
    const std::vector<std::string>& texts) const {
  const std::vector<ProbVector> probs = predict_proba(texts);
  std::vector<std::string> labels;
  labels.reserve(probs.size());
  for (const ProbVector& p : probs) {
    labels.push_back(schema_.classes[p.argmax()]);
  }
  return labels;
}

void TrainedClassifier::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest{
      {"backend", backend_name()},
      {"fingerprint", fingerprint_},
      {"schema", {{"task", schema_.task_id}, {"classes", schema_.classes}}},
      {"config",
       {{"backend_name", config_.backend_name},
        {"learning_rate", config_.learning_rate},
        {"batch_size", config_.batch_size},
        {"epochs", config_.epochs},
        {"optimizer_name", config_.optimizer_name},
        {"seed", config_.seed},
        {"extras", config_.extras}}}};
  util::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  save_backend_state(dir);
}

std::string training_fingerprint(const Dataset& dataset,
                                 const ClassifierConfig& config) {
  std::uint64_t h = util::kFnvOffset;
  auto add = [&h](std::string_view part) {
    h = util::fnv1a64(part, h);
    h = util::fnv1a64("\x1f", h);
  };
  add(config.canonical_string());
  add(dataset.schema.task_id);
  for (const auto& c : dataset.schema.classes) add(c);
  for (const LabeledSample& s : dataset.samples) {
    add(s.id);
    add(s.text);
    add(s.label);
    add(to_string(s.provenance));
  }
  return util::to_hex(h);
}

std::vector<std::string> backend_names() {
  return {backends::kDeterministicLinear, backends::kNeuralEncoder};
}

bool backend_registered(const std::string& name) {
  for (const auto& known : backend_names()) {
    if (known == name) return true;
  }
  return false;
}

std::unique_ptr<TrainedClassifier> fine_tune(const Dataset& dataset,
                                             const ClassifierConfig& config) {
  config.validate();
  if (!backend_registered(config.backend_name)) {
    throw ConfigError("unknown classifier backend: " + config.backend_name);
  }
  if (dataset.size() < 2) {
    throw DataError("training needs at least 2 samples, got " +
                    std::to_string(dataset.size()));
  }
  std::set<std::string> present;
  for (const LabeledSample& s : dataset.samples) present.insert(s.label);
  if (present.size() < 2) {
    throw DataError("training needs at least 2 classes present, got " +
                    std::to_string(present.size()));
  }

  if (config.backend_name == backends::kDeterministicLinear) {
    return backends::fit_linear(dataset, config);
  }
  return backends::fit_neural(dataset, config);
}

std::unique_ptr<TrainedClassifier> load_classifier(
    const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  nlohmann::json manifest =
      nlohmann::json::parse(util::read_file(manifest_path));

  TaskSchema schema;
  schema.task_id = manifest["schema"]["task"].get<std::string>();
  schema.classes = manifest["schema"]["classes"].get<std::vector<std::string>>();

  ClassifierConfig config;
  const auto& c = manifest["config"];
  config.backend_name = c["backend_name"].get<std::string>();
  config.learning_rate = c["learning_rate"].get<double>();
  config.batch_size = c["batch_size"].get<int>();
  config.epochs = c["epochs"].get<int>();
  config.optimizer_name = c["optimizer_name"].get<std::string>();
  config.seed = c["seed"].get<std::uint64_t>();
  config.extras = c["extras"].get<std::map<std::string, std::string>>();

  std::string fingerprint = manifest["fingerprint"].get<std::string>();
  const std::string backend = manifest["backend"].get<std::string>();
  if (backend == backends::kDeterministicLinear) {
    return backends::load_linear(dir, std::move(schema), std::move(config),
                                 std::move(fingerprint));
  }
  if (backend == backends::kNeuralEncoder) {
    return backends::load_neural(dir, std::move(schema), std::move(config),
                                 std::move(fingerprint));
  }
  throw ConfigError("unknown backend in checkpoint manifest: " + backend);
}

}  // namespace edos
