#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "edospipe/types.hpp"

namespace edos {

// Training knobs shared by every backend. learning_rate/batch_size/epochs
// are the neural fine-tuning parameters; backend-specific knobs go through
// `extras` (e.g. "endpoint" for neural-encoder, "linear.dims" for the
// deterministic backend).
struct ClassifierConfig {
  std::string backend_name = "deterministic-linear";
  double learning_rate = 1e-5;
  int batch_size = 16;
  int epochs = 3;  // task B runs default to 4
  std::string optimizer_name = "adamw";
  std::uint64_t seed = 0;
  std::map<std::string, std::string> extras;

  std::string extra(const std::string& key, const std::string& fallback) const;
  double extra_double(const std::string& key, double fallback) const;
  std::uint64_t extra_u64(const std::string& key, std::uint64_t fallback) const;

  // Stable serialization used for fingerprinting.
  std::string canonical_string() const;
  void validate() const;
};

// Per-class probabilities aligned to schema.classes.
struct ProbVector {
  std::vector<double> values;

  // Lowest index wins ties.
  size_t argmax() const;
  double max() const { return values[argmax()]; }
};

void check_prob_vector(const ProbVector& p, size_t num_classes,
                       double tolerance = 1e-6);

// A fitted backend. Immutable after fine_tune; predictions are deterministic
// given the fingerprint and input text (best-effort for remote backends).
class TrainedClassifier {
 public:
  virtual ~TrainedClassifier() = default;

  const TaskSchema& schema() const { return schema_; }
  const ClassifierConfig& config() const { return config_; }
  const std::string& fingerprint() const { return fingerprint_; }
  virtual std::string backend_name() const = 0;

  virtual std::vector<ProbVector> predict_proba(
      const std::vector<std::string>& texts) const = 0;
  std::vector<std::string> predict_label(
      const std::vector<std::string>& texts) const;

  // Persists manifest.json plus backend state under `dir`.
  void save(const std::filesystem::path& dir) const;

 protected:
  TrainedClassifier(TaskSchema schema, ClassifierConfig config,
                    std::string fingerprint);
  virtual void save_backend_state(const std::filesystem::path& dir) const = 0;

  TaskSchema schema_;
  ClassifierConfig config_;
  std::string fingerprint_;
};

// Dispatches on config.backend_name. Requires at least two samples covering
// at least two classes.
std::unique_ptr<TrainedClassifier> fine_tune(const Dataset& dataset,
                                             const ClassifierConfig& config);

std::unique_ptr<TrainedClassifier> load_classifier(
    const std::filesystem::path& dir);

std::vector<std::string> backend_names();
bool backend_registered(const std::string& name);

// Hash of (backend, config, schema, samples, seed); equal inputs give equal
// fingerprints.
std::string training_fingerprint(const Dataset& dataset,
                                 const ClassifierConfig& config);

}  // namespace edos
