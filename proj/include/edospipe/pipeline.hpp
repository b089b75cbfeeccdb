#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "edospipe/augment.hpp"
#include "edospipe/classifier.hpp"
#include "edospipe/corpus.hpp"
#include "edospipe/preprocess.hpp"
#include "edospipe/types.hpp"
#include "edospipe/weaklabel.hpp"

namespace edos {

struct DataConfig {
  std::string train;
  std::string eval;           // optional; empty means split from train
  double eval_fraction = 0.2; // held-out share when eval is empty
  std::string pool;           // optional JSONL pool for weak labeling
  ColumnSpec columns;
};

struct AugmentationConfig {
  bool enabled = false;
  AugmentationMode mode = AugmentationMode::BalanceMinority;
  BackTranslationChain chain;
  std::string translator = "identity";  // or "remote:<endpoint>"
  double min_confidence = 0.0;
  int gatekeeper = 0;  // index into classifiers
};

struct WeakLabelConfig {
  bool enabled = false;
  WeakLabelPolicy policy;
  int labeler = 0;  // index into classifiers
};

struct EnsembleConfig {
  std::string rule = "hard";  // or "soft"
  bool average_logits = false;
};

// The declarative description of one experiment. Tasks enable the module
// subsets they ran with: A all stages, B without weak labeling, C module 2
// only; allow_stage_override lifts that (with a warning).
struct RunConfig {
  std::string task = "A";
  std::uint64_t seed = 0;
  std::string output_dir;
  DataConfig data;
  NormalizationConfig normalization;
  AugmentationConfig augmentation;
  WeakLabelConfig weak_label;
  std::vector<ClassifierConfig> classifiers;
  EnsembleConfig ensemble;
  bool allow_stage_override = false;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

enum class Severity { Error, Warning };

struct Finding {
  Severity severity = Severity::Error;
  std::string field;
  std::string message;
};

// Pure check; errors make the config unrunnable, warnings do not.
std::vector<Finding> validate_config(const RunConfig& config);

struct StageRecord {
  std::string name;
  std::string status;  // "ok" | "skipped" | "failed"
  std::string detail;
  std::vector<std::string> outputs;
  std::string started;
  std::string finished;
};

struct RunManifest {
  std::string task;
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;
  std::vector<std::string> model_fingerprints;
  double macro_f1 = 0.0;
  std::map<std::string, double> per_class_f1;
  std::filesystem::path manifest_path;
};

// Thrown when a stage aborts; the manifest with partial artifacts is
// already persisted by then.
struct StageError : std::runtime_error {
  StageError(std::string stage_name, const std::string& message)
      : std::runtime_error("stage " + stage_name + " failed: " + message),
        stage(std::move(stage_name)) {}
  std::string stage;
};

// Runs preprocess -> augment -> weaklabel -> train -> ensemble -> evaluate,
// persisting every intermediate artifact under config.output_dir.
RunManifest run_experiment(const RunConfig& config);

}  // namespace edos
