#pragma once

// Internal backend factories; the public surface is fine_tune/load_classifier.

#include <filesystem>
#include <memory>

#include "edospipe/classifier.hpp"

namespace edos::backends {

inline constexpr const char* kDeterministicLinear = "deterministic-linear";
inline constexpr const char* kNeuralEncoder = "neural-encoder";

std::unique_ptr<TrainedClassifier> fit_linear(const Dataset& dataset,
                                              const ClassifierConfig& config);
std::unique_ptr<TrainedClassifier> load_linear(
    const std::filesystem::path& dir, TaskSchema schema,
    ClassifierConfig config, std::string fingerprint);

std::unique_ptr<TrainedClassifier> fit_neural(const Dataset& dataset,
                                              const ClassifierConfig& config);
std::unique_ptr<TrainedClassifier> load_neural(
    const std::filesystem::path& dir, TaskSchema schema,
    ClassifierConfig config, std::string fingerprint);

}  // namespace edos::backends
