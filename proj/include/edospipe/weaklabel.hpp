#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "edospipe/classifier.hpp"
#include "edospipe/types.hpp"

namespace edos {

struct WeakLabelPolicy {
  enum class Mode { Balanced, Double };

  // "at least" the threshold qualifies: confidence == threshold is kept.
  double confidence_threshold = 0.9;
  Mode mode = Mode::Balanced;
  size_t budget = 7000;  // task A default; other tasks must set their own

  void validate() const;
  static Mode mode_from_string(const std::string& s);
};

struct WeakRecord {
  std::string id;
  std::string text;
  std::string label;       // argmax class
  double confidence = 0.0; // max of the probability vector
};

// One record per pool item, in pool order.
std::vector<WeakRecord> weak_label(const UnlabeledPool& pool,
                                   const TrainedClassifier& classifier);

struct WeakSelection {
  std::vector<LabeledSample> samples;
  size_t target = 0;      // per-mode quota before the shortfall
  size_t qualifying = 0;  // records at or above the threshold (and in-class)
  size_t dedup_dropped = 0;
  size_t shortfall = 0;
};

// balanced: minority-class records with confidence >= threshold, sorted by
// confidence descending (ties keep pool order), truncated to
// min(budget, majority - minority). double: records of all classes at or
// above the threshold, per-class quota equal to that class's gold count,
// total truncated to budget. Records whose text appears in `gold_texts`
// are dropped first and counted.
WeakSelection select_weak(const std::vector<WeakRecord>& records,
                          const WeakLabelPolicy& policy,
                          const ClassDistribution& dist,
                          const std::unordered_set<std::string>* gold_texts =
                              nullptr);

}  // namespace edos
