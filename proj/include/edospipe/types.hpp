#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edos {

// Where a sample came from: human-labeled, back-translated, or pseudo-labeled.
enum class Provenance { Gold, Augmented, Weak };

std::string_view to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

// The label space of one sub-task. Class ordering is fixed for the life of
// a run: argmax indices, confusion-matrix axes, and tie-breaks refer to it.
struct TaskSchema {
  std::string task_id;
  std::vector<std::string> classes;

  size_t num_classes() const { return classes.size(); }
  int index_of(std::string_view label) const;

  // A: binary. B: four sexism categories. C: eleven fine-grained vectors.
  static TaskSchema task_a();
  static TaskSchema task_b();
  static TaskSchema task_c();
  static TaskSchema for_task(std::string_view task_id);
};

struct LabeledSample {
  std::string id;
  std::string text;
  std::string label;
  Provenance provenance = Provenance::Gold;

  bool operator==(const LabeledSample&) const = default;
};

struct Dataset {
  TaskSchema schema;
  std::vector<LabeledSample> samples;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

struct PoolItem {
  std::string id;
  std::string text;

  bool operator==(const PoolItem&) const = default;
};

struct UnlabeledPool {
  std::vector<PoolItem> samples;

  size_t size() const { return samples.size(); }
};

struct ClassDistribution {
  TaskSchema schema;
  std::vector<size_t> counts;  // aligned to schema.classes
  std::string majority_class;
  std::string minority_class;

  size_t total() const;
  size_t count_of(std::string_view class_name) const;
  size_t majority_count() const { return count_of(majority_class); }
  size_t minority_count() const { return count_of(minority_class); }
};

}  // namespace edos
