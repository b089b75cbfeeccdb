#include "edospipe/types.hpp"

#include <numeric>

#include "edospipe/util.hpp"

namespace edos {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Gold:
      return "gold";
    case Provenance::Augmented:
      return "augmented";
    case Provenance::Weak:
      return "weak";
  }
  return "gold";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
  if (s == "gold") return Provenance::Gold;
  if (s == "augmented") return Provenance::Augmented;
  if (s == "weak") return Provenance::Weak;
  return std::nullopt;
}

int TaskSchema::index_of(std::string_view label) const {
  for (size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return static_cast<int>(i);
  }
  return -1;
}

TaskSchema TaskSchema::task_a() {
  return {"A", {"not_sexist", "sexist"}};
}

TaskSchema TaskSchema::task_b() {
  return {"B", {"threats", "derogation", "animosity", "prejudiced_discussions"}};
}

TaskSchema TaskSchema::task_c() {
  return {"C",
          {"1.1", "1.2", "2.1", "2.2", "2.3", "3.1", "3.2", "3.3", "3.4",
           "4.1", "4.2"}};
}

TaskSchema TaskSchema::for_task(std::string_view task_id) {
  if (task_id == "A" || task_id == "a") return task_a();
  if (task_id == "B" || task_id == "b") return task_b();
  if (task_id == "C" || task_id == "c") return task_c();
  throw ConfigError("unknown task id: " + std::string(task_id));
}

size_t ClassDistribution::total() const {
  return std::accumulate(counts.begin(), counts.end(), size_t{0});
}

size_t ClassDistribution::count_of(std::string_view class_name) const {
  const int idx = schema.index_of(class_name);
  if (idx < 0) throw DataError("class not in schema: " + std::string(class_name));
  return counts[static_cast<size_t>(idx)];
}

}  // namespace edos
