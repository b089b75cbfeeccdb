#pragma once

#include <cstdint>
#include <string>

#include "edospipe/types.hpp"

namespace edos {

// Column names in the delimited-text release. Overridable from the run
// config; the provenance column is ours and optional on input.
struct ColumnSpec {
  std::string id = "id";
  std::string text = "text";
  std::string label = "label";
  std::string provenance = "provenance";
};

struct LoadStats {
  size_t rows_read = 0;
  size_t synthetic_empty_dropped = 0;  // augmented/weak rows with empty text
};

// Loads a labeled dataset. Gold rows with empty text (after trim) and rows
// with labels outside the schema are errors; synthetic rows with empty text
// are dropped and counted.
Dataset load_dataset(const std::string& path, const TaskSchema& schema,
                     const ColumnSpec& columns = {},
                     LoadStats* stats = nullptr);
void save_dataset(const std::string& path, const Dataset& dataset,
                  const ColumnSpec& columns = {});

// Unlabeled pools ship as JSON lines: {"id": ..., "text": ...}.
UnlabeledPool load_pool(const std::string& path);
void save_pool(const std::string& path, const UnlabeledPool& pool);

ClassDistribution class_distribution(const Dataset& dataset);

// Seeded, per-class proportional split. First part receives `fraction` of
// each class (within one sample); parts partition the input.
std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             double fraction,
                                             std::uint64_t seed);

// Concatenates two datasets over one schema. Ids colliding with the left
// side are suffixed with their provenance (and a counter if needed).
Dataset merge(const Dataset& a, const Dataset& b);

}  // namespace edos
