#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "edospipe/types.hpp"

namespace edos {

// Rows are gold classes, columns are predicted classes, both in schema order.
struct ConfusionMatrix {
  TaskSchema schema;
  std::vector<std::vector<size_t>> counts;

  size_t total() const;
  size_t at(size_t gold, size_t pred) const { return counts[gold][pred]; }
};

struct EvaluationReport {
  ConfusionMatrix confusion;
  std::map<std::string, double> per_class_precision;
  std::map<std::string, double> per_class_recall;
  std::map<std::string, double> per_class_f1;
  double macro_f1 = 0.0;
};

ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const TaskSchema& schema);

// Per class: precision = TP/(TP+FP), recall = TP/(TP+FN), F1 their harmonic
// mean; any zero denominator yields 0. Macro is the unweighted mean. With
// `exclude_absent_classes`, classes with no gold and no predicted instances
// are left out of the mean instead of contributing 0.
double macro_f1(const ConfusionMatrix& cm, bool exclude_absent_classes = false);

EvaluationReport evaluate(const ConfusionMatrix& cm,
                          bool exclude_absent_classes = false);
EvaluationReport evaluate(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const TaskSchema& schema,
                          bool exclude_absent_classes = false);

// Writes scores.txt (flat key=value, full precision), confusion.csv, and
// confusion.svg under `dir`. Content is a pure function of the report.
void render_report(const EvaluationReport& report,
                   const std::filesystem::path& dir);

// Re-parses a scores.txt written by render_report.
std::map<std::string, double> parse_scores(const std::filesystem::path& file);

}  // namespace edos
