#include "edospipe/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "edospipe/csv.hpp"
#include "edospipe/util.hpp"

namespace edos {

size_t ConfusionMatrix::total() const {
  size_t sum = 0;
  for (const auto& row : counts) {
    for (size_t v : row) sum += v;
  }
  return sum;
}

ConfusionMatrix confusion(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const TaskSchema& schema) {
  if (gold.size() != pred.size()) {
    throw DataError("gold/pred length mismatch: " +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()));
  }
  ConfusionMatrix cm;
  cm.schema = schema;
  cm.counts.assign(schema.num_classes(),
                   std::vector<size_t>(schema.num_classes(), 0));
  for (size_t i = 0; i < gold.size(); ++i) {
    const int g = schema.index_of(gold[i]);
    const int p = schema.index_of(pred[i]);
    if (g < 0) throw DataError("unknown gold label: " + gold[i]);
    if (p < 0) throw DataError("unknown predicted label: " + pred[i]);
    ++cm.counts[static_cast<size_t>(g)][static_cast<size_t>(p)];
  }
  return cm;
}

namespace {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool absent = false;  // no gold and no predicted instances
};

ClassScores score_class(const ConfusionMatrix& cm, size_t c) {
  const size_t n = cm.schema.num_classes();
  size_t tp = cm.counts[c][c];
  size_t fp = 0;
  size_t fn = 0;
  for (size_t k = 0; k < n; ++k) {
    if (k == c) continue;
    fp += cm.counts[k][c];
    fn += cm.counts[c][k];
  }
  ClassScores s;
  s.absent = (tp + fp + fn) == 0;
  if (tp + fp > 0) s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

}  // namespace

double macro_f1(const ConfusionMatrix& cm, bool exclude_absent_classes) {
  if (cm.total() == 0) throw DataError("cannot score an empty confusion matrix");
  double sum = 0.0;
  size_t counted = 0;
  for (size_t c = 0; c < cm.schema.num_classes(); ++c) {
    const ClassScores s = score_class(cm, c);
    if (exclude_absent_classes && s.absent) continue;
    sum += s.f1;
    ++counted;
  }
  if (counted == 0) return 0.0;
  return sum / static_cast<double>(counted);
}

EvaluationReport evaluate(const ConfusionMatrix& cm,
                          bool exclude_absent_classes) {
  EvaluationReport report;
  report.confusion = cm;
  for (size_t c = 0; c < cm.schema.num_classes(); ++c) {
    const ClassScores s = score_class(cm, c);
    const std::string& name = cm.schema.classes[c];
    report.per_class_precision[name] = s.precision;
    report.per_class_recall[name] = s.recall;
    report.per_class_f1[name] = s.f1;
  }
  report.macro_f1 = macro_f1(cm, exclude_absent_classes);
  return report;
}

EvaluationReport evaluate(const std::vector<std::string>& gold,
                          const std::vector<std::string>& pred,
                          const TaskSchema& schema,
                          bool exclude_absent_classes) {
  return evaluate(confusion(gold, pred, schema), exclude_absent_classes);
}

namespace {

std::string render_confusion_svg(const ConfusionMatrix& cm) {
  const size_t n = cm.schema.num_classes();
  const int cell = 56;
  const int margin = 110;
  const int width = margin + cell * static_cast<int>(n) + 10;
  const int height = margin + cell * static_cast<int>(n) + 10;

  size_t max_count = 1;
  for (const auto& row : cm.counts) {
    for (size_t v : row) max_count = std::max(max_count, v);
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
  for (size_t g = 0; g < n; ++g) {
    svg << "<text x=\"" << (margin - 6) << "\" y=\""
        << (margin + cell * static_cast<int>(g) + cell / 2 + 4)
        << "\" text-anchor=\"end\">" << cm.schema.classes[g] << "</text>\n";
    svg << "<text x=\"" << (margin + cell * static_cast<int>(g) + cell / 2)
        << "\" y=\"" << (margin - 8)
        << "\" text-anchor=\"middle\">" << cm.schema.classes[g] << "</text>\n";
  }
  for (size_t g = 0; g < n; ++g) {
    for (size_t p = 0; p < n; ++p) {
      const size_t v = cm.counts[g][p];
      const int shade =
          255 - static_cast<int>(200.0 * static_cast<double>(v) /
                                 static_cast<double>(max_count));
      const int x = margin + cell * static_cast<int>(p);
      const int y = margin + cell * static_cast<int>(g);
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << shade << ","
          << shade << ",255)\" stroke=\"black\"/>\n";
      svg << "<text x=\"" << (x + cell / 2) << "\" y=\"" << (y + cell / 2 + 4)
          << "\" text-anchor=\"middle\">" << v << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void render_report(const EvaluationReport& report,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::string scores;
  scores += "macro_f1=" + util::format_double(report.macro_f1) + "\n";
  for (const auto& [name, v] : report.per_class_f1) {
    scores += "f1." + name + "=" + util::format_double(v) + "\n";
  }
  for (const auto& [name, v] : report.per_class_recall) {
    scores += "recall." + name + "=" + util::format_double(v) + "\n";
  }
  for (const auto& [name, v] : report.per_class_precision) {
    scores += "precision." + name + "=" + util::format_double(v) + "\n";
  }
  util::write_file(dir / "scores.txt", scores);

  csv::Table table;
  table.header.push_back("gold\\pred");
  for (const auto& c : report.confusion.schema.classes) table.header.push_back(c);
  for (size_t g = 0; g < report.confusion.schema.num_classes(); ++g) {
    csv::Row row{report.confusion.schema.classes[g]};
    for (size_t p = 0; p < report.confusion.schema.num_classes(); ++p) {
      row.push_back(std::to_string(report.confusion.counts[g][p]));
    }
    table.rows.push_back(std::move(row));
  }
  csv::write_file((dir / "confusion.csv").string(), table);

  util::write_file(dir / "confusion.svg",
                   render_confusion_svg(report.confusion));
}

std::map<std::string, double> parse_scores(const std::filesystem::path& file) {
  std::map<std::string, double> out;
  for (const std::string& line : util::split(util::read_file(file), '\n')) {
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("malformed score line: " + line);
    }
    out[line.substr(0, eq)] = std::strtod(line.c_str() + eq + 1, nullptr);
  }
  return out;
}

}  // namespace edos
