#include "edospipe/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "edospipe/csv.hpp"
#include "edospipe/util.hpp"

namespace edos {

namespace {

bool is_blank_row(const csv::Row& row) {
  return row.size() == 1 && row[0].empty();
}

int require_column(const csv::Table& table, const std::string& name,
                   const std::string& path) {
  const int idx = table.column(name);
  if (idx < 0) {
    throw DataError("missing required column \"" + name + "\" in " + path);
  }
  return idx;
}

}  // namespace

Dataset load_dataset(const std::string& path, const TaskSchema& schema,
                     const ColumnSpec& columns, LoadStats* stats) {
  const csv::Table table = csv::read_file(path);
  if (table.header.empty()) throw DataError("empty dataset file: " + path);

  const int id_col = require_column(table, columns.id, path);
  const int text_col = require_column(table, columns.text, path);
  const int label_col = require_column(table, columns.label, path);
  const int prov_col = table.column(columns.provenance);  // optional

  Dataset dataset;
  dataset.schema = schema;
  dataset.samples.reserve(table.rows.size());
  std::unordered_set<std::string> seen_ids;
  LoadStats local;

  size_t row_number = 0;
  for (const csv::Row& row : table.rows) {
    if (is_blank_row(row)) continue;
    ++row_number;
    const size_t max_col = static_cast<size_t>(
        std::max({id_col, text_col, label_col, std::max(prov_col, 0)}));
    if (row.size() <= max_col) {
      throw DataError("row " + std::to_string(row_number) + " in " + path +
                      " has " + std::to_string(row.size()) + " fields, need " +
                      std::to_string(max_col + 1));
    }

    LabeledSample sample;
    sample.id = row[static_cast<size_t>(id_col)];
    sample.text = row[static_cast<size_t>(text_col)];
    sample.label = row[static_cast<size_t>(label_col)];
    if (prov_col >= 0) {
      const auto prov = provenance_from_string(row[static_cast<size_t>(prov_col)]);
      if (!prov) {
        throw DataError("unknown provenance \"" +
                        row[static_cast<size_t>(prov_col)] + "\" in row " +
                        std::to_string(row_number));
      }
      sample.provenance = *prov;
    }

    if (schema.index_of(sample.label) < 0) {
      throw DataError("unknown label \"" + sample.label + "\" in row " +
                      std::to_string(row_number) + " (id=" + sample.id +
                      ") of " + path);
    }
    if (util::trim(sample.text).empty()) {
      if (sample.provenance == Provenance::Gold) {
        throw DataError("gold sample with empty text in row " +
                        std::to_string(row_number) + " (id=" + sample.id +
                        ") of " + path);
      }
      ++local.synthetic_empty_dropped;
      continue;
    }
    if (!seen_ids.insert(sample.id).second) {
      throw DataError("duplicate id \"" + sample.id + "\" in row " +
                      std::to_string(row_number) + " of " + path);
    }
    ++local.rows_read;
    dataset.samples.push_back(std::move(sample));
  }

  if (stats) *stats = local;
  return dataset;
}

void save_dataset(const std::string& path, const Dataset& dataset,
                  const ColumnSpec& columns) {
  csv::Table table;
  table.header = {columns.id, columns.text, columns.label, columns.provenance};
  table.rows.reserve(dataset.samples.size());
  for (const LabeledSample& s : dataset.samples) {
    table.rows.push_back(
        {s.id, s.text, s.label, std::string(to_string(s.provenance))});
  }
  csv::write_file(path, table);
}

UnlabeledPool load_pool(const std::string& path) {
  const std::string content = util::read_file(path);
  UnlabeledPool pool;
  std::unordered_set<std::string> seen_ids;

  size_t line_number = 0;
  for (const std::string& line : util::split(content, '\n')) {
    ++line_number;
    const std::string trimmed = util::trim(line);
    if (trimmed.empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(trimmed, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
        !obj.contains("text")) {
      throw DataError("malformed pool record at line " +
                      std::to_string(line_number) + " of " + path);
    }
    PoolItem item{obj["id"].is_string() ? obj["id"].get<std::string>()
                                        : obj["id"].dump(),
                  obj["text"].get<std::string>()};
    if (!seen_ids.insert(item.id).second) {
      throw DataError("duplicate pool id \"" + item.id + "\" at line " +
                      std::to_string(line_number) + " of " + path);
    }
    pool.samples.push_back(std::move(item));
  }
  return pool;
}

void save_pool(const std::string& path, const UnlabeledPool& pool) {
  std::string out;
  for (const PoolItem& item : pool.samples) {
    nlohmann::json obj{{"id", item.id}, {"text", item.text}};
    out += obj.dump();
    out.push_back('\n');
  }
  util::write_file(path, out);
}

ClassDistribution class_distribution(const Dataset& dataset) {
  ClassDistribution dist;
  dist.schema = dataset.schema;
  dist.counts.assign(dataset.schema.num_classes(), 0);
  for (const LabeledSample& s : dataset.samples) {
    const int idx = dataset.schema.index_of(s.label);
    if (idx < 0) throw DataError("sample label outside schema: " + s.label);
    ++dist.counts[static_cast<size_t>(idx)];
  }

  size_t maj = 0;
  size_t min = 0;
  for (size_t i = 1; i < dist.counts.size(); ++i) {
    if (dist.counts[i] > dist.counts[maj]) maj = i;  // ties keep schema order
    if (dist.counts[i] < dist.counts[min]) min = i;
  }
  if (!dist.counts.empty()) {
    dist.majority_class = dist.schema.classes[maj];
    dist.minority_class = dist.schema.classes[min];
  }
  return dist;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             double fraction,
                                             std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("split fraction must be in (0,1), got " +
                      util::format_double(fraction));
  }

  // Group sample indices per class, in schema order.
  std::vector<std::vector<size_t>> per_class(dataset.schema.num_classes());
  for (size_t i = 0; i < dataset.samples.size(); ++i) {
    const int idx = dataset.schema.index_of(dataset.samples[i].label);
    per_class[static_cast<size_t>(idx)].push_back(i);
  }
  for (size_t c = 0; c < per_class.size(); ++c) {
    if (!per_class[c].empty() && per_class[c].size() < 2) {
      throw DataError("class \"" + dataset.schema.classes[c] +
                      "\" has fewer than 2 samples; cannot split");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<bool> in_first(dataset.samples.size(), false);
  for (auto& group : per_class) {
    if (group.empty()) continue;
    std::shuffle(group.begin(), group.end(), rng);
    const auto want = static_cast<size_t>(std::llround(
        fraction * static_cast<double>(group.size())));
    const size_t take = std::clamp<size_t>(want, 1, group.size() - 1);
    for (size_t k = 0; k < take; ++k) in_first[group[k]] = true;
  }

  Dataset first{dataset.schema, {}};
  Dataset second{dataset.schema, {}};
  for (size_t i = 0; i < dataset.samples.size(); ++i) {
    (in_first[i] ? first : second).samples.push_back(dataset.samples[i]);
  }
  return {std::move(first), std::move(second)};
}

Dataset merge(const Dataset& a, const Dataset& b) {
  if (a.schema.task_id != b.schema.task_id ||
      a.schema.classes != b.schema.classes) {
    throw DataError("cannot merge datasets with different schemas (" +
                    a.schema.task_id + " vs " + b.schema.task_id + ")");
  }

  Dataset out = a;
  out.samples.reserve(a.size() + b.size());
  std::unordered_set<std::string> ids;
  ids.reserve(a.size() + b.size());
  for (const LabeledSample& s : a.samples) ids.insert(s.id);

  for (const LabeledSample& s : b.samples) {
    LabeledSample copy = s;
    if (!ids.insert(copy.id).second) {
      std::string base = copy.id + "." + std::string(to_string(copy.provenance));
      std::string candidate = base;
      for (int suffix = 2; !ids.insert(candidate).second; ++suffix) {
        candidate = base + "." + std::to_string(suffix);
      }
      copy.id = candidate;
    }
    out.samples.push_back(std::move(copy));
  }
  return out;
}

}  // namespace edos
