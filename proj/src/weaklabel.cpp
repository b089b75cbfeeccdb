#include "edospipe/weaklabel.hpp"

#include <algorithm>

#include "edospipe/util.hpp"

namespace edos {

void WeakLabelPolicy::validate() const {
  if (!(confidence_threshold > 0.5 && confidence_threshold <= 1.0)) {
    throw ConfigError("confidence threshold must be in (0.5, 1], got " +
                      util::format_double(confidence_threshold));
  }
}

WeakLabelPolicy::Mode WeakLabelPolicy::mode_from_string(const std::string& s) {
  if (s == "balanced" || s == "balance") return Mode::Balanced;
  if (s == "double" || s == "double_all") return Mode::Double;
  throw ConfigError("unknown weak-label mode: " + s);
}

std::vector<WeakRecord> weak_label(const UnlabeledPool& pool,
                                   const TrainedClassifier& classifier) {
  std::vector<std::string> texts;
  texts.reserve(pool.size());
  for (const PoolItem& item : pool.samples) texts.push_back(item.text);

  const std::vector<ProbVector> probs = classifier.predict_proba(texts);
  std::vector<WeakRecord> records;
  records.reserve(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    const size_t best = probs[i].argmax();
    records.push_back(WeakRecord{pool.samples[i].id, pool.samples[i].text,
                                 classifier.schema().classes[best],
                                 probs[i].values[best]});
  }
  return records;
}

namespace {

// Indices of qualifying records, best confidence first; equal confidences
// keep pool order.
std::vector<size_t> ranked_indices(const std::vector<WeakRecord>& records,
                                   const std::vector<bool>& qualifies) {
  std::vector<size_t> order;
  for (size_t i = 0; i < records.size(); ++i) {
    if (qualifies[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return records[a].confidence > records[b].confidence;
  });
  return order;
}

LabeledSample to_sample(const WeakRecord& record) {
  return LabeledSample{record.id, record.text, record.label, Provenance::Weak};
}

}  // namespace

WeakSelection select_weak(const std::vector<WeakRecord>& records,
                          const WeakLabelPolicy& policy,
                          const ClassDistribution& dist,
                          const std::unordered_set<std::string>* gold_texts) {
  policy.validate();
  WeakSelection out;

  std::vector<bool> qualifies(records.size(), false);
  for (size_t i = 0; i < records.size(); ++i) {
    const WeakRecord& r = records[i];
    if (r.confidence < policy.confidence_threshold) continue;
    if (dist.schema.index_of(r.label) < 0) {
      throw DataError("weak record label outside schema: " + r.label);
    }
    if (policy.mode == WeakLabelPolicy::Mode::Balanced &&
        r.label != dist.minority_class) {
      continue;
    }
    if (gold_texts && gold_texts->count(r.text)) {
      ++out.dedup_dropped;
      continue;
    }
    qualifies[i] = true;
    ++out.qualifying;
  }

  const std::vector<size_t> order = ranked_indices(records, qualifies);

  if (policy.mode == WeakLabelPolicy::Mode::Balanced) {
    const size_t gap = dist.majority_count() - dist.minority_count();
    out.target = std::min(policy.budget, gap);
    for (size_t idx : order) {
      if (out.samples.size() >= out.target) break;
      out.samples.push_back(to_sample(records[idx]));
    }
  } else {
    out.target = std::min(policy.budget, dist.total());
    std::vector<size_t> class_taken(dist.schema.num_classes(), 0);
    for (size_t idx : order) {
      if (out.samples.size() >= policy.budget) break;
      const auto c = static_cast<size_t>(
          dist.schema.index_of(records[idx].label));
      if (class_taken[c] >= dist.counts[c]) continue;  // per-class gold quota
      ++class_taken[c];
      out.samples.push_back(to_sample(records[idx]));
    }
  }

  out.shortfall = out.target > out.samples.size()
                      ? out.target - out.samples.size()
                      : 0;
  return out;
}

}  // namespace edos
