#include "edospipe/augment.hpp"

#include <algorithm>
#include <unordered_set>

#include "edospipe/corpus.hpp"
#include "edospipe/util.hpp"

namespace edos {

void BackTranslationChain::validate() const {
  if (pivots.empty()) {
    throw ConfigError("back-translation chain needs at least one pivot");
  }
  for (const std::string& pivot : pivots) {
    if (pivot == source_lang) {
      throw ConfigError("pivot language equals source language: " + pivot);
    }
  }
}

AugmentationMode augmentation_mode_from_string(const std::string& s) {
  if (s == "balance" || s == "balance_minority" || s == "balanced") {
    return AugmentationMode::BalanceMinority;
  }
  if (s == "double" || s == "double_all") return AugmentationMode::DoubleAll;
  throw ConfigError("unknown augmentation mode: " + s);
}

std::string to_string(AugmentationMode mode) {
  return mode == AugmentationMode::BalanceMinority ? "balance_minority"
                                                   : "double_all";
}

std::vector<CandidateSample> back_translate(const LabeledSample& source,
                                            const BackTranslationChain& chain,
                                            Translator& translator,
                                            BackTranslateStats* stats,
                                            const NormalizationConfig& norm) {
  chain.validate();
  BackTranslateStats local;
  std::vector<CandidateSample> candidates;

  std::unordered_set<std::string> seen{normalize(source.text, norm)};
  std::string current = source.text;

  for (size_t round = 0; round < chain.pivots.size(); ++round) {
    const std::string& pivot = chain.pivots[round];
    const std::string& input = chain.parallel_chains ? source.text : current;
    std::string round_trip;
    try {
      TranslationRequest forward{input, chain.source_lang, pivot};
      const std::string pivot_text = translator.translate(forward);
      TranslationRequest backward{pivot_text, pivot, chain.source_lang};
      round_trip = translator.translate(backward);
    } catch (const TranslationError&) {
      ++local.translation_failures;
      continue;  // this round is lost; later rounds keep the last good text
    }
    if (!chain.parallel_chains) current = round_trip;

    const std::string key = normalize(round_trip, norm);
    if (key.empty()) {
      ++local.empty_dropped;
      continue;
    }
    if (!seen.insert(key).second) {
      ++local.duplicates_dropped;
      continue;
    }
    candidates.push_back(CandidateSample{source.id,
                                         static_cast<int>(round + 1),
                                         round_trip, source.label});
  }

  if (stats) {
    stats->translation_failures += local.translation_failures;
    stats->duplicates_dropped += local.duplicates_dropped;
    stats->empty_dropped += local.empty_dropped;
  }
  return candidates;
}

std::vector<LabeledSample> filter_candidates(
    const std::vector<CandidateSample>& candidates,
    const TrainedClassifier& gatekeeper, double min_confidence,
    const NormalizationConfig& norm, size_t* empty_dropped) {
  std::vector<LabeledSample> kept;
  std::vector<std::string> texts;
  std::vector<size_t> index;
  texts.reserve(candidates.size());
  size_t empties = 0;

  for (size_t i = 0; i < candidates.size(); ++i) {
    std::string normalized = normalize(candidates[i].text, norm);
    if (normalized.empty()) {
      ++empties;
      continue;
    }
    texts.push_back(std::move(normalized));
    index.push_back(i);
  }

  const std::vector<ProbVector> probs = gatekeeper.predict_proba(texts);
  for (size_t k = 0; k < texts.size(); ++k) {
    const CandidateSample& cand = candidates[index[k]];
    const size_t predicted = probs[k].argmax();
    if (gatekeeper.schema().classes[predicted] != cand.inherited_label) continue;
    if (probs[k].values[predicted] < min_confidence) continue;
    kept.push_back(LabeledSample{
        cand.source_id + "-bt" + std::to_string(cand.stage_index),
        texts[k], cand.inherited_label, Provenance::Augmented});
  }
  if (empty_dropped) *empty_dropped += empties;
  return kept;
}

Dataset augment_dataset(const Dataset& dataset, AugmentationMode mode,
                        const BackTranslationChain& chain,
                        Translator& translator,
                        const TrainedClassifier& gatekeeper,
                        AugmentReport* report, double min_confidence,
                        const NormalizationConfig& norm) {
  if (dataset.empty()) throw DataError("cannot augment an empty dataset");

  AugmentReport local;
  local.mode = mode;
  const ClassDistribution dist = class_distribution(dataset);

  Dataset synthetic{dataset.schema, {}};

  if (mode == AugmentationMode::BalanceMinority) {
    local.target = dist.majority_count() - dist.minority_count();
    for (const LabeledSample& sample : dataset.samples) {
      if (local.added >= local.target) break;
      if (sample.label != dist.minority_class) continue;

      const auto candidates =
          back_translate(sample, chain, translator, &local.translation, norm);
      auto& counts = local.per_class[sample.label];
      counts.generated += candidates.size();
      auto accepted = filter_candidates(candidates, gatekeeper, min_confidence,
                                        norm, &local.translation.empty_dropped);
      counts.rejected += candidates.size() - accepted.size();
      for (LabeledSample& s : accepted) {
        if (local.added >= local.target) break;
        ++counts.accepted;
        ++local.added;
        synthetic.samples.push_back(std::move(s));
      }
    }
    local.shortfall = local.target - local.added;
  } else {
    local.target = dataset.size();  // at most one candidate per gold sample
    for (const LabeledSample& sample : dataset.samples) {
      const auto candidates =
          back_translate(sample, chain, translator, &local.translation, norm);
      auto& counts = local.per_class[sample.label];
      counts.generated += candidates.size();
      auto accepted = filter_candidates(candidates, gatekeeper, min_confidence,
                                        norm, &local.translation.empty_dropped);
      counts.rejected += candidates.size() - accepted.size();
      if (!accepted.empty()) {
        ++counts.accepted;
        ++local.added;
        synthetic.samples.push_back(std::move(accepted.front()));
      }
    }
    local.shortfall = local.target - local.added;
  }

  if (report) *report = local;
  return merge(dataset, synthetic);
}

}  // namespace edos
