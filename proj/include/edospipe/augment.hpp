#pragma once

#include <map>
#include <string>
#include <vector>

#include "edospipe/classifier.hpp"
#include "edospipe/preprocess.hpp"
#include "edospipe/translator.hpp"
#include "edospipe/types.hpp"

namespace edos {

// Chained round trips: en -> pivots[0] -> en -> pivots[1] -> en -> ...
// Each round feeds the previous round's English output; with
// parallel_chains every round restarts from the original sentence.
struct BackTranslationChain {
  std::vector<std::string> pivots = {"de", "ru"};
  bool collect_each_stage = true;
  bool parallel_chains = false;
  std::string source_lang = "en";

  void validate() const;
};

enum class AugmentationMode { BalanceMinority, DoubleAll };

AugmentationMode augmentation_mode_from_string(const std::string& s);
std::string to_string(AugmentationMode mode);

struct CandidateSample {
  std::string source_id;
  int stage_index = 0;  // 1-based round that produced it
  std::string text;
  std::string inherited_label;
};

struct BackTranslateStats {
  size_t translation_failures = 0;
  size_t duplicates_dropped = 0;
  size_t empty_dropped = 0;
};

// Runs the chain for one sentence. Candidates equal (after normalization)
// to the source or to an earlier candidate are dropped; a failed round is
// skipped and counted, never fatal.
std::vector<CandidateSample> back_translate(const LabeledSample& source,
                                            const BackTranslationChain& chain,
                                            Translator& translator,
                                            BackTranslateStats* stats = nullptr,
                                            const NormalizationConfig& norm = {});

// Keeps a candidate iff the gatekeeper predicts its inherited label (and,
// when min_confidence > 0, with at least that confidence). Kept samples get
// normalized text, provenance = augmented, and fresh ids.
std::vector<LabeledSample> filter_candidates(
    const std::vector<CandidateSample>& candidates,
    const TrainedClassifier& gatekeeper, double min_confidence = 0.0,
    const NormalizationConfig& norm = {}, size_t* empty_dropped = nullptr);

struct ClassAugmentCounts {
  size_t generated = 0;
  size_t accepted = 0;
  size_t rejected = 0;
};

struct AugmentReport {
  AugmentationMode mode = AugmentationMode::BalanceMinority;
  size_t target = 0;     // balance mode: majority - minority
  size_t added = 0;
  size_t shortfall = 0;  // target - added when supply ran out
  std::map<std::string, ClassAugmentCounts> per_class;
  BackTranslateStats translation;
};

// balance_minority: generate-and-filter over minority-class samples until
// min(majority - minority, accepted supply) synthetic samples are added.
// double_all: at most one accepted candidate per gold sample, bounding the
// output at 2|d|. Gold samples pass through untouched in both modes.
Dataset augment_dataset(const Dataset& dataset, AugmentationMode mode,
                        const BackTranslationChain& chain,
                        Translator& translator,
                        const TrainedClassifier& gatekeeper,
                        AugmentReport* report = nullptr,
                        double min_confidence = 0.0,
                        const NormalizationConfig& norm = {});

}  // namespace edos
