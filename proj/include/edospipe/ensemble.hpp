#pragma once

#include <string>
#include <vector>

#include "edospipe/classifier.hpp"
#include "edospipe/types.hpp"

namespace edos {

// Per-model probability matrices: k models, each with one ProbVector per
// input row, all over the same schema.
struct EnsembleInput {
  TaskSchema schema;
  std::vector<std::vector<ProbVector>> model_probs;

  size_t num_models() const { return model_probs.size(); }
  size_t num_rows() const {
    return model_probs.empty() ? 0 : model_probs[0].size();
  }
  void validate() const;
};

struct EnsembleDecision {
  std::vector<std::string> labels;
  // Soft mode only: the per-row elementwise means.
  std::vector<ProbVector> mean_probs;
  // Hard mode only: per-model argmax labels, k x n.
  std::vector<std::vector<std::string>> per_model_votes;
};

// Averages the k probability rows elementwise and takes the argmax (lowest
// class index on ties). With average_logits, the mean is taken over log
// probabilities and pushed back through softmax instead.
EnsembleDecision soft_vote(const EnsembleInput& input,
                           bool average_logits = false);

// One vote per model (its argmax); the modal class wins. Ties among modal
// classes break by the highest summed probability across models, then by
// lowest class index.
EnsembleDecision hard_vote(const EnsembleInput& input);

}  // namespace edos
