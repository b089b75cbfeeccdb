#include "edospipe/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "edospipe/util.hpp"

namespace edos {

void EnsembleInput::validate() const {
  if (model_probs.empty()) {
    throw DataError("ensemble needs at least one model");
  }
  if (schema.num_classes() == 0) {
    throw DataError("ensemble schema has no classes");
  }
  const size_t rows = model_probs[0].size();
  for (size_t m = 0; m < model_probs.size(); ++m) {
    if (model_probs[m].size() != rows) {
      throw DataError("model " + std::to_string(m) + " has " +
                      std::to_string(model_probs[m].size()) + " rows, expected " +
                      std::to_string(rows));
    }
    for (const ProbVector& p : model_probs[m]) {
      check_prob_vector(p, schema.num_classes());
    }
  }
}

EnsembleDecision soft_vote(const EnsembleInput& input, bool average_logits) {
  input.validate();
  const size_t k = input.num_models();
  const size_t rows = input.num_rows();
  const size_t n_classes = input.schema.num_classes();

  EnsembleDecision decision;
  decision.labels.reserve(rows);
  decision.mean_probs.reserve(rows);

  for (size_t i = 0; i < rows; ++i) {
    ProbVector mean;
    mean.values.assign(n_classes, 0.0);
    if (!average_logits) {
      for (size_t m = 0; m < k; ++m) {
        for (size_t c = 0; c < n_classes; ++c) {
          mean.values[c] += input.model_probs[m][i].values[c];
        }
      }
      for (double& v : mean.values) v /= static_cast<double>(k);
    } else {
      // Geometric mean via log probabilities, renormalized.
      constexpr double kFloor = 1e-12;
      for (size_t m = 0; m < k; ++m) {
        for (size_t c = 0; c < n_classes; ++c) {
          mean.values[c] +=
              std::log(std::max(input.model_probs[m][i].values[c], kFloor));
        }
      }
      double max_log = mean.values[0];
      for (double v : mean.values) max_log = std::max(max_log, v);
      for (double& v : mean.values) v = std::exp(v / static_cast<double>(k) -
                                                 max_log / static_cast<double>(k));
    }
    double sum = 0.0;
    for (double v : mean.values) sum += v;
    for (double& v : mean.values) v /= sum;

    decision.labels.push_back(input.schema.classes[mean.argmax()]);
    decision.mean_probs.push_back(std::move(mean));
  }
  return decision;
}

EnsembleDecision hard_vote(const EnsembleInput& input) {
  input.validate();
  const size_t k = input.num_models();
  const size_t rows = input.num_rows();
  const size_t n_classes = input.schema.num_classes();

  EnsembleDecision decision;
  decision.labels.reserve(rows);
  decision.per_model_votes.assign(k, {});
  for (auto& votes : decision.per_model_votes) votes.reserve(rows);

  for (size_t i = 0; i < rows; ++i) {
    std::vector<size_t> tally(n_classes, 0);
    std::vector<double> prob_sum(n_classes, 0.0);
    for (size_t m = 0; m < k; ++m) {
      const ProbVector& p = input.model_probs[m][i];
      const size_t vote = p.argmax();
      ++tally[vote];
      for (size_t c = 0; c < n_classes; ++c) prob_sum[c] += p.values[c];
      decision.per_model_votes[m].push_back(input.schema.classes[vote]);
    }

    const size_t top_votes = *std::max_element(tally.begin(), tally.end());
    size_t winner = n_classes;
    for (size_t c = 0; c < n_classes; ++c) {
      if (tally[c] != top_votes) continue;
      if (winner == n_classes || prob_sum[c] > prob_sum[winner]) winner = c;
    }
    decision.labels.push_back(input.schema.classes[winner]);
  }
  return decision;
}

}  // namespace edos
