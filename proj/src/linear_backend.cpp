#include <algorithm>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "backends.hpp"
#include "edospipe/util.hpp"

namespace edos::backends {

namespace {

// Hashed bag-of-words featurizer. Token and adjacent-pair hashes are bucketed
// into cfg-sized space; counts are L2-normalized so text length does not
// dominate the margin.
struct Featurizer {
  std::uint32_t dims = 8192;
  int ngram = 2;
  std::uint64_t salt = 0;

  std::vector<std::pair<std::uint32_t, double>> features(
      const std::string& text) const {
    const std::vector<std::string> words = util::split_words(text);
    std::vector<std::uint32_t> idx;
    idx.reserve(words.size() * 2);
    for (size_t i = 0; i < words.size(); ++i) {
      idx.push_back(bucket(util::fnv1a64(words[i], util::kFnvOffset ^ salt)));
      if (ngram >= 2 && i + 1 < words.size()) {
        std::uint64_t h = util::fnv1a64(words[i], util::kFnvOffset ^ salt);
        h = util::fnv1a64("\x1f", h);
        h = util::fnv1a64(words[i + 1], h);
        idx.push_back(bucket(h));
      }
    }
    std::sort(idx.begin(), idx.end());

    std::vector<std::pair<std::uint32_t, double>> out;
    double sq_sum = 0.0;
    for (size_t i = 0; i < idx.size();) {
      size_t j = i;
      while (j < idx.size() && idx[j] == idx[i]) ++j;
      const auto count = static_cast<double>(j - i);
      out.emplace_back(idx[i], count);
      sq_sum += count * count;
      i = j;
    }
    if (sq_sum > 0.0) {
      const double inv_norm = 1.0 / std::sqrt(sq_sum);
      for (auto& [unused, v] : out) v *= inv_norm;
    }
    return out;
  }

 private:
  std::uint32_t bucket(std::uint64_t h) const {
    return static_cast<std::uint32_t>(h % dims);
  }
};

struct LinearParams {
  Featurizer featurizer;
  std::vector<std::vector<double>> weights;  // classes x dims
  std::vector<double> bias;                  // classes
};

ProbVector softmax_probs(const LinearParams& params,
                         const std::vector<std::pair<std::uint32_t, double>>& x) {
  const size_t n_classes = params.bias.size();
  std::vector<double> logits(params.bias);
  for (size_t c = 0; c < n_classes; ++c) {
    double dot = 0.0;
    for (const auto& [f, v] : x) dot += params.weights[c][f] * v;
    logits[c] += dot;
  }
  double max_logit = logits[0];
  for (double l : logits) max_logit = std::max(max_logit, l);
  double sum = 0.0;
  ProbVector p;
  p.values.resize(n_classes);
  for (size_t c = 0; c < n_classes; ++c) {
    p.values[c] = std::exp(logits[c] - max_logit);
    sum += p.values[c];
  }
  for (double& v : p.values) v /= sum;
  return p;
}

class LinearClassifier final : public TrainedClassifier {
 public:
  LinearClassifier(TaskSchema schema, ClassifierConfig config,
                   std::string fingerprint, LinearParams params)
      : TrainedClassifier(std::move(schema), std::move(config),
                          std::move(fingerprint)),
        params_(std::move(params)) {}

  std::string backend_name() const override { return kDeterministicLinear; }

  std::vector<ProbVector> predict_proba(
      const std::vector<std::string>& texts) const override {
    std::vector<ProbVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
      out.push_back(softmax_probs(params_, params_.featurizer.features(text)));
    }
    return out;
  }

 protected:
  void save_backend_state(const std::filesystem::path& dir) const override {
    nlohmann::json model{{"dims", params_.featurizer.dims},
                         {"ngram", params_.featurizer.ngram},
                         {"salt", params_.featurizer.salt},
                         {"weights", params_.weights},
                         {"bias", params_.bias}};
    util::write_file(dir / "model.json", model.dump() + "\n");
  }

 private:
  LinearParams params_;
};

}  // namespace

std::unique_ptr<TrainedClassifier> fit_linear(const Dataset& dataset,
                                              const ClassifierConfig& config) {
  LinearParams params;
  params.featurizer.dims =
      static_cast<std::uint32_t>(config.extra_u64("linear.dims", 8192));
  params.featurizer.ngram =
      static_cast<int>(config.extra_u64("linear.ngram", 2));
  params.featurizer.salt = config.extra_u64("linear.salt", config.seed);
  const auto steps = config.extra_u64("linear.steps", 200);
  const double step_size = config.extra_double("linear.step_size", 2.0);
  const double l2 = config.extra_double("linear.l2", 1e-6);
  if (params.featurizer.dims == 0) throw ConfigError("linear.dims must be > 0");

  const size_t n_classes = dataset.schema.num_classes();
  const size_t n = dataset.size();
  params.weights.assign(n_classes,
                        std::vector<double>(params.featurizer.dims, 0.0));
  params.bias.assign(n_classes, 0.0);

  std::vector<std::vector<std::pair<std::uint32_t, double>>> x;
  std::vector<size_t> y;
  x.reserve(n);
  y.reserve(n);
  for (const LabeledSample& s : dataset.samples) {
    x.push_back(params.featurizer.features(s.text));
    y.push_back(static_cast<size_t>(dataset.schema.index_of(s.label)));
  }

  // Full-batch gradient descent on softmax cross-entropy from a zero start.
  // No randomness anywhere, so fit + predict is a pure function of inputs.
  std::vector<std::vector<double>> grad_w(
      n_classes, std::vector<double>(params.featurizer.dims, 0.0));
  std::vector<double> grad_b(n_classes, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::uint64_t step = 0; step < steps; ++step) {
    for (auto& row : grad_w) std::fill(row.begin(), row.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);

    for (size_t i = 0; i < n; ++i) {
      const ProbVector p = softmax_probs(params, x[i]);
      for (size_t c = 0; c < n_classes; ++c) {
        const double err = (p.values[c] - (c == y[i] ? 1.0 : 0.0)) * inv_n;
        grad_b[c] += err;
        for (const auto& [f, v] : x[i]) grad_w[c][f] += err * v;
      }
    }
    for (size_t c = 0; c < n_classes; ++c) {
      params.bias[c] -= step_size * grad_b[c];
      for (std::uint32_t f = 0; f < params.featurizer.dims; ++f) {
        params.weights[c][f] -=
            step_size * (grad_w[c][f] + l2 * params.weights[c][f]);
      }
    }
  }

  return std::make_unique<LinearClassifier>(
      dataset.schema, config, training_fingerprint(dataset, config),
      std::move(params));
}

std::unique_ptr<TrainedClassifier> load_linear(const std::filesystem::path& dir,
                                               TaskSchema schema,
                                               ClassifierConfig config,
                                               std::string fingerprint) {
  nlohmann::json model = nlohmann::json::parse(util::read_file(dir / "model.json"));
  LinearParams params;
  params.featurizer.dims = model["dims"].get<std::uint32_t>();
  params.featurizer.ngram = model["ngram"].get<int>();
  params.featurizer.salt = model["salt"].get<std::uint64_t>();
  params.weights = model["weights"].get<std::vector<std::vector<double>>>();
  params.bias = model["bias"].get<std::vector<double>>();
  if (params.bias.size() != schema.num_classes()) {
    throw DataError("checkpoint class count does not match schema");
  }
  return std::make_unique<LinearClassifier>(std::move(schema),
                                            std::move(config),
                                            std::move(fingerprint),
                                            std::move(params));
}

}  // namespace edos::backends
