#include <algorithm>
#include <chrono>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "backends.hpp"
#include "edospipe/util.hpp"

namespace edos::backends {

namespace {

// The pretrained encoders run out of process (they need a GPU runtime the
// pipeline itself does not link). This backend speaks a small JSON protocol
// to an inference server:
//   POST /fine_tune {task, classes, samples, config} -> {model_id}
//   POST /predict   {model_id, texts}                -> {probs}
//   GET  /health                                     -> 200
struct ServerOptions {
  std::string endpoint;
  std::string base_model;
  std::chrono::milliseconds predict_timeout;
  std::chrono::milliseconds train_timeout;
};

ServerOptions server_options(const ClassifierConfig& config) {
  ServerOptions opts;
  opts.endpoint = config.extra("endpoint", "");
  if (opts.endpoint.empty()) {
    throw ConfigError(
        "neural-encoder backend needs an \"endpoint\" extra "
        "(inference server address)");
  }
  if (opts.endpoint.rfind("http://", 0) != 0 &&
      opts.endpoint.rfind("https://", 0) != 0) {
    opts.endpoint = "http://" + opts.endpoint;
  }
  opts.base_model = config.extra("base_model", "bertweet-large");
  opts.predict_timeout = std::chrono::milliseconds(
      config.extra_u64("predict_timeout_ms", 120000));
  opts.train_timeout = std::chrono::milliseconds(
      config.extra_u64("train_timeout_ms", 24UL * 3600UL * 1000UL));
  return opts;
}

httplib::Client make_client(const ServerOptions& opts,
                            std::chrono::milliseconds timeout) {
  httplib::Client client(opts.endpoint);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

nlohmann::json post_json(const ServerOptions& opts, const std::string& path,
                         const nlohmann::json& body,
                         std::chrono::milliseconds timeout) {
  auto client = make_client(opts, timeout);
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw DataError("inference server unreachable (" + opts.endpoint + path +
                    "): " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw DataError("inference server error " + std::to_string(res->status) +
                    " on " + path + ": " + res->body);
  }
  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) {
    throw DataError("malformed JSON from inference server on " + path);
  }
  return reply;
}

class NeuralEncoderClassifier final : public TrainedClassifier {
 public:
  NeuralEncoderClassifier(TaskSchema schema, ClassifierConfig config,
                          std::string fingerprint, ServerOptions opts,
                          std::string model_id)
      : TrainedClassifier(std::move(schema), std::move(config),
                          std::move(fingerprint)),
        opts_(std::move(opts)),
        model_id_(std::move(model_id)) {}

  std::string backend_name() const override { return kNeuralEncoder; }

  std::vector<ProbVector> predict_proba(
      const std::vector<std::string>& texts) const override {
    if (texts.empty()) return {};
    const nlohmann::json reply =
        post_json(opts_, "/predict",
                  {{"model_id", model_id_}, {"texts", texts}},
                  opts_.predict_timeout);
    if (!reply.contains("probs") || !reply["probs"].is_array() ||
        reply["probs"].size() != texts.size()) {
      throw DataError("inference server returned a malformed probs matrix");
    }

    std::vector<ProbVector> out;
    out.reserve(texts.size());
    for (const auto& row : reply["probs"]) {
      ProbVector p;
      p.values = row.get<std::vector<double>>();
      if (p.values.size() != schema_.num_classes()) {
        throw DataError("probability row width does not match schema");
      }
      double sum = 0.0;
      for (double v : p.values) {
        if (!std::isfinite(v) || v < -1e-9) {
          throw DataError("invalid probability from inference server");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-4) {
        throw DataError("probability row sums to " + util::format_double(sum));
      }
      for (double& v : p.values) v = std::max(v, 0.0) / sum;
      out.push_back(std::move(p));
    }
    return out;
  }

  const std::string& model_id() const { return model_id_; }

 protected:
  void save_backend_state(const std::filesystem::path& dir) const override {
    nlohmann::json state{{"endpoint", opts_.endpoint},
                         {"model_id", model_id_},
                         {"base_model", opts_.base_model}};
    util::write_file(dir / "remote.json", state.dump(2) + "\n");
  }

 private:
  ServerOptions opts_;
  std::string model_id_;
};

}  // namespace

std::unique_ptr<TrainedClassifier> fit_neural(const Dataset& dataset,
                                              const ClassifierConfig& config) {
  const ServerOptions opts = server_options(config);

  nlohmann::json samples = nlohmann::json::array();
  for (const LabeledSample& s : dataset.samples) {
    samples.push_back({{"id", s.id}, {"text", s.text}, {"label", s.label}});
  }
  const nlohmann::json request{
      {"task", dataset.schema.task_id},
      {"classes", dataset.schema.classes},
      {"samples", std::move(samples)},
      {"config",
       {{"base_model", opts.base_model},
        {"learning_rate", config.learning_rate},
        {"batch_size", config.batch_size},
        {"epochs", config.epochs},
        {"optimizer", config.optimizer_name},
        {"seed", config.seed}}}};

  const nlohmann::json reply =
      post_json(opts, "/fine_tune", request, opts.train_timeout);
  if (!reply.contains("model_id") || !reply["model_id"].is_string()) {
    throw DataError("inference server did not return a model_id");
  }
  return std::make_unique<NeuralEncoderClassifier>(
      dataset.schema, config, training_fingerprint(dataset, config), opts,
      reply["model_id"].get<std::string>());
}

std::unique_ptr<TrainedClassifier> load_neural(const std::filesystem::path& dir,
                                               TaskSchema schema,
                                               ClassifierConfig config,
                                               std::string fingerprint) {
  nlohmann::json state =
      nlohmann::json::parse(util::read_file(dir / "remote.json"));
  config.extras["endpoint"] = state["endpoint"].get<std::string>();
  config.extras["base_model"] = state["base_model"].get<std::string>();
  ServerOptions opts = server_options(config);
  return std::make_unique<NeuralEncoderClassifier>(
      std::move(schema), std::move(config), std::move(fingerprint),
      std::move(opts), state["model_id"].get<std::string>());
}

}  // namespace edos::backends
