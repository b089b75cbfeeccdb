#include "edospipe/translator.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "edospipe/util.hpp"

namespace edos {

namespace {

void check_request(const TranslationRequest& request) {
  if (request.source_lang == request.target_lang) {
    throw TranslationError("source and target language are both \"" +
                           request.source_lang + "\"");
  }
  if (request.timeout.count() <= 0) {
    throw TranslationError("timeout must be positive");
  }
}

class TestDouble final : public Translator {
 public:
  enum class Kind { Identity, ReverseWords, RotateWords };

  TestDouble(Kind kind, std::string name, std::set<std::string> langs)
      : kind_(kind), name_(std::move(name)), langs_(std::move(langs)) {}

  std::string translate(const TranslationRequest& request) override {
    check_request(request);
    if (!langs_.count(request.source_lang) ||
        !langs_.count(request.target_lang)) {
      throw TranslationError("unsupported language pair " +
                             request.source_lang + "->" + request.target_lang);
    }
    std::vector<std::string> words = util::split_words(request.text);
    switch (kind_) {
      case Kind::Identity:
        break;
      case Kind::ReverseWords:
        std::reverse(words.begin(), words.end());
        break;
      case Kind::RotateWords:
        if (words.size() > 1) {
          std::rotate(words.begin(), words.begin() + 1, words.end());
        }
        break;
    }
    return util::join(words, " ");
  }

  HealthStatus health_check() const override { return {}; }
  std::string name() const override { return name_; }

 private:
  Kind kind_;
  std::string name_;
  std::set<std::string> langs_;
};

class RemoteTranslator final : public Translator {
 public:
  explicit RemoteTranslator(std::string endpoint)
      : endpoint_(std::move(endpoint)) {
    if (endpoint_.rfind("http://", 0) != 0 &&
        endpoint_.rfind("https://", 0) != 0) {
      endpoint_ = "http://" + endpoint_;
    }
  }

  std::string translate(const TranslationRequest& request) override {
    check_request(request);
    const nlohmann::json body{{"text", request.text},
                              {"source", request.source_lang},
                              {"target", request.target_lang}};
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= request.retry_budget; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10 * attempt));
      }
      httplib::Client client(endpoint_);
      client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(
                                        request.timeout) +
                                    std::chrono::seconds(1));
      client.set_read_timeout(request.timeout);

      auto res = client.Post("/translate", payload, "application/json");
      if (!res) {
        last_error = "connection failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 400 || res->status == 422) {
        // Malformed or unsupported request; retrying cannot help.
        throw TranslationError("translation rejected (" +
                               std::to_string(res->status) + "): " + res->body);
      }
      if (res->status != 200) {
        last_error = "status " + std::to_string(res->status);
        continue;
      }
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.contains("text") ||
          !reply["text"].is_string()) {
        last_error = "malformed response body";
        continue;
      }
      return reply["text"].get<std::string>();
    }
    throw TranslationError("translation failed after " +
                           std::to_string(request.retry_budget + 1) +
                           " attempts: " + last_error);
  }

  HealthStatus health_check() const override {
    httplib::Client client(endpoint_);
    client.set_connection_timeout(std::chrono::seconds(2));
    client.set_read_timeout(std::chrono::seconds(2));
    auto res = client.Get("/health");
    if (!res) {
      return {HealthState::Unhealthy,
              "unreachable: " + httplib::to_string(res.error())};
    }
    if (res->status != 200) {
      return {HealthState::Unhealthy, "status " + std::to_string(res->status)};
    }
    return {};
  }

  std::string name() const override { return "remote:" + endpoint_; }

 private:
  std::string endpoint_;
};

}  // namespace

std::unique_ptr<Translator> make_test_double(const std::string& kind,
                                             std::set<std::string> langs) {
  if (kind == "identity") {
    return std::make_unique<TestDouble>(TestDouble::Kind::Identity, kind,
                                        std::move(langs));
  }
  if (kind == "reverse-words") {
    return std::make_unique<TestDouble>(TestDouble::Kind::ReverseWords, kind,
                                        std::move(langs));
  }
  if (kind == "rotate-words") {
    return std::make_unique<TestDouble>(TestDouble::Kind::RotateWords, kind,
                                        std::move(langs));
  }
  throw ConfigError("unknown translator test double: " + kind);
}

std::unique_ptr<Translator> make_remote_translator(const std::string& endpoint) {
  return std::make_unique<RemoteTranslator>(endpoint);
}

std::unique_ptr<Translator> make_translator(const std::string& spec) {
  if (spec.rfind("remote:", 0) == 0) {
    return make_remote_translator(spec.substr(7));
  }
  return make_test_double(spec);
}

}  // namespace edos
