#pragma once

#include <chrono>
#include <memory>
#include <set>
#include <string>

namespace edos {

struct TranslationRequest {
  std::string text;
  std::string source_lang;
  std::string target_lang;
  std::chrono::milliseconds timeout{5000};
  int retry_budget = 2;
};

enum class HealthState { Healthy, Unhealthy };

struct HealthStatus {
  HealthState state = HealthState::Healthy;
  std::string cause;

  bool healthy() const { return state == HealthState::Healthy; }
};

// Boundary to a machine-translation backend. translate() throws
// TranslationError once the per-request retry budget is exhausted; augment
// consumes that as a per-sentence skip, never a batch abort.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::string translate(const TranslationRequest& request) = 0;
  virtual HealthStatus health_check() const = 0;
  virtual std::string name() const = 0;
};

// Deterministic in-process doubles used throughout the test suite. All are
// pure functions of the request. Supported languages default to {en,de,ru};
// any other code raises an unsupported-pair error.
//   identity      — returns the text unchanged.
//   reverse-words — reverses word order on every call (round trips are
//                   the identity).
//   rotate-words  — rotates word order left by one on every call (round
//                   trips perturb texts of three or more words).
std::unique_ptr<Translator> make_test_double(
    const std::string& kind,
    std::set<std::string> supported_langs = {"en", "de", "ru"});

// HTTP client for a remote translation service: POST <endpoint>/translate
// with {"text","source","target"}, expecting {"text"}. Retries transient
// failures up to the request's retry budget.
std::unique_ptr<Translator> make_remote_translator(const std::string& endpoint);

// "identity" | "reverse-words" | "rotate-words" | "remote:<endpoint>"
std::unique_ptr<Translator> make_translator(const std::string& spec);

}  // namespace edos
