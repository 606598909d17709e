#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "salesgen/dialogue.hpp"

namespace salesgen {

struct DecodingConfig {
  int top_k = 80;
  double top_p = 0.95;
  int max_new_tokens = 128;
  std::int64_t seed = 0;

  // Decoding defaults for the transition generator and the two TOD
  // simulators. The simulators use a larger K for diversity.
  static DecodingConfig transition_defaults() { return {80, 0.95, 128, 0}; }
  static DecodingConfig simulator_defaults() { return {120, 1.0, 128, 0}; }

  void check() const {
    if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
    if (!(top_p > 0.0 && top_p <= 1.0)) throw std::invalid_argument("top_p must be in (0,1]");
    if (max_new_tokens < 1) throw std::invalid_argument("max_new_tokens must be >= 1");
  }

  bool operator==(const DecodingConfig&) const = default;
};

enum class QALabel { Yes, No };

struct QAAnswer {
  QALabel label = QALabel::No;
  double confidence = 0.0;  // in [0,1]
};

enum class BackendKind { Chat, Qa, Paraphrase, Seq2Seq };

std::string to_string(BackendKind kind);
BackendKind backend_kind_from_string(const std::string& s);

// Where a backend role resolves to: a remote endpoint or a mock script.
// Exactly one of endpoint / mock_script drives the instantiation; an empty
// endpoint means mock.
struct BackendDescriptor {
  BackendKind kind = BackendKind::Chat;
  std::string name;
  std::string endpoint;     // "http://host:port" or empty for mock
  std::string mock_script;  // named bank ("chitchat", "tod_user", ...) or file path
  DecodingConfig decoding;
  int timeout_ms = 30000;
  int retries = 3;
  int backoff_ms = 200;
};

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TransportError : BackendError {
  TransportError(const std::string& msg, std::string endpoint_, int attempts_)
      : BackendError(msg), endpoint(std::move(endpoint_)), attempts(attempts_) {}

  std::string endpoint;
  int attempts = 0;
};

struct GenerationError : BackendError {
  using BackendError::BackendError;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  // Next utterance for the agent whose persona is given, conditioned on the
  // conversation so far. Precondition: context or persona non-empty.
  virtual std::string chat_reply(std::span<const Turn> context,
                                 std::span<const std::string> persona,
                                 const DecodingConfig& config) const = 0;

  virtual std::string name() const = 0;
};

class QaBackend {
 public:
  virtual ~QaBackend() = default;

  virtual QAAnswer answer_question(const std::string& context_text,
                                   const std::string& question) const = 0;

  virtual std::string name() const = 0;
};

class ParaphraseBackend {
 public:
  virtual ~ParaphraseBackend() = default;

  // Exactly n non-empty rewrites, none equal to the input after
  // normalization. n must be positive.
  virtual std::vector<std::string> paraphrase(const std::string& question,
                                              int n) const = 0;

  virtual std::string name() const = 0;
};

class Seq2SeqBackend {
 public:
  virtual ~Seq2SeqBackend() = default;

  virtual std::string generate(const std::string& source,
                               const DecodingConfig& config) const = 0;

  virtual std::string name() const = 0;
};

}  // namespace salesgen
