#include "salesgen/remote_backend.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "salesgen/text_norm.hpp"

namespace salesgen {

namespace {

nlohmann::ordered_json decoding_json(const DecodingConfig& config) {
  return {{"top_k", config.top_k},
          {"top_p", config.top_p},
          {"max_new_tokens", config.max_new_tokens},
          {"seed", config.seed}};
}

}  // namespace

RemoteBackend::RemoteBackend(BackendDescriptor descriptor)
    : descriptor_(std::move(descriptor)) {
  if (descriptor_.endpoint.empty()) {
    throw std::invalid_argument("remote backend requires an endpoint");
  }
}

std::string RemoteBackend::post_json(const std::string& body) const {
  const int attempts = std::max(1, descriptor_.retries);
  int backoff_ms = std::max(0, descriptor_.backoff_ms);
  std::string last_error;

  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1 && backoff_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
    httplib::Client client(descriptor_.endpoint);
    client.set_connection_timeout(0, descriptor_.timeout_ms * 1000LL);
    client.set_read_timeout(0, descriptor_.timeout_ms * 1000LL);
    auto res = client.Post("/", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    return res->body;
  }
  throw TransportError("remote backend unreachable (" + last_error + ") after " +
                           std::to_string(attempts) + " attempts: " + descriptor_.endpoint,
                       descriptor_.endpoint, attempts);
}

std::string RemoteBackend::chat_reply(std::span<const Turn> context,
                                      std::span<const std::string> persona,
                                      const DecodingConfig& config) const {
  if (context.empty() && persona.empty()) {
    throw std::invalid_argument("chat_reply requires context or persona");
  }
  config.check();
  nlohmann::ordered_json turns = nlohmann::ordered_json::array();
  for (const Turn& turn : context) {
    turns.push_back({{"speaker", to_string(turn.speaker)}, {"text", turn.text}});
  }
  nlohmann::ordered_json request{
      {"task", "chat"},
      {"inputs", {{"context", std::move(turns)},
                  {"persona", std::vector<std::string>(persona.begin(), persona.end())}}},
      {"config", decoding_json(config)}};

  nlohmann::json response = nlohmann::json::parse(post_json(request.dump()));
  const std::string output = normalize_whitespace(response.at("output").get<std::string>());
  if (output.empty()) throw GenerationError("remote chat backend returned an empty utterance");
  return output;
}

QAAnswer RemoteBackend::answer_question(const std::string& context_text,
                                        const std::string& question) const {
  if (context_text.empty()) throw std::invalid_argument("context must be non-empty");
  if (question.empty()) throw std::invalid_argument("question must be non-empty");
  nlohmann::ordered_json request{
      {"task", "qa"},
      {"inputs", {{"context", context_text}, {"question", question}}},
      {"config", decoding_json(descriptor_.decoding)}};

  nlohmann::json response = nlohmann::json::parse(post_json(request.dump()));
  const auto& output = response.at("output");
  const std::string label = to_lower(output.at("label").get<std::string>());
  const double confidence = output.at("confidence").get<double>();
  if (label != "yes" && label != "no") {
    throw GenerationError("remote qa backend returned an unknown label: " + label);
  }
  if (confidence < 0.0 || confidence > 1.0) {
    throw GenerationError("remote qa backend confidence out of [0,1]");
  }
  return {label == "yes" ? QALabel::Yes : QALabel::No, confidence};
}

std::vector<std::string> RemoteBackend::paraphrase(const std::string& question, int n) const {
  if (question.empty()) throw std::invalid_argument("question must be non-empty");
  if (n <= 0) throw std::invalid_argument("paraphrase count must be positive");
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nlohmann::ordered_json request{
        {"task", "paraphrase"},
        {"inputs", {{"question", question}, {"index", i}, {"n", n}}},
        {"config", decoding_json(descriptor_.decoding)}};
    nlohmann::json response = nlohmann::json::parse(post_json(request.dump()));
    std::string variant = normalize_whitespace(response.at("output").get<std::string>());
    if (variant.empty()) throw GenerationError("remote paraphrase backend returned empty output");
    out.push_back(std::move(variant));
  }
  return out;
}

std::string RemoteBackend::generate(const std::string& source,
                                    const DecodingConfig& config) const {
  if (source.empty()) throw std::invalid_argument("source must be non-empty");
  config.check();
  nlohmann::ordered_json request{{"task", "seq2seq"},
                                 {"inputs", {{"source", source}}},
                                 {"config", decoding_json(config)}};
  nlohmann::json response = nlohmann::json::parse(post_json(request.dump()));
  const std::string output = normalize_whitespace(response.at("output").get<std::string>());
  if (output.empty()) throw GenerationError("remote seq2seq backend returned empty output");
  return output;
}

}  // namespace salesgen
