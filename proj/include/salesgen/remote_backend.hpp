#pragma once

#include <string>

#include "salesgen/backends.hpp"

namespace salesgen {

// HTTP client for a remote inference server. One backend instance serves
// whichever of the four contracts its descriptor's kind allows; requests are
// POSTs with a JSON body {"task", "inputs", "config"} and responses carry
// {"output", "model"}. Failed requests are retried with exponential backoff
// before a TransportError (endpoint + attempt count) is raised.
class RemoteBackend : public ChatBackend,
                      public QaBackend,
                      public ParaphraseBackend,
                      public Seq2SeqBackend {
 public:
  explicit RemoteBackend(BackendDescriptor descriptor);

  std::string chat_reply(std::span<const Turn> context,
                         std::span<const std::string> persona,
                         const DecodingConfig& config) const override;

  QAAnswer answer_question(const std::string& context_text,
                           const std::string& question) const override;

  std::vector<std::string> paraphrase(const std::string& question, int n) const override;

  std::string generate(const std::string& source,
                       const DecodingConfig& config) const override;

  std::string name() const override { return descriptor_.name; }

 private:
  std::string post_json(const std::string& body) const;

  BackendDescriptor descriptor_;
};

}  // namespace salesgen
