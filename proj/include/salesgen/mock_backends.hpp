#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "salesgen/backends.hpp"

// Deterministic mock backends. Each one is a pure function of its inputs
// (including the seed), which makes every pipeline output reproducible
// byte-for-byte and lets tests script end-to-end behaviour.

namespace salesgen {

class MockChatBackend : public ChatBackend {
 public:
  MockChatBackend(std::string name, std::vector<std::string> bank);

  // Named utterance banks. The chit-chat bank includes intent-bearing lines
  // (e.g. "go to the movies") so the zero-shot detector has something to
  // find; the sales bank includes closing lines so termination conditions
  // fire naturally during simulation.
  static MockChatBackend chitchat();
  static MockChatBackend tod_user();
  static MockChatBackend tod_sales();

  static const std::vector<std::string>& chitchat_bank();
  static const std::vector<std::string>& tod_user_bank();
  static const std::vector<std::string>& tod_sales_bank();

  std::string chat_reply(std::span<const Turn> context,
                         std::span<const std::string> persona,
                         const DecodingConfig& config) const override;

  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::vector<std::string> bank_;
};

struct QaScriptEntry {
  std::string context_substring;
  std::string question_substring;
  QALabel label = QALabel::Yes;
  double confidence = 0.5;
};

class MockQaBackend : public QaBackend {
 public:
  explicit MockQaBackend(std::vector<QaScriptEntry> script = {});

  // Script covering the six target intents, keyed on trigger substrings that
  // appear in the mock chit-chat bank.
  static MockQaBackend with_default_script();
  static const std::vector<QaScriptEntry>& default_script();

  void add_entry(QaScriptEntry entry) { script_.push_back(std::move(entry)); }

  // First matching (context-substring, question-substring) entry wins;
  // unmatched pairs answer NO with confidence 0.5.
  QAAnswer answer_question(const std::string& context_text,
                           const std::string& question) const override;

  std::string name() const override { return "mock-qa"; }

 private:
  std::vector<QaScriptEntry> script_;
};

class MockParaphraseBackend : public ParaphraseBackend {
 public:
  std::vector<std::string> paraphrase(const std::string& question,
                                      int n) const override;

  std::string name() const override { return "mock-paraphrase"; }
};

class MockSeq2SeqBackend : public Seq2SeqBackend {
 public:
  MockSeq2SeqBackend();
  explicit MockSeq2SeqBackend(std::vector<std::string> bank);

  std::string generate(const std::string& source,
                       const DecodingConfig& config) const override;

  std::string name() const override { return "mock-seq2seq"; }

 private:
  std::vector<std::string> bank_;
};

// Resolves a descriptor to a mock instance; used by the pipeline when the
// descriptor has no endpoint. A mock_script naming an existing file loads
// one bank line (chat) or script entry (qa) per line from it.
std::unique_ptr<ChatBackend> make_mock_chat(const BackendDescriptor& desc);
std::unique_ptr<QaBackend> make_mock_qa(const BackendDescriptor& desc);

}  // namespace salesgen
