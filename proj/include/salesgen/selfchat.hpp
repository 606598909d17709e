#pragma once

#include <functional>
#include <string>
#include <vector>

#include "salesgen/backends.hpp"
#include "salesgen/dialogue.hpp"

namespace salesgen {

struct Persona {
  std::vector<std::string> sentences;  // 1 to 5 non-empty sentences
  Speaker role = Speaker::User;

  void check() const;
};

struct SelfChatConfig {
  int max_chitchat_turns = 12;
  int min_chitchat_turns = 4;
  DecodingConfig decoding = DecodingConfig::simulator_defaults();

  void check() const;
};

// Called after USER turns once the minimum turn count is reached; returning
// true ends the chit-chat phase.
using StopHook = std::function<bool(const std::vector<Turn>&)>;

// Thrown when the chat backend fails mid-run; carries the turns produced so
// far for diagnostics.
struct SelfChatError : std::runtime_error {
  SelfChatError(const std::string& msg, std::vector<Turn> partial_)
      : std::runtime_error(msg), partial(std::move(partial_)) {}

  std::vector<Turn> partial;
};

// Persona-conditioned open-domain self-chat. The sales agent opens; turns
// alternate and all carry phase CHITCHAT.
std::vector<Turn> run_selfchat(const Persona& user_persona,
                               const Persona& sales_persona,
                               const SelfChatConfig& config,
                               const ChatBackend& backend,
                               const StopHook& stop_hook);

// One persona per line, sentences separated by " | ". Blank lines skipped.
std::vector<std::vector<std::string>> load_persona_pool(const std::string& path);

// Built-in pool used when no persona file is configured, so the pipeline is
// runnable out of the box with mock backends.
const std::vector<std::vector<std::string>>& default_persona_pool();

}  // namespace salesgen
