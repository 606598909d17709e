#include "salesgen/selfchat.hpp"

#include <fstream>

#include "salesgen/text_norm.hpp"

namespace salesgen {

void Persona::check() const {
  if (sentences.empty() || sentences.size() > 5) {
    throw std::invalid_argument("persona must have 1 to 5 sentences");
  }
  for (const std::string& s : sentences) {
    if (normalize_whitespace(s).empty()) {
      throw std::invalid_argument("persona sentence must be non-empty");
    }
  }
}

void SelfChatConfig::check() const {
  if (max_chitchat_turns < 1) throw std::invalid_argument("max_chitchat_turns must be positive");
  if (min_chitchat_turns < 1) throw std::invalid_argument("min_chitchat_turns must be positive");
  if (min_chitchat_turns > max_chitchat_turns) {
    throw std::invalid_argument("min_chitchat_turns must be <= max_chitchat_turns");
  }
  decoding.check();
}

std::vector<Turn> run_selfchat(const Persona& user_persona,
                               const Persona& sales_persona,
                               const SelfChatConfig& config,
                               const ChatBackend& backend,
                               const StopHook& stop_hook) {
  user_persona.check();
  sales_persona.check();
  config.check();
  if (user_persona.role == sales_persona.role) {
    throw std::invalid_argument("personas must have distinct roles");
  }

  std::vector<Turn> turns;
  turns.reserve(static_cast<std::size_t>(config.max_chitchat_turns));
  while (static_cast<int>(turns.size()) < config.max_chitchat_turns) {
    const bool sales_speaks = turns.size() % 2 == 0;  // sales opens
    const Persona& persona = sales_speaks ? sales_persona : user_persona;

    std::string text;
    try {
      text = backend.chat_reply(turns, persona.sentences, config.decoding);
    } catch (const std::exception& e) {
      throw SelfChatError(std::string("chat backend failed: ") + e.what(), std::move(turns));
    }
    text = normalize_whitespace(text);
    if (text.empty()) {
      throw SelfChatError("chat backend returned an empty utterance", std::move(turns));
    }

    turns.push_back(Turn{sales_speaks ? Speaker::Sales : Speaker::User, std::move(text),
                         Phase::Chitchat, {}});

    // Intent detection only makes sense on user turns, and not before the
    // dialogue has a minimum amount of social content.
    if (!sales_speaks && static_cast<int>(turns.size()) >= config.min_chitchat_turns &&
        stop_hook && stop_hook(turns)) {
      break;
    }
  }
  return turns;
}

std::vector<std::vector<std::string>> load_persona_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open persona file: " + path);
  std::vector<std::vector<std::string>> pool;
  std::string line;
  while (std::getline(in, line)) {
    if (normalize_whitespace(line).empty()) continue;
    std::vector<std::string> sentences;
    std::size_t start = 0;
    while (true) {
      auto sep = line.find(" | ", start);
      std::string sentence = normalize_whitespace(
          line.substr(start, sep == std::string::npos ? sep : sep - start));
      if (!sentence.empty()) sentences.push_back(std::move(sentence));
      if (sep == std::string::npos) break;
      start = sep + 3;
    }
    if (!sentences.empty()) pool.push_back(std::move(sentences));
  }
  if (pool.empty()) throw std::runtime_error("persona file has no personas: " + path);
  return pool;
}

const std::vector<std::vector<std::string>>& default_persona_pool() {
  static const std::vector<std::vector<std::string>> pool = {
      {"I love watching movies.", "I work from home."},
      {"I play the guitar.", "My favorite food is sushi."},
      {"I have a golden retriever.", "I go running every morning."},
      {"I am a student.", "I enjoy museums and art galleries."},
      {"I collect vinyl records.", "I grew up in a small town."},
      {"I like hiking on weekends.", "I drink too much coffee."},
      {"I am learning to paint.", "My family lives abroad."},
      {"I follow basketball.", "I cook dinner most nights."},
      {"I read science fiction.", "I just moved to a new city."},
      {"I sing in a choir.", "I love road trips."},
      {"I am a nurse.", "I garden in my spare time."},
      {"I play chess online.", "I have three siblings."},
  };
  return pool;
}

}  // namespace salesgen
