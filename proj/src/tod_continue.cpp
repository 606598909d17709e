#include "salesgen/tod_continue.hpp"

#include <algorithm>

#include "salesgen/hashing.hpp"
#include "salesgen/text_norm.hpp"

namespace salesgen {

int SgdIndex::bucket_size(const std::string& intent) const {
  auto it = buckets.find(intent);
  return it == buckets.end() ? 0 : static_cast<int>(it->second.size());
}

SgdIndex index_sgd(const SgdCorpus& corpus, const std::vector<IntentLabel>& targets) {
  SgdIndex index;
  index.intent_descriptions = corpus.intent_descriptions;
  for (const SgdDialogue& dialogue : corpus.dialogues) {
    const bool has_user_turn = std::any_of(
        dialogue.turns.begin(), dialogue.turns.end(),
        [](const SgdTurn& t) { return t.speaker == Speaker::User && !t.text.empty(); });
    if (!has_user_turn) {
      ++index.excluded;
      continue;
    }
    const std::set<std::string> intents = dialogue.intent_set();
    bool matched = false;
    for (const IntentLabel& target : targets) {
      if (intents.count(target.name)) {
        index.buckets[target.name].push_back(dialogue);
        matched = true;
      }
    }
    if (!matched) ++index.excluded;
  }
  return index;
}

void TerminationPolicy::check() const {
  if (keywords.empty()) throw std::invalid_argument("termination keywords must be non-empty");
  if (max_turns < 2) throw std::invalid_argument("max_turns must be >= 2");
}

std::string to_string(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::Keyword: return "KEYWORD";
    case TerminationKind::EndToken: return "END_TOKEN";
    case TerminationKind::Repetition: return "REPETITION";
    case TerminationKind::MaxTurns: return "MAX_TURNS";
  }
  return "MAX_TURNS";
}

std::optional<TerminationReason> should_terminate(const std::vector<Turn>& turns,
                                                  const TerminationPolicy& policy) {
  if (turns.empty()) return std::nullopt;
  const int last = static_cast<int>(turns.size()) - 1;
  const Turn& latest = turns[last];

  for (const std::string& keyword : policy.keywords) {
    if (contains_word(latest.text, keyword)) {
      return TerminationReason{TerminationKind::Keyword, last, keyword};
    }
  }

  if (!policy.end_token.empty() &&
      latest.text.find(policy.end_token) != std::string::npos) {
    return TerminationReason{TerminationKind::EndToken, last, policy.end_token};
  }

  const std::string normalized = normalize_for_match(latest.text);
  for (int i = 0; i < last; ++i) {
    if (turns[i].speaker == latest.speaker &&
        normalize_for_match(turns[i].text) == normalized) {
      return TerminationReason{TerminationKind::Repetition, last,
                               "duplicates turn " + std::to_string(i)};
    }
  }

  const auto tod_turns = std::count_if(turns.begin(), turns.end(), [](const Turn& t) {
    return t.phase == Phase::Tod;
  });
  if (tod_turns >= policy.max_turns) {
    return TerminationReason{TerminationKind::MaxTurns, last,
                             std::to_string(tod_turns) + " TOD turns"};
  }
  return std::nullopt;
}

std::vector<Turn> merge_continuation(const IntentLabel& intent, const SgdIndex& index,
                                     std::int64_t seed) {
  auto it = index.buckets.find(intent.name);
  if (it == index.buckets.end() || it->second.empty()) {
    throw std::runtime_error("no indexed dialogues for intent " + intent.name);
  }
  const auto& bucket = it->second;
  SplitMix64 rng(hash_combine(static_cast<std::uint64_t>(seed), fnv1a64(intent.name)));
  const SgdDialogue& sampled = bucket[rng.bounded(bucket.size())];

  std::size_t first_user = 0;
  while (first_user < sampled.turns.size() &&
         sampled.turns[first_user].speaker != Speaker::User) {
    ++first_user;
  }

  std::vector<Turn> out;
  for (std::size_t i = first_user; i < sampled.turns.size(); ++i) {
    const SgdTurn& turn = sampled.turns[i];
    if (turn.text.empty()) continue;
    out.push_back(Turn{turn.speaker, turn.text, Phase::Tod,
                       {{"sgd_dialogue_id", sampled.id}}});
  }
  return out;
}

std::vector<Turn> simulate_continuation(const std::vector<Turn>& context,
                                        const ChatBackend& user_backend,
                                        const ChatBackend& sales_backend,
                                        const TerminationPolicy& policy,
                                        const DecodingConfig& decoding,
                                        std::optional<Turn> initial_user_turn) {
  policy.check();
  decoding.check();
  if (context.empty() || context.back().phase != Phase::Transition ||
      context.back().speaker != Speaker::Sales) {
    throw std::invalid_argument(
        "simulate_continuation requires a context ending with the transition turn");
  }

  std::vector<Turn> continuation;
  std::vector<Turn> full = context;
  const std::vector<std::string> no_persona;

  auto finish = [&](const TerminationReason& reason) {
    continuation.back().meta["termination"] = to_string(reason.kind);
    continuation.back().meta["termination_detail"] = reason.detail;
  };

  if (initial_user_turn) {
    Turn first = *initial_user_turn;
    first.phase = Phase::Tod;
    first.speaker = Speaker::User;
    continuation.push_back(first);
    full.push_back(std::move(first));
    if (auto reason = should_terminate(continuation, policy)) {
      finish(*reason);
      return continuation;
    }
  }

  while (true) {
    const bool user_speaks = continuation.size() % 2 == 0;  // user opens the task
    const ChatBackend& backend = user_speaks ? user_backend : sales_backend;

    std::string text;
    try {
      text = normalize_whitespace(backend.chat_reply(full, no_persona, decoding));
    } catch (const std::exception& e) {
      throw SimulationError(std::string("simulator backend failed: ") + e.what(),
                            std::move(continuation));
    }
    if (text.empty()) {
      throw SimulationError("simulator backend returned an empty utterance",
                            std::move(continuation));
    }

    Turn turn{user_speaks ? Speaker::User : Speaker::Sales, std::move(text), Phase::Tod,
              {{"backend", backend.name()}}};
    continuation.push_back(turn);
    full.push_back(std::move(turn));

    if (auto reason = should_terminate(continuation, policy)) {
      finish(*reason);
      return continuation;
    }
  }
}

}  // namespace salesgen
