#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "salesgen/backends.hpp"
#include "salesgen/dialogue.hpp"
#include "salesgen/sgd.hpp"

namespace salesgen {

// Task-oriented dialogues grouped by intent, ready to splice after a
// transition turn. Immutable after build.
struct SgdIndex {
  std::map<std::string, std::vector<SgdDialogue>> buckets;
  std::map<std::string, std::string> intent_descriptions;
  int excluded = 0;  // dialogues with none of the target intents

  bool empty() const { return buckets.empty(); }
  int bucket_size(const std::string& intent) const;
};

// Groups corpus dialogues under every target intent they are annotated
// with; dialogues matching no target intent are counted as excluded.
SgdIndex index_sgd(const SgdCorpus& corpus,
                   const std::vector<IntentLabel>& targets = target_intents());

struct TerminationPolicy {
  std::vector<std::string> keywords = {"bye", "goodbye"};
  std::string end_token = "<END>";
  int max_turns = 30;

  void check() const;
};

enum class TerminationKind { Keyword, EndToken, Repetition, MaxTurns };

std::string to_string(TerminationKind kind);

struct TerminationReason {
  TerminationKind kind = TerminationKind::MaxTurns;
  int turn_index = 0;
  std::string detail;
};

// Checks the latest turn against the policy in priority order
// KEYWORD > END_TOKEN > REPETITION > MAX_TURNS. Repetition means the
// normalized text equals an earlier turn by the same speaker; the turn cap
// counts TOD-phase turns in the given list.
std::optional<TerminationReason> should_terminate(const std::vector<Turn>& turns,
                                                  const TerminationPolicy& policy);

// Samples one indexed dialogue for the intent (seeded, uniform) and returns
// its turns from the first USER turn on, all re-phased as TOD. The caller's
// transition turn plays the sales side, so the splice keeps alternation.
std::vector<Turn> merge_continuation(const IntentLabel& intent, const SgdIndex& index,
                                     std::int64_t seed);

struct SimulationError : std::runtime_error {
  SimulationError(const std::string& msg, std::vector<Turn> partial_)
      : std::runtime_error(msg), partial(std::move(partial_)) {}

  std::vector<Turn> partial;
};

// Self-play between the two task-oriented simulators, user side first,
// until a termination condition fires. The terminating turn is kept and the
// reason recorded in its meta ("termination", "termination_detail"). When
// initial_user_turn is set it is used verbatim as the first user turn (the
// pipeline generates it before re-generating the transition).
std::vector<Turn> simulate_continuation(const std::vector<Turn>& context,
                                        const ChatBackend& user_backend,
                                        const ChatBackend& sales_backend,
                                        const TerminationPolicy& policy,
                                        const DecodingConfig& decoding,
                                        std::optional<Turn> initial_user_turn = {});

// Training settings recorded for external trainers of the two simulators.
struct SimulatorTrainDefaults {
  double learning_rate = 5e-5;
  int batch_size = 16;
  int epochs = 5;
  std::string optimizer = "adafactor";
  std::string base_model = "blenderbot-400m";
};

}  // namespace salesgen
