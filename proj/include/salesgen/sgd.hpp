#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "salesgen/dialogue.hpp"
#include "salesgen/intent_detect.hpp"

// Reader for the schema-guided dialogue file layout: a directory of
// dialogues_*.json files plus an optional schema.json. Utterances with slot
// span annotations are delexicalized on load ("[slot_name]" placeholders);
// already-delexicalized text passes through unchanged.

namespace salesgen {

struct SgdParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SgdTurn {
  Speaker speaker = Speaker::User;
  std::string text;                      // delexicalized
  std::set<std::string> active_intents;  // user turns only; "NONE" excluded
};

struct SgdDialogue {
  std::string id;
  std::vector<SgdTurn> turns;

  std::set<std::string> intent_set() const;
};

struct SgdCorpus {
  std::vector<SgdDialogue> dialogues;
  std::map<std::string, std::string> intent_descriptions;  // from schema.json
};

SgdCorpus load_sgd_corpus(const std::string& path);

// Per-user-turn annotations in the shape the TOD-QA builder consumes.
std::vector<AnnotatedDialogue> to_annotated(const SgdCorpus& corpus);

}  // namespace salesgen
