#pragma once

#include <string>
#include <vector>

#include "salesgen/backends.hpp"
#include "salesgen/dialogue.hpp"

namespace salesgen {

// (past utterance, transition, future utterance): the last user chit-chat
// line, the bridging sales line, and the first user task-oriented line.
struct TransitionTriple {
  std::string past;
  std::string future;
  std::string target;

  bool operator==(const TransitionTriple&) const = default;
};

// "Do you want to {description}?" with the description's first letter
// lowercased and any trailing period dropped. Pass the richer ontology
// description when one is available; the short intent description otherwise.
std::string template_transition(const IntentLabel& intent);
std::string template_transition_from_description(const std::string& description);

struct TripleBuildReport {
  std::vector<TransitionTriple> triples;
  std::vector<std::string> skipped_ids;  // dialogues violating preconditions
};

// One triple per dialogue that has exactly one transition turn with a user
// chit-chat turn before it and a user TOD turn after it; others are skipped
// and reported.
TripleBuildReport build_training_triples(const std::vector<Dialogue>& dialogues);

// External topic-transition record: two utterances on different topics and
// the human-written bridge between them.
struct TopicTransitionRecord {
  std::string topic_a_utterance;
  std::string bridge;
  std::string topic_b_utterance;
};

struct OttersAdaptReport {
  std::vector<TransitionTriple> triples;
  int skipped = 0;
};

OttersAdaptReport adapt_otters(const std::vector<TopicTransitionRecord>& records);

// Tab-separated layout: topic-A utterance, bridge, topic-B utterance per
// line. Rows with fewer than 3 non-empty fields count as malformed.
std::vector<TopicTransitionRecord> load_otters_tsv(const std::string& path);

// Canonical source encoding used identically at training-data export and at
// generation time. Decoding (for checks) splits on the right-most separator,
// so a past containing the separator text still round-trips.
std::string encode_triple_source(const std::string& past, const std::string& future);

// n sampled candidates from the canonical encoding, one per derived
// sub-seed. Duplicates are possible; order is preserved.
std::vector<std::string> generate_transitions(const std::string& past,
                                              const std::string& future,
                                              const Seq2SeqBackend& backend,
                                              const DecodingConfig& config,
                                              int n_candidates = 5);

// Training triples export: {"source": "past: ... future: ...", "target": ...}
// one JSON object per line.
void write_training_triples(const std::string& path,
                            const std::vector<TransitionTriple>& triples);

// Settings recorded for external trainers of the transition model.
struct TransitionTrainDefaults {
  double learning_rate = 5e-5;
  int batch_size = 16;
  int epochs = 5;
  std::string optimizer = "adafactor";
  std::string selection = "lowest dev loss";
};

}  // namespace salesgen
