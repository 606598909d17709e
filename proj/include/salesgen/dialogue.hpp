#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace salesgen {

enum class Speaker { User, Sales };
enum class Phase { Chitchat, Transition, Tod };
enum class Provenance { MergeSgd, Simulation };

std::string to_string(Speaker s);
std::string to_string(Phase p);
std::string to_string(Provenance p);

struct IntentLabel {
  std::string name;
  std::string description;

  bool operator==(const IntentLabel&) const = default;
};

// The six target intents, in canonical table order. Ties and presentation
// order everywhere in the project follow this ordering.
const std::vector<IntentLabel>& target_intents();

// Index into target_intents() for a known name, or -1.
int target_intent_index(const std::string& name);

struct Turn {
  Speaker speaker = Speaker::User;
  std::string text;
  Phase phase = Phase::Chitchat;
  std::map<std::string, std::string> meta;

  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;
  std::int64_t seed = 0;
  Provenance provenance = Provenance::Simulation;
  std::optional<IntentLabel> intent;
  std::vector<std::string> transition_candidates;  // empty or exactly 5
  std::vector<Turn> turns;

  bool operator==(const Dialogue&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  bool mentions(const std::string& needle) const;
};

// Checks every Dialogue/Turn invariant; reports all violations with turn
// indices. Pure: never throws, identical input gives identical report.
ValidationReport validate(const Dialogue& dialogue);

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One compact JSON object per dialogue (the corpus file holds one per line).
std::string serialize(const Dialogue& dialogue);
Dialogue deserialize(const std::string& json_text);

std::vector<Dialogue> read_corpus(const std::string& path);
void write_corpus(const std::string& path, const std::vector<Dialogue>& corpus);

struct GroupStats {
  int count = 0;
  std::optional<double> avg_turns;  // absent when count == 0
};

struct CorpusStats {
  std::vector<std::pair<std::string, GroupStats>> per_intent;  // canonical order
  GroupStats merge_sgd;
  GroupStats simulation;
  GroupStats total;
};

CorpusStats compute_stats(const std::vector<Dialogue>& corpus);

// Plain-text table with Intent / #Dialogues / Avg Length columns; averages
// are rounded here, at presentation time only.
std::string render_stats_table(const CorpusStats& stats);
std::string stats_to_json(const CorpusStats& stats);

}  // namespace salesgen
