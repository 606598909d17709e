#include "salesgen/transition.hpp"

#include <cctype>
#include <fstream>

#include <json.hpp>

#include "salesgen/hashing.hpp"
#include "salesgen/text_norm.hpp"

namespace salesgen {

std::string template_transition_from_description(const std::string& description) {
  std::string slot = normalize_whitespace(description);
  if (slot.empty()) throw std::invalid_argument("intent description is empty");
  while (!slot.empty() && slot.back() == '.') slot.pop_back();
  if (slot.empty()) throw std::invalid_argument("intent description is empty");
  slot[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(slot[0])));
  return "Do you want to " + slot + "?";
}

std::string template_transition(const IntentLabel& intent) {
  return template_transition_from_description(intent.description);
}

TripleBuildReport build_training_triples(const std::vector<Dialogue>& dialogues) {
  TripleBuildReport report;
  for (const Dialogue& dialogue : dialogues) {
    int transition_index = -1;
    int transition_count = 0;
    for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
      if (dialogue.turns[i].phase == Phase::Transition) {
        transition_index = static_cast<int>(i);
        ++transition_count;
      }
    }
    if (transition_count != 1) {
      report.skipped_ids.push_back(dialogue.id);
      continue;
    }

    std::string past;
    for (int i = 0; i < transition_index; ++i) {
      const Turn& t = dialogue.turns[i];
      if (t.speaker == Speaker::User && t.phase == Phase::Chitchat) past = t.text;
    }
    std::string future;
    for (std::size_t i = transition_index + 1; i < dialogue.turns.size(); ++i) {
      const Turn& t = dialogue.turns[i];
      if (t.speaker == Speaker::User && t.phase == Phase::Tod) {
        future = t.text;
        break;
      }
    }
    if (past.empty() || future.empty()) {
      report.skipped_ids.push_back(dialogue.id);
      continue;
    }
    report.triples.push_back(
        TransitionTriple{past, future, dialogue.turns[transition_index].text});
  }
  return report;
}

OttersAdaptReport adapt_otters(const std::vector<TopicTransitionRecord>& records) {
  OttersAdaptReport report;
  for (const TopicTransitionRecord& record : records) {
    if (normalize_whitespace(record.topic_a_utterance).empty() ||
        normalize_whitespace(record.bridge).empty() ||
        normalize_whitespace(record.topic_b_utterance).empty()) {
      ++report.skipped;
      continue;
    }
    report.triples.push_back(TransitionTriple{record.topic_a_utterance,
                                              record.topic_b_utterance, record.bridge});
  }
  return report;
}

std::vector<TopicTransitionRecord> load_otters_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<TopicTransitionRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (normalize_whitespace(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    TopicTransitionRecord record;
    if (fields.size() >= 3) {
      record.topic_a_utterance = normalize_whitespace(fields[0]);
      record.bridge = normalize_whitespace(fields[1]);
      record.topic_b_utterance = normalize_whitespace(fields[2]);
    }
    records.push_back(std::move(record));  // malformed rows filtered by adapt_otters
  }
  return records;
}

std::string encode_triple_source(const std::string& past, const std::string& future) {
  if (past.empty() || future.empty()) {
    throw std::invalid_argument("encode_triple_source requires non-empty inputs");
  }
  return "past: " + past + " future: " + future;
}

std::vector<std::string> generate_transitions(const std::string& past,
                                              const std::string& future,
                                              const Seq2SeqBackend& backend,
                                              const DecodingConfig& config,
                                              int n_candidates) {
  if (n_candidates < 1) throw std::invalid_argument("n_candidates must be positive");
  config.check();
  const std::string source = encode_triple_source(past, future);
  std::vector<std::string> candidates;
  candidates.reserve(static_cast<std::size_t>(n_candidates));
  for (int i = 0; i < n_candidates; ++i) {
    DecodingConfig sub = config;
    sub.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    candidates.push_back(backend.generate(source, sub));
  }
  return candidates;
}

void write_training_triples(const std::string& path,
                            const std::vector<TransitionTriple>& triples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (const TransitionTriple& triple : triples) {
    nlohmann::ordered_json obj{
        {"source", encode_triple_source(triple.past, triple.future)},
        {"target", triple.target}};
    out << obj.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace salesgen
