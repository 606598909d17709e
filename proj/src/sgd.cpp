#include "salesgen/sgd.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "salesgen/text_norm.hpp"

namespace salesgen {

namespace fs = std::filesystem;

std::set<std::string> SgdDialogue::intent_set() const {
  std::set<std::string> intents;
  for (const SgdTurn& turn : turns) {
    intents.insert(turn.active_intents.begin(), turn.active_intents.end());
  }
  return intents;
}

namespace {

std::string sanitize_slot_name(const std::string& name) {
  std::string out;
  for (char c : to_lower(name)) {
    out.push_back((c >= 'a' && c <= 'z') || c == '_' ? c : '_');
  }
  return out.empty() ? std::string("_") : out;
}

struct SlotSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::string slot;
};

std::string delexicalize(const std::string& utterance, std::vector<SlotSpan> spans) {
  if (spans.empty()) return utterance;
  std::sort(spans.begin(), spans.end(),
            [](const SlotSpan& a, const SlotSpan& b) { return a.start > b.start; });
  std::string text = utterance;
  for (const SlotSpan& span : spans) {
    if (span.end > text.size() || span.start >= span.end) continue;
    text.replace(span.start, span.end - span.start, "[" + sanitize_slot_name(span.slot) + "]");
  }
  return text;
}

SgdTurn parse_turn(const nlohmann::json& turn, const std::string& where) {
  SgdTurn out;
  const std::string speaker = turn.at("speaker").get<std::string>();
  if (speaker == "USER") {
    out.speaker = Speaker::User;
  } else if (speaker == "SYSTEM" || speaker == "SALES") {
    out.speaker = Speaker::Sales;
  } else {
    throw SgdParseError(where + ": unknown speaker " + speaker);
  }

  const std::string utterance = turn.at("utterance").get<std::string>();
  std::vector<SlotSpan> spans;
  if (auto frames = turn.find("frames"); frames != turn.end()) {
    for (const auto& frame : *frames) {
      if (auto slots = frame.find("slots"); slots != frame.end()) {
        for (const auto& slot : *slots) {
          if (!slot.contains("start") || !slot.contains("exclusive_end")) continue;
          spans.push_back(SlotSpan{slot.at("start").get<std::size_t>(),
                                   slot.at("exclusive_end").get<std::size_t>(),
                                   slot.at("slot").get<std::string>()});
        }
      }
      if (out.speaker == Speaker::User) {
        if (auto state = frame.find("state"); state != frame.end()) {
          if (auto intent = state->find("active_intent"); intent != state->end()) {
            const std::string name = intent->get<std::string>();
            if (!name.empty() && name != "NONE") out.active_intents.insert(name);
          }
        }
      }
    }
  }
  out.text = normalize_whitespace(delexicalize(utterance, std::move(spans)));
  return out;
}

void parse_dialogue_file(const std::string& path, SgdCorpus& corpus) {
  std::ifstream in(path);
  if (!in) throw SgdParseError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw SgdParseError(path + ": " + e.what());
  }
  if (!doc.is_array()) throw SgdParseError(path + ": expected an array of dialogues");

  for (std::size_t d = 0; d < doc.size(); ++d) {
    const std::string where = path + " dialogue " + std::to_string(d);
    try {
      SgdDialogue dialogue;
      dialogue.id = doc[d].value("dialogue_id", where);
      const auto& turns = doc[d].at("turns");
      for (std::size_t t = 0; t < turns.size(); ++t) {
        dialogue.turns.push_back(
            parse_turn(turns[t], where + " turn " + std::to_string(t)));
      }
      corpus.dialogues.push_back(std::move(dialogue));
    } catch (const nlohmann::json::exception& e) {
      throw SgdParseError(where + ": " + e.what());
    }
  }
}

void parse_schema_file(const std::string& path, SgdCorpus& corpus) {
  std::ifstream in(path);
  if (!in) return;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw SgdParseError(path + ": " + e.what());
  }
  if (!doc.is_array()) return;
  for (const auto& service : doc) {
    if (auto intents = service.find("intents"); intents != service.end()) {
      for (const auto& intent : *intents) {
        if (intent.contains("name") && intent.contains("description")) {
          corpus.intent_descriptions[intent.at("name").get<std::string>()] =
              intent.at("description").get<std::string>();
        }
      }
    }
  }
}

}  // namespace

SgdCorpus load_sgd_corpus(const std::string& path) {
  SgdCorpus corpus;
  if (fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("dialogues", 0) == 0 && entry.path().extension() == ".json") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw SgdParseError("no dialogues_*.json files under " + path);
    for (const std::string& file : files) parse_dialogue_file(file, corpus);
    parse_schema_file((fs::path(path) / "schema.json").string(), corpus);
  } else if (fs::exists(path)) {
    parse_dialogue_file(path, corpus);
  } else {
    throw SgdParseError("no such file or directory: " + path);
  }
  return corpus;
}

std::vector<AnnotatedDialogue> to_annotated(const SgdCorpus& corpus) {
  std::vector<AnnotatedDialogue> out;
  out.reserve(corpus.dialogues.size());
  for (const SgdDialogue& dialogue : corpus.dialogues) {
    AnnotatedDialogue annotated;
    annotated.id = dialogue.id;
    for (const SgdTurn& turn : dialogue.turns) {
      annotated.turns.push_back(AnnotatedTurn{turn.speaker, turn.text, turn.active_intents});
    }
    out.push_back(std::move(annotated));
  }
  return out;
}

}  // namespace salesgen
