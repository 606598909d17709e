#include "salesgen/intent_detect.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "salesgen/hashing.hpp"
#include "salesgen/text_norm.hpp"

namespace salesgen {

std::vector<std::string> IntentQuestionSet::all_questions() const {
  std::vector<std::string> out;
  out.reserve(1 + paraphrases.size());
  out.push_back(base_question);
  out.insert(out.end(), paraphrases.begin(), paraphrases.end());
  return out;
}

namespace {

const std::map<std::string, std::string>& canonical_questions() {
  static const std::map<std::string, std::string> questions = {
      {"FindMovies", "Is the user asking about finding movies?"},
      {"GetTimesForMovie", "Is the user asking about getting the time for movies?"},
      {"FindAttractions", "Is the user asking about finding attractions?"},
      {"LookupMusic", "Is the user asking about looking up music?"},
      {"PlaySong", "Is the user asking about playing songs?"},
      {"LookupSong", "Is the user asking about looking up songs?"},
  };
  return questions;
}

// Turns the leading verb of a description into its -ing form:
// "find movies to watch" -> "finding movies to watch".
std::string gerund_phrase(const std::string& description) {
  const std::string text = normalize_whitespace(description);
  const auto space = text.find(' ');
  std::string verb = space == std::string::npos ? text : text.substr(0, space);
  const std::string rest = space == std::string::npos ? "" : text.substr(space);

  std::string lower = to_lower(verb);
  auto is_vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; };
  if (lower.size() >= 2 && lower.back() == 'e' && lower[lower.size() - 2] != 'e') {
    lower.pop_back();  // use -> using
  } else if (lower.size() >= 3) {
    const char a = lower[lower.size() - 3];
    const char b = lower[lower.size() - 2];
    const char c = lower.back();
    // Consonant-vowel-consonant: double the final consonant (get -> getting).
    if (!is_vowel(a) && is_vowel(b) && !is_vowel(c) && c != 'w' && c != 'x' && c != 'y') {
      lower.push_back(c);
    }
  }
  return lower + "ing" + rest;
}

}  // namespace

std::vector<IntentQuestionSet> build_question_catalog(const std::vector<IntentLabel>& intents) {
  std::vector<IntentQuestionSet> catalog;
  catalog.reserve(intents.size());
  for (const IntentLabel& intent : intents) {
    if (normalize_whitespace(intent.description).empty()) {
      throw CatalogError("intent has an empty description: " + intent.name);
    }
    IntentQuestionSet set;
    set.intent = intent;
    auto it = canonical_questions().find(intent.name);
    if (it != canonical_questions().end()) {
      set.base_question = it->second;
    } else {
      set.base_question = "Is the user asking about " + gerund_phrase(intent.description) + "?";
    }
    catalog.push_back(std::move(set));
  }
  return catalog;
}

std::vector<IntentQuestionSet> augment_with_paraphrases(
    const std::vector<IntentQuestionSet>& catalog, const ParaphraseBackend& backend,
    int n_per_intent) {
  if (n_per_intent < 0) throw std::invalid_argument("n_per_intent must be non-negative");
  if (n_per_intent == 0) return catalog;

  std::vector<IntentQuestionSet> out;
  out.reserve(catalog.size());
  for (const IntentQuestionSet& set : catalog) {
    IntentQuestionSet augmented = set;
    std::vector<std::string> seen;
    seen.push_back(normalize_for_match(set.base_question));
    for (const std::string& p : set.paraphrases) seen.push_back(normalize_for_match(p));

    for (std::string& candidate : backend.paraphrase(set.base_question, n_per_intent)) {
      const std::string key = normalize_for_match(candidate);
      if (key.empty()) continue;
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      augmented.paraphrases.push_back(std::move(candidate));
    }
    out.push_back(std::move(augmented));
  }
  return out;
}

std::string render_context(std::span<const Turn> turns, int window) {
  std::size_t start = 0;
  if (window > kWindowAll && static_cast<std::size_t>(window) < turns.size()) {
    start = turns.size() - static_cast<std::size_t>(window);
  }
  std::ostringstream os;
  for (std::size_t i = start; i < turns.size(); ++i) {
    if (i > start) os << '\n';
    os << to_string(turns[i].speaker) << ": " << turns[i].text;
  }
  return os.str();
}

std::optional<DetectionResult> detect_intent(std::span<const Turn> turns,
                                             const std::vector<IntentQuestionSet>& catalog,
                                             const QaBackend& qa_backend,
                                             double threshold, int window) {
  if (turns.empty() || turns.back().speaker != Speaker::User) {
    throw std::invalid_argument("detect_intent requires the last turn to be a USER turn");
  }
  const std::string context = render_context(turns, window);

  std::optional<DetectionResult> best;
  for (const IntentQuestionSet& set : catalog) {
    std::optional<std::pair<double, std::string>> intent_best;
    for (const std::string& question : set.all_questions()) {
      const QAAnswer answer = qa_backend.answer_question(context, question);
      if (answer.label != QALabel::Yes || answer.confidence < threshold) continue;
      if (!intent_best || answer.confidence > intent_best->first) {
        intent_best = {answer.confidence, question};
      }
    }
    // Strict > keeps the earliest catalog entry on ties.
    if (intent_best && (!best || intent_best->first > best->confidence)) {
      best = DetectionResult{set.intent, intent_best->first, intent_best->second,
                             static_cast<int>(turns.size()) - 1};
    }
  }
  return best;
}

std::vector<QAExample> build_tod_qa(const std::vector<AnnotatedDialogue>& dialogues,
                                    const std::vector<IntentQuestionSet>& catalog,
                                    NegativeRatio negative_ratio, std::int64_t seed) {
  std::vector<std::string> catalog_names;
  for (const IntentQuestionSet& set : catalog) catalog_names.push_back(set.intent.name);

  std::vector<QAExample> out;
  for (const AnnotatedDialogue& dialogue : dialogues) {
    // Examples in (user turn, catalog intent) enumeration order.
    std::vector<QAExample> examples;
    std::vector<std::size_t> no_positions;

    std::vector<Turn> prefix;
    for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
      const AnnotatedTurn& turn = dialogue.turns[t];
      prefix.push_back(Turn{turn.speaker, turn.text, Phase::Tod, {}});
      if (turn.speaker != Speaker::User) continue;

      for (const std::string& name : turn.active_intents) {
        if (std::find(catalog_names.begin(), catalog_names.end(), name) ==
            catalog_names.end()) {
          throw TodQaError("dialogue " + dialogue.id + " turn " + std::to_string(t) +
                           ": annotated intent not in catalog: " + name);
        }
      }
      const std::string context = render_context(prefix);
      for (const IntentQuestionSet& set : catalog) {
        const bool active = turn.active_intents.count(set.intent.name) > 0;
        if (!active) no_positions.push_back(examples.size());
        examples.push_back(QAExample{context, set.base_question,
                                     active ? QALabel::Yes : QALabel::No});
      }
    }

    if (negative_ratio) {
      const std::size_t yes_count = examples.size() - no_positions.size();
      const auto target = static_cast<std::size_t>(std::max<long long>(
          0, llround(*negative_ratio * static_cast<double>(yes_count))));
      if (target < no_positions.size()) {
        // Seeded partial Fisher-Yates picks the surviving NO positions, then
        // emission keeps the original enumeration order.
        SplitMix64 rng(hash_combine(static_cast<std::uint64_t>(seed), fnv1a64(dialogue.id)));
        for (std::size_t i = 0; i < target; ++i) {
          const std::size_t j = i + rng.bounded(no_positions.size() - i);
          std::swap(no_positions[i], no_positions[j]);
        }
        std::vector<bool> keep(examples.size(), false);
        for (std::size_t i = 0; i < target; ++i) keep[no_positions[i]] = true;
        std::vector<QAExample> kept;
        kept.reserve(yes_count + target);
        for (std::size_t i = 0; i < examples.size(); ++i) {
          if (examples[i].answer == QALabel::Yes || keep[i]) {
            kept.push_back(std::move(examples[i]));
          }
        }
        examples = std::move(kept);
      }
    }
    out.insert(out.end(), examples.begin(), examples.end());
  }
  return out;
}

std::string catalog_to_json(const std::vector<IntentQuestionSet>& catalog) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const IntentQuestionSet& set : catalog) {
    arr.push_back({{"intent", set.intent.name},
                   {"description", set.intent.description},
                   {"base_question", set.base_question},
                   {"paraphrases", set.paraphrases}});
  }
  return arr.dump(2);
}

std::vector<IntentQuestionSet> catalog_from_json(const std::string& json_text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CatalogError(std::string("invalid catalog JSON: ") + e.what());
  }
  if (!arr.is_array()) throw CatalogError("catalog: expected array");
  std::vector<IntentQuestionSet> catalog;
  for (const auto& item : arr) {
    IntentQuestionSet set;
    set.intent.name = item.at("intent").get<std::string>();
    set.intent.description = item.at("description").get<std::string>();
    set.base_question = item.at("base_question").get<std::string>();
    for (const auto& p : item.at("paraphrases")) {
      set.paraphrases.push_back(p.get<std::string>());
    }
    catalog.push_back(std::move(set));
  }
  return catalog;
}

void write_tod_qa(const std::string& path, const std::vector<QAExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (const QAExample& example : examples) {
    nlohmann::ordered_json obj{{"context", example.context_text},
                               {"question", example.question},
                               {"answer", example.answer == QALabel::Yes ? "yes" : "no"}};
    out << obj.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace salesgen
