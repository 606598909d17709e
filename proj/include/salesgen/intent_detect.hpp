#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "salesgen/backends.hpp"
#include "salesgen/dialogue.hpp"

namespace salesgen {

struct IntentQuestionSet {
  IntentLabel intent;
  std::string base_question;
  std::vector<std::string> paraphrases;  // pairwise distinct, distinct from base

  std::vector<std::string> all_questions() const;
};

struct DetectionResult {
  IntentLabel intent;
  double confidence = 0.0;
  std::string trigger_question;
  int turn_index = 0;
};

struct QAExample {
  std::string context_text;
  std::string question;
  QALabel answer = QALabel::No;

  bool operator==(const QAExample&) const = default;
};

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TodQaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// window value meaning "use the full history".
inline constexpr int kWindowAll = 0;

// Yes/no question per intent. The six target intents carry their canonical
// hand-written questions; anything else gets a question generated from the
// description ("Is the user asking about {description as gerund phrase}?").
std::vector<IntentQuestionSet> build_question_catalog(const std::vector<IntentLabel>& intents);

// Adds up to n_per_intent backend paraphrases per question set, dropping any
// that normalize equal to the base question or to each other.
std::vector<IntentQuestionSet> augment_with_paraphrases(
    const std::vector<IntentQuestionSet>& catalog, const ParaphraseBackend& backend,
    int n_per_intent = 3);

// Speaker-tagged context rendering shared by detection and TOD-QA building:
// one "SALES: ..." / "USER: ..." line per turn, newline-joined. window == 0
// keeps the whole history, otherwise only the last `window` turns.
std::string render_context(std::span<const Turn> turns, int window = kWindowAll);

// Asks every question of every intent over the rendered context. A question
// hits when the answer is YES at or above the threshold; the intent with the
// highest max-confidence hit wins, ties broken by catalog order.
std::optional<DetectionResult> detect_intent(std::span<const Turn> turns,
                                             const std::vector<IntentQuestionSet>& catalog,
                                             const QaBackend& qa_backend,
                                             double threshold = 0.5,
                                             int window = kWindowAll);

struct AnnotatedTurn {
  Speaker speaker = Speaker::User;
  std::string text;
  std::set<std::string> active_intents;  // meaningful on USER turns
};

struct AnnotatedDialogue {
  std::string id;
  std::vector<AnnotatedTurn> turns;
};

// Downsampling ratio for NO examples; nullopt disables downsampling.
using NegativeRatio = std::optional<double>;

// Emits one (context, base question, yes/no) example per user turn and
// cataloged intent, then per dialogue downsamples NO examples to
// ratio * #YES (seeded). YES examples are never dropped.
std::vector<QAExample> build_tod_qa(const std::vector<AnnotatedDialogue>& dialogues,
                                    const std::vector<IntentQuestionSet>& catalog,
                                    NegativeRatio negative_ratio = 1.0,
                                    std::int64_t seed = 0);

// Catalog file format: [{"intent","description","base_question","paraphrases"}].
std::string catalog_to_json(const std::vector<IntentQuestionSet>& catalog);
std::vector<IntentQuestionSet> catalog_from_json(const std::string& json_text);

// TOD-QA export: one {"context","question","answer"} JSON object per line.
void write_tod_qa(const std::string& path, const std::vector<QAExample>& examples);

// Fine-tuning settings recorded for external trainers; this module only
// emits the data.
struct QaTrainDefaults {
  double learning_rate = 3e-5;
  int batch_size = 64;
  int epochs = 20;
  std::string optimizer = "adamw";
};

}  // namespace salesgen
