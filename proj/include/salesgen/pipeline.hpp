#pragma once

#include <map>
#include <memory>
#include <string>

#include "salesgen/backends.hpp"
#include "salesgen/dialogue.hpp"
#include "salesgen/intent_detect.hpp"
#include "salesgen/selfchat.hpp"
#include "salesgen/tod_continue.hpp"

namespace salesgen {

inline constexpr const char* kVersion = "0.1.0";

// Backend roles, as they appear in the configuration file.
inline constexpr const char* kRoleChitchat = "chitchat-chat";
inline constexpr const char* kRoleQa = "qa";
inline constexpr const char* kRoleParaphrase = "paraphrase";
inline constexpr const char* kRoleTransition = "transition-seq2seq";
inline constexpr const char* kRoleTodUser = "tod-user";
inline constexpr const char* kRoleTodSales = "tod-sales";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DetectionConfig {
  double threshold = 0.5;
  int window = kWindowAll;
  int n_paraphrases = 3;
};

struct TransitionConfig {
  int n_candidates = 5;
  bool use_generative = true;
  DecodingConfig decoding = DecodingConfig::transition_defaults();
};

enum class ContinuationMode { MergeSgd, Simulation, Mixed };

std::string to_string(ContinuationMode mode);
ContinuationMode continuation_mode_from_string(const std::string& s);

struct ContinuationConfig {
  ContinuationMode mode = ContinuationMode::MergeSgd;
  double p_sim = 0.49;  // simulation probability under MIXED
  TerminationPolicy policy;
  DecodingConfig decoding = DecodingConfig::simulator_defaults();
};

struct IoConfig {
  std::string persona_file;  // empty -> built-in pool
  std::string sgd_path;
  std::string otters_path;
  std::string output_path = "corpus.ndjson";
};

struct PipelineConfig {
  std::map<std::string, BackendDescriptor> backends;  // keyed by role
  SelfChatConfig selfchat;
  DetectionConfig detection;
  TransitionConfig transition;
  ContinuationConfig continuation;
  IoConfig io;
  std::int64_t master_seed = 0;

  void check() const;
};

PipelineConfig default_config();

// Strict parse: unknown keys and ill-typed values are errors naming the key
// path. Defaults fill absent fields; environment overrides apply last. An
// empty (or whitespace-only) file means "all defaults".
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& json_text);
std::string config_to_json(const PipelineConfig& config);

struct BackendSet {
  std::shared_ptr<ChatBackend> chitchat;
  std::shared_ptr<QaBackend> qa;
  std::shared_ptr<ParaphraseBackend> paraphrase;
  std::shared_ptr<Seq2SeqBackend> transition;
  std::shared_ptr<ChatBackend> tod_user;
  std::shared_ptr<ChatBackend> tod_sales;
};

// Resolves every role: remote when the descriptor has an endpoint, the
// matching mock otherwise.
BackendSet make_backends(const PipelineConfig& config);

struct GenerationReport {
  int requested = 0;
  int written = 0;
  std::map<std::string, int> discarded;  // reason -> count
  std::map<std::string, int> per_intent;

  int discarded_total() const;
};

std::string report_to_json(const GenerationReport& report);

// Seeded batch generation through all stages: self-chat with the detection
// stop hook, transition building (template first, then generative
// re-generation), continuation per mode, validation, corpus write. Dialogues
// that never surface an intent are discarded and counted, as are
// per-dialogue failures; only output I/O failures abort. jobs > 1 fans
// dialogues out across threads; file order stays fixed by dialogue index.
GenerationReport run_pipeline(const PipelineConfig& config, int n_dialogues,
                              const BackendSet& backends, int jobs = 1);
GenerationReport run_pipeline(const PipelineConfig& config, int n_dialogues);

}  // namespace salesgen
