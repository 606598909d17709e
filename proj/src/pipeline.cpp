#include "salesgen/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "salesgen/hashing.hpp"
#include "salesgen/mock_backends.hpp"
#include "salesgen/remote_backend.hpp"
#include "salesgen/text_norm.hpp"
#include "salesgen/transition.hpp"

namespace salesgen {

namespace {

// Stage salts for per-dialogue sub-seed derivation.
enum Salt : std::uint64_t {
  kSaltPersona = 1,
  kSaltSelfchat = 2,
  kSaltProvenance = 3,
  kSaltMerge = 4,
  kSaltCandidates = 5,
  kSaltSimulation = 6,
};

}  // namespace

std::string to_string(ContinuationMode mode) {
  switch (mode) {
    case ContinuationMode::MergeSgd: return "MERGE_SGD";
    case ContinuationMode::Simulation: return "SIMULATION";
    case ContinuationMode::Mixed: return "MIXED";
  }
  return "MERGE_SGD";
}

ContinuationMode continuation_mode_from_string(const std::string& s) {
  if (s == "MERGE_SGD" || s == "merge") return ContinuationMode::MergeSgd;
  if (s == "SIMULATION" || s == "sim") return ContinuationMode::Simulation;
  if (s == "MIXED" || s == "mixed") return ContinuationMode::Mixed;
  throw ConfigError("continuation.mode: not in enum: " + s);
}

void PipelineConfig::check() const {
  selfchat.check();
  transition.decoding.check();
  continuation.decoding.check();
  continuation.policy.check();
  if (continuation.p_sim < 0.0 || continuation.p_sim > 1.0) {
    throw ConfigError("continuation.p_sim: must be in [0,1]");
  }
  if (detection.threshold < 0.0 || detection.threshold > 1.0) {
    throw ConfigError("detection.threshold: must be in [0,1]");
  }
  if (detection.window < 0) throw ConfigError("detection.window: must be >= 0");
  if (detection.n_paraphrases < 0) throw ConfigError("detection.n_paraphrases: must be >= 0");
  if (transition.n_candidates < 1) throw ConfigError("transition.n_candidates: must be >= 1");
}

PipelineConfig default_config() {
  PipelineConfig config;
  config.backends[kRoleChitchat] =
      BackendDescriptor{BackendKind::Chat, "mock-chitchat", "", "chitchat",
                        DecodingConfig::simulator_defaults()};
  config.backends[kRoleQa] =
      BackendDescriptor{BackendKind::Qa, "mock-qa", "", "default", DecodingConfig{}};
  config.backends[kRoleParaphrase] =
      BackendDescriptor{BackendKind::Paraphrase, "mock-paraphrase", "", "", DecodingConfig{}};
  config.backends[kRoleTransition] =
      BackendDescriptor{BackendKind::Seq2Seq, "mock-seq2seq", "", "",
                        DecodingConfig::transition_defaults()};
  config.backends[kRoleTodUser] =
      BackendDescriptor{BackendKind::Chat, "mock-tod-user", "", "tod_user",
                        DecodingConfig::simulator_defaults()};
  config.backends[kRoleTodSales] =
      BackendDescriptor{BackendKind::Chat, "mock-tod-sales", "", "tod_sales",
                        DecodingConfig::simulator_defaults()};
  return config;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(path + key + ": unknown key");
    }
  }
}

double get_number(const json& obj, const std::string& key, double fallback,
                  const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(path + key + ": expected number");
  return it->get<double>();
}

std::int64_t get_int(const json& obj, const std::string& key, std::int64_t fallback,
                     const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer() && !it->is_number_unsigned()) {
    throw ConfigError(path + key + ": expected integer");
  }
  return it->get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback,
                       const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ConfigError(path + key + ": expected string");
  return it->get<std::string>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback,
              const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(path + key + ": expected boolean");
  return it->get<bool>();
}

DecodingConfig parse_decoding(const json& obj, DecodingConfig fallback,
                              const std::string& path) {
  reject_unknown_keys(obj, {"top_k", "top_p", "max_new_tokens", "seed"}, path);
  DecodingConfig decoding = fallback;
  decoding.top_k = static_cast<int>(get_int(obj, "top_k", fallback.top_k, path));
  decoding.top_p = get_number(obj, "top_p", fallback.top_p, path);
  decoding.max_new_tokens =
      static_cast<int>(get_int(obj, "max_new_tokens", fallback.max_new_tokens, path));
  decoding.seed = get_int(obj, "seed", fallback.seed, path);
  return decoding;
}

BackendDescriptor parse_backend(const json& obj, BackendDescriptor fallback,
                                const std::string& path) {
  reject_unknown_keys(obj,
                      {"kind", "name", "endpoint", "mock_script", "decoding", "timeout_ms",
                       "retries", "backoff_ms"},
                      path);
  BackendDescriptor desc = fallback;
  if (obj.contains("kind")) desc.kind = backend_kind_from_string(get_string(obj, "kind", "", path));
  desc.name = get_string(obj, "name", fallback.name, path);
  desc.endpoint = get_string(obj, "endpoint", fallback.endpoint, path);
  desc.mock_script = get_string(obj, "mock_script", fallback.mock_script, path);
  if (auto it = obj.find("decoding"); it != obj.end()) {
    if (!it->is_object()) throw ConfigError(path + "decoding: expected object");
    desc.decoding = parse_decoding(*it, fallback.decoding, path + "decoding.");
  }
  desc.timeout_ms = static_cast<int>(get_int(obj, "timeout_ms", fallback.timeout_ms, path));
  desc.retries = static_cast<int>(get_int(obj, "retries", fallback.retries, path));
  desc.backoff_ms = static_cast<int>(get_int(obj, "backoff_ms", fallback.backoff_ms, path));
  return desc;
}

const json* get_object(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return nullptr;
  if (!it->is_object()) throw ConfigError(path + key + ": expected object");
  return &*it;
}

void apply_env_overrides(PipelineConfig& config) {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* value = std::getenv(name);
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::string(value);
  };
  if (auto v = env("SALESGEN_OUTPUT_PATH")) config.io.output_path = *v;
  if (auto v = env("SALESGEN_PERSONA_FILE")) config.io.persona_file = *v;
  if (auto v = env("SALESGEN_SGD_PATH")) config.io.sgd_path = *v;
  if (auto v = env("SALESGEN_OTTERS_PATH")) config.io.otters_path = *v;
  if (auto v = env("SALESGEN_MASTER_SEED")) config.master_seed = std::stoll(*v);
  if (auto v = env("SALESGEN_TIMEOUT_MS")) {
    for (auto& [role, desc] : config.backends) desc.timeout_ms = std::stoi(*v);
  }
  for (auto& [role, desc] : config.backends) {
    std::string var = "SALESGEN_" + role + "_ENDPOINT";
    for (char& c : var) {
      c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (auto v = env(var.c_str())) desc.endpoint = *v;
  }
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
  PipelineConfig config = default_config();

  std::string trimmed = normalize_whitespace(json_text);
  json doc = json::object();
  if (!trimmed.empty()) {
    try {
      doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  }

  reject_unknown_keys(doc,
                      {"backends", "selfchat", "detection", "transition", "continuation",
                       "io", "master_seed"},
                      "");

  if (const json* backends = get_object(doc, "backends", "")) {
    reject_unknown_keys(*backends,
                        {kRoleChitchat, kRoleQa, kRoleParaphrase, kRoleTransition,
                         kRoleTodUser, kRoleTodSales},
                        "backends.");
    for (auto& [role, desc] : config.backends) {
      if (const json* section = get_object(*backends, role, "backends.")) {
        desc = parse_backend(*section, desc, "backends." + role + ".");
      }
    }
  }

  if (const json* selfchat = get_object(doc, "selfchat", "")) {
    reject_unknown_keys(*selfchat, {"max_chitchat_turns", "min_chitchat_turns", "decoding"},
                        "selfchat.");
    config.selfchat.max_chitchat_turns = static_cast<int>(get_int(
        *selfchat, "max_chitchat_turns", config.selfchat.max_chitchat_turns, "selfchat."));
    config.selfchat.min_chitchat_turns = static_cast<int>(get_int(
        *selfchat, "min_chitchat_turns", config.selfchat.min_chitchat_turns, "selfchat."));
    if (const json* decoding = get_object(*selfchat, "decoding", "selfchat.")) {
      config.selfchat.decoding =
          parse_decoding(*decoding, config.selfchat.decoding, "selfchat.decoding.");
    }
  }

  if (const json* detection = get_object(doc, "detection", "")) {
    reject_unknown_keys(*detection, {"threshold", "window", "n_paraphrases"}, "detection.");
    config.detection.threshold =
        get_number(*detection, "threshold", config.detection.threshold, "detection.");
    if (auto it = detection->find("window"); it != detection->end()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "ALL") {
          throw ConfigError("detection.window: expected integer or \"ALL\"");
        }
        config.detection.window = kWindowAll;
      } else if (it->is_number_integer() || it->is_number_unsigned()) {
        config.detection.window = it->get<int>();
      } else {
        throw ConfigError("detection.window: expected integer or \"ALL\"");
      }
    }
    config.detection.n_paraphrases = static_cast<int>(
        get_int(*detection, "n_paraphrases", config.detection.n_paraphrases, "detection."));
  }

  if (const json* transition = get_object(doc, "transition", "")) {
    reject_unknown_keys(*transition, {"n_candidates", "use_generative", "decoding"},
                        "transition.");
    config.transition.n_candidates = static_cast<int>(get_int(
        *transition, "n_candidates", config.transition.n_candidates, "transition."));
    config.transition.use_generative = get_bool(*transition, "use_generative",
                                                config.transition.use_generative, "transition.");
    if (const json* decoding = get_object(*transition, "decoding", "transition.")) {
      config.transition.decoding =
          parse_decoding(*decoding, config.transition.decoding, "transition.decoding.");
    }
  }

  if (const json* continuation = get_object(doc, "continuation", "")) {
    reject_unknown_keys(*continuation, {"mode", "p_sim", "policy", "decoding"},
                        "continuation.");
    if (auto it = continuation->find("mode"); it != continuation->end()) {
      if (!it->is_string()) throw ConfigError("continuation.mode: expected string");
      config.continuation.mode = continuation_mode_from_string(it->get<std::string>());
    }
    config.continuation.p_sim =
        get_number(*continuation, "p_sim", config.continuation.p_sim, "continuation.");
    if (const json* policy = get_object(*continuation, "policy", "continuation.")) {
      reject_unknown_keys(*policy, {"keywords", "end_token", "repetition", "max_turns"},
                          "continuation.policy.");
      if (auto it = policy->find("keywords"); it != policy->end()) {
        if (!it->is_array()) throw ConfigError("continuation.policy.keywords: expected array");
        config.continuation.policy.keywords.clear();
        for (const auto& k : *it) {
          if (!k.is_string()) throw ConfigError("continuation.policy.keywords: expected strings");
          config.continuation.policy.keywords.push_back(k.get<std::string>());
        }
      }
      config.continuation.policy.end_token = get_string(
          *policy, "end_token", config.continuation.policy.end_token, "continuation.policy.");
      const std::string repetition = get_string(*policy, "repetition", "EXACT_SAME_SPEAKER",
                                                "continuation.policy.");
      if (repetition != "EXACT_SAME_SPEAKER") {
        throw ConfigError("continuation.policy.repetition: not in enum");
      }
      config.continuation.policy.max_turns = static_cast<int>(get_int(
          *policy, "max_turns", config.continuation.policy.max_turns, "continuation.policy."));
    }
    if (const json* decoding = get_object(*continuation, "decoding", "continuation.")) {
      config.continuation.decoding =
          parse_decoding(*decoding, config.continuation.decoding, "continuation.decoding.");
    }
  }

  if (const json* io = get_object(doc, "io", "")) {
    reject_unknown_keys(*io, {"persona_file", "sgd_path", "otters_path", "output_path"},
                        "io.");
    config.io.persona_file = get_string(*io, "persona_file", config.io.persona_file, "io.");
    config.io.sgd_path = get_string(*io, "sgd_path", config.io.sgd_path, "io.");
    config.io.otters_path = get_string(*io, "otters_path", config.io.otters_path, "io.");
    config.io.output_path = get_string(*io, "output_path", config.io.output_path, "io.");
  }

  config.master_seed = get_int(doc, "master_seed", config.master_seed, "");

  apply_env_overrides(config);
  config.check();
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const PipelineConfig& config) {
  auto decoding_json = [](const DecodingConfig& d) {
    return ordered_json{{"top_k", d.top_k},
                        {"top_p", d.top_p},
                        {"max_new_tokens", d.max_new_tokens},
                        {"seed", d.seed}};
  };
  ordered_json backends = ordered_json::object();
  for (const std::string role :
       {kRoleChitchat, kRoleQa, kRoleParaphrase, kRoleTransition, kRoleTodUser,
        kRoleTodSales}) {
    const BackendDescriptor& desc = config.backends.at(role);
    backends[role] = ordered_json{{"kind", to_string(desc.kind)},
                                  {"name", desc.name},
                                  {"endpoint", desc.endpoint},
                                  {"mock_script", desc.mock_script},
                                  {"decoding", decoding_json(desc.decoding)},
                                  {"timeout_ms", desc.timeout_ms},
                                  {"retries", desc.retries},
                                  {"backoff_ms", desc.backoff_ms}};
  }
  ordered_json obj{
      {"backends", std::move(backends)},
      {"selfchat",
       {{"max_chitchat_turns", config.selfchat.max_chitchat_turns},
        {"min_chitchat_turns", config.selfchat.min_chitchat_turns},
        {"decoding", decoding_json(config.selfchat.decoding)}}},
      {"detection",
       {{"threshold", config.detection.threshold},
        {"window", config.detection.window},
        {"n_paraphrases", config.detection.n_paraphrases}}},
      {"transition",
       {{"n_candidates", config.transition.n_candidates},
        {"use_generative", config.transition.use_generative},
        {"decoding", decoding_json(config.transition.decoding)}}},
      {"continuation",
       {{"mode", to_string(config.continuation.mode)},
        {"p_sim", config.continuation.p_sim},
        {"policy",
         {{"keywords", config.continuation.policy.keywords},
          {"end_token", config.continuation.policy.end_token},
          {"repetition", "EXACT_SAME_SPEAKER"},
          {"max_turns", config.continuation.policy.max_turns}}},
        {"decoding", decoding_json(config.continuation.decoding)}}},
      {"io",
       {{"persona_file", config.io.persona_file},
        {"sgd_path", config.io.sgd_path},
        {"otters_path", config.io.otters_path},
        {"output_path", config.io.output_path}}},
      {"master_seed", config.master_seed}};
  return obj.dump(2);
}

BackendSet make_backends(const PipelineConfig& config) {
  BackendSet set;
  auto remote = [](const BackendDescriptor& desc) {
    return std::make_shared<RemoteBackend>(desc);
  };

  const BackendDescriptor& chitchat = config.backends.at(kRoleChitchat);
  set.chitchat = chitchat.endpoint.empty()
                     ? std::shared_ptr<ChatBackend>(make_mock_chat(chitchat))
                     : remote(chitchat);

  const BackendDescriptor& qa = config.backends.at(kRoleQa);
  set.qa = qa.endpoint.empty() ? std::shared_ptr<QaBackend>(make_mock_qa(qa)) : remote(qa);

  const BackendDescriptor& paraphrase = config.backends.at(kRoleParaphrase);
  set.paraphrase = paraphrase.endpoint.empty()
                       ? std::shared_ptr<ParaphraseBackend>(std::make_shared<MockParaphraseBackend>())
                       : remote(paraphrase);

  const BackendDescriptor& transition = config.backends.at(kRoleTransition);
  set.transition = transition.endpoint.empty()
                       ? std::shared_ptr<Seq2SeqBackend>(std::make_shared<MockSeq2SeqBackend>())
                       : remote(transition);

  const BackendDescriptor& tod_user = config.backends.at(kRoleTodUser);
  set.tod_user = tod_user.endpoint.empty()
                     ? std::shared_ptr<ChatBackend>(make_mock_chat(tod_user))
                     : remote(tod_user);

  const BackendDescriptor& tod_sales = config.backends.at(kRoleTodSales);
  set.tod_sales = tod_sales.endpoint.empty()
                      ? std::shared_ptr<ChatBackend>(make_mock_chat(tod_sales))
                      : remote(tod_sales);
  return set;
}

int GenerationReport::discarded_total() const {
  int sum = 0;
  for (const auto& [reason, count] : discarded) sum += count;
  return sum;
}

std::string report_to_json(const GenerationReport& report) {
  ordered_json discarded = ordered_json::object();
  for (const auto& [reason, count] : report.discarded) discarded[reason] = count;
  ordered_json per_intent = ordered_json::object();
  for (const auto& [intent, count] : report.per_intent) per_intent[intent] = count;
  return ordered_json{{"requested", report.requested},
                      {"written", report.written},
                      {"discarded", std::move(discarded)},
                      {"per_intent", std::move(per_intent)}}
      .dump(2);
}

namespace {

struct DialogueOutcome {
  std::optional<Dialogue> dialogue;
  std::string discard_reason;  // set when dialogue is absent
};

std::string format_confidence(double confidence) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", confidence);
  return buf;
}

DialogueOutcome generate_one(const PipelineConfig& config, const BackendSet& backends,
                             const std::vector<IntentQuestionSet>& catalog,
                             const SgdIndex* sgd_index,
                             const std::vector<std::vector<std::string>>& persona_pool,
                             int index) {
  const std::int64_t seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(index));

  SplitMix64 persona_rng(static_cast<std::uint64_t>(derive_seed(seed, kSaltPersona)));
  Persona user{persona_pool[persona_rng.bounded(persona_pool.size())], Speaker::User};
  Persona sales{persona_pool[persona_rng.bounded(persona_pool.size())], Speaker::Sales};

  SelfChatConfig selfchat_config = config.selfchat;
  selfchat_config.decoding.seed = derive_seed(seed, kSaltSelfchat);

  std::optional<DetectionResult> detection;
  auto stop_hook = [&](const std::vector<Turn>& turns) {
    detection = detect_intent(turns, catalog, *backends.qa, config.detection.threshold,
                              config.detection.window);
    return detection.has_value();
  };

  std::vector<Turn> turns;
  try {
    turns = run_selfchat(user, sales, selfchat_config, *backends.chitchat, stop_hook);
  } catch (const SelfChatError&) {
    return {std::nullopt, "BACKEND_ERROR"};
  }
  if (!detection) return {std::nullopt, "NO_INTENT"};

  const IntentLabel intent = detection->intent;

  // Continuation strategy for this dialogue.
  ContinuationMode mode = config.continuation.mode;
  if (mode == ContinuationMode::Mixed) {
    SplitMix64 coin(static_cast<std::uint64_t>(derive_seed(seed, kSaltProvenance)));
    mode = coin.next_unit() < config.continuation.p_sim ? ContinuationMode::Simulation
                                                        : ContinuationMode::MergeSgd;
  }

  // The template transition prefers the richer ontology description when the
  // index carries one.
  std::string description = intent.description;
  if (sgd_index != nullptr) {
    auto it = sgd_index->intent_descriptions.find(intent.name);
    if (it != sgd_index->intent_descriptions.end() && !it->second.empty()) {
      description = it->second;
    }
  }
  const std::string template_text = template_transition_from_description(description);

  std::string past;
  for (const Turn& turn : turns) {
    if (turn.speaker == Speaker::User && turn.phase == Phase::Chitchat) past = turn.text;
  }

  Turn transition_turn{Speaker::Sales, template_text, Phase::Transition, {}};
  transition_turn.meta["trigger_question"] = detection->trigger_question;
  transition_turn.meta["confidence"] = format_confidence(detection->confidence);
  transition_turn.meta["template"] = template_text;

  std::vector<std::string> candidates;
  std::vector<Turn> continuation;
  Provenance provenance = Provenance::MergeSgd;

  DecodingConfig candidate_decoding = config.transition.decoding;
  candidate_decoding.seed = derive_seed(seed, kSaltCandidates);

  try {
    if (mode == ContinuationMode::MergeSgd) {
      provenance = Provenance::MergeSgd;
      if (sgd_index == nullptr || sgd_index->bucket_size(intent.name) == 0) {
        return {std::nullopt, "NO_SGD_MATCH"};
      }
      continuation = merge_continuation(intent, *sgd_index, derive_seed(seed, kSaltMerge));
      if (config.transition.use_generative && !continuation.empty()) {
        const std::string& future = continuation.front().text;
        candidates = generate_transitions(past, future, *backends.transition,
                                          candidate_decoding, config.transition.n_candidates);
        transition_turn.text = candidates.front();
      }
    } else {
      provenance = Provenance::Simulation;
      DecodingConfig sim_decoding = config.continuation.decoding;
      sim_decoding.seed = derive_seed(seed, kSaltSimulation);

      // Figure-4 ordering: the provisional first user TOD turn answers the
      // template transition and is kept after re-generation.
      std::vector<Turn> context = turns;
      context.push_back(transition_turn);
      std::string first_user_text = normalize_whitespace(
          backends.tod_user->chat_reply(context, {}, sim_decoding));
      if (first_user_text.empty()) return {std::nullopt, "BACKEND_ERROR"};
      Turn first_user{Speaker::User, first_user_text, Phase::Tod,
                      {{"backend", backends.tod_user->name()}}};

      if (config.transition.use_generative) {
        candidates = generate_transitions(past, first_user_text, *backends.transition,
                                          candidate_decoding, config.transition.n_candidates);
        transition_turn.text = candidates.front();
      }
      context.back() = transition_turn;
      continuation =
          simulate_continuation(context, *backends.tod_user, *backends.tod_sales,
                                config.continuation.policy, sim_decoding, first_user);
    }
  } catch (const std::exception&) {
    return {std::nullopt, "BACKEND_ERROR"};
  }

  Dialogue dialogue;
  char id[16];
  std::snprintf(id, sizeof id, "dlg-%06d", index);
  dialogue.id = id;
  dialogue.seed = seed;
  dialogue.provenance = provenance;
  dialogue.intent = intent;
  // A stored candidate list must have exactly 5 entries (the Task-2 export
  // shape); other candidate counts only pick the transition text.
  if (candidates.size() == 5) dialogue.transition_candidates = candidates;
  dialogue.turns = std::move(turns);
  dialogue.turns.push_back(std::move(transition_turn));
  dialogue.turns.insert(dialogue.turns.end(), continuation.begin(), continuation.end());

  if (!validate(dialogue).ok()) return {std::nullopt, "INVALID"};
  return {std::move(dialogue), ""};
}

void write_manifest(const PipelineConfig& config, int n_dialogues) {
  ordered_json manifest{{"version", kVersion},
                        {"master_seed", config.master_seed},
                        {"n_dialogues", n_dialogues},
                        {"config", json::parse(config_to_json(config))}};
  const std::string path = config.io.output_path + ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open manifest file: " + path);
  out << manifest.dump(2) << '\n';
}

}  // namespace

GenerationReport run_pipeline(const PipelineConfig& config, int n_dialogues) {
  return run_pipeline(config, n_dialogues, make_backends(config));
}

GenerationReport run_pipeline(const PipelineConfig& config, int n_dialogues,
                              const BackendSet& backends, int jobs) {
  if (n_dialogues < 0) throw std::invalid_argument("n_dialogues must be non-negative");
  config.check();

  const std::vector<std::vector<std::string>> persona_pool =
      config.io.persona_file.empty() ? default_persona_pool()
                                     : load_persona_pool(config.io.persona_file);

  std::vector<IntentQuestionSet> catalog = build_question_catalog(target_intents());
  if (config.detection.n_paraphrases > 0) {
    catalog = augment_with_paraphrases(catalog, *backends.paraphrase,
                                       config.detection.n_paraphrases);
  }

  std::optional<SgdIndex> sgd_index;
  if (config.continuation.mode != ContinuationMode::Simulation) {
    if (config.io.sgd_path.empty()) {
      throw ConfigError("io.sgd_path: required for MERGE_SGD/MIXED continuation");
    }
    sgd_index = index_sgd(load_sgd_corpus(config.io.sgd_path));
  }
  const SgdIndex* index_ptr = sgd_index ? &*sgd_index : nullptr;

  // Open the output before generating: output I/O failures abort the batch.
  std::ofstream out(config.io.output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + config.io.output_path);

  std::vector<DialogueOutcome> outcomes(static_cast<std::size_t>(n_dialogues));
  auto worker = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      outcomes[static_cast<std::size_t>(i)] =
          generate_one(config, backends, catalog, index_ptr, persona_pool, i);
    }
  };

  if (jobs <= 1 || n_dialogues <= 1) {
    worker(0, n_dialogues);
  } else {
    const int n_workers = std::min(jobs, n_dialogues);
    std::vector<std::future<void>> futures;
    const int chunk = (n_dialogues + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n_dialogues, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, worker, begin, end));
    }
    for (auto& f : futures) f.get();
  }

  GenerationReport report;
  report.requested = n_dialogues;
  for (DialogueOutcome& outcome : outcomes) {
    if (!outcome.dialogue) {
      ++report.discarded[outcome.discard_reason];
      continue;
    }
    out << serialize(*outcome.dialogue) << '\n';
    if (!out) throw std::runtime_error("write failed: " + config.io.output_path);
    ++report.written;
    ++report.per_intent[outcome.dialogue->intent->name];
  }
  out.close();

  write_manifest(config, n_dialogues);
  return report;
}

}  // namespace salesgen
