#include "salesgen/dialogue.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "salesgen/text_norm.hpp"

namespace salesgen {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Speaker s) {
  return s == Speaker::User ? "USER" : "SALES";
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Chitchat: return "CHITCHAT";
    case Phase::Transition: return "TRANSITION";
    case Phase::Tod: return "TOD";
  }
  return "CHITCHAT";
}

std::string to_string(Provenance p) {
  return p == Provenance::MergeSgd ? "MERGE_SGD" : "SIMULATION";
}

const std::vector<IntentLabel>& target_intents() {
  static const std::vector<IntentLabel> intents = {
      {"FindMovies", "find movies to watch"},
      {"GetTimesForMovie", "obtain the available time for watching a movie"},
      {"FindAttractions", "find attractions to visit"},
      {"LookupMusic", "find music to listen to"},
      {"PlaySong", "play songs"},
      {"LookupSong", "find songs to listen to"},
  };
  return intents;
}

int target_intent_index(const std::string& name) {
  const auto& intents = target_intents();
  for (std::size_t i = 0; i < intents.size(); ++i) {
    if (intents[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool ValidationReport::mentions(const std::string& needle) const {
  return std::any_of(violations.begin(), violations.end(), [&](const std::string& v) {
    return v.find(needle) != std::string::npos;
  });
}

ValidationReport validate(const Dialogue& dialogue) {
  ValidationReport report;
  auto add = [&](const std::string& msg) { report.violations.push_back(msg); };

  int transition_index = -1;
  bool phase_order_broken = false;
  // Phase sequence must be CHITCHAT* TRANSITION? TOD*.
  int stage = 0;  // 0 = chitchat, 1 = transition seen, 2 = tod
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    const Turn& turn = dialogue.turns[i];
    if (normalize_whitespace(turn.text).empty()) {
      add("empty text at turn " + std::to_string(i));
    }
    if (turn.phase == Phase::Transition && turn.speaker != Speaker::Sales) {
      add("transition spoken by USER at turn " + std::to_string(i));
    }
    if (i > 0 && dialogue.turns[i - 1].speaker == turn.speaker) {
      add("alternation violated at turn " + std::to_string(i));
    }
    switch (turn.phase) {
      case Phase::Chitchat:
        if (stage != 0 && !phase_order_broken) {
          add("phase order violated at turn " + std::to_string(i));
          phase_order_broken = true;
        }
        break;
      case Phase::Transition:
        if (transition_index >= 0) {
          add("multiple transition turns at turn " + std::to_string(i));
        } else {
          transition_index = static_cast<int>(i);
        }
        if (stage > 1 && !phase_order_broken) {
          add("phase order violated at turn " + std::to_string(i));
          phase_order_broken = true;
        }
        stage = std::max(stage, 1);
        break;
      case Phase::Tod:
        if (stage == 0 && !phase_order_broken) {
          add("phase order violated at turn " + std::to_string(i) +
              " (TOD before transition)");
          phase_order_broken = true;
        }
        stage = 2;
        break;
    }
  }

  const bool has_transition = transition_index >= 0;
  if (dialogue.intent.has_value() && !has_transition) {
    add("intent set without a transition turn");
  }
  if (!dialogue.intent.has_value() && has_transition) {
    add("transition turn present but intent unset");
  }

  if (!dialogue.transition_candidates.empty()) {
    if (dialogue.transition_candidates.size() != 5) {
      add("transition_candidates must contain exactly 5 entries, got " +
          std::to_string(dialogue.transition_candidates.size()));
    }
    if (has_transition) {
      const std::string& text = dialogue.turns[transition_index].text;
      const bool found =
          std::find(dialogue.transition_candidates.begin(),
                    dialogue.transition_candidates.end(),
                    text) != dialogue.transition_candidates.end();
      if (!found) add("transition text not among transition_candidates");
    } else {
      add("transition_candidates present without a transition turn");
    }
  }
  return report;
}

namespace {

ordered_json turn_to_json(const Turn& turn) {
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : turn.meta) meta[k] = v;
  return ordered_json{{"speaker", to_string(turn.speaker)},
                      {"text", turn.text},
                      {"phase", to_string(turn.phase)},
                      {"meta", std::move(meta)}};
}

const nlohmann::json& require_field(const nlohmann::json& obj, const std::string& key,
                                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + key + ": required");
  return *it;
}

std::string require_string(const nlohmann::json& obj, const std::string& key,
                           const std::string& path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + key + ": expected string");
  return v.get<std::string>();
}

Speaker parse_speaker(const std::string& s, const std::string& path) {
  if (s == "USER") return Speaker::User;
  if (s == "SALES") return Speaker::Sales;
  throw SchemaError(path + "speaker: not in enum");
}

Phase parse_phase(const std::string& s, const std::string& path) {
  if (s == "CHITCHAT") return Phase::Chitchat;
  if (s == "TRANSITION") return Phase::Transition;
  if (s == "TOD") return Phase::Tod;
  throw SchemaError(path + "phase: not in enum");
}

Provenance parse_provenance(const std::string& s) {
  if (s == "MERGE_SGD") return Provenance::MergeSgd;
  if (s == "SIMULATION") return Provenance::Simulation;
  throw SchemaError("provenance: not in enum");
}

Turn turn_from_json(const nlohmann::json& obj, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected object");
  Turn turn;
  turn.speaker = parse_speaker(require_string(obj, "speaker", path), path);
  turn.text = require_string(obj, "text", path);
  turn.phase = parse_phase(require_string(obj, "phase", path), path);
  if (auto it = obj.find("meta"); it != obj.end()) {
    if (!it->is_object()) throw SchemaError(path + "meta: expected object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw SchemaError(path + "meta." + k + ": expected string");
      turn.meta[k] = v.get<std::string>();
    }
  }
  return turn;
}

}  // namespace

std::string serialize(const Dialogue& dialogue) {
  ordered_json turns = ordered_json::array();
  for (const Turn& t : dialogue.turns) turns.push_back(turn_to_json(t));

  ordered_json intent;
  if (dialogue.intent) {
    intent = ordered_json{{"name", dialogue.intent->name},
                          {"description", dialogue.intent->description}};
  } else {
    intent = nullptr;
  }

  ordered_json obj{{"id", dialogue.id},
                   {"seed", dialogue.seed},
                   {"provenance", to_string(dialogue.provenance)},
                   {"intent", std::move(intent)},
                   {"transition_candidates", dialogue.transition_candidates},
                   {"turns", std::move(turns)}};
  return obj.dump();
}

Dialogue deserialize(const std::string& json_text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw SchemaError("dialogue: expected object");

  Dialogue d;
  d.id = require_string(obj, "id", "");
  const auto& seed = require_field(obj, "seed", "");
  if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
    throw SchemaError("seed: expected integer");
  }
  d.seed = seed.get<std::int64_t>();
  d.provenance = parse_provenance(require_string(obj, "provenance", ""));

  const auto& intent = require_field(obj, "intent", "");
  if (!intent.is_null()) {
    if (!intent.is_object()) throw SchemaError("intent: expected object or null");
    d.intent = IntentLabel{require_string(intent, "name", "intent."),
                           require_string(intent, "description", "intent.")};
  }

  const auto& candidates = require_field(obj, "transition_candidates", "");
  if (!candidates.is_array()) throw SchemaError("transition_candidates: expected array");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].is_string()) {
      throw SchemaError("transition_candidates[" + std::to_string(i) +
                        "]: expected string");
    }
    d.transition_candidates.push_back(candidates[i].get<std::string>());
  }

  const auto& turns = require_field(obj, "turns", "");
  if (!turns.is_array()) throw SchemaError("turns: expected array");
  for (std::size_t i = 0; i < turns.size(); ++i) {
    d.turns.push_back(turn_from_json(turns[i], "turns[" + std::to_string(i) + "]."));
  }
  return d;
}

std::vector<Dialogue> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<Dialogue> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      corpus.push_back(deserialize(line));
    } catch (const SchemaError& e) {
      throw SchemaError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

void write_corpus(const std::string& path, const std::vector<Dialogue>& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (const Dialogue& d : corpus) out << serialize(d) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

struct Accumulator {
  int count = 0;
  long long turns = 0;

  void add(const Dialogue& d) {
    ++count;
    turns += static_cast<long long>(d.turns.size());
  }
  GroupStats finish() const {
    GroupStats g;
    g.count = count;
    if (count > 0) g.avg_turns = static_cast<double>(turns) / count;
    return g;
  }
};

}  // namespace

CorpusStats compute_stats(const std::vector<Dialogue>& corpus) {
  std::vector<std::pair<std::string, Accumulator>> per_intent;
  for (const IntentLabel& intent : target_intents()) {
    per_intent.emplace_back(intent.name, Accumulator{});
  }
  Accumulator merge, sim, total;

  auto intent_slot = [&](const std::string& name) -> Accumulator& {
    for (auto& [n, acc] : per_intent) {
      if (n == name) return acc;
    }
    per_intent.emplace_back(name, Accumulator{});
    return per_intent.back().second;
  };

  for (const Dialogue& d : corpus) {
    total.add(d);
    (d.provenance == Provenance::MergeSgd ? merge : sim).add(d);
    if (d.intent) intent_slot(d.intent->name).add(d);
  }

  CorpusStats stats;
  for (const auto& [name, acc] : per_intent) {
    stats.per_intent.emplace_back(name, acc.finish());
  }
  stats.merge_sgd = merge.finish();
  stats.simulation = sim.finish();
  stats.total = total.finish();
  return stats;
}

namespace {

std::string with_thousands(long long value) {
  std::string digits = std::to_string(value);
  std::string out;
  int run = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (run == 3) {
      out.push_back(',');
      run = 0;
    }
    out.push_back(*it);
    ++run;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string format_avg(const GroupStats& g) {
  if (!g.avg_turns) return "-";
  return std::to_string(static_cast<long long>(std::llround(*g.avg_turns)));
}

void table_row(std::ostringstream& os, const std::string& label, const GroupStats& g) {
  os << label;
  for (std::size_t i = label.size(); i < 20; ++i) os << ' ';
  std::string count = with_thousands(g.count);
  for (std::size_t i = count.size(); i < 11; ++i) os << ' ';
  os << count;
  std::string avg = format_avg(g);
  for (std::size_t i = avg.size(); i < 12; ++i) os << ' ';
  os << avg << '\n';
}

}  // namespace

std::string render_stats_table(const CorpusStats& stats) {
  std::ostringstream os;
  os << "Intent               #Dialogues  Avg Length\n";
  os << "-------------------------------------------\n";
  for (const auto& [name, g] : stats.per_intent) table_row(os, name, g);
  os << "-------------------------------------------\n";
  table_row(os, "Merge SGD", stats.merge_sgd);
  table_row(os, "TOD Simulation", stats.simulation);
  os << "-------------------------------------------\n";
  table_row(os, "Total", stats.total);
  return os.str();
}

std::string stats_to_json(const CorpusStats& stats) {
  auto group = [](const GroupStats& g) {
    ordered_json obj{{"count", g.count}};
    if (g.avg_turns) obj["avg_length"] = *g.avg_turns;
    else obj["avg_length"] = nullptr;
    return obj;
  };
  ordered_json per_intent = ordered_json::object();
  for (const auto& [name, g] : stats.per_intent) per_intent[name] = group(g);
  ordered_json obj{{"per_intent", std::move(per_intent)},
                   {"merge_sgd", group(stats.merge_sgd)},
                   {"simulation", group(stats.simulation)},
                   {"total", group(stats.total)}};
  return obj.dump(2);
}

}  // namespace salesgen
