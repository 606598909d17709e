#include "salesgen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "salesgen/csv.hpp"
#include "salesgen/intent_detect.hpp"
#include "salesgen/text_norm.hpp"

namespace salesgen {

namespace {

const std::string kTask1Instructions = R"(Task 1: Salesperson-Customer Conversation

In order to improve the skills to sell more products, a beginner salesperson is learning dialogue strategies by reading prior conversations between customers and other salespeople. This beginner salesperson needs your help to determine if a salesperson used a good dialogue strategy to conduct an effective and strategic sales conversion.

In more detail, you will be presented with one conversation history between a salesperson and a customer. The salesperson may recommend a movie, a song, attractions and so on for the customer. Instead of recommending a product or service to the customer directly, the salesperson wants to make the recommendation more gradually and naturally by starting the conversation with chit-chat.

In this task, you need to rate the conversation from the following 3 aspects:
- How relevant is the recommended product or service to the conversation context?
- How aggressive is the salesperson's communication strategy?
- Do you think the sales conversation is overall a good example of making sales recommendations?

Questions

How relevant is the recommended product or service to the conversation context?
  1: Not at all (it is impossible for me to find the relevance between the recommended item and the context)
  2: Less than neutral (it is a bit hard for me to find the relevance between the recommended item and the context)
  3: Neutral (With some effort, I can find a reasonable relevance between the recommended item and the context)
  4: Relevant (I can easily find that the recommend item has obvious relevance with the context, even though the recommended item is not perfectly matching the context)
  5: Very Relevant (the recommended item is perfectly matching the context)

How aggressive is the salesperson's communication?
  1: Not aggressive at all (the conversation flows very naturally and smoothly from chit-chat to making recommendations; If I was the customer, I feel very comfortable when the salesperson is making recommendations)
  2: Less than neutral (The flow of the conversation is generally natural and smooth, although there are few imperfections)
  3: Neutral (The salesperson starts to recommend an item; It is ok to me)
  4: Aggressive (The salesperson suddenly starts to recommend an item; this makes me a bit uncomfortable)
  5: Very aggressive (The salesperson suddenly starts to recommend an item; this makes me very uncomfortable)

Is the sales conversation overall a good example to the beginner salesperson?
  1: Not at all (This example is really very bad; the beginner salesperson should not spend time on learning this example)
  2: Less than neutral (This example is not good; it would not be a pity if the beginner salesperson skips it)
  3: Neutral (This is not a bad example; the beginner salesperson may learn some useful dialogue skills from it, but not very much)
  4: Good (This is a good example of making recommendations; the imperfections can be ignored; the beginner salesperson should keep this example in his mind)
  5: Very good (This is a perfect example of making recommendations; the beginner salesperson should keep it deeply in his mind)
)";

const std::string kTask2Instructions = R"(Task 2: Chit-Chat to Task-Oriented Transition

In order to improve the skills to sell more products, a beginner salesperson is learning dialogue strategies by reading prior conversations between customers and other salespeople. This beginner salesperson needs your help to determine if a salesperson used a good dialogue strategy to conduct an effective and strategic sales conversion.

You will be presented with a conversation between a salesperson and a customer. The salesperson may recommend a movie, a song, attractions and so on for the customer. Instead of recommending a product or service to the customer directly, the salesperson wants to make the recommendation more gradually and naturally by starting the conversation with chit-chat. Once the salesperson thinks it is the right time, he will say something (named transition in this task) to change the conversation from chit-chat to recommendation-making.

In this task, you will need to rate the transition from the following 4 aspects:
- Is it the right time to make the transition?
- Is the transition relevant to the conversation context?
- Is the transition aggressive?
- Is the transition overall good?

Questions

Is it the right time to make the transition?
  1: Very bad time (This is definitely not the right time to do it. It is highly likely that the customer will find you very annoying)
  2: Bad time (This is not a good time to make the transition. It may cause negative customer feelings)
  3: Neutral (I don't think making the transition at the time is good, but it is ok to me to continue the conversation if I was the customer)
  4: Good time (it is a good time to make the transition, but maybe it will be perfect if the transition is made earlier or later)
  5: Very good time (it is a perfect time to make the transition)

Is the transition relevant to the conversation context?
  1: Not at all (it is impossible for me to find the relevance between the transition and the context)
  2: Less than neutral (it is a bit hard for me to find the relevance between the transition and the context)
  3: Neutral (With some effort, I can find a reasonable relevance between the transition and the context)
  4: Relevant (I can easily find that the transition has obvious relevance with the context, even though the transition is not perfectly matching the context)
  5: Very Relevant (the transition is perfectly matching the context; it is hard for me to find a better transition)

Is the transition aggressive?
  1: Not aggressive at all (the conversation flows very naturally and smoothly from chit-chat to making the transition; If I was the customer, I feel very comfortable when the salesperson is doing it)
  2: Less than neutral (The flow of the conversation is generally natural and smooth, although there are few imperfections)
  3: Neutral (The salesperson starts to make the transition; It is ok to me)
  4: Aggressive (The salesperson suddenly starts to make the transition; this makes me a bit uncomfortable)
  5: Very aggressive (The salesperson suddenly starts to make the transition; this makes me very uncomfortable)

Is the transition overall good?
  1: Not at all (This transition is really very bad; the beginner should not spend time on leaning this transition)
  2: Less than neutral (This transition is not good; It would not be a pity if the beginner salesperson skips this example)
  3: Neutral (This is not a bad transition; the beginner salesperson may learn some useful dialogue skills from it, but not very much)
  4: Good (This is a good example of making a transition; the imperfections can be ignored; the beginner salesperson should keep this example in his mind)
  5: Very good (This is a perfect example of making a transition; the beginner salesperson should keep it deeply in his mind)

Which transition of the following do you think is the best?
  Choose one of the five listed transitions.
)";

const std::string kTask3Instructions = R"(Task 3: Customer's Implicit Intent

In order to improve skills to sell more products, some beginner salespersons are practicing dialogue strategies by reading prior conversations between customers and other salespeople. When reading a conversation, they will try to guess what the customer is thinking or what the customer might be most likely interested in. These beginner salespersons need your opinions about the reasonability of their answers.

In this task, you will be presented with a conversation snippet between a salesperson and a customer. These beginners provided their guesses right after a customer's utterance. There are three sets of intent detected by different salespersons. You will need to rank them in terms of the intent relevance (implicit intent) with the conversation. If they have the exactly same intent, you can give them the same rank. Otherwise, please decide which is the better one. 1 for the best intents. 3 for the worst intents. In addition, "None" means there isn't any intent detected by the salespersons.

All possible intents might exist in the conversation.
- LookupSong: find songs to listen to
- PlaySong: play songs
- LookupMusic: find music to listen to
- FindMovies: find movies to watch
- GetTimesForMovie: obtain the available time for watching a movie
- FindAttractions: find attractions to visit

Questions
- Please select the rank for each of the three intent sets (1, 2 or 3).
- Please choose your own answers given this conversation (any of the intents above, or None).
)";

std::string render_dialogue_text(const Dialogue& dialogue, bool mark_transition) {
  std::ostringstream os;
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    const Turn& turn = dialogue.turns[i];
    if (i) os << '\n';
    os << to_string(turn.speaker) << ": " << turn.text;
    if (mark_transition && turn.phase == Phase::Transition) os << " - [Transition]";
  }
  return os.str();
}

void write_instructions(const std::string& out_path, int task) {
  std::ofstream out(out_path + ".instructions.txt", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path + ".instructions.txt");
  out << task_instructions(task);
}

std::string join_intents(const std::vector<std::string>& intents) {
  if (intents.empty()) return "NONE";
  std::string out;
  for (std::size_t i = 0; i < intents.size(); ++i) {
    if (i) out += ';';
    out += intents[i];
  }
  return out;
}

std::string format2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

const std::string& task_instructions(int task) {
  switch (task) {
    case 1: return kTask1Instructions;
    case 2: return kTask2Instructions;
    case 3: return kTask3Instructions;
  }
  throw std::invalid_argument("task must be 1, 2 or 3");
}

int export_amt_task1(const std::vector<Dialogue>& corpus, const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  csv_write_row(out, {"dialogue_id", "dialogue"});
  int rows = 0;
  for (const Dialogue& d : corpus) {
    csv_write_row(out, {d.id, render_dialogue_text(d, false)});
    ++rows;
  }
  write_instructions(out_path, 1);
  return rows;
}

int export_amt_task2(const std::vector<Dialogue>& corpus, const std::string& out_path) {
  std::vector<std::string> offenders;
  for (const Dialogue& d : corpus) {
    if (d.transition_candidates.size() != 5) offenders.push_back(d.id);
  }
  if (!offenders.empty()) {
    std::string msg = "dialogues missing 5 transition candidates:";
    for (const std::string& id : offenders) msg += " " + id;
    throw AnnotationError(msg);
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  csv_write_row(out, {"dialogue_id", "dialogue", "transition", "cand_0", "cand_1",
                      "cand_2", "cand_3", "cand_4"});
  int rows = 0;
  for (const Dialogue& d : corpus) {
    std::string transition;
    for (const Turn& turn : d.turns) {
      if (turn.phase == Phase::Transition) transition = turn.text;
    }
    std::vector<std::string> row = {d.id, render_dialogue_text(d, true), transition};
    row.insert(row.end(), d.transition_candidates.begin(), d.transition_candidates.end());
    csv_write_row(out, row);
    ++rows;
  }
  write_instructions(out_path, 2);
  return rows;
}

int export_amt_task3(const std::vector<Snippet>& snippets, const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path);
  csv_write_row(out, {"snippet_id", "snippet", "detector1_intents", "detector2_intents",
                      "detector3_intents"});
  int rows = 0;
  for (const Snippet& s : snippets) {
    csv_write_row(out, {s.id, s.text, join_intents(s.detector_intents[0]),
                        join_intents(s.detector_intents[1]),
                        join_intents(s.detector_intents[2])});
    ++rows;
  }
  write_instructions(out_path, 3);
  return rows;
}

std::vector<Snippet> read_snippets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snippet file: " + path);
  std::vector<Snippet> snippets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      nlohmann::json obj = nlohmann::json::parse(line);
      Snippet snippet;
      snippet.id = obj.at("snippet_id").get<std::string>();
      snippet.text = obj.at("text").get<std::string>();
      const auto& detectors = obj.at("detectors");
      if (!detectors.is_array() || detectors.size() != 3) {
        throw std::runtime_error("detectors: expected 3 intent lists");
      }
      for (int d = 0; d < 3; ++d) {
        for (const auto& name : detectors[d]) {
          snippet.detector_intents[d].push_back(name.get<std::string>());
        }
      }
      snippets.push_back(std::move(snippet));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return snippets;
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw AnnotationError("missing column: " + name);
  }
};

CsvTable load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open annotation file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto rows = csv_parse(buf.str());
  if (rows.empty()) throw AnnotationError("empty annotation file: " + path);
  CsvTable table;
  table.header = rows.front();
  table.rows.assign(rows.begin() + 1, rows.end());
  return table;
}

int parse_score(const std::string& value, int lo, int hi, const std::string& what,
                std::size_t row) {
  int score = 0;
  try {
    std::size_t pos = 0;
    score = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    throw AnnotationError("row " + std::to_string(row) + ": " + what +
                          " is not an integer: '" + value + "'");
  }
  if (score < lo || score > hi) {
    throw AnnotationError("row " + std::to_string(row) + ": " + what + " out of range [" +
                          std::to_string(lo) + "," + std::to_string(hi) +
                          "]: " + std::to_string(score));
  }
  return score;
}

void check_duplicate(std::set<std::pair<std::string, std::string>>& seen,
                     const std::string& item, const std::string& worker, std::size_t row) {
  if (!seen.insert({item, worker}).second) {
    throw AnnotationError("row " + std::to_string(row) + ": duplicate worker " + worker +
                          " for item " + item);
  }
}

std::set<std::string> parse_own_intents(const std::string& value, std::size_t row) {
  std::set<std::string> out;
  const std::string text = normalize_whitespace(value);
  if (text.empty() || to_lower(text) == "none") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto sep = text.find(';', start);
    std::string name = normalize_whitespace(
        text.substr(start, sep == std::string::npos ? sep : sep - start));
    if (!name.empty()) {
      if (target_intent_index(name) < 0) {
        throw AnnotationError("row " + std::to_string(row) + ": unknown intent: " + name);
      }
      out.insert(name);
    }
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return out;
}

}  // namespace

std::vector<Task1Annotation> ingest_task1(const std::string& path) {
  CsvTable table = load_csv(path);
  const int id = table.column("dialogue_id");
  const int worker = table.column("worker_id");
  const int q1 = table.column("q1");
  const int q2 = table.column("q2");
  const int q3 = table.column("q3");

  std::vector<Task1Annotation> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 2;  // header is row 1
    Task1Annotation a;
    a.dialogue_id = row.at(id);
    a.worker_id = row.at(worker);
    check_duplicate(seen, a.dialogue_id, a.worker_id, row_no);
    a.q1_relevance = parse_score(row.at(q1), 1, 5, "q1", row_no);
    a.q2_aggressiveness = parse_score(row.at(q2), 1, 5, "q2", row_no);
    a.q3_overall = parse_score(row.at(q3), 1, 5, "q3", row_no);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Task2Annotation> ingest_task2(const std::string& path) {
  CsvTable table = load_csv(path);
  const int id = table.column("dialogue_id");
  const int worker = table.column("worker_id");
  const int q1 = table.column("q1");
  const int q2 = table.column("q2");
  const int q3 = table.column("q3");
  const int q4 = table.column("q4");
  const int best = table.column("best_idx");

  std::vector<Task2Annotation> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 2;
    Task2Annotation a;
    a.dialogue_id = row.at(id);
    a.worker_id = row.at(worker);
    check_duplicate(seen, a.dialogue_id, a.worker_id, row_no);
    a.q1_right_time = parse_score(row.at(q1), 1, 5, "q1", row_no);
    a.q2_relevance = parse_score(row.at(q2), 1, 5, "q2", row_no);
    a.q3_aggressiveness = parse_score(row.at(q3), 1, 5, "q3", row_no);
    a.q4_overall = parse_score(row.at(q4), 1, 5, "q4", row_no);
    a.best_candidate_index = parse_score(row.at(best), 0, 4, "best_idx", row_no);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Task3Annotation> ingest_task3(const std::string& path) {
  CsvTable table = load_csv(path);
  const int id = table.column("snippet_id");
  const int worker = table.column("worker_id");
  const int d1 = table.column("rank_d1");
  const int d2 = table.column("rank_d2");
  const int d3 = table.column("rank_d3");
  const int own = table.column("own_intents");

  std::vector<Task3Annotation> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 2;
    Task3Annotation a;
    a.snippet_id = row.at(id);
    a.worker_id = row.at(worker);
    check_duplicate(seen, a.snippet_id, a.worker_id, row_no);
    a.rank_per_detector[0] = parse_score(row.at(d1), 1, 3, "rank_d1", row_no);
    a.rank_per_detector[1] = parse_score(row.at(d2), 1, 3, "rank_d2", row_no);
    a.rank_per_detector[2] = parse_score(row.at(d3), 1, 3, "rank_d3", row_no);
    a.own_intents = parse_own_intents(row.at(own), row_no);
    out.push_back(std::move(a));
  }
  return out;
}

void ScoreHistogram::add(double value) {
  int bin = static_cast<int>(std::floor((value - 1.0) / 0.5));
  bin = std::clamp(bin, 0, 7);
  ++bins[static_cast<std::size_t>(bin)];
}

int ScoreHistogram::total() const {
  int sum = 0;
  for (int b : bins) sum += b;
  return sum;
}

namespace {

// Shared aggregation over (item, worker, scores) tuples.
struct ScoreRecord {
  std::string item;
  std::vector<int> scores;
  int best_idx = -1;
};

AggregateReport aggregate_records(std::vector<ScoreRecord> records, int task,
                                  std::vector<std::string> labels) {
  AggregateReport report;
  report.task = task;
  report.question_labels = labels;

  std::map<std::string, std::vector<ScoreRecord>> by_item;
  for (ScoreRecord& record : records) by_item[record.item].push_back(std::move(record));

  for (const auto& [item, item_records] : by_item) {
    if (item_records.size() != 3) {
      ++report.excluded_items;
      continue;
    }
    std::vector<double> means(labels.size(), 0.0);
    for (const ScoreRecord& record : item_records) {
      for (std::size_t q = 0; q < labels.size(); ++q) {
        means[q] += record.scores[q];
      }
    }
    for (double& m : means) m /= 3.0;
    report.item_means[item] = means;

    if (task == 2) {
      std::array<int, 5> votes{};
      for (const ScoreRecord& record : item_records) ++votes[record.best_idx];
      int best = 0;
      for (int i = 1; i < 5; ++i) {
        if (votes[i] > votes[best]) best = i;
      }
      report.modal_best_candidate[item] = best;
    }
  }

  for (std::size_t q = 0; q < labels.size(); ++q) {
    QuestionSummary summary;
    summary.label = labels[q];
    double sum = 0.0;
    for (const auto& [item, means] : report.item_means) {
      summary.histogram.add(means[q]);
      sum += means[q];
    }
    summary.mean = report.item_means.empty()
                       ? 0.0
                       : sum / static_cast<double>(report.item_means.size());
    report.questions.push_back(std::move(summary));
  }
  return report;
}

}  // namespace

AggregateReport aggregate_scores(const std::vector<Task1Annotation>& annotations) {
  std::vector<ScoreRecord> records;
  records.reserve(annotations.size());
  for (const Task1Annotation& a : annotations) {
    records.push_back({a.dialogue_id, {a.q1_relevance, a.q2_aggressiveness, a.q3_overall}, -1});
  }
  return aggregate_records(std::move(records), 1,
                           {"q1_relevance", "q2_aggressiveness", "q3_overall"});
}

AggregateReport aggregate_scores(const std::vector<Task2Annotation>& annotations) {
  std::vector<ScoreRecord> records;
  records.reserve(annotations.size());
  for (const Task2Annotation& a : annotations) {
    records.push_back({a.dialogue_id,
                       {a.q1_right_time, a.q2_relevance, a.q3_aggressiveness, a.q4_overall},
                       a.best_candidate_index});
  }
  return aggregate_records(std::move(records), 2,
                           {"q1_right_time", "q2_relevance", "q3_aggressiveness", "q4_overall"});
}

ProvenanceBreakdown compare_provenance(const AggregateReport& report,
                                       const std::vector<Dialogue>& corpus) {
  std::map<std::string, Provenance> provenance_of;
  for (const Dialogue& d : corpus) provenance_of[d.id] = d.provenance;

  ProvenanceBreakdown breakdown;
  std::map<std::string, std::vector<std::vector<double>>> grouped;  // provenance -> item means
  for (const auto& [item, means] : report.item_means) {
    auto it = provenance_of.find(item);
    if (it == provenance_of.end()) {
      ++breakdown.missing_ids;
      continue;
    }
    grouped[to_string(it->second)].push_back(means);
  }

  for (const auto& [provenance, items] : grouped) {
    std::vector<QuestionSummary> summaries;
    for (std::size_t q = 0; q < report.question_labels.size(); ++q) {
      QuestionSummary summary;
      summary.label = report.question_labels[q];
      double sum = 0.0;
      for (const auto& means : items) {
        summary.histogram.add(means[q]);
        sum += means[q];
      }
      summary.mean = items.empty() ? 0.0 : sum / static_cast<double>(items.size());
      summaries.push_back(std::move(summary));
    }
    breakdown.by_provenance[provenance] = std::move(summaries);
  }
  return breakdown;
}

std::array<RankSummary, 3> aggregate_ranks(const std::vector<Task3Annotation>& annotations,
                                           DeviationForm form, RankScope scope) {
  std::array<std::vector<double>, 3> observations;
  if (scope == RankScope::PerRecord) {
    for (const Task3Annotation& a : annotations) {
      for (int d = 0; d < 3; ++d) {
        observations[d].push_back(static_cast<double>(a.rank_per_detector[d]));
      }
    }
  } else {
    std::map<std::string, std::array<std::pair<double, int>, 3>> per_snippet;
    for (const Task3Annotation& a : annotations) {
      auto& acc = per_snippet[a.snippet_id];
      for (int d = 0; d < 3; ++d) {
        acc[d].first += a.rank_per_detector[d];
        acc[d].second += 1;
      }
    }
    for (const auto& [snippet, acc] : per_snippet) {
      for (int d = 0; d < 3; ++d) {
        observations[d].push_back(acc[d].first / acc[d].second);
      }
    }
  }

  std::array<RankSummary, 3> out;
  for (int d = 0; d < 3; ++d) {
    RankSummary& summary = out[d];
    summary.detector = "Detector" + std::to_string(d + 1);
    summary.observations = static_cast<int>(observations[d].size());
    if (observations[d].empty()) continue;
    double sum = 0.0;
    for (double v : observations[d]) sum += v;
    summary.mean_rank = sum / summary.observations;
    double sq = 0.0;
    for (double v : observations[d]) {
      sq += (v - summary.mean_rank) * (v - summary.mean_rank);
    }
    const int denom = form == DeviationForm::Population ? summary.observations
                                                        : summary.observations - 1;
    summary.stddev = denom > 0 ? std::sqrt(sq / denom) : 0.0;
  }
  return out;
}

namespace {

nlohmann::ordered_json summary_json(const QuestionSummary& summary) {
  return {{"label", summary.label},
          {"mean", summary.mean},
          {"histogram", summary.histogram.bins}};
}

}  // namespace

std::string report_to_json(const AggregateReport& report) {
  nlohmann::ordered_json items = nlohmann::ordered_json::object();
  for (const auto& [item, means] : report.item_means) items[item] = means;
  nlohmann::ordered_json questions = nlohmann::ordered_json::array();
  for (const QuestionSummary& q : report.questions) questions.push_back(summary_json(q));

  nlohmann::ordered_json obj{{"task", report.task},
                             {"questions", std::move(questions)},
                             {"item_means", std::move(items)},
                             {"excluded_items", report.excluded_items}};
  if (report.task == 2) {
    nlohmann::ordered_json modal = nlohmann::ordered_json::object();
    for (const auto& [item, idx] : report.modal_best_candidate) modal[item] = idx;
    obj["modal_best_candidate"] = std::move(modal);
  }
  return obj.dump(2);
}

std::string render_report_text(const AggregateReport& report) {
  std::ostringstream os;
  os << "Task " << report.task << " score aggregates (per-item means over 3 workers, "
     << report.item_means.size() << " items, " << report.excluded_items << " excluded)\n";
  os << "Question              Mean  |";
  for (int b = 0; b < 8; ++b) {
    os << " [" << format2(1.0 + 0.5 * b) << "," << format2(1.5 + 0.5 * b)
       << (b == 7 ? "]" : ")");
  }
  os << '\n';
  for (const QuestionSummary& q : report.questions) {
    os << q.label;
    for (std::size_t i = q.label.size(); i < 20; ++i) os << ' ';
    os << format2(q.mean) << "  |";
    for (int b = 0; b < 8; ++b) {
      std::string count = std::to_string(q.histogram.bins[b]);
      for (std::size_t i = count.size(); i < 11; ++i) os << ' ';
      os << count;
    }
    os << '\n';
  }
  return os.str();
}

std::string ranks_to_json(const std::array<RankSummary, 3>& ranks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const RankSummary& r : ranks) {
    arr.push_back({{"detector", r.detector},
                   {"mean_rank", r.mean_rank},
                   {"stddev", r.stddev},
                   {"observations", r.observations}});
  }
  return arr.dump(2);
}

std::string render_ranks_text(const std::array<RankSummary, 3>& ranks, DeviationForm form) {
  std::ostringstream os;
  os << "Detector     Avg Rank (std., "
     << (form == DeviationForm::Population ? "population" : "sample") << ")\n";
  for (const RankSummary& r : ranks) {
    os << r.detector;
    for (std::size_t i = r.detector.size(); i < 13; ++i) os << ' ';
    os << format2(r.mean_rank) << " ± " << format2(r.stddev) << '\n';
  }
  return os.str();
}

std::string provenance_to_json(const ProvenanceBreakdown& breakdown) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [provenance, summaries] : breakdown.by_provenance) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const QuestionSummary& q : summaries) arr.push_back(summary_json(q));
    obj[provenance] = std::move(arr);
  }
  obj["missing_ids"] = breakdown.missing_ids;
  return obj.dump(2);
}

}  // namespace salesgen
