#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "salesgen/dialogue.hpp"

// Crowdsourcing round trip: CSV task exports (with an instructions file),
// ingestion of completed annotation CSVs, and the aggregate statistics
// reported over them.

namespace salesgen {

struct AnnotationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Task1Annotation {
  std::string dialogue_id;
  std::string worker_id;
  int q1_relevance = 0;
  int q2_aggressiveness = 0;
  int q3_overall = 0;  // all scores in [1,5]
};

struct Task2Annotation {
  std::string dialogue_id;
  std::string worker_id;
  int q1_right_time = 0;
  int q2_relevance = 0;
  int q3_aggressiveness = 0;
  int q4_overall = 0;
  int best_candidate_index = 0;  // in [0,4]
};

struct Task3Annotation {
  std::string snippet_id;
  std::string worker_id;
  std::array<int, 3> rank_per_detector{};  // each in [1,3]; equal ranks allowed
  std::set<std::string> own_intents;       // subset of the six; empty means NONE
};

// Conversation snippet with the intents proposed by the three detectors.
struct Snippet {
  std::string id;
  std::string text;
  std::array<std::vector<std::string>, 3> detector_intents;
};

// Exports write an RFC-4180 CSV next to a "<out_path>.instructions.txt" file
// holding the worker guideline; they return the number of rows written.
int export_amt_task1(const std::vector<Dialogue>& corpus, const std::string& out_path);
int export_amt_task2(const std::vector<Dialogue>& corpus, const std::string& out_path);
int export_amt_task3(const std::vector<Snippet>& snippets, const std::string& out_path);

// Snippet file: one {"snippet_id","text","detectors":[[..],[..],[..]]} JSON
// object per line.
std::vector<Snippet> read_snippets(const std::string& path);

std::vector<Task1Annotation> ingest_task1(const std::string& path);
std::vector<Task2Annotation> ingest_task2(const std::string& path);
std::vector<Task3Annotation> ingest_task3(const std::string& path);

// Histogram of per-item mean scores, bin width 0.5 over [1,5]; the last bin
// is closed so a mean of exactly 5.0 lands in [4.5,5.0].
struct ScoreHistogram {
  std::array<int, 8> bins{};

  void add(double value);
  int total() const;
};

struct QuestionSummary {
  std::string label;
  double mean = 0.0;  // mean of per-item means
  ScoreHistogram histogram;
};

struct AggregateReport {
  int task = 1;
  std::vector<std::string> question_labels;
  std::map<std::string, std::vector<double>> item_means;  // item id -> per-question means
  std::vector<QuestionSummary> questions;
  int excluded_items = 0;                            // items without exactly 3 workers
  std::map<std::string, int> modal_best_candidate;   // task 2 only; ties -> smallest index
};

// Per item and question: arithmetic mean over the item's 3 workers. Items
// with any other worker count are excluded and counted.
AggregateReport aggregate_scores(const std::vector<Task1Annotation>& annotations);
AggregateReport aggregate_scores(const std::vector<Task2Annotation>& annotations);

struct ProvenanceBreakdown {
  std::map<std::string, std::vector<QuestionSummary>> by_provenance;
  int missing_ids = 0;  // annotated items absent from the corpus
};

ProvenanceBreakdown compare_provenance(const AggregateReport& report,
                                       const std::vector<Dialogue>& corpus);

enum class DeviationForm { Population, Sample };

// Which observations feed the deviation: every (snippet, worker) rank
// record, or per-snippet means over the workers first.
enum class RankScope { PerRecord, PerSnippetWorkerMean };

struct RankSummary {
  std::string detector;
  double mean_rank = 0.0;
  double stddev = 0.0;
  int observations = 0;
};

std::array<RankSummary, 3> aggregate_ranks(const std::vector<Task3Annotation>& annotations,
                                           DeviationForm form = DeviationForm::Population,
                                           RankScope scope = RankScope::PerRecord);

std::string report_to_json(const AggregateReport& report);
std::string render_report_text(const AggregateReport& report);
std::string ranks_to_json(const std::array<RankSummary, 3>& ranks);
std::string render_ranks_text(const std::array<RankSummary, 3>& ranks,
                              DeviationForm form = DeviationForm::Population);
std::string provenance_to_json(const ProvenanceBreakdown& breakdown);

// Worker guideline shown with each task export.
const std::string& task_instructions(int task);

}  // namespace salesgen
