#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "salesgen/csv.hpp"
#include "salesgen/eval.hpp"

#include "oracles.hpp"

using namespace salesgen;

namespace {

Dialogue evaluated_dialogue(const std::string& id, Provenance provenance,
                            bool with_candidates) {
  Dialogue d;
  d.id = id;
  d.provenance = provenance;
  d.intent = target_intents()[0];
  const std::string transition = "Do you want to find movies to watch?";
  d.turns = {
      Turn{Speaker::Sales, "Hi, how is your day going?", Phase::Chitchat, {}},
      Turn{Speaker::User, "Great! I watched two films, \"Alien\" among them.", Phase::Chitchat, {}},
      Turn{Speaker::Sales, transition, Phase::Transition, {}},
      Turn{Speaker::User, "Yes, show me something new.", Phase::Tod, {}},
  };
  if (with_candidates) {
    d.transition_candidates = {transition, "Interested in a movie?", "How about a film?",
                               "Shall I find a movie?", "Want a recommendation?"};
  }
  return d;
}

std::string annotation_csv_task1(const std::vector<std::array<std::string, 5>>& rows) {
  std::ostringstream os;
  csv_write_row(os, {"dialogue_id", "worker_id", "q1", "q2", "q3"});
  for (const auto& row : rows) {
    csv_write_row(os, {row[0], row[1], row[2], row[3], row[4]});
  }
  return os.str();
}

}  // namespace

TEST_CASE("task 1 export writes one row per dialogue plus instructions") {
  const std::vector<Dialogue> corpus = {evaluated_dialogue("a", Provenance::MergeSgd, false),
                                        evaluated_dialogue("b", Provenance::Simulation, false),
                                        evaluated_dialogue("c", Provenance::MergeSgd, false)};
  const std::string out = oracles::temp_path("task1.csv");
  CHECK(export_amt_task1(corpus, out) == 3);

  const auto rows = csv_parse(oracles::read_file(out));
  REQUIRE(rows.size() == 4);  // header + 3
  CHECK(rows[0] == std::vector<std::string>{"dialogue_id", "dialogue"});
  CHECK(rows[1][0] == "a");
  CHECK(rows[1][1].find("SALES: Hi, how is your day going?") == 0);
  CHECK(rows[1][1].find("\"Alien\"") != std::string::npos);  // quoting survives

  const std::string instructions = oracles::read_file(out + ".instructions.txt");
  CHECK(instructions.find("rate the conversation") != std::string::npos);
  CHECK(instructions == task_instructions(1));
}

TEST_CASE("task 2 export needs the five transition candidates") {
  const std::string out = oracles::temp_path("task2.csv");

  SUBCASE("a dialogue without candidates is named in the error") {
    const std::vector<Dialogue> corpus = {evaluated_dialogue("ok", Provenance::MergeSgd, true),
                                          evaluated_dialogue("broken", Provenance::MergeSgd, false)};
    try {
      export_amt_task2(corpus, out);
      FAIL("expected AnnotationError");
    } catch (const AnnotationError& e) {
      CHECK(std::string(e.what()).find("broken") != std::string::npos);
    }
  }
  SUBCASE("well-formed corpora export the candidate columns") {
    const std::vector<Dialogue> corpus = {evaluated_dialogue("a", Provenance::MergeSgd, true)};
    CHECK(export_amt_task2(corpus, out) == 1);
    const auto rows = csv_parse(oracles::read_file(out));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].size() == 8);  // id, dialogue, transition, 5 candidates
    CHECK(rows[1][2] == "Do you want to find movies to watch?");
    CHECK(rows[1][1].find("- [Transition]") != std::string::npos);  // highlighted line
    CHECK(rows[1][7] == "Want a recommendation?");
  }
}

TEST_CASE("task 3 export rows carry the three detector intent lists") {
  std::vector<Snippet> snippets;
  for (int i = 0; i < 5; ++i) {
    Snippet s;
    s.id = "snip-" + std::to_string(i);
    s.text = "SALES: Hello, what is your hobby?\nUSER: I like to read a lot.";
    s.detector_intents = {{std::vector<std::string>{"FindMovies", "LookupMusic"},
                           std::vector<std::string>{"PlaySong"},
                           std::vector<std::string>{}}};
    snippets.push_back(std::move(s));
  }
  const std::string out = oracles::temp_path("task3.csv");
  CHECK(export_amt_task3(snippets, out) == 5);
  const auto rows = csv_parse(oracles::read_file(out));
  REQUIRE(rows.size() == 6);
  CHECK(rows[1][2] == "FindMovies;LookupMusic");
  CHECK(rows[1][3] == "PlaySong");
  CHECK(rows[1][4] == "NONE");

  // Snippet NDJSON ingestion round-trip.
  const std::string ndjson = oracles::temp_path("snippets.ndjson");
  oracles::write_file(
      ndjson,
      R"({"snippet_id":"s1","text":"USER: hi","detectors":[["FindMovies"],[],["PlaySong"]]})"
      "\n");
  const auto loaded = read_snippets(ndjson);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].detector_intents[0] == std::vector<std::string>{"FindMovies"});
  CHECK(loaded[0].detector_intents[1].empty());
}

TEST_CASE("ingestion validates ranges, duplicates and columns") {
  const std::string path = oracles::temp_path("task1_annotations.csv");

  SUBCASE("a well-formed 3x3 file yields nine records") {
    oracles::write_file(path, annotation_csv_task1({{"d1", "w1", "3", "4", "5"},
                                                    {"d1", "w2", "2", "2", "2"},
                                                    {"d1", "w3", "1", "5", "3"},
                                                    {"d2", "w1", "4", "4", "4"},
                                                    {"d2", "w2", "4", "3", "4"},
                                                    {"d2", "w3", "5", "5", "5"},
                                                    {"d3", "w1", "3", "3", "3"},
                                                    {"d3", "w2", "3", "3", "3"},
                                                    {"d3", "w3", "3", "3", "3"}}));
    CHECK(ingest_task1(path).size() == 9);
  }
  SUBCASE("a zero score is a range error with its row number") {
    oracles::write_file(path, annotation_csv_task1({{"d1", "w1", "0", "4", "5"}}));
    try {
      ingest_task1(path);
      FAIL("expected AnnotationError");
    } catch (const AnnotationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("row 2") != std::string::npos);
      CHECK(msg.find("q1") != std::string::npos);
    }
  }
  SUBCASE("a score of six is out of range") {
    oracles::write_file(path, annotation_csv_task1({{"d1", "w1", "3", "6", "5"}}));
    CHECK_THROWS_AS(ingest_task1(path), AnnotationError);
  }
  SUBCASE("duplicate worker on one dialogue") {
    oracles::write_file(path, annotation_csv_task1({{"d1", "w1", "3", "4", "5"},
                                                    {"d1", "w1", "2", "2", "2"}}));
    try {
      ingest_task1(path);
      FAIL("expected AnnotationError");
    } catch (const AnnotationError& e) {
      CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
  }
  SUBCASE("missing columns are named") {
    oracles::write_file(path, "dialogue_id,worker_id,q1,q2\r\nd1,w1,1,2\r\n");
    CHECK_THROWS_WITH_AS(ingest_task1(path), "missing column: q3", AnnotationError);
  }
}

TEST_CASE("task 2 and 3 ingestion validate their extra columns") {
  const std::string path = oracles::temp_path("task23_annotations.csv");

  SUBCASE("best_idx range") {
    std::ostringstream os;
    csv_write_row(os, {"dialogue_id", "worker_id", "q1", "q2", "q3", "q4", "best_idx"});
    csv_write_row(os, {"d1", "w1", "3", "3", "3", "3", "5"});
    oracles::write_file(path, os.str());
    CHECK_THROWS_AS(ingest_task2(path), AnnotationError);
  }
  SUBCASE("rank range and own intents") {
    std::ostringstream os;
    csv_write_row(os, {"snippet_id", "worker_id", "rank_d1", "rank_d2", "rank_d3",
                       "own_intents"});
    csv_write_row(os, {"s1", "w1", "1", "1", "1", "FindMovies;PlaySong"});
    csv_write_row(os, {"s1", "w2", "2", "1", "3", "NONE"});
    csv_write_row(os, {"s1", "w3", "1", "2", "3", ""});
    oracles::write_file(path, os.str());
    const auto records = ingest_task3(path);
    REQUIRE(records.size() == 3);
    CHECK(records[0].own_intents == std::set<std::string>{"FindMovies", "PlaySong"});
    CHECK(records[1].own_intents.empty());
    CHECK(records[2].own_intents.empty());

    std::ostringstream bad;
    csv_write_row(bad, {"snippet_id", "worker_id", "rank_d1", "rank_d2", "rank_d3",
                        "own_intents"});
    csv_write_row(bad, {"s1", "w1", "4", "1", "1", "NONE"});
    oracles::write_file(path, bad.str());
    CHECK_THROWS_AS(ingest_task3(path), AnnotationError);

    std::ostringstream unknown;
    csv_write_row(unknown, {"snippet_id", "worker_id", "rank_d1", "rank_d2", "rank_d3",
                            "own_intents"});
    csv_write_row(unknown, {"s1", "w1", "1", "1", "1", "EatSnacks"});
    oracles::write_file(path, unknown.str());
    CHECK_THROWS_AS(ingest_task3(path), AnnotationError);
  }
}

TEST_CASE("score aggregation means the three workers per item") {
  std::vector<Task1Annotation> annotations = {
      {"d1", "w1", 3, 2, 3},
      {"d1", "w2", 4, 2, 3},
      {"d1", "w3", 5, 2, 3},
  };
  const AggregateReport report = aggregate_scores(annotations);
  REQUIRE(report.item_means.count("d1") == 1);
  CHECK(report.item_means.at("d1")[0] == doctest::Approx(4.0));  // {3,4,5}
  CHECK(report.item_means.at("d1")[1] == doctest::Approx(2.0));
  CHECK(report.excluded_items == 0);
  CHECK(report.questions[0].mean == doctest::Approx(4.0));
}

TEST_CASE("uniform threes give a single-bin distribution") {
  std::vector<Task1Annotation> annotations;
  for (int item = 0; item < 10; ++item) {
    for (int w = 0; w < 3; ++w) {
      annotations.push_back({"d" + std::to_string(item), "w" + std::to_string(w), 3, 3, 3});
    }
  }
  const AggregateReport report = aggregate_scores(annotations);
  for (const QuestionSummary& q : report.questions) {
    CHECK(q.mean == doctest::Approx(3.0));
    CHECK(q.histogram.total() == 10);
    CHECK(q.histogram.bins[4] == 10);  // [3.0, 3.5)
  }
}

TEST_CASE("items without exactly three workers are excluded and counted") {
  std::vector<Task1Annotation> annotations = {
      {"full", "w1", 1, 1, 1},  {"full", "w2", 2, 2, 2},  {"full", "w3", 3, 3, 3},
      {"short", "w1", 5, 5, 5}, {"short", "w2", 5, 5, 5},
      {"long", "w1", 1, 1, 1},  {"long", "w2", 1, 1, 1},
      {"long", "w3", 1, 1, 1},  {"long", "w4", 1, 1, 1},
  };
  const AggregateReport report = aggregate_scores(annotations);
  CHECK(report.item_means.size() == 1);
  CHECK(report.excluded_items == 2);
}

TEST_CASE("histograms equal a brute-force recount on synthetic fixtures") {
  std::mt19937_64 rng(4040);
  std::vector<Task1Annotation> annotations;
  const int items = 120;
  for (int item = 0; item < items; ++item) {
    for (int w = 0; w < 3; ++w) {
      annotations.push_back({"d" + std::to_string(item), "w" + std::to_string(w),
                             1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5),
                             1 + static_cast<int>(rng() % 5)});
    }
  }
  const AggregateReport report = aggregate_scores(annotations);

  // Independent recount per question.
  for (int q = 0; q < 3; ++q) {
    std::array<int, 8> expected{};
    for (int item = 0; item < items; ++item) {
      double sum = 0;
      for (const auto& a : annotations) {
        if (a.dialogue_id != "d" + std::to_string(item)) continue;
        sum += q == 0 ? a.q1_relevance : q == 1 ? a.q2_aggressiveness : a.q3_overall;
      }
      const double mean = sum / 3.0;
      int bin = static_cast<int>((mean - 1.0) / 0.5);
      if (bin > 7) bin = 7;
      ++expected[static_cast<std::size_t>(bin)];
    }
    CHECK(report.questions[static_cast<std::size_t>(q)].histogram.bins == expected);
  }
}

TEST_CASE("aggregation is invariant under record order") {
  std::mt19937_64 rng(11);
  std::vector<Task2Annotation> annotations;
  for (int item = 0; item < 25; ++item) {
    for (int w = 0; w < 3; ++w) {
      annotations.push_back({"d" + std::to_string(item), "w" + std::to_string(w),
                             1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5),
                             1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 5),
                             static_cast<int>(rng() % 5)});
    }
  }
  const std::string before = report_to_json(aggregate_scores(annotations));
  std::shuffle(annotations.begin(), annotations.end(), rng);
  CHECK(report_to_json(aggregate_scores(annotations)) == before);
}

TEST_CASE("the modal best candidate breaks ties at the smallest index") {
  std::vector<Task2Annotation> annotations = {
      {"d1", "w1", 3, 3, 3, 3, 2}, {"d1", "w2", 3, 3, 3, 3, 2}, {"d1", "w3", 3, 3, 3, 3, 0},
      {"d2", "w1", 3, 3, 3, 3, 4}, {"d2", "w2", 3, 3, 3, 3, 1}, {"d2", "w3", 3, 3, 3, 3, 1},
      {"d3", "w1", 3, 3, 3, 3, 3}, {"d3", "w2", 3, 3, 3, 3, 0}, {"d3", "w3", 3, 3, 3, 3, 3},
      {"tie", "w1", 3, 3, 3, 3, 4}, {"tie", "w2", 3, 3, 3, 3, 2}, {"tie", "w3", 3, 3, 3, 3, 1},
  };
  const AggregateReport report = aggregate_scores(annotations);
  CHECK(report.modal_best_candidate.at("d1") == 2);
  CHECK(report.modal_best_candidate.at("d2") == 1);
  CHECK(report.modal_best_candidate.at("d3") == 3);
  CHECK(report.modal_best_candidate.at("tie") == 1);  // all singletons: smallest index
}

TEST_CASE("provenance comparison splits the distributions") {
  std::vector<Dialogue> corpus = {evaluated_dialogue("m1", Provenance::MergeSgd, false),
                                  evaluated_dialogue("m2", Provenance::MergeSgd, false),
                                  evaluated_dialogue("s1", Provenance::Simulation, false),
                                  evaluated_dialogue("s2", Provenance::Simulation, false)};

  SUBCASE("two merge and two simulation dialogues") {
    std::vector<Task1Annotation> annotations;
    for (const std::string id : {"m1", "m2", "s1", "s2"}) {
      const bool sim = id[0] == 's';
      for (int w = 0; w < 3; ++w) {
        // Simulation items score one point higher on q1.
        annotations.push_back({id, "w" + std::to_string(w), sim ? 4 : 3, 3, 3});
      }
    }
    const auto breakdown = compare_provenance(aggregate_scores(annotations), corpus);
    REQUIRE(breakdown.by_provenance.count("MERGE_SGD") == 1);
    REQUIRE(breakdown.by_provenance.count("SIMULATION") == 1);
    CHECK(breakdown.by_provenance.at("MERGE_SGD")[0].histogram.total() == 2);
    CHECK(breakdown.by_provenance.at("SIMULATION")[0].histogram.total() == 2);
    const double shift = breakdown.by_provenance.at("SIMULATION")[0].mean -
                         breakdown.by_provenance.at("MERGE_SGD")[0].mean;
    CHECK(shift == doctest::Approx(1.0));
    CHECK(breakdown.missing_ids == 0);
  }
  SUBCASE("annotations for unknown dialogues are counted") {
    std::vector<Task1Annotation> annotations;
    for (int w = 0; w < 3; ++w) {
      annotations.push_back({"m1", "w" + std::to_string(w), 3, 3, 3});
      annotations.push_back({"ghost", "w" + std::to_string(w), 3, 3, 3});
    }
    const auto breakdown = compare_provenance(aggregate_scores(annotations), corpus);
    CHECK(breakdown.missing_ids == 1);
    CHECK(breakdown.by_provenance.count("SIMULATION") == 0);  // all-merge slice
  }
}

TEST_CASE("rank aggregation matches the worked example") {
  // Workers rank the three detectors (1,2,3), (2,1,3), (1,2,3).
  std::vector<Task3Annotation> annotations = {
      {"s1", "w1", {1, 2, 3}, {}},
      {"s1", "w2", {2, 1, 3}, {}},
      {"s1", "w3", {1, 2, 3}, {}},
  };
  const auto ranks = aggregate_ranks(annotations);
  CHECK(ranks[0].mean_rank == doctest::Approx(4.0 / 3.0));
  CHECK(ranks[1].mean_rank == doctest::Approx(5.0 / 3.0));
  CHECK(ranks[2].mean_rank == doctest::Approx(3.0));
  CHECK(ranks[2].stddev == doctest::Approx(0.0));
  CHECK(ranks[0].detector == "Detector1");
}

TEST_CASE("all-ones ranks give unit means and zero deviation") {
  std::vector<Task3Annotation> annotations;
  for (int s = 0; s < 4; ++s) {
    for (int w = 0; w < 3; ++w) {
      annotations.push_back(
          {"s" + std::to_string(s), "w" + std::to_string(w), {1, 1, 1}, {}});
    }
  }
  for (const RankSummary& r : aggregate_ranks(annotations)) {
    CHECK(r.mean_rank == doctest::Approx(1.0));
    CHECK(r.stddev == doctest::Approx(0.0));
    CHECK(r.observations == 12);
  }
}

TEST_CASE("rank aggregation equals a brute-force recount on random records") {
  std::mt19937_64 rng(868686);
  std::vector<Task3Annotation> annotations;
  for (int s = 0; s < 300; ++s) {
    for (int w = 0; w < 3; ++w) {
      annotations.push_back({"s" + std::to_string(s), "w" + std::to_string(w),
                             {1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3),
                              1 + static_cast<int>(rng() % 3)},
                             {}});
    }
  }
  const auto ranks = aggregate_ranks(annotations);
  for (int d = 0; d < 3; ++d) {
    double sum = 0;
    for (const auto& a : annotations) sum += a.rank_per_detector[static_cast<std::size_t>(d)];
    const double mean = sum / static_cast<double>(annotations.size());
    double sq = 0;
    for (const auto& a : annotations) {
      const double v = a.rank_per_detector[static_cast<std::size_t>(d)];
      sq += (v - mean) * (v - mean);
    }
    const double stddev = std::sqrt(sq / static_cast<double>(annotations.size()));
    CHECK(ranks[static_cast<std::size_t>(d)].mean_rank == doctest::Approx(mean));
    CHECK(ranks[static_cast<std::size_t>(d)].stddev == doctest::Approx(stddev));
    CHECK(ranks[static_cast<std::size_t>(d)].mean_rank >= 1.0);
    CHECK(ranks[static_cast<std::size_t>(d)].mean_rank <= 3.0);
  }

  // Sample form uses the n-1 denominator.
  const auto sample = aggregate_ranks(annotations, DeviationForm::Sample);
  const auto population = aggregate_ranks(annotations, DeviationForm::Population);
  CHECK(sample[0].stddev > population[0].stddev);

  // Per-snippet scope averages the workers first.
  const auto scoped =
      aggregate_ranks(annotations, DeviationForm::Population, RankScope::PerSnippetWorkerMean);
  CHECK(scoped[0].observations == 300);
  CHECK(scoped[0].mean_rank == doctest::Approx(population[0].mean_rank));
}

TEST_CASE("rank text rendering mirrors the detector table") {
  std::vector<Task3Annotation> annotations = {{"s1", "w1", {1, 2, 2}, {}},
                                              {"s1", "w2", {1, 2, 2}, {}},
                                              {"s1", "w3", {2, 1, 2}, {}}};
  const std::string text = render_ranks_text(aggregate_ranks(annotations));
  CHECK(text.find("Detector") != std::string::npos);
  CHECK(text.find("Avg Rank") != std::string::npos);
  CHECK(text.find("Detector3") != std::string::npos);
  CHECK(text.find("2.00") != std::string::npos);
}
