// Command-line front end: seeded corpus generation plus the surrounding data
// tooling (stats, TOD-QA and transition training data builders, crowd task
// export/aggregation).

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "salesgen/dialogue.hpp"
#include "salesgen/eval.hpp"
#include "salesgen/intent_detect.hpp"
#include "salesgen/pipeline.hpp"
#include "salesgen/sgd.hpp"
#include "salesgen/transition.hpp"

namespace {

using namespace salesgen;

int cmd_generate(const std::string& config_path, int n, const std::string& mode,
                 std::optional<std::int64_t> seed, int jobs) {
  PipelineConfig config = config_path.empty() ? parse_config("") : load_config(config_path);
  if (!mode.empty()) config.continuation.mode = continuation_mode_from_string(mode);
  if (seed) config.master_seed = *seed;

  GenerationReport report = run_pipeline(config, n, make_backends(config), jobs);
  std::cout << report_to_json(report) << '\n';
  return 0;
}

int cmd_stats(const std::string& corpus_path) {
  const CorpusStats stats = compute_stats(read_corpus(corpus_path));
  std::cout << render_stats_table(stats) << '\n' << stats_to_json(stats) << '\n';
  return 0;
}

int cmd_build_tod_qa(const std::string& sgd_path, const std::string& out_path,
                     const std::string& ratio, std::int64_t seed) {
  NegativeRatio negative_ratio = 1.0;
  if (ratio == "off") negative_ratio = std::nullopt;
  else if (!ratio.empty()) negative_ratio = std::stod(ratio);

  const SgdCorpus corpus = load_sgd_corpus(sgd_path);
  const auto catalog = build_question_catalog(target_intents());
  const auto examples = build_tod_qa(to_annotated(corpus), catalog, negative_ratio, seed);
  write_tod_qa(out_path, examples);

  int yes = 0;
  for (const QAExample& e : examples) yes += e.answer == QALabel::Yes ? 1 : 0;
  const QaTrainDefaults train;
  std::cout << "{\n  \"examples\": " << examples.size() << ",\n  \"yes\": " << yes
            << ",\n  \"no\": " << examples.size() - yes
            << ",\n  \"train_defaults\": {\"learning_rate\": " << train.learning_rate
            << ", \"batch_size\": " << train.batch_size << ", \"epochs\": " << train.epochs
            << ", \"optimizer\": \"" << train.optimizer << "\"}\n}\n";
  return 0;
}

int cmd_build_transition_data(const std::string& corpus_path, const std::string& otters_path,
                              const std::string& out_path) {
  std::vector<TransitionTriple> triples;
  std::size_t from_corpus = 0;
  std::size_t skipped_dialogues = 0;
  if (!corpus_path.empty()) {
    TripleBuildReport report = build_training_triples(read_corpus(corpus_path));
    from_corpus = report.triples.size();
    skipped_dialogues = report.skipped_ids.size();
    triples.insert(triples.end(), report.triples.begin(), report.triples.end());
  }
  std::size_t from_otters = 0;
  int otters_skipped = 0;
  if (!otters_path.empty()) {
    OttersAdaptReport report = adapt_otters(load_otters_tsv(otters_path));
    from_otters = report.triples.size();
    otters_skipped = report.skipped;
    triples.insert(triples.end(), report.triples.begin(), report.triples.end());
  }
  write_training_triples(out_path, triples);

  const TransitionTrainDefaults train;
  std::cout << "{\n  \"triples\": " << triples.size() << ",\n  \"from_corpus\": " << from_corpus
            << ",\n  \"skipped_dialogues\": " << skipped_dialogues
            << ",\n  \"from_otters\": " << from_otters
            << ",\n  \"otters_skipped\": " << otters_skipped
            << ",\n  \"train_defaults\": {\"learning_rate\": " << train.learning_rate
            << ", \"batch_size\": " << train.batch_size << ", \"epochs\": " << train.epochs
            << ", \"optimizer\": \"" << train.optimizer << "\"}\n}\n";
  return 0;
}

int cmd_export_amt(const std::string& corpus_path, int task, const std::string& out_path) {
  int rows = 0;
  if (task == 3) {
    rows = export_amt_task3(read_snippets(corpus_path), out_path);
  } else {
    const std::vector<Dialogue> corpus = read_corpus(corpus_path);
    rows = task == 1 ? export_amt_task1(corpus, out_path)
                     : export_amt_task2(corpus, out_path);
  }
  std::cout << "{\"rows\": " << rows << "}\n";
  return 0;
}

int cmd_aggregate(int task, const std::string& annotations_path,
                  const std::string& corpus_path, bool sample_dev, bool per_snippet) {
  if (task == 3) {
    const auto form = sample_dev ? DeviationForm::Sample : DeviationForm::Population;
    const auto scope = per_snippet ? RankScope::PerSnippetWorkerMean : RankScope::PerRecord;
    const auto ranks = aggregate_ranks(ingest_task3(annotations_path), form, scope);
    std::cout << render_ranks_text(ranks, form) << '\n' << ranks_to_json(ranks) << '\n';
    return 0;
  }

  AggregateReport report = task == 1 ? aggregate_scores(ingest_task1(annotations_path))
                                     : aggregate_scores(ingest_task2(annotations_path));
  std::cout << render_report_text(report) << '\n' << report_to_json(report) << '\n';
  if (!corpus_path.empty()) {
    const auto breakdown = compare_provenance(report, read_corpus(corpus_path));
    std::cout << provenance_to_json(breakdown) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chit-chat to task-oriented dialogue synthesis pipeline"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a dialogue corpus");
  std::string config_path;
  int n_dialogues = 0;
  std::string mode;
  std::optional<std::int64_t> seed;
  int jobs = 1;
  generate->add_option("--config", config_path, "Pipeline config JSON (defaults when omitted)");
  generate->add_option("--n", n_dialogues, "Number of dialogues to attempt")
      ->check(CLI::NonNegativeNumber)
      ->required();
  generate->add_option("--mode", mode, "Continuation mode: merge|sim|mixed")
      ->check(CLI::IsMember({"merge", "sim", "mixed"}));
  std::int64_t seed_value = 0;
  auto* seed_opt = generate->add_option("--seed", seed_value, "Master seed override");
  generate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // stats
  auto* stats = app.add_subcommand("stats", "Corpus statistics table");
  std::string stats_corpus;
  stats->add_option("--corpus", stats_corpus, "Corpus file (NDJSON)")->required();

  // build-tod-qa
  auto* tod_qa = app.add_subcommand("build-tod-qa", "Build yes/no QA data from annotated TOD");
  std::string sgd_path, tod_qa_out, ratio;
  std::int64_t tod_qa_seed = 0;
  tod_qa->add_option("--sgd", sgd_path, "SGD-layout corpus path")->required();
  tod_qa->add_option("--out", tod_qa_out, "Output NDJSON path")->required();
  tod_qa->add_option("--ratio", ratio, "NO downsampling ratio, or 'off'");
  tod_qa->add_option("--seed", tod_qa_seed, "Downsampling seed");

  // build-transition-data
  auto* transition_data =
      app.add_subcommand("build-transition-data", "Build transition training triples");
  std::string triples_corpus, otters_path, triples_out;
  transition_data->add_option("--corpus", triples_corpus, "Generated corpus (NDJSON)");
  transition_data->add_option("--otters", otters_path, "Topic-transition TSV file");
  transition_data->add_option("--out", triples_out, "Output NDJSON path")->required();

  // export-amt
  auto* export_amt = app.add_subcommand("export-amt", "Export a crowdsourcing task CSV");
  std::string amt_corpus, amt_out;
  int amt_task = 1;
  export_amt->add_option("--corpus", amt_corpus, "Corpus NDJSON (tasks 1/2) or snippets NDJSON (task 3)")
      ->required();
  export_amt->add_option("--task", amt_task, "Task number")->check(CLI::Range(1, 3))->required();
  export_amt->add_option("--out", amt_out, "Output CSV path")->required();

  // aggregate
  auto* aggregate = app.add_subcommand("aggregate", "Aggregate completed annotations");
  std::string annotations_path, aggregate_corpus;
  int aggregate_task = 1;
  bool sample_dev = false, per_snippet = false;
  aggregate->add_option("--task", aggregate_task, "Task number")
      ->check(CLI::Range(1, 3))
      ->required();
  aggregate->add_option("--annotations", annotations_path, "Completed annotation CSV")->required();
  aggregate->add_option("--corpus", aggregate_corpus, "Corpus for provenance comparison");
  aggregate->add_flag("--sample-dev", sample_dev, "Sample (n-1) deviation instead of population");
  aggregate->add_flag("--per-snippet", per_snippet,
                      "Deviation over per-snippet worker-mean ranks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1
  }

  try {
    if (*generate) {
      if (*seed_opt) seed = seed_value;
      return cmd_generate(config_path, n_dialogues, mode, seed, jobs);
    }
    if (*stats) return cmd_stats(stats_corpus);
    if (*tod_qa) return cmd_build_tod_qa(sgd_path, tod_qa_out, ratio, tod_qa_seed);
    if (*transition_data) {
      if (triples_corpus.empty() && otters_path.empty()) {
        std::cerr << "build-transition-data: need --corpus and/or --otters\n";
        return 1;
      }
      return cmd_build_transition_data(triples_corpus, otters_path, triples_out);
    }
    if (*export_amt) return cmd_export_amt(amt_corpus, amt_task, amt_out);
    if (*aggregate) {
      return cmd_aggregate(aggregate_task, annotations_path, aggregate_corpus, sample_dev,
                           per_snippet);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
