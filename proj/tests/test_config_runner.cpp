#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chainfill/runner.hpp"
#include "helpers.hpp"

using namespace chainfill;
using chainfill::testing::fixture_path;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("chainfill_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string world_config() { return fixture_path("world/config.json"); }

}  // namespace

TEST_CASE("configs load with resolved paths and validated values") {
  auto cfg = PipelineConfig::load(world_config());
  CHECK(cfg.order.to_string() == "kg,text,model");
  CHECK(cfg.validation.min_masks == 2);
  CHECK(cfg.sampling.n == 3);
  CHECK(cfg.retrieval.top_k == 2);
  CHECK(cfg.kg.mode == LinkingMode::Exact);
  CHECK(fs::exists(cfg.kg_store_path));
  CHECK(fs::exists(cfg.corpus_path));
  CHECK(fs::exists(cfg.templates_dir + "/chain_parse.txt"));
}

TEST_CASE("unknown keys and missing files are load errors") {
  TempDir tmp;
  {
    std::ofstream out(tmp.file("bad_key.json"));
    out << R"({"source_order": ["model"], "templates": ".", "backends":
           {"llm": {"kind": "scripted", "rules": "missing.jsonl"}},
           "mystery_knob": 1})";
  }
  CHECK_THROWS_AS(PipelineConfig::load(tmp.file("bad_key.json")), ConfigError);

  {
    std::ofstream out(tmp.file("missing_rules.json"));
    out << R"({"source_order": ["model"], "templates": ".", "backends":
           {"llm": {"kind": "scripted", "rules": "missing.jsonl"}}})";
  }
  CHECK_THROWS_AS(PipelineConfig::load(tmp.file("missing_rules.json")),
                  ConfigError);

  {
    std::ofstream out(tmp.file("bad_order.json"));
    out << R"({"source_order": ["model", "kg"], "templates": ".", "backends":
           {"llm": {"kind": "scripted", "rules": "r.jsonl"}}})";
  }
  CHECK_THROWS_AS(PipelineConfig::load(tmp.file("bad_order.json")), ChainError);
}

TEST_CASE("cli overrides rewrite the effective config") {
  CliOverrides overrides;
  overrides.source_order = "text,model";
  overrides.top_k = 7;
  overrides.samples = 5;
  overrides.retrieval_mode = "single";
  overrides.kg_linking = "fuzzy";
  auto cfg = PipelineConfig::load(world_config(), overrides);
  CHECK(cfg.order.to_string() == "text,model");
  CHECK(cfg.retrieval.top_k == 7);
  CHECK(cfg.sampling.n == 5);
  CHECK(cfg.retrieval.mode == RetrievalMode::SingleRound);
  CHECK(cfg.kg.mode == LinkingMode::Fuzzy);
  // provenance copy reflects the overrides
  CHECK(cfg.effective.at("retrieval").at("k") == 7);
  CHECK(cfg.effective.at("source_order").size() == 2);
}

TEST_CASE("run_dataset writes a header and one result per record") {
  PipelineFactory factory(PipelineConfig::load(world_config()));
  TempDir tmp;
  RunOptions options;
  options.dataset_path = fixture_path("world/dataset.jsonl");
  options.out_path = tmp.file("results.jsonl");
  options.quiet = true;

  CHECK(run_dataset(factory, options) == 6);

  std::ifstream in(options.out_path);
  std::string line;
  std::vector<std::string> ids;
  int headers = 0;
  while (std::getline(in, line)) {
    auto row = nlohmann::json::parse(line);
    if (row.at("type") == "header") {
      ++headers;
      CHECK(row.contains("config"));
      CHECK(row.contains("started_at"));
    } else {
      ids.push_back(row.at("id").get<std::string>());
    }
  }
  CHECK(headers == 1);
  CHECK(ids == std::vector<std::string>{"q1", "q2", "q3", "q4", "q5", "q6"});

  // resume: nothing new to do on the second invocation
  CHECK(run_dataset(factory, options) == 0);
  std::ifstream again(options.out_path);
  int lines = 0;
  while (std::getline(again, line)) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("per-record failures are recorded and the run continues") {
  TempDir tmp;
  // one record has no scripted rule for its question: its row fails loudly
  // while the rest of the run completes
  {
    std::ifstream in(fixture_path("world/dataset.jsonl"));
    std::ofstream out(tmp.file("dataset.jsonl"));
    out << in.rdbuf();
    out << R"({"id": "q7", "question": "A question nobody scripted?", "gold_answers": ["x"]})"
        << "\n";
  }
  PipelineFactory factory(PipelineConfig::load(world_config()));
  RunOptions options;
  options.dataset_path = tmp.file("dataset.jsonl");
  options.out_path = tmp.file("results.jsonl");
  options.quiet = true;
  CHECK(run_dataset(factory, options) == 7);

  std::ifstream in(options.out_path);
  std::string line;
  int ok = 0;
  int failed = 0;
  while (std::getline(in, line)) {
    auto row = nlohmann::json::parse(line);
    if (row.at("type") != "result") continue;
    if (row.at("status") == "failed") {
      ++failed;
      CHECK(row.at("id") == "q7");
      CHECK(row.contains("error"));
    } else {
      ++ok;
    }
  }
  CHECK(ok == 6);
  CHECK(failed == 1);
}

TEST_CASE("evaluation scores results and lists missing predictions") {
  PipelineFactory factory(PipelineConfig::load(world_config()));
  TempDir tmp;
  RunOptions run_options;
  run_options.dataset_path = fixture_path("world/dataset.jsonl");
  run_options.out_path = tmp.file("results.jsonl");
  run_options.quiet = true;
  run_dataset(factory, run_options);

  EvalOptions eval_options;
  eval_options.results_path = run_options.out_path;
  eval_options.dataset_path = run_options.dataset_path;
  auto outcome = evaluate_results(eval_options);
  CHECK(outcome.rows.size() == 6);
  CHECK(outcome.missing_ids.empty());

  // the run scores exactly as the hand-computed metrics file says
  auto expected =
      nlohmann::json::parse(read_file(fixture_path("world/expected_metrics.json")));
  std::map<std::string, MetricRow> by_id;
  for (const auto& row : outcome.rows) by_id[row.id] = row;
  for (const auto& want : expected.at("rows")) {
    const std::string id = want.at("id").get<std::string>();
    CAPTURE(id);
    CHECK(by_id.at(id).em == want.at("em").get<int>());
    CHECK(by_id.at(id).f1 ==
          doctest::Approx(want.at("f1").get<double>()).epsilon(1e-9));
    if (want.contains("recall_at_k")) {
      REQUIRE(by_id.at(id).recall_at_k.has_value());
      CHECK(*by_id.at(id).recall_at_k ==
            doctest::Approx(want.at("recall_at_k").get<double>()).epsilon(1e-9));
    } else {
      CHECK_FALSE(by_id.at(id).recall_at_k.has_value());
    }
  }
  const auto& want_summary = expected.at("summary");
  CHECK(outcome.summary.count == want_summary.at("count").get<std::size_t>());
  CHECK(outcome.summary.mean_em ==
        doctest::Approx(want_summary.at("mean_em").get<double>()).epsilon(1e-9));
  CHECK(outcome.summary.mean_f1 ==
        doctest::Approx(want_summary.at("mean_f1").get<double>()).epsilon(1e-9));
  REQUIRE(outcome.summary.mean_recall.has_value());
  CHECK(*outcome.summary.mean_recall ==
        doctest::Approx(want_summary.at("mean_recall").get<double>()).epsilon(1e-9));

  // drop one result line: that id is missing and scores zero
  {
    std::ifstream in(run_options.out_path);
    std::ofstream out(tmp.file("partial.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find("\"id\":\"q2\"") == std::string::npos &&
          line.find("\"id\": \"q2\"") == std::string::npos) {
        out << line << "\n";
      }
    }
  }
  EvalOptions partial;
  partial.results_path = tmp.file("partial.jsonl");
  partial.dataset_path = run_options.dataset_path;
  auto partial_outcome = evaluate_results(partial);
  CHECK(partial_outcome.missing_ids == std::vector<std::string>{"q2"});
  std::map<std::string, MetricRow> partial_rows;
  for (const auto& row : partial_outcome.rows) partial_rows[row.id] = row;
  CHECK(partial_rows.at("q2").em == 0);
  CHECK(partial_rows.at("q2").f1 == doctest::Approx(0.0));

  // scoring an empty results file against the dataset still yields rows;
  // an empty dataset is the error case
  TempDir empty;
  {
    std::ofstream out(empty.file("none.jsonl"));
    std::ofstream data(empty.file("empty_dataset.jsonl"));
  }
  EvalOptions empty_options;
  empty_options.results_path = empty.file("none.jsonl");
  empty_options.dataset_path = empty.file("empty_dataset.jsonl");
  CHECK_THROWS_AS(evaluate_results(empty_options), EmptyEvaluationError);
}

TEST_CASE("ablations reject duplicate orders") {
  AblateOptions options;
  options.dataset_path = fixture_path("ablation/dataset.jsonl");
  options.config_path = fixture_path("ablation/config.json");
  options.orders = {"kg,model", " kg , model "};
  options.out_dir = fs::temp_directory_path().string();
  CHECK_THROWS_AS(run_ablation(options), ConfigError);
}

TEST_CASE("parse_question returns the selection report") {
  PipelineFactory factory(PipelineConfig::load(world_config()));
  auto report = parse_question(
      factory, "Where was the place of death of Strut-Harald's father?");
  CHECK(render_chain(report.chosen) ==
        "Strut-Harald >> father >> #1; #1 >> place of death >> #2; "
        "final answer: #2");
  CHECK(report.filtered_count == 0);
}

TEST_CASE("defaults apply when config sections are omitted") {
  TempDir tmp;
  {
    std::ofstream rules(tmp.file("rules.jsonl"));
    rules << R"({"match_kind":"substring","match_value":"x","completions":["y"]})"
          << "\n";
  }
  {
    std::ofstream out(tmp.file("minimal.json"));
    out << R"({"source_order": ["model"],
               "templates": ")"
        << chainfill::testing::template_dir() << R"(",
               "backends": {"llm": {"kind": "scripted", "rules": "rules.jsonl"}}})";
  }
  auto cfg = PipelineConfig::load(tmp.file("minimal.json"));
  CHECK(cfg.validation.min_masks == 2);
  CHECK(cfg.validation.max_masks == 4);
  CHECK(cfg.sampling.n == 10);
  CHECK(cfg.sampling.temperature == doctest::Approx(0.7));
  CHECK(cfg.retrieval.top_k == 10);
  CHECK(cfg.retrieval.mode == RetrievalMode::MultiRound);
  CHECK(cfg.kg.theta_entity == doctest::Approx(0.85));
  CHECK(cfg.kg.theta_relation == doctest::Approx(0.6));
  CHECK(cfg.concurrency == 4);
}

TEST_CASE("result rows carry the documented wire shapes") {
  PipelineFactory factory(PipelineConfig::load(world_config()));
  TempDir tmp;
  RunOptions options;
  options.dataset_path = fixture_path("world/dataset.jsonl");
  options.out_path = tmp.file("results.jsonl");
  options.quiet = true;
  run_dataset(factory, options);

  std::ifstream in(options.out_path);
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    auto row = nlohmann::json::parse(line);
    if (row.at("type") != "result") continue;
    ++checked;
    // triplets serialize as 3-element arrays of canonical text
    for (const auto& triplet : row.at("filled_chain").at("triplets")) {
      CHECK(triplet.is_array());
      CHECK(triplet.size() == 3);
    }
    CHECK(row.at("filled_chain").at("final").get<std::string>().front() == '#');
    // binding keys are the mask literals
    for (const auto& [key, entry] : row.at("binding").items()) {
      CHECK(key.front() == '#');
      CHECK(entry.contains("value"));
      CHECK(entry.contains("source"));
      CHECK(entry.contains("evidence"));
    }
  }
  CHECK(checked == 6);
}

TEST_CASE("the cli parses, runs, evaluates and signals failures") {
  const std::string cli = CHAINFILL_CLI;
  REQUIRE(fs::exists(cli));
  TempDir tmp;

  auto shell = [](const std::string& cmd) { return std::system(cmd.c_str()); };

  // single-question parse prints the chain
  std::string parse_out = tmp.file("parse.txt");
  int rc = shell(cli + " parse --config " + world_config() +
                 " \"Were Wessel Dammers and Robert Handcock from the same "
                 "country?\" > " + parse_out + " 2>/dev/null");
  CHECK(rc == 0);
  std::string printed = read_file(parse_out);
  CHECK(printed.find("Wessel Dammers >> country of citizenship >> #1") !=
        std::string::npos);

  // batch parse emits one JSON report per record
  std::string batch_out = tmp.file("batch.jsonl");
  rc = shell(cli + " parse --config " + world_config() + " --file " +
             fixture_path("world/dataset.jsonl") + " --out " + batch_out +
             " 2>/dev/null");
  CHECK(rc == 0);
  {
    std::ifstream in(batch_out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      auto row = nlohmann::json::parse(line);
      CHECK(row.contains("chain"));
      ++rows;
    }
    CHECK(rows == 6);
  }

  // an all-invalid sample set exits nonzero
  {
    std::ofstream rules(tmp.file("bad_rules.jsonl"));
    rules << R"({"match_kind":"substring","match_value":"Reasoning Chain:","completions":["not a chain"]})"
          << "\n";
    std::ofstream cfg(tmp.file("bad_config.json"));
    cfg << R"({"source_order": ["model"], "sampling": {"n": 3},
               "templates": ")"
        << chainfill::testing::template_dir() << R"(",
               "backends": {"llm": {"kind": "scripted", "rules": "bad_rules.jsonl"}}})";
  }
  rc = shell(cli + " parse --config " + tmp.file("bad_config.json") +
             " \"any question\" >/dev/null 2>&1");
  CHECK(rc != 0);

  // run + eval end to end
  std::string results = tmp.file("results.jsonl");
  rc = shell(cli + " run --config " + world_config() + " --dataset " +
             fixture_path("world/dataset.jsonl") + " --out " + results +
             " >/dev/null 2>&1");
  CHECK(rc == 0);
  std::string metrics = tmp.file("metrics.json");
  rc = shell(cli + " eval --results " + results + " --dataset " +
             fixture_path("world/dataset.jsonl") + " --out " + metrics +
             " >/dev/null 2>&1");
  CHECK(rc == 0);
  auto summary = nlohmann::json::parse(read_file(metrics));
  CHECK(summary.at("count") == 6);
  CHECK(summary.at("mean_em").get<double>() ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-9));
  CHECK(fs::exists(metrics + ".rows.jsonl"));

  // bad config exits nonzero with a message
  rc = shell(cli + " run --config /nonexistent.json --dataset " +
             fixture_path("world/dataset.jsonl") + " --out " +
             tmp.file("x.jsonl") + " >/dev/null 2>&1");
  CHECK(rc != 0);
}
