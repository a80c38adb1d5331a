// chainfill: parse multi-hop questions into masked reasoning chains and
// fill them from knowledge-graph, text and parametric sources.
//
//   chainfill parse  --config cfg.json "Who directed ...?"
//   chainfill run    --config cfg.json --dataset data.jsonl --out results.jsonl
//   chainfill eval   --results results.jsonl --dataset data.jsonl --out metrics.json
//   chainfill ablate --config cfg.json --dataset data.jsonl
//       --orders kg,model --orders text,model --out-dir runs/

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "chainfill/parser.hpp"
#include "chainfill/runner.hpp"

using namespace chainfill;

namespace {

void add_override_flags(CLI::App* cmd, CliOverrides& overrides) {
  cmd->add_option_function<std::string>(
      "--source-order",
      [&overrides](const std::string& v) { overrides.source_order = v; },
      "Override source order, e.g. kg,text,model");
  cmd->add_option_function<int>(
      "--top-k", [&overrides](int v) { overrides.top_k = v; },
      "Override retrieval depth");
  cmd->add_option_function<int>(
      "--samples", [&overrides](int v) { overrides.samples = v; },
      "Override chain sampling count");
  cmd->add_option_function<std::string>(
      "--retrieval-mode",
      [&overrides](const std::string& v) { overrides.retrieval_mode = v; },
      "single|multi");
  cmd->add_option_function<std::string>(
      "--kg-linking",
      [&overrides](const std::string& v) { overrides.kg_linking = v; },
      "exact|fuzzy");
}

int do_parse(const std::string& config_path, const CliOverrides& overrides,
             const std::string& question, const std::string& file,
             const std::string& out_path) {
  PipelineFactory factory(PipelineConfig::load(config_path, overrides));

  if (!file.empty()) {
    std::ostream* out = &std::cout;
    std::ofstream file_out;
    if (!out_path.empty()) {
      file_out.open(out_path);
      out = &file_out;
    }
    for (const auto& rec : load_dataset(file)) {
      Json row{{"id", rec.id}, {"question", rec.question}};
      try {
        SelectionReport report = parse_question(factory, rec.question);
        row["chain"] = render_chain(report.chosen);
        row["report"] = selection_report_to_json(report);
      } catch (const AllSamplesInvalidError& e) {
        row["error"] = e.what();
      }
      *out << row.dump() << "\n";
    }
    return 0;
  }

  try {
    SelectionReport report = parse_question(factory, question);
    std::cout << render_chain(report.chosen) << "\n";
    Json json = selection_report_to_json(report);
    if (!out_path.empty()) {
      std::ofstream(out_path) << json.dump(2) << "\n";
    } else {
      std::cout << json.dump(2) << "\n";
    }
    return 0;
  } catch (const AllSamplesInvalidError& e) {
    std::cerr << "chain selection failed: " << e.what() << "\n";
    return 3;
  }
}

int do_eval(const EvalOptions& options) {
  EvalOutcome outcome = evaluate_results(options);

  std::string rows_path = options.rows_path;
  if (rows_path.empty() && !options.out_path.empty()) {
    rows_path = options.out_path + ".rows.jsonl";
  }
  if (!rows_path.empty()) {
    std::ofstream rows(rows_path);
    for (const auto& row : outcome.rows) {
      rows << metric_row_to_json(row).dump() << "\n";
    }
  }

  Json summary = summary_to_json(outcome.summary, outcome.missing_ids);
  if (!options.out_path.empty()) {
    std::ofstream(options.out_path) << summary.dump(2) << "\n";
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-structured reasoning-chain question answering"};
  app.require_subcommand(1);

  // parse
  std::string parse_config, parse_question_arg, parse_file, parse_out;
  CliOverrides parse_overrides;
  CLI::App* parse_cmd =
      app.add_subcommand("parse", "Parse questions into masked chains");
  parse_cmd->add_option("--config", parse_config, "Pipeline config")->required();
  parse_cmd->add_option("question", parse_question_arg, "A single question");
  parse_cmd->add_option("--file", parse_file, "Dataset JSONL for batch parsing");
  parse_cmd->add_option("--out", parse_out, "Report output path");
  add_override_flags(parse_cmd, parse_overrides);

  // run
  std::string run_config, run_dataset_path, run_out;
  CliOverrides run_overrides;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the full pipeline");
  run_cmd->add_option("--config", run_config, "Pipeline config")->required();
  run_cmd->add_option("--dataset", run_dataset_path, "Dataset JSONL")->required();
  run_cmd->add_option("--out", run_out, "Results JSONL (resumable)")->required();
  add_override_flags(run_cmd, run_overrides);

  // eval
  EvalOptions eval_options;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score results against gold");
  eval_cmd->add_option("--results", eval_options.results_path, "Results JSONL")
      ->required();
  eval_cmd->add_option("--dataset", eval_options.dataset_path, "Dataset JSONL")
      ->required();
  eval_cmd->add_option("--out", eval_options.out_path, "Summary JSON path");
  eval_cmd->add_option("--rows", eval_options.rows_path, "Per-row JSONL path");

  // ablate
  AblateOptions ablate_options;
  CLI::App* ablate_cmd =
      app.add_subcommand("ablate", "Compare source orders on one dataset");
  ablate_cmd->add_option("--config", ablate_options.config_path, "Pipeline config")
      ->required();
  ablate_cmd->add_option("--dataset", ablate_options.dataset_path, "Dataset JSONL")
      ->required();
  ablate_cmd
      ->add_option("--orders", ablate_options.orders,
                   "Source order, repeatable: --orders kg,model --orders text,model")
      ->required();
  ablate_cmd->add_option("--out-dir", ablate_options.out_dir, "Directory for runs")
      ->default_val(".");
  add_override_flags(ablate_cmd, ablate_options.overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse_cmd->parsed()) {
      if (parse_question_arg.empty() && parse_file.empty()) {
        std::cerr << "parse needs a question or --file\n";
        return 2;
      }
      return do_parse(parse_config, parse_overrides, parse_question_arg,
                      parse_file, parse_out);
    }
    if (run_cmd->parsed()) {
      PipelineFactory factory(PipelineConfig::load(run_config, run_overrides));
      RunOptions options;
      options.dataset_path = run_dataset_path;
      options.out_path = run_out;
      int processed = run_dataset(factory, options);
      std::cerr << "[run] " << processed << " new record(s) -> " << run_out << "\n";
      return 0;
    }
    if (eval_cmd->parsed()) {
      return do_eval(eval_options);
    }
    if (ablate_cmd->parsed()) {
      std::vector<AblationRow> rows = run_ablation(ablate_options);
      std::printf("%-24s %8s %8s %8s\n", "order", "em", "f1", "n");
      Json table = Json::array();
      for (const auto& row : rows) {
        std::printf("%-24s %8.3f %8.3f %8zu\n", row.order.c_str(),
                    row.summary.mean_em, row.summary.mean_f1, row.summary.count);
        table.push_back(Json{{"order", row.order},
                             {"mean_em", row.summary.mean_em},
                             {"mean_f1", row.summary.mean_f1},
                             {"count", row.summary.count}});
      }
      std::ofstream(ablate_options.out_dir + "/ablation.json") << table.dump(2) << "\n";
      return 0;
    }
  } catch (const EmptyEvaluationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
