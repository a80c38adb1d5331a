#pragma once
// Batch execution behind the CLI subcommands: chain parsing, full pipeline
// runs with resume, evaluation, and source-order ablations.

#include <optional>
#include <string>
#include <vector>

#include "chainfill/config.hpp"
#include "chainfill/eval.hpp"
#include "chainfill/serialize.hpp"

namespace chainfill {

struct RunOptions {
  std::string dataset_path;
  std::string out_path;  // results JSONL; existing ids are skipped (resume)
  bool quiet = false;
};

// Runs the pipeline over every dataset record not already present in the
// output. Records are processed with up to config.concurrency workers but
// always written in dataset order, so reruns are byte-identical. Returns
// the number of newly processed records; per-record failures are recorded
// as {"status": "failed"} rows and do not stop the run.
int run_dataset(const PipelineFactory& factory, const RunOptions& options);

struct EvalOptions {
  std::string results_path;
  std::string dataset_path;
  std::string out_path;      // summary JSON; per-row JSONL lands next to it
  std::string rows_path;     // optional explicit per-row path
};

struct EvalOutcome {
  MetricsSummary summary;
  std::vector<MetricRow> rows;
  std::vector<std::string> missing_ids;
};

EvalOutcome evaluate_results(const EvalOptions& options);

struct AblateOptions {
  std::string dataset_path;
  std::string config_path;
  CliOverrides overrides;           // applied to every order
  std::vector<std::string> orders;  // e.g. {"kg,model", "text,model"}
  std::string out_dir;              // per-order results land here
};

struct AblationRow {
  std::string order;
  MetricsSummary summary;
};

// One full run + eval per order against the same dataset. The scripted
// backend is rebuilt per order so each run starts from identical state.
// Duplicate orders are rejected.
std::vector<AblationRow> run_ablation(const AblateOptions& options);

// Chain parsing only. Returns the selection report; throws
// AllSamplesInvalidError like the engine.
SelectionReport parse_question(const PipelineFactory& factory,
                               const std::string& question);

}  // namespace chainfill
