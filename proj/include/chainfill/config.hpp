#pragma once
// Declarative pipeline configuration. One JSON file names the source
// order, validation/sampling/retrieval/KG parameters, backends and the
// prompt template set; CLI flags override individual keys. Unknown keys
// are rejected and referenced files must exist at load time. Relative
// paths resolve against the config file's directory.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainfill/bm25.hpp"
#include "chainfill/engine.hpp"
#include "chainfill/kg.hpp"
#include "chainfill/llm.hpp"
#include "chainfill/templates.hpp"
#include "chainfill/text_source.hpp"

namespace chainfill {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct CliOverrides {
  std::optional<std::string> source_order;   // "kg,text,model"
  std::optional<int> top_k;
  std::optional<int> samples;
  std::optional<std::string> retrieval_mode; // "single" | "multi"
  std::optional<std::string> kg_linking;     // "exact" | "fuzzy"
};

struct PipelineConfig {
  SourceOrder order;
  ValidationConfig validation;
  SamplingParams sampling;
  TextSourceConfig retrieval;
  KgConfig kg;
  ParseOptions parser;
  int concurrency = 4;
  int llm_retries = 2;

  std::string templates_dir;
  std::string kg_store_path;   // empty when the order skips the KG
  std::string corpus_path;     // empty when the order skips text
  std::string llm_kind;        // "scripted" | "http"
  std::string llm_rules_path;  // scripted
  HttpBackendConfig http;      // http

  nlohmann::ordered_json effective;  // post-override JSON, for provenance

  static PipelineConfig load(const std::string& path,
                             const CliOverrides& overrides = {});
};

// Shared immutable state assembled from a config; pipelines are built per
// question because the text source keeps per-stage retrieval state.
class PipelineFactory {
 public:
  explicit PipelineFactory(PipelineConfig cfg);

  Pipeline make_pipeline() const;
  const PipelineConfig& config() const { return cfg_; }
  const LlmGateway& gateway() const { return *gateway_; }

 private:
  PipelineConfig cfg_;
  std::shared_ptr<const PromptTemplateSet> templates_;
  std::shared_ptr<LlmBackend> backend_;
  std::shared_ptr<const LlmGateway> gateway_;
  std::shared_ptr<const TripleStore> store_;
  std::shared_ptr<const Corpus> corpus_;
  std::shared_ptr<const Bm25Index> index_;
  std::shared_ptr<const ParametricFiller> filler_;
};

struct DatasetRecord {
  std::string id;
  std::string question;
  std::vector<std::string> gold_answers;
  std::vector<std::string> gold_doc_ids;
  std::vector<std::string> gold_triples;
};

// JSONL rows: {id, question, gold_answers, gold_doc_ids?, gold_triples?}.
std::vector<DatasetRecord> load_dataset(const std::string& path);

}  // namespace chainfill
