#pragma once
// End-to-end pipeline: sample and select a masked chain, fill masks
// stage-by-stage over the configured source order, finish with the
// parametric stage, then resolve the final answer.
//
// Each fill stage runs the shared loop: extract valid triplets, subtract
// the stage-local queried set, query the source, substitute successful
// answers, repeat until no new valid triplet appears. The queried set
// resets between stages, so a later source retries what an earlier one
// could not ground.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainfill/chain.hpp"
#include "chainfill/model_source.hpp"
#include "chainfill/self_consistency.hpp"
#include "chainfill/source.hpp"
#include "chainfill/templates.hpp"

namespace chainfill {

class UnresolvableError : public ChainError {
 public:
  explicit UnresolvableError(const std::string& what) : ChainError(what) {}
};

struct SourceOrder {
  std::vector<SourceKind> stages;

  // "kg,text,model" -> order; validates shape.
  static SourceOrder parse(const std::string& csv);
  // Model, when present, must be last; other sources may not repeat.
  void validate() const;
  std::string to_string() const;
  bool has(SourceKind kind) const;
};

struct TraceQuery {
  std::string triplet;   // canonical text
  std::string outcome;   // filled | no_answer | already_bound | answer_mask_tail
  std::optional<std::string> mask;
  std::optional<std::string> value;
  std::vector<std::string> candidates;
  std::vector<std::string> evidence;
  std::optional<double> confidence;
  std::vector<std::string> notes;
};

struct TraceIteration {
  std::vector<std::string> valid;    // T_v extracted from the chain
  std::vector<std::string> queried;  // newly queried this iteration
  std::vector<TraceQuery> results;
  std::vector<std::pair<std::string, std::string>> substitutions;  // mask, value
  std::vector<std::string> unfilled;
};

struct ModelStageData {
  std::string completion;
  bool aligned = false;
  std::optional<std::string> extracted_answer;
  std::vector<std::pair<std::string, std::string>> substitutions;
  std::vector<std::string> disagreements;
};

struct StageTrace {
  SourceKind source = SourceKind::KG;
  std::string status;  // ran | skipped | unavailable
  std::string note;
  std::vector<TraceIteration> iterations;
  std::vector<SourceRetrieval> retrievals;
  std::optional<ModelStageData> model;
};

struct FillTrace {
  std::optional<SelectionReport> selection;
  std::vector<StageTrace> stages;
  std::optional<std::string> fallback_completion;
  std::vector<std::string> notes;
};

enum class PipelineStatus { Completed, PartiallyFilled, ChainSelectionFailed };

std::string pipeline_status_name(PipelineStatus status);

struct PipelineResult {
  std::string id;
  std::string question;
  std::string final_answer;
  std::optional<ReasoningChain> filled_chain;
  Binding binding;
  FillTrace trace;
  PipelineStatus status = PipelineStatus::PartiallyFilled;
};

struct StageOutcome {
  ReasoningChain chain;
  Binding binding;
  StageTrace trace;
};

// One source stage of the shared fill loop. Triplets the source cannot
// ground stay unfilled and remain eligible for later stages. A
// SourceUnavailableError aborts the stage (already applied substitutions
// are kept) without failing the pipeline.
StageOutcome fill_with_source(const ReasoningChain& chain, const Binding& binding,
                              KnowledgeSource& source, const std::string& question);

// Final-answer resolution: a bound numbered directive answers from the
// binding and never consults the completion; otherwise the model-stage
// completion's extracted final answer is used. Throws UnresolvableError
// when neither path applies.
std::string resolve_final(const ReasoningChain& chain, const Binding& binding,
                          const std::optional<std::string>& model_completion);

struct EngineConfig {
  SourceOrder order;
  ValidationConfig validation;
  SamplingParams sampling;
  ParseOptions parse_options;
};

class Pipeline {
 public:
  Pipeline(EngineConfig cfg, std::shared_ptr<const LlmGateway> llm,
           std::shared_ptr<const PromptTemplateSet> templates,
           std::map<SourceKind, std::shared_ptr<KnowledgeSource>> sources,
           std::shared_ptr<const ParametricFiller> filler);

  PipelineResult run(const std::string& id, const std::string& question) const;

  // Sampling + validation + self-consistency; throws AllSamplesInvalidError.
  SelectionReport select_chain(const std::string& question) const;

  const EngineConfig& config() const { return cfg_; }

 private:
  std::string standard_fallback(const std::string& question) const;

  EngineConfig cfg_;
  std::shared_ptr<const LlmGateway> llm_;
  std::shared_ptr<const PromptTemplateSet> templates_;
  std::map<SourceKind, std::shared_ptr<KnowledgeSource>> sources_;
  std::shared_ptr<const ParametricFiller> filler_;
};

}  // namespace chainfill
