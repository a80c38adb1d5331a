#pragma once
// Unstructured-text fill: converts a valid triplet into a single-hop
// question via prompted generation, retrieves supporting paragraphs, then
// reads an answer with the LLM. An "unknown" read leaves the mask
// unfilled.
//
// Retrieval modes: MultiRound retrieves per generated single-hop question;
// SingleRound retrieves once per original multi-hop question and reuses
// that pool for every triplet of the stage.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainfill/bm25.hpp"
#include "chainfill/chain.hpp"
#include "chainfill/llm.hpp"
#include "chainfill/source.hpp"
#include "chainfill/templates.hpp"

namespace chainfill {

class GenerationFailedError : public std::runtime_error {
 public:
  explicit GenerationFailedError(const std::string& what)
      : std::runtime_error(what) {}
};

enum class RetrievalMode { SingleRound, MultiRound };

struct ReadResult {
  std::optional<std::string> answer;   // nullopt == unknown
  std::vector<std::string> doc_ids_used;
  std::string raw_completion;
};

struct TextSourceConfig {
  RetrievalMode mode = RetrievalMode::MultiRound;
  int top_k = 10;
  int generation_retries = 2;
  std::size_t context_char_budget = 4000;
};

struct RetrievalEvent {
  std::string query;
  std::vector<ScoredDoc> ranked;
};

class TextSource : public KnowledgeSource {
 public:
  TextSource(std::shared_ptr<const Corpus> corpus,
             std::shared_ptr<const Retriever> retriever,
             std::shared_ptr<const LlmGateway> llm,
             std::shared_ptr<const PromptTemplateSet> templates,
             TextSourceConfig cfg);

  SourceKind kind() const override { return SourceKind::Text; }

  // In SingleRound mode this retrieves the stage pool from the original
  // multi-hop question.
  void begin_stage(const std::string& question) override;

  std::optional<SourceAnswer> answer_triplet(const Triplet& t) override;

  // Few-shot conversion; the first completion line becomes the question,
  // with a '?' appended when missing. Throws GenerationFailedError after
  // the retry budget.
  std::string triplet_to_question(const Triplet& t) const;

  ReadResult read(const std::string& question,
                  const std::vector<ScoredDoc>& docs) const;

  // Retrieval log for the current stage, in query order.
  const std::vector<RetrievalEvent>& retrieval_log() const { return retrievals_; }

  std::vector<SourceRetrieval> stage_retrievals() const override;

 private:
  std::vector<ScoredDoc> retrieve_for(const std::string& question);
  std::string format_context(const std::vector<ScoredDoc>& docs) const;

  std::shared_ptr<const Corpus> corpus_;
  std::shared_ptr<const Retriever> retriever_;
  std::shared_ptr<const LlmGateway> llm_;
  std::shared_ptr<const PromptTemplateSet> templates_;
  TextSourceConfig cfg_;

  std::vector<ScoredDoc> stage_pool_;
  std::vector<RetrievalEvent> retrievals_;
};

// Prompt rendering of a triplet for question conversion:
// ("head", "relation", ?).
std::string triplet_prompt_form(const Triplet& t);

}  // namespace chainfill
