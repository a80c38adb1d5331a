#pragma once
// Final-stage parametric fill: one greedy completion of the question plus
// the partially filled chain. Remaining numbered masks are read back by
// positional alignment; already-bound masks are never overwritten.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainfill/chain.hpp"
#include "chainfill/llm.hpp"
#include "chainfill/parser.hpp"
#include "chainfill/templates.hpp"

namespace chainfill {

struct ParametricFill {
  std::string prompt_used;
  std::string completion;
  std::optional<FilledChain> parsed_chain;
  std::optional<std::string> extracted_answer;
  bool aligned = false;
  // Mask values recovered by alignment, restricted to masks that were
  // still unbound; chain order.
  std::vector<std::pair<MaskRef, std::string>> new_values;
  // Positions where the completion disagreed with an existing binding.
  std::vector<std::string> disagreements;
};

class ParametricFiller {
 public:
  ParametricFiller(std::shared_ptr<const LlmGateway> llm,
                   std::shared_ptr<const PromptTemplateSet> templates)
      : llm_(std::move(llm)), templates_(std::move(templates)) {}

  // Alignment requires the filled chain to have the same triplet count and
  // case-insensitively equal relation text; otherwise only the extracted
  // final answer is usable.
  ParametricFill fill_remaining(const std::string& question,
                                const ReasoningChain& chain,
                                const Binding& binding) const;

 private:
  std::shared_ptr<const LlmGateway> llm_;
  std::shared_ptr<const PromptTemplateSet> templates_;
};

// Recovers the value of each mask in `part` from the corresponding filled
// text by anchoring on the literal prefix/suffix around a single mask span.
// Parts with more than one mask are skipped (no unambiguous split).
std::optional<std::string> align_part_value(const TemplateText& part,
                                            const std::string& filled_text,
                                            MaskRef mask);

}  // namespace chainfill
