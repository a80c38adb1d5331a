#include "chainfill/model_source.hpp"

#include <algorithm>
#include <cctype>

namespace chainfill {

namespace {

std::string fold(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::optional<std::string> align_part_value(const TemplateText& part,
                                            const std::string& filled_text,
                                            MaskRef mask) {
  // Locate the single mask span with its literal neighbourhood.
  int mask_count = 0;
  std::size_t mask_pos = 0;
  for (std::size_t i = 0; i < part.spans().size(); ++i) {
    if (std::holds_alternative<MaskRef>(part.spans()[i])) {
      ++mask_count;
      mask_pos = i;
    }
  }
  if (mask_count != 1) return std::nullopt;
  if (std::get<MaskRef>(part.spans()[mask_pos]) != mask) return std::nullopt;

  std::string prefix;
  for (std::size_t i = 0; i < mask_pos; ++i) {
    prefix += std::get<LiteralSpan>(part.spans()[i]).text;
  }
  std::string suffix;
  for (std::size_t i = mask_pos + 1; i < part.spans().size(); ++i) {
    suffix += std::get<LiteralSpan>(part.spans()[i]).text;
  }

  if (filled_text.size() < prefix.size() + suffix.size()) return std::nullopt;
  if (fold(filled_text.substr(0, prefix.size())) != fold(prefix)) return std::nullopt;
  if (fold(filled_text.substr(filled_text.size() - suffix.size())) != fold(suffix)) {
    return std::nullopt;
  }
  std::string value = trim(filled_text.substr(
      prefix.size(), filled_text.size() - prefix.size() - suffix.size()));
  if (value.empty()) return std::nullopt;
  return value;
}

ParametricFill ParametricFiller::fill_remaining(const std::string& question,
                                                const ReasoningChain& chain,
                                                const Binding& binding) const {
  ParametricFill fill;
  fill.prompt_used = templates_->render(
      PromptRole::ParametricFill,
      {{"question", question}, {"chain", render_chain(chain)}});

  CompletionRequest req;
  req.prompt = fill.prompt_used;
  req.n = 1;
  req.temperature = 0.0;  // a single trusted completion, not a vote
  req.stop = {"\n"};
  fill.completion = llm_->first_completion(req);

  if (auto extracted = extract_final_answer(fill.completion)) {
    if (!extracted->answer.empty()) fill.extracted_answer = extracted->answer;
    fill.parsed_chain = extracted->filled;
  } else {
    fill.parsed_chain = parse_filled_chain(trim(fill.completion));
  }

  if (!fill.parsed_chain ||
      fill.parsed_chain->triplets.size() != chain.triplets.size()) {
    return fill;  // alignment failed; extracted answer may still be used
  }
  for (std::size_t i = 0; i < chain.triplets.size(); ++i) {
    if (fold(fill.parsed_chain->triplets[i].relation.render()) !=
        fold(chain.triplets[i].relation.render())) {
      return fill;
    }
  }
  fill.aligned = true;

  // Walk mask positions in chain order; first recovered value per mask
  // wins. Values for already-bound masks are discarded, with disagreements
  // logged rather than applied.
  std::set<MaskRef> claimed;
  for (std::size_t i = 0; i < chain.triplets.size(); ++i) {
    const Triplet& want = chain.triplets[i];
    const Triplet& got = fill.parsed_chain->triplets[i];
    const std::pair<const TemplateText*, const TemplateText*> parts[] = {
        {&want.head, &got.head}, {&want.tail, &got.tail}};
    for (const auto& [part, filled] : parts) {
      for (const auto& m : masks_of(*part)) {
        if (!m.is_numbered()) continue;
        auto value = align_part_value(*part, filled->render(), m);
        if (!value) continue;
        if (*value == m.text()) continue;  // completion left the mask as-is
        if (auto bound = binding.value_of(m)) {
          if (fold(*bound) != fold(*value)) {
            fill.disagreements.push_back(m.text() + ": bound '" + *bound +
                                         "' vs completion '" + *value + "'");
          }
          continue;
        }
        if (claimed.insert(m).second) {
          fill.new_values.emplace_back(m, *value);
        }
      }
    }
  }
  return fill;
}

}  // namespace chainfill
