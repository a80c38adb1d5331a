#include "chainfill/engine.hpp"

#include <algorithm>
#include <set>

#include "chainfill/parser.hpp"

namespace chainfill {

SourceOrder SourceOrder::parse(const std::string& csv) {
  SourceOrder order;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string item = trim(csv.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) {
      auto kind = source_kind_from_name(item);
      if (!kind) throw ChainError("unknown knowledge source: '" + item + "'");
      order.stages.push_back(*kind);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  order.validate();
  return order;
}

void SourceOrder::validate() const {
  if (stages.empty()) throw ChainError("source order is empty");
  std::set<SourceKind> seen;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!seen.insert(stages[i]).second) {
      throw ChainError("duplicate source in order: " +
                       source_kind_name(stages[i]));
    }
    if (stages[i] == SourceKind::Model && i + 1 != stages.size()) {
      throw ChainError("the model source must come last");
    }
  }
}

std::string SourceOrder::to_string() const {
  std::string out;
  for (const auto& s : stages) {
    if (!out.empty()) out += ",";
    out += source_kind_name(s);
  }
  return out;
}

bool SourceOrder::has(SourceKind kind) const {
  return std::find(stages.begin(), stages.end(), kind) != stages.end();
}

std::string pipeline_status_name(PipelineStatus status) {
  switch (status) {
    case PipelineStatus::Completed: return "completed";
    case PipelineStatus::PartiallyFilled: return "partially_filled";
    case PipelineStatus::ChainSelectionFailed: return "chain_selection_failed";
  }
  return "unknown";
}

StageOutcome fill_with_source(const ReasoningChain& chain, const Binding& binding,
                              KnowledgeSource& source, const std::string& question) {
  StageOutcome out{chain, binding, {}};
  out.trace.source = source.kind();
  out.trace.status = "ran";

  try {
    source.begin_stage(question);
  } catch (const SourceUnavailableError& e) {
    out.trace.status = "unavailable";
    out.trace.note = e.what();
    return out;
  }

  std::set<std::string> queried;  // stage-local T_q, canonical triplet text
  // The queried set grows monotonically and valid triplets are bounded by
  // the chain length, so this loop runs at most triplets+1 times.
  while (true) {
    TraceIteration iter;
    std::vector<Triplet> valid = extract_valid_triplets(out.chain);
    for (const auto& t : valid) iter.valid.push_back(render_triplet(t));

    std::vector<Triplet> delta;
    for (const auto& t : valid) {
      std::string key = render_triplet(t);
      if (queried.count(key)) continue;
      if (std::find(iter.queried.begin(), iter.queried.end(), key) !=
          iter.queried.end()) {
        continue;  // duplicate triplet within the chain
      }
      iter.queried.push_back(key);
      delta.push_back(t);
    }
    if (delta.empty()) {
      out.trace.iterations.push_back(std::move(iter));
      break;
    }
    queried.insert(iter.queried.begin(), iter.queried.end());

    // Query everything first; substitutions apply afterwards in chain order.
    std::vector<std::optional<SourceAnswer>> answers;
    bool aborted = false;
    for (const auto& t : delta) {
      try {
        answers.push_back(source.answer_triplet(t));
      } catch (const SourceUnavailableError& e) {
        out.trace.status = "unavailable";
        out.trace.note = e.what();
        aborted = true;
        break;
      }
    }
    if (aborted) {
      out.trace.iterations.push_back(std::move(iter));
      break;
    }

    for (std::size_t i = 0; i < delta.size(); ++i) {
      const Triplet& t = delta[i];
      TraceQuery q;
      q.triplet = render_triplet(t);

      auto mask = t.tail.single_mask();
      if (!mask || !mask->is_numbered()) {
        q.outcome = "answer_mask_tail";  // #answer tails resolve later
        iter.unfilled.push_back(q.triplet);
        iter.results.push_back(std::move(q));
        continue;
      }
      q.mask = mask->text();

      const auto& answer = answers[i];
      std::string value = answer ? trim(answer->value) : "";
      if (!answer || value.empty() || value == mask->text()) {
        q.outcome = "no_answer";
        iter.unfilled.push_back(q.triplet);
        iter.results.push_back(std::move(q));
        continue;
      }
      q.candidates = answer->candidates;
      q.evidence = answer->evidence;
      q.confidence = answer->confidence;
      q.notes = answer->notes;

      if (out.binding.contains(*mask)) {
        q.outcome = "already_bound";
        iter.results.push_back(std::move(q));
        continue;
      }

      Binding::Entry entry;
      entry.value = value;
      entry.source = source.kind();
      entry.evidence = answer->evidence;
      entry.confidence = answer->confidence;
      out.chain = substitute(out.chain, *mask, value);
      out.binding.bind(*mask, std::move(entry));

      q.outcome = "filled";
      q.value = value;
      iter.substitutions.emplace_back(mask->text(), value);
      iter.results.push_back(std::move(q));
    }
    out.trace.iterations.push_back(std::move(iter));
  }

  out.trace.retrievals = source.stage_retrievals();
  return out;
}

std::string resolve_final(const ReasoningChain& chain, const Binding& binding,
                          const std::optional<std::string>& model_completion) {
  const MaskRef target = chain.final.target;
  if (target.is_numbered()) {
    if (auto value = binding.value_of(target)) return *value;
  }
  if (model_completion) {
    if (auto extracted = extract_final_answer(*model_completion)) {
      if (!extracted->answer.empty()) return extracted->answer;
    }
    throw UnresolvableError("model completion carries no final answer");
  }
  throw UnresolvableError("final directive " + target.text() +
                          " is unbound and no model completion exists");
}

Pipeline::Pipeline(EngineConfig cfg, std::shared_ptr<const LlmGateway> llm,
                   std::shared_ptr<const PromptTemplateSet> templates,
                   std::map<SourceKind, std::shared_ptr<KnowledgeSource>> sources,
                   std::shared_ptr<const ParametricFiller> filler)
    : cfg_(std::move(cfg)),
      llm_(std::move(llm)),
      templates_(std::move(templates)),
      sources_(std::move(sources)),
      filler_(std::move(filler)) {
  cfg_.order.validate();
  for (SourceKind kind : cfg_.order.stages) {
    if (kind == SourceKind::Model) {
      if (!filler_) throw ChainError("order includes model but no filler is set");
    } else if (!sources_.count(kind)) {
      throw ChainError("order includes " + source_kind_name(kind) +
                       " but no such source is configured");
    }
  }
}

SelectionReport Pipeline::select_chain(const std::string& question) const {
  CompletionRequest req;
  req.prompt =
      templates_->render(PromptRole::ChainParse, {{"question", question}});
  req.n = cfg_.sampling.n;
  req.temperature = cfg_.sampling.temperature;
  req.stop = {"\n"};

  std::vector<std::string> completions = llm_->complete(req);
  SampleSet set = make_sample_set(completions, cfg_.sampling, cfg_.validation,
                                  cfg_.parse_options);
  return select(set);
}

std::string Pipeline::standard_fallback(const std::string& question) const {
  CompletionRequest req;
  req.prompt =
      templates_->render(PromptRole::StandardQa, {{"question", question}});
  req.n = 1;
  req.temperature = 0.0;
  req.stop = {"\n"};
  std::string completion = llm_->first_completion(req);
  std::size_t newline = completion.find('\n');
  return trim(newline == std::string::npos ? completion
                                           : completion.substr(0, newline));
}

PipelineResult Pipeline::run(const std::string& id,
                             const std::string& question) const {
  PipelineResult result;
  result.id = id;
  result.question = question;

  try {
    result.trace.selection = select_chain(question);
  } catch (const AllSamplesInvalidError& e) {
    result.status = PipelineStatus::ChainSelectionFailed;
    result.trace.notes.push_back(std::string("chain selection failed: ") + e.what());
    try {
      std::string answer = standard_fallback(question);
      result.final_answer = answer;
      result.trace.fallback_completion = answer;
    } catch (const std::exception& fallback_error) {
      result.trace.notes.push_back(std::string("fallback failed: ") +
                                   fallback_error.what());
    }
    return result;
  } catch (const SourceUnavailableError& e) {
    result.status = PipelineStatus::ChainSelectionFailed;
    result.trace.notes.push_back(std::string("llm unavailable: ") + e.what());
    return result;
  }

  ReasoningChain chain = result.trace.selection->chosen;
  for (const auto& m : masks_first_seen_in_head(chain)) {
    result.trace.notes.push_back("mask " + m.text() +
                                 " first occurs in a head, never fillable");
  }
  Binding binding;
  std::optional<std::string> model_completion;

  for (SourceKind kind : cfg_.order.stages) {
    if (kind != SourceKind::Model) {
      auto& source = *sources_.at(kind);
      StageOutcome outcome = fill_with_source(chain, binding, source, question);
      chain = std::move(outcome.chain);
      binding = std::move(outcome.binding);
      result.trace.stages.push_back(std::move(outcome.trace));
      continue;
    }

    StageTrace stage;
    stage.source = SourceKind::Model;

    // The parametric stage is consulted only when work remains: a bound
    // numbered directive with a fully substituted chain needs no model call.
    bool masks_remain = !chain.numbered_indices().empty();
    bool needs_final = chain.final.target.is_answer() ||
                       !binding.contains(chain.final.target);
    if (!masks_remain && !needs_final) {
      stage.status = "skipped";
      stage.note = "no masks remain and the final directive is bound";
      result.trace.stages.push_back(std::move(stage));
      continue;
    }

    try {
      ParametricFill fill = filler_->fill_remaining(question, chain, binding);
      stage.status = "ran";
      ModelStageData data;
      data.completion = fill.completion;
      data.aligned = fill.aligned;
      data.extracted_answer = fill.extracted_answer;
      data.disagreements = fill.disagreements;

      for (const auto& [mask, value] : fill.new_values) {
        if (binding.contains(mask)) continue;
        chain = substitute(chain, mask, value);
        Binding::Entry entry;
        entry.value = value;
        entry.source = SourceKind::Model;
        binding.bind(mask, std::move(entry));
        data.substitutions.emplace_back(mask.text(), value);
      }
      model_completion = fill.completion;
      stage.model = std::move(data);
    } catch (const SourceUnavailableError& e) {
      stage.status = "unavailable";
      stage.note = e.what();
    }
    result.trace.stages.push_back(std::move(stage));
  }

  result.filled_chain = chain;
  result.binding = binding;

  try {
    result.final_answer = resolve_final(chain, binding, model_completion);
    if (chain.final.target.is_numbered() &&
        !binding.contains(chain.final.target)) {
      result.trace.notes.push_back(
          "final directive " + chain.final.target.text() +
          " is unbound; answer taken from the model completion");
    }
    if (chain.final.target.is_numbered() &&
        binding.contains(chain.final.target) && model_completion) {
      if (auto extracted = extract_final_answer(*model_completion)) {
        if (!extracted->answer.empty() &&
            extracted->answer != result.final_answer) {
          result.trace.notes.push_back(
              "model completion disagrees with bound directive: '" +
              extracted->answer + "' vs '" + result.final_answer + "'");
        }
      }
    }
  } catch (const UnresolvableError& e) {
    result.trace.notes.push_back(std::string("unresolved: ") + e.what());
  }

  bool masks_left = !chain.numbered_indices().empty();
  result.status = (!masks_left && !result.final_answer.empty())
                      ? PipelineStatus::Completed
                      : PipelineStatus::PartiallyFilled;
  return result;
}

}  // namespace chainfill
