#include "chainfill/serialize.hpp"

#include <algorithm>

#include "chainfill/parser.hpp"

namespace chainfill {

Json chain_to_json(const ReasoningChain& chain) {
  Json triplets = Json::array();
  for (const auto& t : chain.triplets) {
    triplets.push_back(Json::array(
        {t.head.render(), t.relation.render(), t.tail.render()}));
  }
  return Json{{"triplets", triplets}, {"final", chain.final.target.text()}};
}

Json binding_to_json(const Binding& binding) {
  Json out = Json::object();
  for (const auto& [mask, entry] : binding.entries()) {
    Json e{{"value", entry.value}, {"source", source_kind_name(entry.source)}};
    e["evidence"] = entry.evidence;
    if (entry.confidence) e["confidence"] = *entry.confidence;
    out[mask.text()] = std::move(e);
  }
  return out;
}

Json selection_report_to_json(const SelectionReport& report) {
  Json votes = Json::object();
  for (const auto& [key, count] : report.vote_counts) votes[key] = count;
  Json errors = Json::object();
  for (const auto& [name, count] : report.error_histogram) errors[name] = count;
  return Json{{"chosen", render_chain(report.chosen)},
              {"vote_counts", votes},
              {"filtered_count", report.filtered_count},
              {"error_histogram", errors}};
}

namespace {

Json iteration_to_json(const TraceIteration& iter) {
  Json results = Json::array();
  for (const auto& r : iter.results) {
    Json q{{"triplet", r.triplet}, {"outcome", r.outcome}};
    if (r.mask) q["mask"] = *r.mask;
    if (r.value) q["value"] = *r.value;
    if (!r.candidates.empty()) q["candidates"] = r.candidates;
    if (!r.evidence.empty()) q["evidence"] = r.evidence;
    if (r.confidence) q["confidence"] = *r.confidence;
    if (!r.notes.empty()) q["notes"] = r.notes;
    results.push_back(std::move(q));
  }
  Json substitutions = Json::array();
  for (const auto& [mask, value] : iter.substitutions) {
    substitutions.push_back(Json{{"mask", mask}, {"value", value}});
  }
  return Json{{"valid", iter.valid},
              {"queried", iter.queried},
              {"results", results},
              {"substitutions", substitutions},
              {"unfilled", iter.unfilled}};
}

}  // namespace

Json stage_trace_to_json(const StageTrace& stage) {
  Json out{{"source", source_kind_name(stage.source)}, {"status", stage.status}};
  if (!stage.note.empty()) out["note"] = stage.note;
  if (!stage.iterations.empty()) {
    Json iterations = Json::array();
    for (const auto& iter : stage.iterations) {
      iterations.push_back(iteration_to_json(iter));
    }
    out["iterations"] = std::move(iterations);
  }
  if (!stage.retrievals.empty()) {
    Json retrievals = Json::array();
    for (const auto& r : stage.retrievals) {
      Json ranked = Json::array();
      for (const auto& [doc_id, score] : r.ranked) {
        ranked.push_back(Json{{"doc_id", doc_id}, {"score", score}});
      }
      retrievals.push_back(Json{{"query", r.query}, {"ranked", ranked}});
    }
    out["retrievals"] = std::move(retrievals);
  }
  if (stage.model) {
    Json model{{"completion", stage.model->completion},
               {"aligned", stage.model->aligned}};
    if (stage.model->extracted_answer) {
      model["extracted_answer"] = *stage.model->extracted_answer;
    }
    if (!stage.model->substitutions.empty()) {
      Json subs = Json::array();
      for (const auto& [mask, value] : stage.model->substitutions) {
        subs.push_back(Json{{"mask", mask}, {"value", value}});
      }
      model["substitutions"] = std::move(subs);
    }
    if (!stage.model->disagreements.empty()) {
      model["disagreements"] = stage.model->disagreements;
    }
    out["model"] = std::move(model);
  }
  return out;
}

Json trace_to_json(const FillTrace& trace) {
  Json out = Json::object();
  if (trace.selection) out["selection"] = selection_report_to_json(*trace.selection);
  Json stages = Json::array();
  for (const auto& stage : trace.stages) {
    stages.push_back(stage_trace_to_json(stage));
  }
  out["stages"] = std::move(stages);
  if (trace.fallback_completion) out["fallback"] = *trace.fallback_completion;
  if (!trace.notes.empty()) out["notes"] = trace.notes;
  return out;
}

Json result_to_json(const PipelineResult& result) {
  Json out{{"type", "result"},
           {"id", result.id},
           {"question", result.question},
           {"status", pipeline_status_name(result.status)},
           {"final_answer", result.final_answer}};
  if (result.filled_chain) {
    out["filled_chain"] = chain_to_json(*result.filled_chain);
    out["filled_chain_text"] = render_chain(*result.filled_chain);
  }
  out["binding"] = binding_to_json(result.binding);

  // Every doc id retrieved across stages, first-retrieval order; used for
  // recall scoring downstream.
  std::vector<std::string> retrieved;
  for (const auto& stage : result.trace.stages) {
    for (const auto& r : stage.retrievals) {
      for (const auto& [doc_id, _] : r.ranked) {
        if (std::find(retrieved.begin(), retrieved.end(), doc_id) ==
            retrieved.end()) {
          retrieved.push_back(doc_id);
        }
      }
    }
  }
  out["retrieved_doc_ids"] = retrieved;
  out["trace"] = trace_to_json(result.trace);
  return out;
}

Json metric_row_to_json(const MetricRow& row) {
  Json out{{"id", row.id}, {"em", row.em}, {"f1", row.f1}};
  if (row.recall_at_k) out["recall_at_k"] = *row.recall_at_k;
  return out;
}

Json summary_to_json(const MetricsSummary& summary,
                     const std::vector<std::string>& missing_ids) {
  Json out{{"count", summary.count},
           {"mean_em", summary.mean_em},
           {"mean_f1", summary.mean_f1}};
  if (summary.mean_recall) out["mean_recall"] = *summary.mean_recall;
  if (!missing_ids.empty()) out["missing_predictions"] = missing_ids;
  return out;
}

}  // namespace chainfill
