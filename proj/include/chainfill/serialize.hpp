#pragma once
// JSON shapes for traces, results and metrics. Key order is fixed so runs
// diff cleanly and reruns are byte-identical.

#include <json.hpp>

#include "chainfill/engine.hpp"
#include "chainfill/eval.hpp"

namespace chainfill {

using Json = nlohmann::ordered_json;

Json chain_to_json(const ReasoningChain& chain);
Json binding_to_json(const Binding& binding);
Json selection_report_to_json(const SelectionReport& report);
Json stage_trace_to_json(const StageTrace& stage);
Json trace_to_json(const FillTrace& trace);
Json result_to_json(const PipelineResult& result);
Json metric_row_to_json(const MetricRow& row);
Json summary_to_json(const MetricsSummary& summary,
                     const std::vector<std::string>& missing_ids);

}  // namespace chainfill
