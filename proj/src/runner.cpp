#include "chainfill/runner.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

namespace chainfill {

namespace {

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::set<std::string> existing_result_ids(const std::string& path) {
  std::set<std::string> ids;
  std::ifstream in(path);
  if (!in) return ids;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      auto row = nlohmann::json::parse(line);
      if (row.value("type", "") == "result" && row.contains("id")) {
        ids.insert(row.at("id").get<std::string>());
      }
    } catch (const nlohmann::json::exception&) {
      // tolerate foreign lines; they are simply not resumable ids
    }
  }
  return ids;
}

}  // namespace

int run_dataset(const PipelineFactory& factory, const RunOptions& options) {
  std::vector<DatasetRecord> dataset = load_dataset(options.dataset_path);
  std::set<std::string> done = existing_result_ids(options.out_path);

  std::vector<const DatasetRecord*> todo;
  for (const auto& rec : dataset) {
    if (!done.count(rec.id)) todo.push_back(&rec);
  }

  bool fresh = done.empty() && !std::ifstream(options.out_path).good();
  std::ofstream out(options.out_path, std::ios::app);
  if (!out) throw ConfigError("cannot open output file: " + options.out_path);
  if (fresh) {
    // Timestamps live only in this header line; result rows stay
    // byte-reproducible across runs.
    Json header{{"type", "header"},
                {"started_at", iso_timestamp()},
                {"config", factory.config().effective}};
    out << header.dump() << "\n";
  }
  if (todo.empty()) return 0;

  // Workers fill slots; the writer drains them in dataset order.
  std::vector<std::optional<std::string>> slots(todo.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const DatasetRecord& rec = *todo[i];
      std::string line;
      try {
        Pipeline pipeline = factory.make_pipeline();
        PipelineResult result = pipeline.run(rec.id, rec.question);
        line = result_to_json(result).dump();
      } catch (const std::exception& e) {
        Json row{{"type", "result"},
                 {"id", rec.id},
                 {"question", rec.question},
                 {"status", "failed"},
                 {"final_answer", ""},
                 {"error", e.what()}};
        line = row.dump();
      }
      {
        std::lock_guard<std::mutex> lock(mutex);
        slots[i] = std::move(line);
      }
      ready.notify_all();
    }
  };

  int workers = std::max(1, std::min<int>(factory.config().concurrency,
                                          static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);

  {
    std::unique_lock<std::mutex> lock(mutex);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      ready.wait(lock, [&] { return slots[i].has_value(); });
      out << *slots[i] << "\n";
      out.flush();
      if (!options.quiet) {
        std::cerr << "[run] " << todo[i]->id << " done\n";
      }
    }
  }
  for (auto& t : pool) t.join();
  return static_cast<int>(todo.size());
}

EvalOutcome evaluate_results(const EvalOptions& options) {
  std::vector<DatasetRecord> dataset = load_dataset(options.dataset_path);

  struct Prediction {
    std::string answer;
    std::vector<std::string> retrieved;
  };
  std::map<std::string, Prediction> predictions;
  {
    std::ifstream in(options.results_path);
    if (!in) throw ConfigError("cannot open results: " + options.results_path);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      auto row = nlohmann::json::parse(line);
      if (row.value("type", "") != "result") continue;
      Prediction p;
      p.answer = row.value("final_answer", "");
      if (row.contains("retrieved_doc_ids")) {
        for (const auto& d : row.at("retrieved_doc_ids")) {
          p.retrieved.push_back(d.get<std::string>());
        }
      }
      predictions[row.at("id").get<std::string>()] = std::move(p);
    }
  }

  EvalOutcome outcome;
  for (const auto& rec : dataset) {
    if (rec.gold_answers.empty()) continue;  // not evaluable
    MetricRow row;
    row.id = rec.id;
    auto it = predictions.find(rec.id);
    if (it == predictions.end()) {
      outcome.missing_ids.push_back(rec.id);
      row.em = 0;
      row.f1 = 0.0;
    } else {
      row.em = em(it->second.answer, rec.gold_answers);
      row.f1 = f1(it->second.answer, rec.gold_answers);
      if (!rec.gold_doc_ids.empty() && !it->second.retrieved.empty()) {
        std::set<std::string> gold(rec.gold_doc_ids.begin(),
                                   rec.gold_doc_ids.end());
        row.recall_at_k =
            recall_at_k(it->second.retrieved, gold,
                        static_cast<int>(it->second.retrieved.size()));
      }
    }
    outcome.rows.push_back(std::move(row));
  }

  outcome.summary = aggregate(outcome.rows);
  return outcome;
}

std::vector<AblationRow> run_ablation(const AblateOptions& options) {
  std::set<std::string> seen;
  for (const auto& order : options.orders) {
    // normalize through the parser so "kg, model" and "kg,model" collide
    std::string canonical = SourceOrder::parse(order).to_string();
    if (!seen.insert(canonical).second) {
      throw ConfigError("duplicate source order in ablation: " + canonical);
    }
  }

  std::vector<AblationRow> rows;
  for (const auto& order : options.orders) {
    CliOverrides overrides = options.overrides;
    overrides.source_order = order;
    // Rebuilt from scratch per order: scripted cursors restart, so every
    // order sees the same sampling sequence.
    PipelineFactory factory(PipelineConfig::load(options.config_path, overrides));

    std::string canonical = factory.config().order.to_string();
    std::string results_path = options.out_dir + "/ablate_";
    for (char c : canonical) results_path += (c == ',') ? '_' : c;
    results_path += ".jsonl";
    std::remove(results_path.c_str());

    RunOptions run_options;
    run_options.dataset_path = options.dataset_path;
    run_options.out_path = results_path;
    run_options.quiet = true;
    run_dataset(factory, run_options);

    EvalOptions eval_options;
    eval_options.results_path = results_path;
    eval_options.dataset_path = options.dataset_path;
    EvalOutcome outcome = evaluate_results(eval_options);
    rows.push_back(AblationRow{canonical, outcome.summary});
  }
  return rows;
}

SelectionReport parse_question(const PipelineFactory& factory,
                               const std::string& question) {
  Pipeline pipeline = factory.make_pipeline();
  return pipeline.select_chain(question);
}

}  // namespace chainfill
