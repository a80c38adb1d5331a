#include "chainfill/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace chainfill {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void reject_unknown_keys(const ordered_json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

std::string resolve_path(const fs::path& base, const std::string& rel) {
  fs::path p(rel);
  if (p.is_absolute()) return p.string();
  return (base / p).lexically_normal().string();
}

void require_exists(const std::string& path, const std::string& what) {
  if (!fs::exists(path)) {
    throw ConfigError(what + " does not exist: " + path);
  }
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path,
                                    const CliOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  reject_unknown_keys(doc, "config",
                      {"source_order", "validation", "sampling", "retrieval",
                       "kg", "backends", "templates", "concurrency", "parser",
                       "llm_retries"});

  // CLI overrides rewrite the document before anything is read, so the
  // effective config embedded in outputs matches what actually ran.
  if (overrides.source_order) {
    doc["source_order"] = ordered_json::array();
    for (SourceKind kind : SourceOrder::parse(*overrides.source_order).stages) {
      doc["source_order"].push_back(source_kind_name(kind));
    }
  }
  if (overrides.samples) doc["sampling"]["n"] = *overrides.samples;
  if (overrides.top_k) doc["retrieval"]["k"] = *overrides.top_k;
  if (overrides.retrieval_mode) doc["retrieval"]["mode"] = *overrides.retrieval_mode;
  if (overrides.kg_linking) doc["kg"]["linking"] = *overrides.kg_linking;

  PipelineConfig cfg;
  cfg.effective = doc;
  const fs::path base = fs::path(path).parent_path();

  if (!doc.contains("source_order")) throw ConfigError("config needs source_order");
  std::string csv;
  for (const auto& item : doc.at("source_order")) {
    if (!csv.empty()) csv += ",";
    csv += item.get<std::string>();
  }
  cfg.order = SourceOrder::parse(csv);

  if (doc.contains("validation")) {
    const auto& v = doc.at("validation");
    reject_unknown_keys(v, "validation", {"min_masks", "max_masks"});
    if (v.contains("min_masks")) cfg.validation.min_masks = v.at("min_masks").get<int>();
    if (v.contains("max_masks")) cfg.validation.max_masks = v.at("max_masks").get<int>();
    if (cfg.validation.min_masks < 1 ||
        cfg.validation.min_masks > cfg.validation.max_masks) {
      throw ConfigError("validation requires 1 <= min_masks <= max_masks");
    }
  }

  if (doc.contains("sampling")) {
    const auto& s = doc.at("sampling");
    reject_unknown_keys(s, "sampling", {"n", "temperature"});
    if (s.contains("n")) cfg.sampling.n = s.at("n").get<int>();
    if (s.contains("temperature")) {
      cfg.sampling.temperature = s.at("temperature").get<double>();
    }
    if (cfg.sampling.n < 1) throw ConfigError("sampling.n must be >= 1");
    if (cfg.sampling.temperature < 0) {
      throw ConfigError("sampling.temperature must be >= 0");
    }
  }

  if (doc.contains("retrieval")) {
    const auto& r = doc.at("retrieval");
    reject_unknown_keys(r, "retrieval", {"k", "mode", "context_char_budget"});
    if (r.contains("k")) cfg.retrieval.top_k = r.at("k").get<int>();
    if (cfg.retrieval.top_k < 1) throw ConfigError("retrieval.k must be >= 1");
    if (r.contains("mode")) {
      std::string mode = r.at("mode").get<std::string>();
      if (mode == "single") {
        cfg.retrieval.mode = RetrievalMode::SingleRound;
      } else if (mode == "multi") {
        cfg.retrieval.mode = RetrievalMode::MultiRound;
      } else {
        throw ConfigError("retrieval.mode must be 'single' or 'multi'");
      }
    }
    if (r.contains("context_char_budget")) {
      cfg.retrieval.context_char_budget =
          r.at("context_char_budget").get<std::size_t>();
    }
  }

  if (doc.contains("kg")) {
    const auto& k = doc.at("kg");
    reject_unknown_keys(k, "kg", {"linking", "theta_entity", "theta_relation"});
    if (k.contains("linking")) {
      std::string mode = k.at("linking").get<std::string>();
      if (mode == "exact") {
        cfg.kg.mode = LinkingMode::Exact;
      } else if (mode == "fuzzy") {
        cfg.kg.mode = LinkingMode::Fuzzy;
      } else {
        throw ConfigError("kg.linking must be 'exact' or 'fuzzy'");
      }
    }
    if (k.contains("theta_entity")) cfg.kg.theta_entity = k.at("theta_entity").get<double>();
    if (k.contains("theta_relation")) {
      cfg.kg.theta_relation = k.at("theta_relation").get<double>();
    }
  }

  if (doc.contains("parser")) {
    const auto& p = doc.at("parser");
    reject_unknown_keys(p, "parser", {"lenient_tuples"});
    if (p.contains("lenient_tuples")) {
      cfg.parser.lenient_tuples = p.at("lenient_tuples").get<bool>();
    }
  }

  if (doc.contains("concurrency")) {
    cfg.concurrency = doc.at("concurrency").get<int>();
    if (cfg.concurrency < 1) throw ConfigError("concurrency must be >= 1");
  }
  if (doc.contains("llm_retries")) {
    cfg.llm_retries = doc.at("llm_retries").get<int>();
  }

  if (!doc.contains("templates")) throw ConfigError("config needs templates dir");
  cfg.templates_dir = resolve_path(base, doc.at("templates").get<std::string>());
  require_exists(cfg.templates_dir, "templates dir");

  if (!doc.contains("backends")) throw ConfigError("config needs backends");
  const auto& backends = doc.at("backends");
  reject_unknown_keys(backends, "backends", {"llm", "kg_store", "corpus"});

  if (!backends.contains("llm")) throw ConfigError("backends needs llm");
  const auto& llm = backends.at("llm");
  reject_unknown_keys(llm, "backends.llm",
                      {"kind", "rules", "endpoint", "model", "token_env",
                       "timeout_seconds"});
  cfg.llm_kind = llm.at("kind").get<std::string>();
  if (cfg.llm_kind == "scripted") {
    cfg.llm_rules_path = resolve_path(base, llm.at("rules").get<std::string>());
    require_exists(cfg.llm_rules_path, "scripted rule file");
  } else if (cfg.llm_kind == "http") {
    cfg.http.endpoint = llm.at("endpoint").get<std::string>();
    cfg.http.model = llm.at("model").get<std::string>();
    if (llm.contains("token_env")) {
      cfg.http.token_env = llm.at("token_env").get<std::string>();
    }
    if (llm.contains("timeout_seconds")) {
      cfg.http.timeout_seconds = llm.at("timeout_seconds").get<int>();
    }
  } else {
    throw ConfigError("backends.llm.kind must be 'scripted' or 'http'");
  }

  if (cfg.order.has(SourceKind::KG)) {
    if (!backends.contains("kg_store")) {
      throw ConfigError("source order includes kg but backends.kg_store is missing");
    }
    cfg.kg_store_path = resolve_path(base, backends.at("kg_store").get<std::string>());
    require_exists(cfg.kg_store_path, "kg store");
  }
  if (cfg.order.has(SourceKind::Text)) {
    if (!backends.contains("corpus")) {
      throw ConfigError("source order includes text but backends.corpus is missing");
    }
    cfg.corpus_path = resolve_path(base, backends.at("corpus").get<std::string>());
    require_exists(cfg.corpus_path, "corpus");
  }

  return cfg;
}

PipelineFactory::PipelineFactory(PipelineConfig cfg) : cfg_(std::move(cfg)) {
  templates_ = std::make_shared<PromptTemplateSet>(
      PromptTemplateSet::load_dir(cfg_.templates_dir));

  if (cfg_.llm_kind == "scripted") {
    backend_ = ScriptedBackend::from_file(cfg_.llm_rules_path);
  } else {
    backend_ = std::make_shared<HttpBackend>(cfg_.http);
  }
  gateway_ = std::make_shared<LlmGateway>(backend_, cfg_.llm_retries);

  if (cfg_.order.has(SourceKind::KG)) {
    store_ = std::make_shared<TripleStore>(TripleStore::load_jsonl(cfg_.kg_store_path));
  }
  if (cfg_.order.has(SourceKind::Text)) {
    corpus_ = std::make_shared<Corpus>(Corpus::load_jsonl(cfg_.corpus_path));
    index_ = std::make_shared<Bm25Index>(*corpus_);
  }
  if (cfg_.order.has(SourceKind::Model)) {
    filler_ = std::make_shared<ParametricFiller>(gateway_, templates_);
  }
}

Pipeline PipelineFactory::make_pipeline() const {
  std::map<SourceKind, std::shared_ptr<KnowledgeSource>> sources;
  if (store_) {
    sources[SourceKind::KG] = std::make_shared<KgSource>(store_, cfg_.kg);
  }
  if (corpus_) {
    sources[SourceKind::Text] = std::make_shared<TextSource>(
        corpus_, index_, gateway_, templates_, cfg_.retrieval);
  }
  EngineConfig engine_cfg{cfg_.order, cfg_.validation, cfg_.sampling, cfg_.parser};
  return Pipeline(engine_cfg, gateway_, templates_, std::move(sources), filler_);
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset: " + path);
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    DatasetRecord rec;
    rec.id = row.at("id").get<std::string>();
    rec.question = row.at("question").get<std::string>();
    if (row.contains("gold_answers")) {
      for (const auto& a : row.at("gold_answers")) {
        rec.gold_answers.push_back(a.get<std::string>());
      }
    }
    if (row.contains("gold_doc_ids")) {
      for (const auto& d : row.at("gold_doc_ids")) {
        rec.gold_doc_ids.push_back(d.get<std::string>());
      }
    }
    if (row.contains("gold_triples")) {
      for (const auto& t : row.at("gold_triples")) {
        rec.gold_triples.push_back(t.get<std::string>());
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace chainfill
