#include "chainfill/llm.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "chainfill/chain.hpp"

namespace chainfill {

std::uint64_t prompt_hash(const std::string& prompt) {
  std::uint64_t h = 14695981039346656037ull;  // FNV offset basis
  for (unsigned char c : prompt) {
    h ^= c;
    h *= 1099511628211ull;  // FNV prime
  }
  return h;
}

std::string prompt_hash_hex(const std::string& prompt) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(prompt_hash(prompt)));
  return std::string(buf);
}

std::string truncate_at_stop(const std::string& text,
                             const std::vector<std::string>& stop) {
  std::size_t cut = text.size();
  for (const auto& s : stop) {
    if (s.empty()) continue;
    std::size_t pos = text.find(s);
    if (pos != std::string::npos && pos < cut) cut = pos;
  }
  return text.substr(0, cut);
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptedRule> rules) {
  for (auto& rule : rules) {
    if (rule.completions.empty()) {
      throw LlmError("scripted rule with no completions: " + rule.match_value);
    }
    CompiledRule compiled;
    if (rule.match_kind == RuleMatchKind::Pattern) {
      compiled.pattern.emplace(rule.match_value, std::regex::ECMAScript);
    }
    compiled.rule = std::move(rule);
    rules_.push_back(std::move(compiled));
  }
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LlmError("cannot open scripted rule file: " + path);
  std::vector<ScriptedRule> rules;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line);
    ScriptedRule rule;
    std::string kind = row.at("match_kind").get<std::string>();
    if (kind == "prompt_hash") {
      rule.match_kind = RuleMatchKind::PromptHash;
    } else if (kind == "substring") {
      rule.match_kind = RuleMatchKind::Substring;
    } else if (kind == "pattern") {
      rule.match_kind = RuleMatchKind::Pattern;
    } else {
      throw LlmError("unknown match_kind '" + kind + "' in " + path);
    }
    rule.match_value = row.at("match_value").get<std::string>();
    for (const auto& c : row.at("completions")) {
      rule.completions.push_back(c.get<std::string>());
    }
    rules.push_back(std::move(rule));
  }
  return std::make_unique<ScriptedBackend>(std::move(rules));
}

std::vector<std::string> ScriptedBackend::complete(const CompletionRequest& req) {
  if (req.n < 1) throw LlmError("completion request with n < 1");
  std::lock_guard<std::mutex> lock(mutex_);
  for (auto& compiled : rules_) {
    const ScriptedRule& rule = compiled.rule;
    bool matched = false;
    switch (rule.match_kind) {
      case RuleMatchKind::PromptHash:
        matched = prompt_hash_hex(req.prompt) == rule.match_value;
        break;
      case RuleMatchKind::Substring:
        matched = req.prompt.find(rule.match_value) != std::string::npos;
        break;
      case RuleMatchKind::Pattern:
        matched = std::regex_search(req.prompt, *compiled.pattern);
        break;
    }
    if (!matched) continue;

    std::vector<std::string> out;
    out.reserve(req.n);
    for (int i = 0; i < req.n; ++i) {
      const std::string& raw =
          rule.completions[compiled.cursor % rule.completions.size()];
      ++compiled.cursor;
      out.push_back(truncate_at_stop(raw, req.stop));
    }
    return out;
  }
  throw NoRuleMatchedError("no scripted rule matched prompt (hash " +
                           prompt_hash_hex(req.prompt) + "): " +
                           req.prompt.substr(0, 160));
}

HttpBackend::HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {}

std::vector<std::string> HttpBackend::complete(const CompletionRequest& req) {
  // Split endpoint into host part and path.
  std::string url = cfg_.endpoint;
  std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw LlmError("http backend endpoint must include scheme: " + url);
  }
  std::size_t path_pos = url.find('/', scheme + 3);
  std::string host = path_pos == std::string::npos ? url : url.substr(0, path_pos);
  std::string path = path_pos == std::string::npos ? "/" : url.substr(path_pos);

  httplib::Client client(host);
  client.set_connection_timeout(cfg_.timeout_seconds, 0);
  client.set_read_timeout(cfg_.timeout_seconds, 0);
  if (!cfg_.token_env.empty()) {
    if (const char* token = std::getenv(cfg_.token_env.c_str())) {
      client.set_default_headers({{"Authorization", std::string("Bearer ") + token}});
    }
  }

  nlohmann::json body = {
      {"model", cfg_.model},       {"prompt", req.prompt},
      {"n", req.n},                {"temperature", req.temperature},
      {"max_tokens", req.max_tokens}};
  if (!req.stop.empty()) body["stop"] = req.stop;

  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw BackendUnreachableError("no response from " + cfg_.endpoint);
  }
  if (res->status != 200) {
    throw BackendUnreachableError("status " + std::to_string(res->status) +
                                  " from " + cfg_.endpoint);
  }

  nlohmann::json parsed = nlohmann::json::parse(res->body);
  std::vector<std::string> out;
  for (const auto& choice : parsed.at("choices")) {
    std::string text;
    if (choice.contains("text")) {
      text = choice.at("text").get<std::string>();
    } else if (choice.contains("message")) {
      text = choice.at("message").at("content").get<std::string>();
    }
    out.push_back(truncate_at_stop(text, req.stop));
  }
  if (static_cast<int>(out.size()) < req.n) {
    throw LlmError("backend returned " + std::to_string(out.size()) +
                   " completions, requested " + std::to_string(req.n));
  }
  out.resize(req.n);
  return out;
}

std::vector<std::string> LlmGateway::complete(const CompletionRequest& req) const {
  for (int attempt = 0;; ++attempt) {
    try {
      return backend_->complete(req);
    } catch (const BackendUnreachableError& e) {
      if (attempt >= max_retries_) {
        throw SourceUnavailableError(std::string("llm backend unreachable: ") +
                                     e.what());
      }
    }
  }
}

std::string LlmGateway::first_completion(const CompletionRequest& req) const {
  auto all = complete(req);
  if (all.empty()) throw LlmError("backend returned no completions");
  return all.front();
}

}  // namespace chainfill
