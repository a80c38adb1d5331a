#pragma once
// Uniform completion interface over LLM backends. The scripted backend is
// a deterministic closed-world mock driven by an ordered rule file; it is
// what every desk-scale test runs against. The HTTP backend is a thin
// adapter for OpenAI-style completion endpoints.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainfill {

class LlmError : public std::runtime_error {
 public:
  explicit LlmError(const std::string& what) : std::runtime_error(what) {}
};

class BackendUnreachableError : public LlmError {
 public:
  explicit BackendUnreachableError(const std::string& what) : LlmError(what) {}
};

// Scripted backend only: no rule matched the prompt. A test authoring
// error, so it fails loudly instead of returning something plausible.
class NoRuleMatchedError : public LlmError {
 public:
  explicit NoRuleMatchedError(const std::string& what) : LlmError(what) {}
};

class SourceUnavailableError : public std::runtime_error {
 public:
  explicit SourceUnavailableError(const std::string& what)
      : std::runtime_error(what) {}
};

struct CompletionRequest {
  std::string prompt;
  int n = 1;
  double temperature = 0.0;
  int max_tokens = 256;
  std::vector<std::string> stop;
};

// Stable 64-bit FNV-1a over the exact prompt bytes; used by the scripted
// backend's exact-match rules so template changes invalidate rules loudly.
std::uint64_t prompt_hash(const std::string& prompt);
std::string prompt_hash_hex(const std::string& prompt);

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  // Returns exactly req.n completions, each truncated at the first stop
  // sequence.
  virtual std::vector<std::string> complete(const CompletionRequest& req) = 0;
  virtual std::string name() const = 0;
};

enum class RuleMatchKind { PromptHash, Substring, Pattern };

struct ScriptedRule {
  RuleMatchKind match_kind = RuleMatchKind::Substring;
  std::string match_value;
  std::vector<std::string> completions;
};

// First matching rule wins; a rule's completions cycle as they are
// consumed, with the cursor persisting across calls. Fully deterministic
// given the rule file and the request order.
class ScriptedBackend : public LlmBackend {
 public:
  explicit ScriptedBackend(std::vector<ScriptedRule> rules);

  // Loads rules from JSONL: {"match_kind": "...", "match_value": "...",
  // "completions": [...]}.
  static std::unique_ptr<ScriptedBackend> from_file(const std::string& path);

  std::vector<std::string> complete(const CompletionRequest& req) override;
  std::string name() const override { return "scripted"; }

 private:
  struct CompiledRule {
    ScriptedRule rule;
    std::optional<std::regex> pattern;
    std::size_t cursor = 0;
  };
  std::vector<CompiledRule> rules_;
  std::mutex mutex_;
};

struct HttpBackendConfig {
  std::string endpoint;   // e.g. "http://localhost:8000/v1/completions"
  std::string model;
  std::string token_env;  // env var holding the bearer token; may be empty
  int timeout_seconds = 60;
};

// POSTs {model, prompt, n, temperature, max_tokens, stop} and reads
// choices[].text from the response.
class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(HttpBackendConfig cfg);
  std::vector<std::string> complete(const CompletionRequest& req) override;
  std::string name() const override { return "http:" + cfg_.model; }

 private:
  HttpBackendConfig cfg_;
};

// Shared entry point with bounded retries; BackendUnreachable after the
// retry budget surfaces as SourceUnavailableError.
class LlmGateway {
 public:
  explicit LlmGateway(std::shared_ptr<LlmBackend> backend, int max_retries = 2)
      : backend_(std::move(backend)), max_retries_(max_retries) {}

  std::vector<std::string> complete(const CompletionRequest& req) const;
  std::string first_completion(const CompletionRequest& req) const;
  const LlmBackend& backend() const { return *backend_; }

 private:
  std::shared_ptr<LlmBackend> backend_;
  int max_retries_;
};

// Applies stop-sequence truncation (earliest occurrence wins).
std::string truncate_at_stop(const std::string& text,
                             const std::vector<std::string>& stop);

}  // namespace chainfill
