#pragma once
// Prompt template set: one text file per role, with {question}, {chain},
// {context} and {triplet} placeholders. Roles mirror the prompt blocks the
// pipeline needs: chain parsing, triplet-to-question conversion, reading,
// parametric fill, and the standard few-shot fallback.

#include <map>
#include <stdexcept>
#include <string>

namespace chainfill {

class TemplateError : public std::runtime_error {
 public:
  explicit TemplateError(const std::string& what) : std::runtime_error(what) {}
};

enum class PromptRole {
  ChainParse,
  TripletToQuestion,
  Reader,
  ParametricFill,
  StandardQa,
};

std::string prompt_role_filename(PromptRole role);

class PromptTemplateSet {
 public:
  // Loads <dir>/<role>.txt for every role; all five files must exist.
  static PromptTemplateSet load_dir(const std::string& dir);

  static PromptTemplateSet from_strings(std::map<PromptRole, std::string> templates);

  // Replaces each {key} with its value; unknown placeholders are an error
  // so templates and code cannot drift silently.
  std::string render(PromptRole role,
                     const std::map<std::string, std::string>& values) const;

  const std::string& raw(PromptRole role) const;

 private:
  std::map<PromptRole, std::string> templates_;
};

}  // namespace chainfill
