#include "chainfill/templates.hpp"

#include <fstream>
#include <sstream>

namespace chainfill {

std::string prompt_role_filename(PromptRole role) {
  switch (role) {
    case PromptRole::ChainParse: return "chain_parse.txt";
    case PromptRole::TripletToQuestion: return "triplet_to_question.txt";
    case PromptRole::Reader: return "reader.txt";
    case PromptRole::ParametricFill: return "parametric_fill.txt";
    case PromptRole::StandardQa: return "standard_qa.txt";
  }
  throw TemplateError("unknown prompt role");
}

PromptTemplateSet PromptTemplateSet::load_dir(const std::string& dir) {
  std::map<PromptRole, std::string> templates;
  for (PromptRole role :
       {PromptRole::ChainParse, PromptRole::TripletToQuestion, PromptRole::Reader,
        PromptRole::ParametricFill, PromptRole::StandardQa}) {
    std::string path = dir + "/" + prompt_role_filename(role);
    std::ifstream in(path);
    if (!in) throw TemplateError("missing prompt template: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    templates[role] = buf.str();
  }
  return from_strings(std::move(templates));
}

PromptTemplateSet PromptTemplateSet::from_strings(
    std::map<PromptRole, std::string> templates) {
  PromptTemplateSet set;
  set.templates_ = std::move(templates);
  return set;
}

const std::string& PromptTemplateSet::raw(PromptRole role) const {
  auto it = templates_.find(role);
  if (it == templates_.end()) {
    throw TemplateError("prompt role not loaded: " + prompt_role_filename(role));
  }
  return it->second;
}

std::string PromptTemplateSet::render(
    PromptRole role, const std::map<std::string, std::string>& values) const {
  const std::string& tpl = raw(role);
  std::string out;
  out.reserve(tpl.size());
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] != '{') {
      out += tpl[i++];
      continue;
    }
    std::size_t close = tpl.find('}', i);
    if (close == std::string::npos) {
      out += tpl.substr(i);
      break;
    }
    std::string key = tpl.substr(i + 1, close - i - 1);
    auto it = values.find(key);
    if (it == values.end()) {
      // Braces that are not placeholders (e.g. JSON in instructions) pass
      // through untouched when they contain non-identifier characters.
      bool identifier = !key.empty();
      for (char c : key) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
          identifier = false;
          break;
        }
      }
      if (identifier) {
        throw TemplateError("template " + prompt_role_filename(role) +
                            " references unknown placeholder {" + key + "}");
      }
      out += tpl.substr(i, close - i + 1);
      i = close + 1;
      continue;
    }
    out += it->second;
    i = close + 1;
  }
  return out;
}

}  // namespace chainfill
