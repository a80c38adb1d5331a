#include "chainfill/similarity.hpp"

#include <cctype>
#include <cmath>

namespace chainfill {

namespace {

std::string normalize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char raw : s) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

}  // namespace

std::map<std::string, int> TrigramCosine::grams(const std::string& s) {
  std::map<std::string, int> out;
  std::string norm = normalize(s);
  if (norm.empty()) return out;
  if (norm.size() < 3) {
    out[norm] = 1;
    return out;
  }
  for (std::size_t i = 0; i + 3 <= norm.size(); ++i) {
    ++out[norm.substr(i, 3)];
  }
  return out;
}

double TrigramCosine::score(const std::string& a, const std::string& b) const {
  std::string na_str = normalize(a);
  std::string nb_str = normalize(b);
  if (!na_str.empty() && na_str == nb_str) return 1.0;

  auto ga = grams(a);
  auto gb = grams(b);
  if (ga.empty() || gb.empty()) return 0.0;

  double dot = 0.0;
  for (const auto& [gram, count] : ga) {
    auto it = gb.find(gram);
    if (it != gb.end()) dot += static_cast<double>(count) * it->second;
  }
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [_, count] : ga) na += static_cast<double>(count) * count;
  for (const auto& [_, count] : gb) nb += static_cast<double>(count) * count;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace chainfill
