#pragma once
// Pluggable text-similarity contract used for relation linking and fuzzy
// entity linking. The built-in is a character-trigram TF cosine:
// deterministic and dependency-free. Sentence-embedding models slot in
// through the same interface.

#include <map>
#include <string>

namespace chainfill {

class TextSimilarity {
 public:
  virtual ~TextSimilarity() = default;
  // Score in [0, 1]; 1.0 for identical normalized strings.
  virtual double score(const std::string& a, const std::string& b) const = 0;
};

class TrigramCosine : public TextSimilarity {
 public:
  double score(const std::string& a, const std::string& b) const override;

  // Lowercased, whitespace-collapsed character trigrams with term counts.
  // Strings shorter than three characters contribute themselves as a
  // single gram.
  static std::map<std::string, int> grams(const std::string& s);
};

}  // namespace chainfill
