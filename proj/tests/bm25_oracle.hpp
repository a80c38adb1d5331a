#pragma once
// Brute-force BM25 oracle: recomputes document frequencies by scanning and
// shares no code with Bm25Index beyond the tokenizer contract.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chainfill/bm25.hpp"

namespace chainfill::testing {

inline double oracle_bm25(const std::vector<CorpusDoc>& docs,
                          const CorpusDoc& doc, const std::string& query,
                          double k1 = 1.2, double b = 0.75) {
  auto toks = [](const CorpusDoc& d) { return tokenize(d.title + " " + d.text); };
  double total_len = 0.0;
  for (const auto& d : docs) total_len += toks(d).size();
  double avg = total_len / docs.size();

  std::vector<std::string> qterms;
  for (const auto& t : tokenize(query)) {
    if (std::find(qterms.begin(), qterms.end(), t) == qterms.end()) {
      qterms.push_back(t);
    }
  }

  auto doc_tokens = toks(doc);
  double score = 0.0;
  for (const auto& term : qterms) {
    double tf = std::count(doc_tokens.begin(), doc_tokens.end(), term);
    if (tf == 0.0) continue;
    double df = 0.0;
    for (const auto& d : docs) {
      auto dt = toks(d);
      if (std::find(dt.begin(), dt.end(), term) != dt.end()) df += 1.0;
    }
    double idf = std::log(1.0 + (docs.size() - df + 0.5) / (df + 0.5));
    score +=
        idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * doc_tokens.size() / avg));
  }
  return score;
}

// Full brute-force ranking with the same tie-break contract.
inline std::vector<std::pair<std::string, double>> oracle_rank(
    const std::vector<CorpusDoc>& docs, const std::string& query) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& d : docs) {
    out.emplace_back(d.doc_id, oracle_bm25(docs, d, query));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace chainfill::testing
