#pragma once
// Answer metrics: SQuAD-style normalization, exact match, token-level F1
// over normalized whitespace tokens (multiset overlap), and retrieval
// recall@k.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainfill {

class EmptyEvaluationError : public std::runtime_error {
 public:
  explicit EmptyEvaluationError(const std::string& what)
      : std::runtime_error(what) {}
};

// lowercase; strip punctuation; drop the articles a/an/the; collapse
// whitespace.
std::string normalize_answer(const std::string& s);

int em(const std::string& pred, const std::vector<std::string>& golds);

// Max over golds; 0 when either side is empty after normalization, unless
// both are empty (then 1).
double f1(const std::string& pred, const std::vector<std::string>& golds);

double recall_at_k(const std::vector<std::string>& retrieved_doc_ids,
                   const std::set<std::string>& gold_doc_ids, int k);

struct MetricRow {
  std::string id;
  int em = 0;
  double f1 = 0.0;
  std::optional<double> recall_at_k;
};

struct MetricsSummary {
  double mean_em = 0.0;
  double mean_f1 = 0.0;
  std::optional<double> mean_recall;  // over rows that carry recall
  std::size_t count = 0;
};

MetricsSummary aggregate(const std::vector<MetricRow>& rows);

}  // namespace chainfill
