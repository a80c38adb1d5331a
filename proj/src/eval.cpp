#include "chainfill/eval.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace chainfill {

namespace {

std::vector<std::string> norm_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string token;
  for (char raw : normalize_answer(s)) {
    if (raw == ' ') {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token += raw;
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

}  // namespace

std::string normalize_answer(const std::string& s) {
  // lowercase + strip punctuation in one pass
  std::string cleaned;
  cleaned.reserve(s.size());
  for (char raw : s) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::ispunct(c)) continue;
    cleaned += static_cast<char>(std::tolower(c));
  }

  // drop articles, collapse whitespace
  std::string out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    if (token != "a" && token != "an" && token != "the") {
      if (!out.empty()) out += ' ';
      out += token;
    }
    token.clear();
  };
  for (char c : cleaned) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

int em(const std::string& pred, const std::vector<std::string>& golds) {
  const std::string p = normalize_answer(pred);
  for (const auto& gold : golds) {
    if (p == normalize_answer(gold)) return 1;
  }
  return 0;
}

namespace {

double token_f1(const std::vector<std::string>& pred,
                const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) {
    return (pred.empty() && gold.empty()) ? 1.0 : 0.0;
  }
  std::map<std::string, int> gold_counts;
  for (const auto& t : gold) ++gold_counts[t];

  int common = 0;
  for (const auto& t : pred) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  double precision = static_cast<double>(common) / pred.size();
  double recall = static_cast<double>(common) / gold.size();
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double f1(const std::string& pred, const std::vector<std::string>& golds) {
  std::vector<std::string> pred_tokens = norm_tokens(pred);
  double best = 0.0;
  for (const auto& gold : golds) {
    best = std::max(best, token_f1(pred_tokens, norm_tokens(gold)));
  }
  return best;
}

double recall_at_k(const std::vector<std::string>& retrieved_doc_ids,
                   const std::set<std::string>& gold_doc_ids, int k) {
  if (gold_doc_ids.empty()) {
    throw EmptyEvaluationError("recall@k needs a non-empty gold set");
  }
  if (k < 0) k = 0;
  std::set<std::string> seen;
  std::size_t limit = std::min<std::size_t>(k, retrieved_doc_ids.size());
  int hits = 0;
  for (std::size_t i = 0; i < limit; ++i) {
    const std::string& id = retrieved_doc_ids[i];
    if (gold_doc_ids.count(id) && seen.insert(id).second) ++hits;
  }
  return static_cast<double>(hits) / gold_doc_ids.size();
}

MetricsSummary aggregate(const std::vector<MetricRow>& rows) {
  if (rows.empty()) throw EmptyEvaluationError("no rows to aggregate");
  MetricsSummary summary;
  summary.count = rows.size();
  double recall_sum = 0.0;
  std::size_t recall_count = 0;
  for (const auto& row : rows) {
    summary.mean_em += row.em;
    summary.mean_f1 += row.f1;
    if (row.recall_at_k) {
      recall_sum += *row.recall_at_k;
      ++recall_count;
    }
  }
  summary.mean_em /= rows.size();
  summary.mean_f1 /= rows.size();
  if (recall_count > 0) summary.mean_recall = recall_sum / recall_count;
  return summary;
}

}  // namespace chainfill
