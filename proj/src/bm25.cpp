#include "chainfill/bm25.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "chainfill/chain.hpp"

namespace chainfill {

Corpus Corpus::load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    nlohmann::json row = nlohmann::json::parse(line);
    corpus.add(CorpusDoc{row.at("doc_id").get<std::string>(),
                         row.at("title").get<std::string>(),
                         row.at("text").get<std::string>()});
  }
  return corpus;
}

void Corpus::add(CorpusDoc doc) {
  if (index_.count(doc.doc_id)) {
    throw std::runtime_error("duplicate doc_id: " + doc.doc_id);
  }
  index_[doc.doc_id] = docs_.size();
  docs_.push_back(std::move(doc));
}

const CorpusDoc* Corpus::find(const std::string& doc_id) const {
  auto it = index_.find(doc_id);
  return it == index_.end() ? nullptr : &docs_[it->second];
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::string token;
  for (char raw : s) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      token += static_cast<char>(std::tolower(c));
    } else if (!token.empty()) {
      out.push_back(token);
      token.clear();
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

Bm25Index::Bm25Index(const Corpus& corpus, double k1, double b) : k1_(k1), b_(b) {
  double total = 0.0;
  for (const auto& doc : corpus.docs()) {
    DocStats stats;
    stats.doc_id = doc.doc_id;
    for (const auto& term : tokenize(doc.title + " " + doc.text)) {
      ++stats.term_counts[term];
      stats.length += 1.0;
    }
    for (const auto& [term, _] : stats.term_counts) ++doc_freq_[term];
    total += stats.length;
    docs_.push_back(std::move(stats));
  }
  avg_length_ = docs_.empty() ? 0.0 : total / docs_.size();
}

double Bm25Index::idf(const std::string& term) const {
  auto it = doc_freq_.find(term);
  double df = it == doc_freq_.end() ? 0.0 : it->second;
  double n = static_cast<double>(docs_.size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double Bm25Index::score_doc(const std::vector<std::string>& terms,
                            const DocStats& d) const {
  double score = 0.0;
  for (const auto& term : terms) {
    auto it = d.term_counts.find(term);
    if (it == d.term_counts.end()) continue;
    double tf = it->second;
    double denom = tf + k1_ * (1.0 - b_ + b_ * d.length / avg_length_);
    score += idf(term) * tf * (k1_ + 1.0) / denom;
  }
  return score;
}

std::vector<ScoredDoc> Bm25Index::search(const std::string& query, int k) const {
  if (docs_.empty()) throw EmptyCorpusError("retrieval over an empty corpus");
  if (k < 0) k = 0;

  // Unique query terms; query-side term frequency is ignored.
  std::vector<std::string> raw = tokenize(query);
  std::set<std::string> seen;
  std::vector<std::string> terms;
  for (auto& t : raw) {
    if (seen.insert(t).second) terms.push_back(std::move(t));
  }

  std::vector<ScoredDoc> ranked;
  ranked.reserve(docs_.size());
  for (const auto& d : docs_) {
    ranked.push_back(ScoredDoc{d.doc_id, score_doc(terms, d)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredDoc& a, const ScoredDoc& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.doc_id < b.doc_id;
                   });
  if (static_cast<std::size_t>(k) < ranked.size()) ranked.resize(k);
  return ranked;
}

double Bm25Index::score(const std::string& query, const std::string& doc_id) const {
  std::vector<std::string> raw = tokenize(query);
  std::set<std::string> seen;
  std::vector<std::string> terms;
  for (auto& t : raw) {
    if (seen.insert(t).second) terms.push_back(std::move(t));
  }
  for (const auto& d : docs_) {
    if (d.doc_id == doc_id) return score_doc(terms, d);
  }
  return 0.0;
}

}  // namespace chainfill
