#pragma once
// Corpus loading and the built-in lexical retriever. BM25 with k1=1.2,
// b=0.75 over lowercased, punctuation-stripped tokens of title+text.
// Dense retrievers plug in through the same Retriever contract.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainfill {

class EmptyCorpusError : public std::runtime_error {
 public:
  explicit EmptyCorpusError(const std::string& what) : std::runtime_error(what) {}
};

struct CorpusDoc {
  std::string doc_id;
  std::string title;
  std::string text;
};

class Corpus {
 public:
  // JSONL rows: {doc_id, title, text}.
  static Corpus load_jsonl(const std::string& path);

  void add(CorpusDoc doc);
  const std::vector<CorpusDoc>& docs() const { return docs_; }
  const CorpusDoc* find(const std::string& doc_id) const;
  bool empty() const { return docs_.empty(); }

 private:
  std::vector<CorpusDoc> docs_;
  std::map<std::string, std::size_t> index_;
};

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;
};

class Retriever {
 public:
  virtual ~Retriever() = default;
  // Top-k by backend score; ties break by ascending doc_id. k larger than
  // the corpus clamps to the whole corpus. Throws EmptyCorpusError.
  virtual std::vector<ScoredDoc> search(const std::string& query, int k) const = 0;
};

std::vector<std::string> tokenize(const std::string& s);

class Bm25Index : public Retriever {
 public:
  explicit Bm25Index(const Corpus& corpus, double k1 = 1.2, double b = 0.75);

  std::vector<ScoredDoc> search(const std::string& query, int k) const override;
  double score(const std::string& query, const std::string& doc_id) const;

 private:
  struct DocStats {
    std::string doc_id;
    std::map<std::string, int> term_counts;
    double length = 0.0;
  };
  double idf(const std::string& term) const;
  double score_doc(const std::vector<std::string>& terms, const DocStats& d) const;

  std::vector<DocStats> docs_;
  std::map<std::string, int> doc_freq_;
  double avg_length_ = 0.0;
  double k1_;
  double b_;
};

}  // namespace chainfill
