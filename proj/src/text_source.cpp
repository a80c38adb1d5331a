#include "chainfill/text_source.hpp"

#include <algorithm>

namespace chainfill {

namespace {

const std::string kUnknownToken = "unknown";

std::string first_line(const std::string& s) {
  std::size_t pos = s.find('\n');
  return trim(pos == std::string::npos ? s : s.substr(0, pos));
}

}  // namespace

std::string triplet_prompt_form(const Triplet& t) {
  return "(\"" + t.head.render() + "\", \"" + t.relation.render() + "\", ?)";
}

TextSource::TextSource(std::shared_ptr<const Corpus> corpus,
                       std::shared_ptr<const Retriever> retriever,
                       std::shared_ptr<const LlmGateway> llm,
                       std::shared_ptr<const PromptTemplateSet> templates,
                       TextSourceConfig cfg)
    : corpus_(std::move(corpus)),
      retriever_(std::move(retriever)),
      llm_(std::move(llm)),
      templates_(std::move(templates)),
      cfg_(cfg) {}

void TextSource::begin_stage(const std::string& question) {
  stage_pool_.clear();
  retrievals_.clear();
  if (cfg_.mode == RetrievalMode::SingleRound) {
    try {
      stage_pool_ = retriever_->search(question, cfg_.top_k);
    } catch (const EmptyCorpusError& e) {
      throw SourceUnavailableError(e.what());
    }
    retrievals_.push_back(RetrievalEvent{question, stage_pool_});
  }
}

std::string TextSource::triplet_to_question(const Triplet& t) const {
  CompletionRequest req;
  req.prompt = templates_->render(PromptRole::TripletToQuestion,
                                  {{"triplet", triplet_prompt_form(t)}});
  req.n = 1;
  req.temperature = 0.0;
  req.stop = {"\n"};

  for (int attempt = 0; attempt <= cfg_.generation_retries; ++attempt) {
    std::string question = first_line(llm_->first_completion(req));
    if (!question.empty()) {
      if (question.back() != '?') question += '?';
      return question;
    }
  }
  throw GenerationFailedError("empty single-hop question for triplet " +
                              triplet_prompt_form(t));
}

std::string TextSource::format_context(const std::vector<ScoredDoc>& docs) const {
  std::string context;
  for (const auto& scored : docs) {
    const CorpusDoc* doc = corpus_->find(scored.doc_id);
    if (!doc) continue;
    std::string entry = doc->title + ": " + doc->text;
    if (!context.empty()) entry = "\n" + entry;
    if (context.size() + entry.size() > cfg_.context_char_budget) break;
    context += entry;
  }
  return context;
}

ReadResult TextSource::read(const std::string& question,
                            const std::vector<ScoredDoc>& docs) const {
  CompletionRequest req;
  req.prompt = templates_->render(
      PromptRole::Reader, {{"context", format_context(docs)}, {"question", question}});
  req.n = 1;
  req.temperature = 0.0;
  req.stop = {"\n"};

  ReadResult result;
  result.raw_completion = llm_->first_completion(req);
  for (const auto& d : docs) result.doc_ids_used.push_back(d.doc_id);

  std::string answer = first_line(result.raw_completion);
  if (answer != kUnknownToken && !answer.empty()) {
    result.answer = answer;
  }
  return result;
}

std::vector<SourceRetrieval> TextSource::stage_retrievals() const {
  std::vector<SourceRetrieval> out;
  for (const auto& event : retrievals_) {
    SourceRetrieval r;
    r.query = event.query;
    for (const auto& d : event.ranked) r.ranked.emplace_back(d.doc_id, d.score);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ScoredDoc> TextSource::retrieve_for(const std::string& question) {
  if (cfg_.mode == RetrievalMode::SingleRound) {
    return stage_pool_;
  }
  auto ranked = retriever_->search(question, cfg_.top_k);
  retrievals_.push_back(RetrievalEvent{question, ranked});
  return ranked;
}

std::optional<SourceAnswer> TextSource::answer_triplet(const Triplet& t) {
  try {
    std::string question = triplet_to_question(t);
    std::vector<ScoredDoc> docs = retrieve_for(question);
    ReadResult read_result = read(question, docs);

    if (!read_result.answer) return std::nullopt;

    SourceAnswer answer;
    answer.value = *read_result.answer;
    answer.candidates = {*read_result.answer};
    answer.evidence = read_result.doc_ids_used;
    answer.notes.push_back("question: " + question);
    return answer;
  } catch (const GenerationFailedError& e) {
    throw SourceUnavailableError(e.what());
  } catch (const EmptyCorpusError& e) {
    throw SourceUnavailableError(e.what());
  }
}

}  // namespace chainfill
