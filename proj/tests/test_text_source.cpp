#include <doctest.h>

#include "chainfill/text_source.hpp"
#include "helpers.hpp"

using namespace chainfill;
using chainfill::testing::RC;

namespace {

// Bare templates keep scripted rule keys unambiguous in unit tests.
std::shared_ptr<PromptTemplateSet> bare_templates() {
  return std::make_shared<PromptTemplateSet>(PromptTemplateSet::from_strings({
      {PromptRole::ChainParse, "Question: {question}\nReasoning Chain:"},
      {PromptRole::TripletToQuestion, "Triplet: {triplet}\nQuestion:"},
      {PromptRole::Reader, "Context:\n{context}\nQuestion: {question}\nAnswer:"},
      {PromptRole::ParametricFill,
       "Question: {question}\nReasoning Chain: {chain}\nFilled reasoning chain:"},
      {PromptRole::StandardQa, "Question: {question}\nAnswer:"},
  }));
}

std::shared_ptr<Corpus> bridge_corpus() {
  auto corpus = std::make_shared<Corpus>();
  // hop-2 text shares no tokens with the original two-hop question
  corpus->add({"h1", "Strut-Harald",
               "Strut-Harald was a jarl. Sagas name Gorm the Old as the father "
               "of Strut-Harald."});
  corpus->add({"h2", "Gorm",
               "Gorm ruled Denmark from Jelling. Gorm died at Jelling in 958."});
  corpus->add({"h3", "Runes", "Runic stones commemorate Harald Bluetooth."});
  return corpus;
}

struct Fixture {
  std::shared_ptr<Corpus> corpus = bridge_corpus();
  std::shared_ptr<Bm25Index> index = std::make_shared<Bm25Index>(*corpus);
  std::shared_ptr<LlmGateway> llm;
  std::shared_ptr<PromptTemplateSet> templates = bare_templates();

  explicit Fixture(std::vector<ScriptedRule> rules) {
    llm = std::make_shared<LlmGateway>(
        std::make_shared<ScriptedBackend>(std::move(rules)));
  }

  TextSource source(TextSourceConfig cfg) {
    return TextSource(corpus, index, llm, templates, cfg);
  }
};

Triplet hop1_triplet() {
  return RC("Strut-Harald >> father >> #1; #1 >> place of death >> #2; "
            "final answer: #2")
      .triplets[0];
}

std::vector<ScriptedRule> bridge_rules() {
  return {
      {RuleMatchKind::Substring, "(\"Strut-Harald\", \"father\", ?)",
       {"who was Strut-Harald's father?"}},
      {RuleMatchKind::Substring, "(\"Gorm the Old\", \"place of death\", ?)",
       {"where did Gorm the Old die?"}},
      {RuleMatchKind::Pattern, "Jelling[\\s\\S]*where did Gorm the Old die\\?",
       {"Jelling"}},
      {RuleMatchKind::Substring, "Question: where did Gorm the Old die?",
       {"unknown"}},
      {RuleMatchKind::Substring, "Question: who was Strut-Harald's father?",
       {"Gorm the Old"}},
  };
}

}  // namespace

TEST_CASE("triplets become single-hop questions via the conversion prompt") {
  Fixture fx({{RuleMatchKind::Substring, "(\"basit ali\", \"place of birth\", ?)",
               {"where was basit ali born?"}},
              {RuleMatchKind::Substring, "(\"instincts\", \"performer\", ?)",
               {"who performed instincts"}}});
  auto source = fx.source({});

  auto birth = RC("basit ali >> place of birth >> #1; #1 >> r >> #2; "
                  "final answer: #2");
  CHECK(source.triplet_to_question(birth.triplets[0]) ==
        "where was basit ali born?");

  // a missing question mark is appended
  auto performer =
      RC("instincts >> performer >> #1; #1 >> r >> #2; final answer: #2");
  CHECK(source.triplet_to_question(performer.triplets[0]) ==
        "who performed instincts?");
}

TEST_CASE("multi-round retrieval answers a bridging hop") {
  Fixture fx(bridge_rules());
  auto source = fx.source({RetrievalMode::MultiRound, 2, 2, 4000});
  source.begin_stage("Where was the place of death of Strut-Harald's father?");

  auto hop1 = source.answer_triplet(hop1_triplet());
  REQUIRE(hop1.has_value());
  CHECK(hop1->value == "Gorm the Old");
  CHECK(hop1->evidence.front() == "h1");

  auto hop2_triplet = RC("Gorm the Old >> place of death >> #2; A >> r >> #1; "
                         "final answer: #2")
                          .triplets[0];
  auto hop2 = source.answer_triplet(hop2_triplet);
  REQUIRE(hop2.has_value());
  CHECK(hop2->value == "Jelling");
  // the per-hop query brings the bridge paragraph into the pool
  bool has_bridge_doc = false;
  for (const auto& id : hop2->evidence) has_bridge_doc |= (id == "h2");
  CHECK(has_bridge_doc);

  CHECK(source.retrieval_log().size() == 2);
}

TEST_CASE("single-round retrieval reuses the stage pool and misses hop-2") {
  Fixture fx(bridge_rules());
  auto source = fx.source({RetrievalMode::SingleRound, 2, 2, 4000});
  source.begin_stage("Where was the place of death of Strut-Harald's father?");

  // one retrieval from the original question only
  REQUIRE(source.retrieval_log().size() == 1);
  auto pool = source.retrieval_log()[0].ranked;
  REQUIRE(pool.size() == 2);
  CHECK(pool[0].doc_id == "h1");
  CHECK(pool[1].doc_id != "h2");  // the bridge doc shares no question tokens

  auto hop1 = source.answer_triplet(hop1_triplet());
  REQUIRE(hop1.has_value());
  CHECK(hop1->value == "Gorm the Old");

  // the pool lacks the Jelling paragraph, so the reader reports unknown
  auto hop2_triplet = RC("Gorm the Old >> place of death >> #2; A >> r >> #1; "
                         "final answer: #2")
                          .triplets[0];
  CHECK_FALSE(source.answer_triplet(hop2_triplet).has_value());
  CHECK(source.retrieval_log().size() == 1);  // still just the stage pool
}

TEST_CASE("unknown and empty reads never produce answers") {
  Fixture fx({{RuleMatchKind::Substring, "(\"a\", \"r\", ?)", {"a question"}},
              {RuleMatchKind::Substring, "Question: a question?", {"unknown"}},
              {RuleMatchKind::Substring, "(\"b\", \"r\", ?)", {"b question"}},
              {RuleMatchKind::Substring, "Question: b question?", {"   "}}});
  auto source = fx.source({RetrievalMode::MultiRound, 2, 0, 4000});
  source.begin_stage("q");

  auto a = RC("a >> r >> #1; #1 >> s >> #2; final answer: #2").triplets[0];
  CHECK_FALSE(source.answer_triplet(a).has_value());
  auto b = RC("b >> r >> #1; #1 >> s >> #2; final answer: #2").triplets[0];
  CHECK_FALSE(source.answer_triplet(b).has_value());
}

TEST_CASE("reader context is title-prefixed, rank-ordered and budgeted") {
  Fixture fx(bridge_rules());
  auto source = fx.source({RetrievalMode::MultiRound, 3, 2, 4000});
  source.begin_stage("q");

  auto read = source.read("where did Gorm the Old die?",
                          {{"h2", 2.0}, {"h3", 1.0}});
  CHECK(read.answer == "Jelling");
  CHECK(read.doc_ids_used == std::vector<std::string>{"h2", "h3"});

  // a tiny budget keeps only the leading ranks
  auto tight = fx.source({RetrievalMode::MultiRound, 3, 2, 80});
  tight.begin_stage("q");
  auto truncated = tight.read("where did Gorm the Old die?",
                              {{"h2", 2.0}, {"h3", 1.0}});
  CHECK(truncated.answer == "Jelling");  // h2 fits, h3 does not
}

TEST_CASE("persistent generation failures become stage unavailability") {
  Fixture fx({{RuleMatchKind::Substring, "Triplet:", {""}}});
  auto source = fx.source({RetrievalMode::MultiRound, 2, 1, 4000});
  source.begin_stage("q");
  auto t = RC("a >> r >> #1; #1 >> s >> #2; final answer: #2").triplets[0];
  CHECK_THROWS_AS(source.answer_triplet(t), SourceUnavailableError);
}

TEST_CASE("an empty corpus surfaces as unavailability") {
  auto corpus = std::make_shared<Corpus>();
  auto index = std::make_shared<Bm25Index>(*corpus);
  auto llm = std::make_shared<LlmGateway>(std::make_shared<ScriptedBackend>(
      std::vector<ScriptedRule>{{RuleMatchKind::Substring, "Triplet:", {"q?"}}}));
  TextSource source(corpus, index, llm, bare_templates(), {});
  source.begin_stage("q");
  auto t = RC("a >> r >> #1; #1 >> s >> #2; final answer: #2").triplets[0];
  CHECK_THROWS_AS(source.answer_triplet(t), SourceUnavailableError);

  TextSource single(corpus, index, llm, bare_templates(),
                    {RetrievalMode::SingleRound, 2, 2, 4000});
  CHECK_THROWS_AS(single.begin_stage("q"), SourceUnavailableError);
}
