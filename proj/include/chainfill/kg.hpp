#pragma once
// Local triple store with entity/relation linking. Grounds a valid triplet
// by linking its head mention and relation phrase, then answers the tail
// with a forward (head, relation, ?) lookup.
//
// Linking modes: Exact is case-insensitive full-string matching against
// labels and aliases (the oracle-KG setup); Fuzzy scores candidates with a
// pluggable text similarity, character-trigram cosine by default.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chainfill/chain.hpp"
#include "chainfill/similarity.hpp"
#include "chainfill/source.hpp"

namespace chainfill {

class KgError : public std::runtime_error {
 public:
  explicit KgError(const std::string& what) : std::runtime_error(what) {}
};

enum class LinkingMode { Exact, Fuzzy };

struct EntityRecord {
  std::string id;
  std::string label;
  std::vector<std::string> aliases;
};

struct StoredTriple {
  std::string head_id;
  std::string relation_id;
  std::string tail_id;
};

struct EntityLink {
  std::string entity_id;
  double score = 0.0;
};

struct RelationLink {
  std::string relation_id;
  double score = 0.0;
};

struct GroundedTriplet {
  Triplet source;
  std::string head_entity_id;
  std::string relation_id;
  double entity_score = 0.0;
  double relation_score = 0.0;
};

// Immutable after load; lookup order always follows file order.
class TripleStore {
 public:
  // JSONL rows: {head_id, head_label, head_aliases?, relation_id,
  // relation_label, tail_id, tail_label}. Duplicate entity rows must agree
  // on labels.
  static TripleStore load_jsonl(const std::string& path);

  const std::vector<StoredTriple>& triples() const { return triples_; }
  const std::vector<EntityRecord>& entities() const { return entities_; }
  const std::vector<std::pair<std::string, std::string>>& relations() const {
    return relations_;  // (id, label) in first-seen order
  }

  const EntityRecord* entity(const std::string& id) const;
  std::optional<std::string> relation_label(const std::string& id) const;

  // Tail labels of all (head, relation, ?) triples in file order, paired
  // with the triple row indices as evidence.
  struct TailMatches {
    std::vector<std::string> tail_labels;
    std::vector<std::string> triple_ids;
  };
  TailMatches tails_of(const std::string& head_id,
                       const std::string& relation_id) const;

  void add_entity(EntityRecord record);                     // test convenience
  void add_relation(std::string id, std::string label);     // test convenience
  void add_triple(StoredTriple triple);

 private:
  std::vector<EntityRecord> entities_;
  std::map<std::string, std::size_t> entity_index_;
  std::vector<std::pair<std::string, std::string>> relations_;
  std::map<std::string, std::size_t> relation_index_;
  std::vector<StoredTriple> triples_;
};

struct KgConfig {
  LinkingMode mode = LinkingMode::Exact;
  double theta_entity = 0.85;
  double theta_relation = 0.6;
};

class KgSource : public KnowledgeSource {
 public:
  KgSource(std::shared_ptr<const TripleStore> store, KgConfig cfg,
           std::shared_ptr<const TextSimilarity> similarity =
               std::make_shared<TrigramCosine>());

  SourceKind kind() const override { return SourceKind::KG; }
  std::optional<SourceAnswer> answer_triplet(const Triplet& t) override;

  // Exact: case-insensitive full-string match on label or alias, score 1.
  // Fuzzy: best candidate by similarity over labels+aliases, accepted when
  // score >= theta_entity. Ties break to the earliest-loaded entity.
  std::optional<EntityLink> link_entity(const std::string& mention) const;

  // Best relation label by similarity, accepted when score >= theta_relation.
  std::optional<RelationLink> link_relation(const std::string& phrase) const;

  std::optional<GroundedTriplet> ground(const Triplet& t) const;

 private:
  std::shared_ptr<const TripleStore> store_;
  KgConfig cfg_;
  std::shared_ptr<const TextSimilarity> similarity_;
};

}  // namespace chainfill
