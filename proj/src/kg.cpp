#include "chainfill/kg.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

namespace chainfill {

namespace {

std::string fold(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

TripleStore TripleStore::load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw KgError("cannot open KG dump: " + path);

  TripleStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw KgError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }

    EntityRecord head;
    head.id = row.at("head_id").get<std::string>();
    head.label = row.at("head_label").get<std::string>();
    if (row.contains("head_aliases")) {
      for (const auto& a : row.at("head_aliases")) {
        head.aliases.push_back(a.get<std::string>());
      }
    }
    store.add_entity(std::move(head));

    EntityRecord tail;
    tail.id = row.at("tail_id").get<std::string>();
    tail.label = row.at("tail_label").get<std::string>();
    store.add_entity(std::move(tail));

    store.add_relation(row.at("relation_id").get<std::string>(),
                       row.at("relation_label").get<std::string>());
    store.add_triple(StoredTriple{row.at("head_id").get<std::string>(),
                                  row.at("relation_id").get<std::string>(),
                                  row.at("tail_id").get<std::string>()});
  }
  return store;
}

void TripleStore::add_entity(EntityRecord record) {
  auto it = entity_index_.find(record.id);
  if (it == entity_index_.end()) {
    entity_index_[record.id] = entities_.size();
    entities_.push_back(std::move(record));
    return;
  }
  EntityRecord& existing = entities_[it->second];
  if (existing.label != record.label) {
    throw KgError("entity " + record.id + " has conflicting labels: '" +
                  existing.label + "' vs '" + record.label + "'");
  }
  for (auto& alias : record.aliases) {
    if (std::find(existing.aliases.begin(), existing.aliases.end(), alias) ==
        existing.aliases.end()) {
      existing.aliases.push_back(std::move(alias));
    }
  }
}

void TripleStore::add_relation(std::string id, std::string label) {
  auto it = relation_index_.find(id);
  if (it == relation_index_.end()) {
    relation_index_[id] = relations_.size();
    relations_.emplace_back(std::move(id), std::move(label));
    return;
  }
  if (relations_[it->second].second != label) {
    throw KgError("relation " + id + " has conflicting labels: '" +
                  relations_[it->second].second + "' vs '" + label + "'");
  }
}

void TripleStore::add_triple(StoredTriple triple) {
  if (!entity_index_.count(triple.head_id) || !entity_index_.count(triple.tail_id) ||
      !relation_index_.count(triple.relation_id)) {
    throw KgError("triple references unknown id: " + triple.head_id + " " +
                  triple.relation_id + " " + triple.tail_id);
  }
  triples_.push_back(std::move(triple));
}

const EntityRecord* TripleStore::entity(const std::string& id) const {
  auto it = entity_index_.find(id);
  return it == entity_index_.end() ? nullptr : &entities_[it->second];
}

std::optional<std::string> TripleStore::relation_label(const std::string& id) const {
  auto it = relation_index_.find(id);
  if (it == relation_index_.end()) return std::nullopt;
  return relations_[it->second].second;
}

TripleStore::TailMatches TripleStore::tails_of(const std::string& head_id,
                                               const std::string& relation_id) const {
  TailMatches out;
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    const StoredTriple& t = triples_[i];
    if (t.head_id != head_id || t.relation_id != relation_id) continue;
    out.tail_labels.push_back(entity(t.tail_id)->label);
    out.triple_ids.push_back("t" + std::to_string(i));
  }
  return out;
}

KgSource::KgSource(std::shared_ptr<const TripleStore> store, KgConfig cfg,
                   std::shared_ptr<const TextSimilarity> similarity)
    : store_(std::move(store)), cfg_(cfg), similarity_(std::move(similarity)) {}

std::optional<EntityLink> KgSource::link_entity(const std::string& mention) const {
  if (trim(mention).empty()) return std::nullopt;

  if (cfg_.mode == LinkingMode::Exact) {
    const std::string folded = fold(mention);
    for (const auto& e : store_->entities()) {
      if (fold(e.label) == folded) return EntityLink{e.id, 1.0};
      for (const auto& alias : e.aliases) {
        if (fold(alias) == folded) return EntityLink{e.id, 1.0};
      }
    }
    return std::nullopt;
  }

  std::optional<EntityLink> best;
  for (const auto& e : store_->entities()) {
    double score = similarity_->score(mention, e.label);
    for (const auto& alias : e.aliases) {
      score = std::max(score, similarity_->score(mention, alias));
    }
    if (!best || score > best->score) best = EntityLink{e.id, score};
  }
  if (!best || best->score < cfg_.theta_entity) return std::nullopt;
  return best;
}

std::optional<RelationLink> KgSource::link_relation(const std::string& phrase) const {
  if (trim(phrase).empty()) return std::nullopt;
  std::optional<RelationLink> best;
  for (const auto& [id, label] : store_->relations()) {
    double score = similarity_->score(phrase, label);
    if (!best || score > best->score) best = RelationLink{id, score};
  }
  if (!best || best->score < cfg_.theta_relation) return std::nullopt;
  return best;
}

std::optional<GroundedTriplet> KgSource::ground(const Triplet& t) const {
  auto entity = link_entity(t.head.render());
  if (!entity) return std::nullopt;
  auto relation = link_relation(t.relation.render());
  if (!relation) return std::nullopt;
  return GroundedTriplet{t, entity->entity_id, relation->relation_id,
                         entity->score, relation->score};
}

std::optional<SourceAnswer> KgSource::answer_triplet(const Triplet& t) {
  auto grounded = ground(t);
  if (!grounded) return std::nullopt;

  auto matches = store_->tails_of(grounded->head_entity_id, grounded->relation_id);
  if (matches.tail_labels.empty()) return std::nullopt;

  SourceAnswer answer;
  answer.value = matches.tail_labels.front();
  answer.candidates = matches.tail_labels;
  answer.evidence = matches.triple_ids;
  answer.confidence = std::min(grounded->entity_score, grounded->relation_score);
  return answer;
}

}  // namespace chainfill
