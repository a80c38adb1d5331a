#include "chainfill/chain.hpp"

#include <algorithm>
#include <cctype>

namespace chainfill {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

TemplateText TemplateText::from_spans(std::vector<Span> spans) {
  TemplateText out;
  for (auto& span : spans) {
    if (auto* lit = std::get_if<LiteralSpan>(&span)) {
      if (lit->text.empty()) continue;
      if (!out.spans_.empty()) {
        if (auto* prev = std::get_if<LiteralSpan>(&out.spans_.back())) {
          prev->text += lit->text;
          continue;
        }
      }
    }
    out.spans_.push_back(std::move(span));
  }
  return out;
}

TemplateText TemplateText::literal(std::string text) {
  return from_spans({LiteralSpan{std::move(text)}});
}

TemplateText TemplateText::mask(MaskRef m) { return from_spans({m}); }

std::string TemplateText::render() const {
  std::string out;
  for (const auto& span : spans_) {
    if (const auto* lit = std::get_if<LiteralSpan>(&span)) {
      out += lit->text;
    } else {
      out += std::get<MaskRef>(span).text();
    }
  }
  return out;
}

bool TemplateText::is_single_mask() const {
  return spans_.size() == 1 && std::holds_alternative<MaskRef>(spans_[0]);
}

std::optional<MaskRef> TemplateText::single_mask() const {
  if (!is_single_mask()) return std::nullopt;
  return std::get<MaskRef>(spans_[0]);
}

TemplateText TemplateText::substituted(MaskRef m, const std::string& value) const {
  std::vector<Span> next;
  next.reserve(spans_.size());
  for (const auto& span : spans_) {
    if (const auto* mask = std::get_if<MaskRef>(&span); mask && *mask == m) {
      next.push_back(LiteralSpan{value});
    } else {
      next.push_back(span);
    }
  }
  return from_spans(std::move(next));
}

std::set<MaskRef> masks_of(const TemplateText& t) {
  std::set<MaskRef> out;
  for (const auto& span : t.spans()) {
    if (const auto* mask = std::get_if<MaskRef>(&span)) out.insert(*mask);
  }
  return out;
}

std::set<MaskRef> ReasoningChain::masks() const {
  std::set<MaskRef> out;
  for (const auto& t : triplets) {
    for (const auto* part : {&t.head, &t.relation, &t.tail}) {
      auto part_masks = masks_of(*part);
      out.insert(part_masks.begin(), part_masks.end());
    }
  }
  return out;
}

std::set<int> ReasoningChain::numbered_indices() const {
  std::set<int> out;
  for (const auto& m : masks()) {
    if (m.is_numbered()) out.insert(m.index());
  }
  return out;
}

ReasoningChain substitute(const ReasoningChain& chain, MaskRef m,
                          const std::string& value) {
  if (!m.is_numbered()) {
    throw InvalidSubstitutionError("only numbered masks can be substituted");
  }
  const std::string trimmed = trim(value);
  if (trimmed.empty()) {
    throw InvalidSubstitutionError("substitution value is empty");
  }
  if (trimmed == m.text()) {
    throw InvalidSubstitutionError("substitution value equals the mask itself: " +
                                   m.text());
  }
  if (!chain.masks().count(m)) {
    throw MaskNotPresentError("mask " + m.text() + " occurs nowhere in the chain");
  }
  ReasoningChain out;
  out.final = chain.final;
  out.triplets.reserve(chain.triplets.size());
  for (const auto& t : chain.triplets) {
    out.triplets.push_back(Triplet{t.head.substituted(m, trimmed),
                                   t.relation.substituted(m, trimmed),
                                   t.tail.substituted(m, trimmed)});
  }
  return out;
}

std::vector<Triplet> extract_valid_triplets(const ReasoningChain& chain) {
  std::vector<Triplet> out;
  for (const auto& t : chain.triplets) {
    if (!masks_of(t.head).empty()) continue;
    if (!masks_of(t.relation).empty()) continue;
    if (!t.tail.is_single_mask()) continue;
    out.push_back(t);
  }
  return out;
}

std::set<MaskRef> masks_first_seen_in_head(const ReasoningChain& chain) {
  std::set<MaskRef> seen_as_tail;
  std::set<MaskRef> offenders;
  for (const auto& t : chain.triplets) {
    for (const auto* part : {&t.head, &t.relation}) {
      for (const auto& m : masks_of(*part)) {
        if (m.is_numbered() && !seen_as_tail.count(m)) offenders.insert(m);
      }
    }
    for (const auto& m : masks_of(t.tail)) seen_as_tail.insert(m);
  }
  return offenders;
}

std::string source_kind_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::KG: return "kg";
    case SourceKind::Text: return "text";
    case SourceKind::Model: return "model";
  }
  return "unknown";
}

std::optional<SourceKind> source_kind_from_name(const std::string& name) {
  if (name == "kg") return SourceKind::KG;
  if (name == "text") return SourceKind::Text;
  if (name == "model") return SourceKind::Model;
  return std::nullopt;
}

const Binding::Entry& Binding::at(MaskRef m) const {
  auto it = entries_.find(m);
  if (it == entries_.end()) {
    throw ChainError("no binding for " + m.text());
  }
  return it->second;
}

std::optional<std::string> Binding::value_of(MaskRef m) const {
  auto it = entries_.find(m);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

void Binding::bind(MaskRef m, Entry entry) {
  if (entries_.count(m)) {
    throw RebindingError("mask " + m.text() + " is already bound");
  }
  entries_.emplace(m, std::move(entry));
}

}  // namespace chainfill
