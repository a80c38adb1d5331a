#pragma once
// Reasoning-chain data model: masked template text, triplets, the chain
// itself, and the binding map that accumulates resolved mask values.
//
// All values here are immutable after construction; operations return new
// values, so chains and bindings can be shared freely across threads.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chainfill {

class ChainError : public std::runtime_error {
 public:
  explicit ChainError(const std::string& what) : std::runtime_error(what) {}
};

class MaskNotPresentError : public ChainError {
 public:
  explicit MaskNotPresentError(const std::string& what) : ChainError(what) {}
};

class InvalidSubstitutionError : public ChainError {
 public:
  explicit InvalidSubstitutionError(const std::string& what) : ChainError(what) {}
};

class RebindingError : public ChainError {
 public:
  explicit RebindingError(const std::string& what) : ChainError(what) {}
};

// A mask placeholder: either a numbered mask (#1, #2, ...) or #answer.
class MaskRef {
 public:
  static MaskRef numbered(int index) {
    if (index < 1) throw ChainError("numbered mask index must be >= 1");
    return MaskRef(index);
  }
  static MaskRef answer() { return MaskRef(0); }

  bool is_answer() const { return index_ == 0; }
  bool is_numbered() const { return index_ >= 1; }
  int index() const {
    if (!is_numbered()) throw ChainError("#answer has no index");
    return index_;
  }

  // Textual form: "#3" or "#answer".
  std::string text() const {
    return is_answer() ? "#answer" : "#" + std::to_string(index_);
  }

  auto operator<=>(const MaskRef&) const = default;

 private:
  explicit MaskRef(int index) : index_(index) {}
  int index_;  // 0 encodes #answer
};

struct LiteralSpan {
  std::string text;
  bool operator==(const LiteralSpan&) const = default;
};

using Span = std::variant<LiteralSpan, MaskRef>;

// A sequence of literal and mask spans, e.g. "flag of the #1".
// Adjacent literals are always merged and empty literals dropped.
class TemplateText {
 public:
  TemplateText() = default;
  static TemplateText from_spans(std::vector<Span> spans);
  static TemplateText literal(std::string text);
  static TemplateText mask(MaskRef m);

  const std::vector<Span>& spans() const { return spans_; }
  bool empty() const { return spans_.empty(); }

  std::string render() const;

  // True when the text is a single mask span and nothing else.
  bool is_single_mask() const;
  std::optional<MaskRef> single_mask() const;

  // Replaces every occurrence of `m` with a literal, re-merging neighbours.
  TemplateText substituted(MaskRef m, const std::string& value) const;

  bool operator==(const TemplateText&) const = default;

 private:
  std::vector<Span> spans_;
};

// Exactly the MaskRefs present in the spans, deduplicated.
std::set<MaskRef> masks_of(const TemplateText& t);

struct Triplet {
  TemplateText head;
  TemplateText relation;
  TemplateText tail;
  bool operator==(const Triplet&) const = default;
};

struct FinalDirective {
  MaskRef target = MaskRef::answer();
  bool operator==(const FinalDirective&) const = default;
};

struct ReasoningChain {
  std::vector<Triplet> triplets;  // non-empty
  FinalDirective final;
  bool operator==(const ReasoningChain&) const = default;

  // Deduplicated masks across all triplets (final directive excluded).
  std::set<MaskRef> masks() const;
  std::set<int> numbered_indices() const;
};

// Replaces every Mask(m) span in every triplet with Literal(value).
// The final directive is never rewritten textually; it is resolved at
// answer time through the binding.
//
// Throws MaskNotPresentError when m occurs in no triplet, and
// InvalidSubstitutionError when the value is empty after trimming, equals
// the mask's own text, or m is not a numbered mask.
ReasoningChain substitute(const ReasoningChain& chain, MaskRef m,
                          const std::string& value);

// Triplets whose head and relation contain no masks and whose tail is
// exactly one mask span, in chain order. These are the queryable units.
std::vector<Triplet> extract_valid_triplets(const ReasoningChain& chain);

// Numbered masks whose first occurrence in chain order is inside a head
// (or relation) rather than as a tail. Such masks can never be introduced
// by filling; they are reported in traces but the chain is not rejected.
std::set<MaskRef> masks_first_seen_in_head(const ReasoningChain& chain);

enum class SourceKind { KG, Text, Model };

std::string source_kind_name(SourceKind kind);
std::optional<SourceKind> source_kind_from_name(const std::string& name);

// The growing map from mask to resolved value with provenance.
class Binding {
 public:
  struct Entry {
    std::string value;
    SourceKind source = SourceKind::Model;
    std::vector<std::string> evidence;  // triple ids, doc ids, ...
    std::optional<double> confidence;   // unit interval when present
  };

  bool contains(MaskRef m) const { return entries_.count(m) > 0; }
  const Entry& at(MaskRef m) const;
  std::optional<std::string> value_of(MaskRef m) const;

  // A mask is bound at most once; rebinding throws RebindingError.
  void bind(MaskRef m, Entry entry);

  const std::map<MaskRef, Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<MaskRef, Entry> entries_;
};

// Trims ASCII whitespace from both ends.
std::string trim(const std::string& s);

}  // namespace chainfill
