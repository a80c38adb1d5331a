#include "chainfill/validator.hpp"

#include <stdexcept>

namespace chainfill {

namespace {

bool literal_contains_hash(const TemplateText& t) {
  for (const auto& span : t.spans()) {
    if (const auto* lit = std::get_if<LiteralSpan>(&span)) {
      if (lit->text.find('#') != std::string::npos) return true;
    }
  }
  return false;
}

bool has_any_mask(const TemplateText& t) { return !masks_of(t).empty(); }

}  // namespace

std::string syntactic_error_name(SyntacticErrorKind kind) {
  switch (kind) {
    case SyntacticErrorKind::MaskUnderflow: return "MaskUnderflowError";
    case SyntacticErrorKind::MaskOverflow: return "MaskOverflowError";
    case SyntacticErrorKind::DiscontinuousMask: return "DiscontinuousMaskError";
    case SyntacticErrorKind::MissingMaskNumber: return "MissingMaskNumberError";
    case SyntacticErrorKind::MissingTripleMask: return "MissingTripleMaskError";
    case SyntacticErrorKind::IncorrectTripleRelationMask:
      return "IncorrectTripleRelationMaskError";
    case SyntacticErrorKind::IncorrectTripleFormat:
      return "IncorrectTripleFormatError";
    case SyntacticErrorKind::FinalAnswerFormat: return "FinalAnswerFormatError";
  }
  throw std::logic_error("unknown error kind");
}

std::optional<SyntacticErrorKind> syntactic_error_from_name(const std::string& name) {
  static const std::pair<const char*, SyntacticErrorKind> table[] = {
      {"MaskUnderflowError", SyntacticErrorKind::MaskUnderflow},
      {"MaskOverflowError", SyntacticErrorKind::MaskOverflow},
      {"DiscontinuousMaskError", SyntacticErrorKind::DiscontinuousMask},
      {"MissingMaskNumberError", SyntacticErrorKind::MissingMaskNumber},
      {"MissingTripleMaskError", SyntacticErrorKind::MissingTripleMask},
      {"IncorrectTripleRelationMaskError",
       SyntacticErrorKind::IncorrectTripleRelationMask},
      {"IncorrectTripleFormatError", SyntacticErrorKind::IncorrectTripleFormat},
      {"FinalAnswerFormatError", SyntacticErrorKind::FinalAnswerFormat},
  };
  for (const auto& [n, k] : table) {
    if (name == n) return k;
  }
  return std::nullopt;
}

std::vector<SyntacticError> validate(const std::string& raw,
                                     const ValidationConfig& cfg,
                                     const ParseOptions& opts) {
  if (cfg.min_masks < 1 || cfg.min_masks > cfg.max_masks) {
    throw std::invalid_argument("validation config requires 1 <= min <= max");
  }

  std::vector<SyntacticError> errors;
  ParseOutcome parsed = parse_chain(raw, opts);
  if (!parsed.ok()) {
    const ParseFailure& f = *parsed.failure;
    SyntacticError e;
    e.kind = f.kind == ParseFailureKind::FinalAnswerFormat
                 ? SyntacticErrorKind::FinalAnswerFormat
                 : SyntacticErrorKind::IncorrectTripleFormat;
    e.detail = f.detail;
    e.span = {{f.begin, f.end}};
    errors.push_back(std::move(e));
    return errors;
  }

  const ReasoningChain& chain = *parsed.chain;
  std::set<int> indices = chain.numbered_indices();
  int unique = static_cast<int>(indices.size());

  if (unique < cfg.min_masks) {
    errors.push_back({SyntacticErrorKind::MaskUnderflow,
                      std::to_string(unique) + " unique masks, minimum is " +
                          std::to_string(cfg.min_masks),
                      std::nullopt, std::nullopt});
  } else if (unique > cfg.max_masks) {
    errors.push_back({SyntacticErrorKind::MaskOverflow,
                      std::to_string(unique) + " unique masks, maximum is " +
                          std::to_string(cfg.max_masks),
                      std::nullopt, std::nullopt});
  }

  // Numbered masks must form the contiguous set {1..m}.
  if (!indices.empty() && (*indices.begin() != 1 ||
                           *indices.rbegin() != unique)) {
    std::string seen;
    for (int i : indices) seen += (seen.empty() ? "#" : ", #") + std::to_string(i);
    errors.push_back({SyntacticErrorKind::DiscontinuousMask,
                      "mask indices are not sequential: " + seen, std::nullopt,
                      std::nullopt});
  }

  for (std::size_t i = 0; i < chain.triplets.size(); ++i) {
    const Triplet& t = chain.triplets[i];
    if (literal_contains_hash(t.head) || literal_contains_hash(t.relation) ||
        literal_contains_hash(t.tail)) {
      errors.push_back({SyntacticErrorKind::MissingMaskNumber,
                        "'#' without a mask number in triple " + std::to_string(i),
                        i, std::nullopt});
    }
  }

  // A triple with no mask anywhere is unfillable. When the only mask sits in
  // the relation slot the mask-placement error below covers it instead.
  for (std::size_t i = 0; i < chain.triplets.size(); ++i) {
    const Triplet& t = chain.triplets[i];
    if (!has_any_mask(t.head) && !has_any_mask(t.relation) && !has_any_mask(t.tail)) {
      errors.push_back({SyntacticErrorKind::MissingTripleMask,
                        "neither head nor tail is masked in triple " +
                            std::to_string(i),
                        i, std::nullopt});
    }
  }

  for (std::size_t i = 0; i < chain.triplets.size(); ++i) {
    if (has_any_mask(chain.triplets[i].relation)) {
      errors.push_back({SyntacticErrorKind::IncorrectTripleRelationMask,
                        "relation is masked in triple " + std::to_string(i), i,
                        std::nullopt});
    }
  }

  return errors;
}

bool is_valid(const std::string& raw, const ValidationConfig& cfg,
              const ParseOptions& opts) {
  return validate(raw, cfg, opts).empty();
}

}  // namespace chainfill
