#pragma once
// Syntactic-error taxonomy over raw chain samples. The kind set is closed;
// names serialize verbatim into traces.

#include <optional>
#include <string>
#include <vector>

#include "chainfill/chain.hpp"
#include "chainfill/parser.hpp"

namespace chainfill {

enum class SyntacticErrorKind {
  MaskUnderflow,
  MaskOverflow,
  DiscontinuousMask,
  MissingMaskNumber,
  MissingTripleMask,
  IncorrectTripleRelationMask,
  IncorrectTripleFormat,
  FinalAnswerFormat,
};

// The Appendix-style name, e.g. "MaskUnderflowError".
std::string syntactic_error_name(SyntacticErrorKind kind);
std::optional<SyntacticErrorKind> syntactic_error_from_name(const std::string& name);

struct SyntacticError {
  SyntacticErrorKind kind;
  std::string detail;
  // Location: a triplet index for chain-level checks, or a character span
  // for parse-level failures.
  std::optional<std::size_t> triplet_index;
  std::optional<std::pair<std::size_t, std::size_t>> span;
};

struct ValidationConfig {
  int min_masks = 2;
  int max_masks = 4;
};

// Runs parse_chain and the full chain-level rule set. Parse failures yield
// their single format error; on a parsed chain all applicable errors are
// collected, deterministically ordered.
std::vector<SyntacticError> validate(const std::string& raw,
                                     const ValidationConfig& cfg,
                                     const ParseOptions& opts = {});

bool is_valid(const std::string& raw, const ValidationConfig& cfg,
              const ParseOptions& opts = {});

}  // namespace chainfill
