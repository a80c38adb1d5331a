#pragma once
// Textual chain DSL <-> ReasoningChain.
//
// Canonical surface form, one chain per line:
//
//   head >> relation >> tail; head >> relation >> tail; final answer: #2
//
// Masks are written #1, #2, ... and #answer. Parsing is total: any input
// yields either a chain or a classified failure with a character span.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chainfill/chain.hpp"

namespace chainfill {

enum class ParseFailureKind {
  IncorrectTripleFormat,
  FinalAnswerFormat,
};

struct ParseFailure {
  ParseFailureKind kind = ParseFailureKind::IncorrectTripleFormat;
  std::string detail;
  std::size_t begin = 0;  // character span into the raw input
  std::size_t end = 0;
};

struct ParseOutcome {
  std::optional<ReasoningChain> chain;
  std::optional<ParseFailure> failure;
  bool ok() const { return chain.has_value(); }
};

struct ParseOptions {
  // Also accept the parenthesized tuple form "(h, r, t)" per segment,
  // splitting on the last two top-level commas.
  bool lenient_tuples = false;
};

ParseOutcome parse_chain(const std::string& text, const ParseOptions& opts = {});

// Canonical text; parse_chain(render_chain(c)) reproduces c exactly.
std::string render_chain(const ReasoningChain& chain);

std::string render_triplet(const Triplet& t);

// A chain whose final segment carries literal answer text instead of a mask
// directive, as produced by fill-style completions
// ("... >> Jelling; final answer: Jelling").
struct FilledChain {
  std::vector<Triplet> triplets;
  std::string final_text;
};

// Parses a completion in the filled form. Returns nullopt when any segment
// is out of format; triplets may still contain masks.
std::optional<FilledChain> parse_filled_chain(const std::string& text);

struct ExtractedFinal {
  std::string answer;                // may be empty when the marker has no tail
  std::optional<FilledChain> filled; // set when the whole completion parses
};

// Text after the last "final answer:" marker, up to end of line/segment,
// trimmed with any trailing period removed. Returns nullopt when the marker
// is absent (NoFinalAnswerMarker).
std::optional<ExtractedFinal> extract_final_answer(const std::string& completion);

}  // namespace chainfill
