#include "chainfill/parser.hpp"

#include <algorithm>
#include <cctype>

namespace chainfill {

namespace {

constexpr std::size_t kMaxMaskDigits = 6;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool starts_with_ci(const std::string& s, std::size_t pos, const std::string& word) {
  if (pos + word.size() > s.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != word[i]) return false;
  }
  return true;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Scans a part for masks. A '#' followed by digits becomes a numbered mask;
// '#answer' (word-bounded, any case) becomes the answer mask; any other '#'
// stays literal and is later flagged by the validator.
TemplateText scan_template(const std::string& part) {
  std::vector<Span> spans;
  std::string literal;
  std::size_t i = 0;
  while (i < part.size()) {
    if (part[i] != '#') {
      literal += part[i++];
      continue;
    }
    std::size_t j = i + 1;
    while (j < part.size() && std::isdigit(static_cast<unsigned char>(part[j])) &&
           j - i - 1 < kMaxMaskDigits) {
      ++j;
    }
    if (j > i + 1 && (j >= part.size() ||
                      !std::isdigit(static_cast<unsigned char>(part[j])))) {
      int index = std::stoi(part.substr(i + 1, j - i - 1));
      if (index >= 1) {
        if (!literal.empty()) spans.push_back(LiteralSpan{literal});
        literal.clear();
        spans.push_back(MaskRef::numbered(index));
        i = j;
        continue;
      }
    } else if (starts_with_ci(part, i + 1, "answer") &&
               (i + 7 >= part.size() || !is_word_char(part[i + 7]))) {
      if (!literal.empty()) spans.push_back(LiteralSpan{literal});
      literal.clear();
      spans.push_back(MaskRef::answer());
      i += 7;
      continue;
    }
    literal += part[i++];  // bare '#', '#0', overlong digit runs
  }
  if (!literal.empty()) spans.push_back(LiteralSpan{literal});
  return TemplateText::from_spans(std::move(spans));
}

struct Segment {
  std::string text;  // trimmed
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Segment> split_segments(const std::string& text) {
  std::vector<Segment> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';') {
      std::string seg = text.substr(start, i - start);
      std::string trimmed = trim(seg);
      if (!trimmed.empty()) {
        std::size_t lead = seg.find_first_not_of(" \t\r\n\f\v");
        out.push_back(Segment{trimmed, start + lead, start + lead + trimmed.size()});
      }
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> split_on_arrows(const std::string& seg) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = seg.find(">>", start);
    if (pos == std::string::npos) break;
    parts.push_back(trim(seg.substr(start, pos - start)));
    start = pos + 2;
  }
  parts.push_back(trim(seg.substr(start)));
  return parts;
}

// Splits "(h, r, t)" on the last two commas outside nested parentheses.
std::optional<std::vector<std::string>> split_tuple(const std::string& seg) {
  if (seg.size() < 2 || seg.front() != '(' || seg.back() != ')') return std::nullopt;
  std::string inner = seg.substr(1, seg.size() - 2);
  std::vector<std::size_t> commas;
  int depth = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] == '(') ++depth;
    else if (inner[i] == ')') depth = std::max(0, depth - 1);
    else if (inner[i] == ',' && depth == 0) commas.push_back(i);
  }
  if (commas.size() < 2) return std::nullopt;
  std::size_t c1 = commas[commas.size() - 2];
  std::size_t c2 = commas[commas.size() - 1];
  return std::vector<std::string>{trim(inner.substr(0, c1)),
                                  trim(inner.substr(c1 + 1, c2 - c1 - 1)),
                                  trim(inner.substr(c2 + 1))};
}

const std::string kFinalMarker = "final answer:";

// Parses "final answer: #answer" / "final answer: #<n>", tolerating case
// and one trailing period. Returns nullopt when out of format.
std::optional<MaskRef> parse_directive(const std::string& seg) {
  if (!starts_with_ci(seg, 0, kFinalMarker)) return std::nullopt;
  std::string rest = trim(seg.substr(kFinalMarker.size()));
  if (!rest.empty() && rest.back() == '.') rest = trim(rest.substr(0, rest.size() - 1));
  if (rest.empty() || rest[0] != '#') return std::nullopt;
  std::string token = lower(rest.substr(1));
  if (token == "answer") return MaskRef::answer();
  if (token.empty() || token.size() > kMaxMaskDigits) return std::nullopt;
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  int index = std::stoi(token);
  if (index < 1) return std::nullopt;
  return MaskRef::numbered(index);
}

bool looks_like_final(const std::string& seg) {
  return starts_with_ci(seg, 0, "final answer");
}

ParseOutcome fail(ParseFailureKind kind, std::string detail, const Segment& seg) {
  ParseOutcome out;
  out.failure = ParseFailure{kind, std::move(detail), seg.begin, seg.end};
  return out;
}

std::optional<Triplet> parse_triplet_segment(const std::string& seg,
                                             const ParseOptions& opts,
                                             std::string* error) {
  std::vector<std::string> parts = split_on_arrows(seg);
  if (parts.size() == 1 && opts.lenient_tuples) {
    if (auto tuple = split_tuple(seg)) parts = *tuple;
  }
  if (parts.size() != 3) {
    *error = "segment has " + std::to_string(parts.size()) +
             " parts, expected head >> relation >> tail";
    return std::nullopt;
  }
  for (const auto& p : parts) {
    if (p.empty()) {
      *error = "empty part in triple";
      return std::nullopt;
    }
  }
  return Triplet{scan_template(parts[0]), scan_template(parts[1]),
                 scan_template(parts[2])};
}

}  // namespace

ParseOutcome parse_chain(const std::string& text, const ParseOptions& opts) {
  std::vector<Segment> segments = split_segments(text);
  if (segments.empty()) {
    ParseOutcome out;
    out.failure = ParseFailure{ParseFailureKind::IncorrectTripleFormat,
                               "empty input", 0, text.size()};
    return out;
  }

  ReasoningChain chain;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    std::string error;
    auto triplet = parse_triplet_segment(segments[i].text, opts, &error);
    if (!triplet) {
      return fail(ParseFailureKind::IncorrectTripleFormat, error, segments[i]);
    }
    chain.triplets.push_back(std::move(*triplet));
  }

  const Segment& last = segments.back();
  auto directive = parse_directive(last.text);
  if (!directive) {
    return fail(ParseFailureKind::FinalAnswerFormat,
                looks_like_final(last.text)
                    ? "final directive must be #answer or #<n>"
                    : "chain does not conclude with 'final answer: ...'",
                last);
  }
  if (chain.triplets.empty()) {
    return fail(ParseFailureKind::IncorrectTripleFormat, "chain has no triplets",
                last);
  }
  chain.final = FinalDirective{*directive};
  if (directive->is_numbered() && !chain.masks().count(*directive)) {
    return fail(ParseFailureKind::FinalAnswerFormat,
                "final directive " + directive->text() +
                    " does not occur in the chain",
                last);
  }

  ParseOutcome out;
  out.chain = std::move(chain);
  return out;
}

std::string render_triplet(const Triplet& t) {
  return t.head.render() + " >> " + t.relation.render() + " >> " + t.tail.render();
}

std::string render_chain(const ReasoningChain& chain) {
  std::string out;
  for (const auto& t : chain.triplets) {
    out += render_triplet(t);
    out += "; ";
  }
  out += "final answer: " + chain.final.target.text();
  return out;
}

std::optional<FilledChain> parse_filled_chain(const std::string& text) {
  std::vector<Segment> segments = split_segments(text);
  if (segments.size() < 2) return std::nullopt;

  FilledChain out;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    std::string error;
    auto triplet = parse_triplet_segment(segments[i].text, ParseOptions{}, &error);
    if (!triplet) return std::nullopt;
    out.triplets.push_back(std::move(*triplet));
  }
  const std::string& last = segments.back().text;
  if (!starts_with_ci(last, 0, kFinalMarker)) return std::nullopt;
  std::string answer = trim(last.substr(kFinalMarker.size()));
  if (!answer.empty() && answer.back() == '.') {
    answer = trim(answer.substr(0, answer.size() - 1));
  }
  if (answer.empty()) return std::nullopt;
  out.final_text = answer;
  return out;
}

std::optional<ExtractedFinal> extract_final_answer(const std::string& completion) {
  const std::string folded = lower(completion);
  std::size_t pos = folded.rfind(kFinalMarker);
  if (pos == std::string::npos) return std::nullopt;

  std::size_t start = pos + kFinalMarker.size();
  std::size_t stop = completion.size();
  for (std::size_t i = start; i < completion.size(); ++i) {
    if (completion[i] == '\n' || completion[i] == ';') {
      stop = i;
      break;
    }
  }
  std::string answer = trim(completion.substr(start, stop - start));
  if (!answer.empty() && answer.back() == '.') {
    answer = trim(answer.substr(0, answer.size() - 1));
  }

  ExtractedFinal out;
  out.answer = answer;
  out.filled = parse_filled_chain(trim(completion));
  return out;
}

}  // namespace chainfill
