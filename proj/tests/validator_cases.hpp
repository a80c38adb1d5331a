#pragma once
// Crafted validator inputs shared by the unit suite and the acceptance
// suite: for every error class at least two inputs with their exact
// expected error lists, plus twenty valid chains (the published two-hop
// exemplars transcribed verbatim among them).

#include <string>
#include <vector>

#include "chainfill/validator.hpp"

namespace chainfill::testing {

struct ErrorCase {
  std::string raw;
  std::vector<SyntacticErrorKind> expected;
};

inline const std::vector<ErrorCase>& error_cases() {
  using K = SyntacticErrorKind;
  static const std::vector<ErrorCase> cases = {
      // mask count below the minimum
      {"A >> r >> #1; final answer: #1", {K::MaskUnderflow}},
      {"Paris >> capital of >> #1; final answer: #answer", {K::MaskUnderflow}},
      // mask count above the maximum
      {"A >> r >> #1; #1 >> s >> #2; #2 >> t >> #3; #3 >> u >> #4; "
       "#4 >> v >> #5; final answer: #5",
       {K::MaskOverflow}},
      {"A >> r >> #1; #1 >> s >> #2; #2 >> t >> #3; #3 >> u >> #4; "
       "#4 >> v >> #5; #5 >> w >> #6; final answer: #6",
       {K::MaskOverflow}},
      // non-sequential mask numbering
      {"A >> r >> #1; #1 >> s >> #3; final answer: #3", {K::DiscontinuousMask}},
      {"A >> r >> #2; #2 >> s >> #3; final answer: #3", {K::DiscontinuousMask}},
      // '#' without a number
      {"A >> r >> #1; B # >> s >> #2; final answer: #2", {K::MissingMaskNumber}},
      {"A >> r >> #1; #1 >> s >> #2 #; final answer: #2", {K::MissingMaskNumber}},
      // a triple with no mask at all
      {"A >> r >> B; C >> s >> #1; #1 >> t >> #2; final answer: #2",
       {K::MissingTripleMask}},
      {"A >> r >> B; C >> s >> D; E >> t >> #1; #1 >> u >> #2; "
       "final answer: #2",
       {K::MissingTripleMask, K::MissingTripleMask}},
      // masked relation slots
      {"A >> #1 >> B; A2 >> r >> #1; #1 >> s >> #2; final answer: #2",
       {K::IncorrectTripleRelationMask}},
      {"A >> #1 of >> #2; A2 >> r >> #1; final answer: #2",
       {K::IncorrectTripleRelationMask}},
      // triples out of the head >> relation >> tail shape
      {"A >> r1 >> B >> r2 >> #1; final answer: #1", {K::IncorrectTripleFormat}},
      {"", {K::IncorrectTripleFormat}},
      {"A >> r; final answer: #answer", {K::IncorrectTripleFormat}},
      // missing or malformed final directive
      {"A >> r >> #1; #1 >> s >> #2", {K::FinalAnswerFormat}},
      {"A >> r >> #1; #1 >> s >> #2; final answer: answer",
       {K::FinalAnswerFormat}},
      {"A >> r >> #1; final answer: #2", {K::FinalAnswerFormat}},
  };
  return cases;
}

inline const std::vector<std::string>& valid_chains() {
  static const std::vector<std::string> chains = {
      // published exemplars, verbatim
      "LaLa DX >> language >> #1; spirits associated with Shintoism in #1 >> "
      "name >> #2; final answer: #2",
      "famous quote \"we came we saw we conquered\" >> author >> #1; #1 >> "
      "date of death >> #2; final answer: #2",
      "country with the immigration >> name of the country >> #1; flag made "
      "first between Cuba and #1 >> name >> #2; final answer: #2",
      "Wessel Dammers >> country of citizenship >> #1; Robert Handcock "
      "(rugby union) >> country of citizenship >> #2; final answer: #answer",
      "The Blue Umbrella >> director >> #1; #1 >> award received >> #2; "
      "final answer: #answer",
      "Strut-Harald >> father >> #1; #1 >> place of death >> #2; "
      "final answer: #answer",
      "Bahamas Securities Exchange >> country >> #1; flag of the #1 >> "
      "applies to jurisdiction >> #2; final answer: #2",
      // crafted
      "24 Hours (1931 film) >> director >> #1; #1 >> country of citizenship "
      ">> #2; final answer: #2",
      "A >> r >> #1; #1 >> s >> #2; #2 >> t >> #3; final answer: #3",
      "A >> r >> #1; #1 >> s >> #2; #2 >> t >> #3; #3 >> u >> #4; "
      "final answer: #4",
      "Instincts >> performer >> #1; #1 >> country of citizenship >> #2; "
      "final answer: #answer",
      "Lake Placid Serenade >> director >> #1; #1 >> award received >> #2; "
      "final answer: #answer.",
      "a >> b >> #1; c of #1 >> d >> #2; Final Answer: #2",
      "x>>y>>#1;#1>>z>>#2;final answer: #2",
      "A >> r >> #1; B >> s >> #2; final answer: #answer",
      "A >> r >> #1; #1 x >> s >> #2; final answer: #2",
      "Gorm the Old >> place of death >> #1; #1 >> country >> #2; "
      "final answer: #2",
      "q >> w >> #1; #1 >> e >> #2; final answer: #1",
      "name >> of >> #1; #1 >> of >> #2; final answer: #answer",
      "Louvre >> country >> #1; #1 >> capital >> #2; final answer: #2",
  };
  return chains;
}

}  // namespace chainfill::testing
