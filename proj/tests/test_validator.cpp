#include <doctest.h>

#include "chainfill/validator.hpp"
#include "helpers.hpp"
#include "validator_cases.hpp"

using namespace chainfill;
using chainfill::testing::error_cases;
using chainfill::testing::valid_chains;

namespace {

std::vector<SyntacticErrorKind> kinds_of(const std::vector<SyntacticError>& errors) {
  std::vector<SyntacticErrorKind> out;
  for (const auto& e : errors) out.push_back(e.kind);
  return out;
}

const ValidationConfig kDefault{2, 4};

}  // namespace

TEST_CASE("every crafted input is flagged with exactly its expected errors") {
  for (const auto& c : error_cases()) {
    CAPTURE(c.raw);
    CHECK(kinds_of(validate(c.raw, kDefault)) == c.expected);
    CHECK_FALSE(is_valid(c.raw, kDefault));
  }
}

TEST_CASE("the valid exemplar chains all pass") {
  for (const auto& raw : valid_chains()) {
    CAPTURE(raw);
    CHECK(is_valid(raw, kDefault));
  }
}

TEST_CASE("a relation mask does not double as a missing triple mask") {
  // the only mask sits in the relation slot of triple 0; the placement
  // error covers it and nothing else fires
  auto errors =
      validate("A >> #1 >> B; A2 >> r >> #1; #1 >> s >> #2; final answer: #2",
               kDefault);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].kind == SyntacticErrorKind::IncorrectTripleRelationMask);
  CHECK(errors[0].triplet_index == 0);
}

TEST_CASE("all errors are collected, not only the first") {
  auto errors = validate(
      "A >> r >> B; C >> #3 >> D; #3 >> s >> x # y; final answer: #3",
      kDefault);
  auto kinds = kinds_of(errors);
  // underflow (one unique mask), discontinuous {3}, missing number,
  // missing triple mask, relation mask
  CHECK(kinds == std::vector<SyntacticErrorKind>{
                     SyntacticErrorKind::MaskUnderflow,
                     SyntacticErrorKind::DiscontinuousMask,
                     SyntacticErrorKind::MissingMaskNumber,
                     SyntacticErrorKind::MissingTripleMask,
                     SyntacticErrorKind::IncorrectTripleRelationMask,
                 });
}

TEST_CASE("validation is deterministic and order-stable") {
  const std::string raw =
      "A >> r >> B; C >> s >> D; E >> t >> #1; #1 >> u >> #2; final answer: #2";
  auto first = kinds_of(validate(raw, kDefault));
  for (int i = 0; i < 5; ++i) {
    CHECK(kinds_of(validate(raw, kDefault)) == first);
  }
}

TEST_CASE("five unique masks overflow the default bounds") {
  std::string raw =
      "A >> r >> #1; #1 >> s >> #2; #2 >> t >> #3; #3 >> u >> #4; "
      "#4 >> v >> #5; final answer: #5";
  CHECK_FALSE(is_valid(raw, kDefault));
  CHECK(is_valid(raw, ValidationConfig{2, 5}));
}

TEST_CASE("widening the bounds never introduces errors") {
  chainfill::testing::ChainGen gen(11);
  for (int i = 0; i < 50; ++i) {
    std::string raw = render_chain(gen.chain(1, 6));
    auto narrow = validate(raw, ValidationConfig{2, 4});
    auto wide = validate(raw, ValidationConfig{1, 6});
    for (const auto& e : wide) {
      bool found = false;
      for (const auto& n : narrow) {
        if (n.kind == e.kind) found = true;
      }
      CAPTURE(raw);
      CHECK(found);
    }
  }
}

TEST_CASE("valid chains never yield masked relations from extraction") {
  chainfill::testing::ChainGen gen(13);
  for (int i = 0; i < 50; ++i) {
    auto chain = gen.chain();
    std::string raw = render_chain(chain);
    REQUIRE(is_valid(raw, kDefault));
    for (const auto& t : extract_valid_triplets(chain)) {
      CHECK(masks_of(t.relation).empty());
    }
  }
}

TEST_CASE("error names serialize to their published forms") {
  CHECK(syntactic_error_name(SyntacticErrorKind::MaskUnderflow) ==
        "MaskUnderflowError");
  CHECK(syntactic_error_name(SyntacticErrorKind::IncorrectTripleRelationMask) ==
        "IncorrectTripleRelationMaskError");
  CHECK(syntactic_error_from_name("DiscontinuousMaskError") ==
        SyntacticErrorKind::DiscontinuousMask);
  CHECK_FALSE(syntactic_error_from_name("NotAnError").has_value());
}

TEST_CASE("config sanity is enforced") {
  CHECK_THROWS_AS(validate("A >> r >> #1; final answer: #1",
                           ValidationConfig{3, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate("A >> r >> #1; final answer: #1",
                           ValidationConfig{0, 2}),
                  std::invalid_argument);
}
