#pragma once
// Shared test utilities: parse shortcuts, a random valid-chain generator,
// and fixture paths.

#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "chainfill/chain.hpp"
#include "chainfill/parser.hpp"

namespace chainfill::testing {

inline std::string fixture_path(const std::string& rel) {
  return std::string(FIXTURE_DIR) + "/" + rel;
}

inline std::string template_dir() { return TEMPLATE_DIR; }

// Parses or fails the test.
inline ReasoningChain RC(const std::string& text) {
  ParseOutcome outcome = parse_chain(text);
  REQUIRE_MESSAGE(outcome.ok(), "expected parseable chain: ", text,
                  " (", outcome.failure ? outcome.failure->detail : "", ")");
  return *outcome.chain;
}

// Random syntactically valid chains: contiguous masks 1..m, every triplet
// masked in head or tail, unmasked relations, bare-mask tails. Literals
// avoid '#', '>', ';' and digits so rendering stays canonical.
class ChainGen {
 public:
  explicit ChainGen(std::uint64_t seed) : rng_(seed) {}

  std::string word() {
    static const char* pool[] = {"alpha", "bravo", "charlie", "delta",  "echo",
                                 "fox",   "golf",  "hotel",   "india",  "juliet",
                                 "kilo",  "lima",  "mike",    "november"};
    return pool[rng_() % (sizeof(pool) / sizeof(pool[0]))];
  }

  std::string phrase(int max_words = 3) {
    int n = 1 + static_cast<int>(rng_() % max_words);
    std::string out;
    for (int i = 0; i < n; ++i) {
      if (!out.empty()) out += ' ';
      out += word();
    }
    return out;
  }

  ReasoningChain chain(int min_masks = 2, int max_masks = 4) {
    int m = min_masks + static_cast<int>(rng_() % (max_masks - min_masks + 1));
    ReasoningChain c;
    for (int i = 1; i <= m; ++i) {
      Triplet t;
      if (i > 1 && rng_() % 2 == 0) {
        // bridge onto an earlier mask, bare or embedded in text
        MaskRef prev = MaskRef::numbered(1 + static_cast<int>(rng_() % (i - 1)));
        if (rng_() % 2 == 0) {
          t.head = TemplateText::mask(prev);
        } else {
          t.head = TemplateText::from_spans(
              {LiteralSpan{phrase() + " of "}, Span{prev}});
        }
      } else {
        t.head = TemplateText::literal(phrase());
      }
      t.relation = TemplateText::literal(phrase(2));
      t.tail = TemplateText::mask(MaskRef::numbered(i));
      c.triplets.push_back(std::move(t));
    }
    c.final.target =
        (rng_() % 2 == 0) ? MaskRef::answer() : MaskRef::numbered(m);
    return c;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace chainfill::testing
