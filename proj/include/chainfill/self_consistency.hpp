#pragma once
// Plurality vote over sampled reasoning chains. Invalid samples are
// filtered first; remaining chains are bucketed by a canonical key and the
// earliest-sampled chain of the winning bucket is returned.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainfill/chain.hpp"
#include "chainfill/validator.hpp"

namespace chainfill {

class AllSamplesInvalidError : public ChainError {
 public:
  explicit AllSamplesInvalidError(const std::string& what) : ChainError(what) {}
};

struct SamplingParams {
  int n = 10;
  double temperature = 0.7;
};

struct Sample {
  std::string raw;
  std::optional<ReasoningChain> chain;     // set when parsed and valid
  std::vector<SyntacticError> errors;      // set otherwise
};

struct SampleSet {
  std::vector<Sample> samples;  // length == params.n; failures count too
  SamplingParams params;
};

// Builds a SampleSet by validating each raw completion.
SampleSet make_sample_set(const std::vector<std::string>& raw_samples,
                          const SamplingParams& params,
                          const ValidationConfig& cfg,
                          const ParseOptions& opts = {});

// Case-folded, whitespace-collapsed canonical text used as the vote key.
std::string canonical_key(const ReasoningChain& chain);

struct SelectionReport {
  ReasoningChain chosen;
  std::string chosen_raw;                       // original casing
  std::map<std::string, int> vote_counts;       // canonical key -> votes
  int filtered_count = 0;                       // invalid samples
  std::map<std::string, int> error_histogram;   // error name -> occurrences
};

// Plurality selection; ties break to the key whose first sample occurred
// earliest. Throws AllSamplesInvalidError when nothing passes validation.
SelectionReport select(const SampleSet& samples);

}  // namespace chainfill
