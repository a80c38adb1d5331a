#pragma once
// The uniform per-triplet fill interface realized by the KG and text
// sources. A source answers a valid triplet (unmasked head and relation,
// single-mask tail) or reports that it cannot ground it, in which case the
// mask is left unfilled for later stages.

#include <optional>
#include <string>
#include <vector>

#include "chainfill/chain.hpp"

namespace chainfill {

struct SourceAnswer {
  std::string value;                      // first candidate
  std::vector<std::string> candidates;    // all candidates, source order
  std::vector<std::string> evidence;      // triple ids / doc ids
  std::optional<double> confidence;
  std::vector<std::string> notes;         // free-form trace annotations
};

// One retrieval issued during a stage, for the trace.
struct SourceRetrieval {
  std::string query;
  std::vector<std::pair<std::string, double>> ranked;  // doc_id, score
};

class KnowledgeSource {
 public:
  virtual ~KnowledgeSource() = default;

  virtual SourceKind kind() const = 0;

  // Called once per fill stage with the original question before any
  // triplet queries; sources that retrieve a stage-wide document pool hook
  // in here.
  virtual void begin_stage(const std::string& question) { (void)question; }

  // Empty result means the triplet could not be grounded or answered.
  // Throws SourceUnavailableError when the backing service is down; the
  // stage is then skipped for this question.
  virtual std::optional<SourceAnswer> answer_triplet(const Triplet& t) = 0;

  // Retrievals issued since begin_stage, for the trace.
  virtual std::vector<SourceRetrieval> stage_retrievals() const { return {}; }
};

}  // namespace chainfill
