#include "chainfill/self_consistency.hpp"

#include <algorithm>
#include <cctype>

#include "chainfill/parser.hpp"

namespace chainfill {

SampleSet make_sample_set(const std::vector<std::string>& raw_samples,
                          const SamplingParams& params,
                          const ValidationConfig& cfg,
                          const ParseOptions& opts) {
  SampleSet set;
  set.params = params;
  set.samples.reserve(raw_samples.size());
  for (const auto& raw : raw_samples) {
    Sample s;
    s.raw = raw;
    auto errors = validate(raw, cfg, opts);
    if (errors.empty()) {
      s.chain = parse_chain(raw, opts).chain;
    } else {
      s.errors = std::move(errors);
    }
    set.samples.push_back(std::move(s));
  }
  return set;
}

std::string canonical_key(const ReasoningChain& chain) {
  std::string rendered = render_chain(chain);
  std::string key;
  key.reserve(rendered.size());
  bool pending_space = false;
  for (char c : rendered) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !key.empty();
      continue;
    }
    if (pending_space) {
      key += ' ';
      pending_space = false;
    }
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return key;
}

SelectionReport select(const SampleSet& samples) {
  SelectionReport report;
  std::vector<std::string> key_order;  // first-occurrence order
  std::map<std::string, std::size_t> first_sample;

  for (std::size_t i = 0; i < samples.samples.size(); ++i) {
    const Sample& s = samples.samples[i];
    if (!s.chain) {
      ++report.filtered_count;
      for (const auto& e : s.errors) {
        ++report.error_histogram[syntactic_error_name(e.kind)];
      }
      continue;
    }
    std::string key = canonical_key(*s.chain);
    if (!report.vote_counts.count(key)) {
      key_order.push_back(key);
      first_sample[key] = i;
    }
    ++report.vote_counts[key];
  }

  if (report.vote_counts.empty()) {
    throw AllSamplesInvalidError("no sample passed syntactic validation (" +
                                 std::to_string(report.filtered_count) +
                                 " filtered)");
  }

  // Plurality; ties break to the earliest-seen key.
  std::string winner;
  int best = -1;
  for (const auto& key : key_order) {
    int votes = report.vote_counts.at(key);
    if (votes > best) {
      best = votes;
      winner = key;
    }
  }

  const Sample& chosen = samples.samples.at(first_sample.at(winner));
  report.chosen = *chosen.chain;
  report.chosen_raw = chosen.raw;
  return report;
}

}  // namespace chainfill
