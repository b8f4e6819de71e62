#pragma once

// Seeded synthetic runs and qrels with controllable per-system quality.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lcfuse/corpus_io.hpp"

namespace lcfuse {

struct SyntheticConfig {
  std::uint64_t seed = 1;
  std::size_t num_queries = 50;
  std::size_t num_systems = 10;
  std::size_t docs_per_query = 200;
  std::size_t relevant_per_query = 20;
  /// Length of each run per query; 0 means docs_per_query.
  std::size_t list_length = 0;
  /// Non-relevant docs in the top `judged_depth` of any run are judged 0.
  std::size_t judged_depth = 20;
  /// One value in [0, 1] per system. Empty means evenly spaced from 0.9
  /// down to 0.3.
  std::vector<double> quality;
};

struct SyntheticData {
  std::vector<RunList> runs;
  Qrels qrels;
};

/// Each system ranks a query's docs by weighted sampling without
/// replacement, where a relevant doc is 1 / (1 - quality) times as likely to
/// be drawn next as a non-relevant one. Quality 1 places every relevant doc
/// first; quality 0 gives a uniform random order. Relevant docs get grade 1
/// or 2. Output is a pure function of the config.
SyntheticData generate_synthetic(const SyntheticConfig& config);

/// The quality profile actually used for `config`.
std::vector<double> effective_quality(const SyntheticConfig& config);

}  // namespace lcfuse
