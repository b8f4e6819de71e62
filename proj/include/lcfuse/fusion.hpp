#pragma once

// Rank-to-score normalization and the fusion methods: weighted linear
// combination, CombSum, CombMNZ and Borda count.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lcfuse/corpus_io.hpp"

namespace lcfuse {

struct WeightVector;

inline constexpr double kReciprocalConstant = 60.0;

/// Per-query doc_id -> normalized score for one system.
struct ScoredList {
  std::string run_tag;
  std::map<std::string, std::map<std::string, double>> queries;

  /// Score of a doc, 0 when the system did not rank it.
  double score(const std::string& query_id, const std::string& doc_id) const;
};

/// score(d) = 1 / (constant + rank(d)). Requires constant > -1.
ScoredList normalize_reciprocal(const RunList& run, double constant = kReciprocalConstant);
std::vector<ScoredList> normalize_reciprocal(const std::vector<RunList>& runs,
                                             double constant = kReciprocalConstant);

/// fused(d) = intercept + sum_j weights[j] * score_j(d). `systems` must line
/// up with `weights.system_order` by position and run tag.
RunList linear_combine(const std::vector<ScoredList>& systems, const WeightVector& weights,
                       std::size_t depth = kDefaultRunDepth, const std::string& tag = "LC-mlr");

RunList comb_sum(const std::vector<ScoredList>& systems, std::size_t depth = kDefaultRunDepth,
                 const std::string& tag = "combsum");

/// CombSum multiplied by the number of systems that ranked the doc.
RunList comb_mnz(const std::vector<ScoredList>& systems, std::size_t depth = kDefaultRunDepth,
                 const std::string& tag = "combmnz");

/// Per query, C is the union of ranked docs. A system ranking d at rank r
/// awards |C| - r + 1 points; a system that did not rank d awards none.
RunList borda(const std::vector<RunList>& runs, std::size_t depth = kDefaultRunDepth,
              const std::string& tag = "borda");

/// Fused scores are rounded to this many significant digits before ranking,
/// so that sums equal in exact arithmetic tie and fall back to doc_id order.
inline constexpr int kFusedSignificantDigits = 12;

double snap_score(double score);

/// Builds a run from per-query fused scores: snapped score descending,
/// doc_id ascending on ties, dense ranks, truncated to `depth`.
RunList rank_fused_scores(const std::map<std::string, std::map<std::string, double>>& scores,
                          std::size_t depth, const std::string& tag);

}  // namespace lcfuse
