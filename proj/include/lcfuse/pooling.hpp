#pragma once

// Fixed-length pools over a set of runs, and partial qrels derived from them.

#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "lcfuse/corpus_io.hpp"

namespace lcfuse {

/// Per-query set of pooled doc ids.
struct Pool {
  std::map<std::string, std::set<std::string>> queries;

  std::size_t size() const;
  bool operator==(const Pool&) const = default;
};

/// Union over runs of each run's top-`depth` documents, per query. Runs
/// shorter than `depth` contribute every document they rank.
Pool build_pool(const std::vector<RunList>& runs, std::size_t depth);

/// Restricts `full` to the pooled pairs. Every pooled doc keeps its grade
/// from `full`, or 0 when `full` does not judge it. Queries pooled but absent
/// from `full` produce a warning.
Qrels make_partial_qrels(const Pool& pool, const Qrels& full,
                         std::vector<std::string>* warnings = nullptr);

struct SweepRow {
  std::size_t depth = 0;
  std::size_t relevant_count = 0;
  double fraction = 0.0;  // relevant_count / full relevant total

  double percent() const { return 100.0 * fraction; }
};

std::vector<SweepRow> pool_sweep(const std::vector<RunList>& runs, const Qrels& full,
                                 const std::vector<std::size_t>& depths);

struct DepthChoice {
  std::size_t depth = 0;
  double fraction = 0.0;
};

/// The row whose fraction is closest to `target`; ties go to the smaller depth.
DepthChoice choose_depth(const std::vector<SweepRow>& curve, double target);

/// Sweeps depths 1..longest list and applies choose_depth.
DepthChoice pick_depth_for_fraction(const std::vector<RunList>& runs, const Qrels& full,
                                    double target_fraction);

/// CSV with header `depth,relevant_count,percent`.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace lcfuse
