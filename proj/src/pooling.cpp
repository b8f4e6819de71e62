#include "lcfuse/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lcfuse/error.hpp"

namespace lcfuse {

std::size_t Pool::size() const {
  std::size_t n = 0;
  for (const auto& [q, docs] : queries) n += docs.size();
  return n;
}

Pool build_pool(const std::vector<RunList>& runs, std::size_t depth) {
  if (depth < 1) throw InvalidArgument("pool depth must be at least 1");
  if (runs.empty()) throw InvalidArgument("pool needs at least one run");
  Pool pool;
  for (const auto& run : runs) {
    for (const auto& [q, entries] : run.queries) {
      auto& docs = pool.queries[q];
      const std::size_t n = std::min(depth, entries.size());
      for (std::size_t i = 0; i < n; ++i) docs.insert(entries[i].doc_id);
    }
  }
  return pool;
}

Qrels make_partial_qrels(const Pool& pool, const Qrels& full, std::vector<std::string>* warnings) {
  Qrels partial;
  for (const auto& [q, docs] : pool.queries) {
    auto judged = full.queries.find(q);
    if (judged == full.queries.end() && warnings) {
      warnings->push_back("query " + q + " is pooled but has no judgments; all pooled docs get grade 0");
    }
    auto& out = partial.queries[q];
    for (const auto& doc : docs) {
      int grade = 0;
      if (judged != full.queries.end()) {
        auto it = judged->second.find(doc);
        if (it != judged->second.end()) grade = it->second;
      }
      out.emplace(doc, grade);
    }
  }
  return partial;
}

std::vector<SweepRow> pool_sweep(const std::vector<RunList>& runs, const Qrels& full,
                                 const std::vector<std::size_t>& depths) {
  if (depths.empty()) throw InvalidArgument("depth sweep needs at least one depth");
  const std::size_t total = full.total_relevant();
  std::vector<SweepRow> rows;
  rows.reserve(depths.size());
  for (std::size_t depth : depths) {
    const Qrels partial = make_partial_qrels(build_pool(runs, depth), full);
    SweepRow row;
    row.depth = depth;
    row.relevant_count = partial.total_relevant();
    row.fraction = total == 0 ? 1.0
                              : static_cast<double>(row.relevant_count) / static_cast<double>(total);
    rows.push_back(row);
  }
  return rows;
}

DepthChoice choose_depth(const std::vector<SweepRow>& curve, double target) {
  if (curve.empty()) throw InvalidArgument("empty depth curve");
  // Distances within this many ulps-of-one are treated as ties.
  constexpr double kTieTolerance = 1e-12;
  const SweepRow* best = nullptr;
  double best_distance = 0.0;
  for (const auto& row : curve) {
    const double distance = std::abs(row.fraction - target);
    if (best == nullptr || distance < best_distance - kTieTolerance ||
        (std::abs(distance - best_distance) <= kTieTolerance && row.depth < best->depth)) {
      best = &row;
      best_distance = distance;
    }
  }
  return {best->depth, best->fraction};
}

DepthChoice pick_depth_for_fraction(const std::vector<RunList>& runs, const Qrels& full,
                                    double target_fraction) {
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw InvalidArgument("target fraction must lie in (0, 1]");
  }
  std::size_t longest = 1;
  for (const auto& run : runs) {
    for (const auto& [q, entries] : run.queries) longest = std::max(longest, entries.size());
  }
  std::vector<std::size_t> depths(longest);
  for (std::size_t i = 0; i < longest; ++i) depths[i] = i + 1;
  return choose_depth(pool_sweep(runs, full, depths), target_fraction);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "depth,relevant_count,percent\n";
  char buf[32];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.2f", row.percent());
    out << row.depth << ',' << row.relevant_count << ',' << buf << '\n';
  }
}

}  // namespace lcfuse
