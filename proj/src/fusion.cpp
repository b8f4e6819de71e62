#include "lcfuse/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "lcfuse/error.hpp"
#include "lcfuse/regression.hpp"

namespace lcfuse {

namespace {

using FusedScores = std::map<std::string, std::map<std::string, double>>;
using Contributions = std::map<std::string, std::map<std::string, std::vector<double>>>;

// Sums in ascending order so the result does not depend on system order.
double ordered_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

FusedScores sum_contributions(Contributions& contributions) {
  FusedScores fused;
  for (auto& [q, docs] : contributions) {
    auto& out = fused[q];
    for (auto& [doc, terms] : docs) out.emplace(doc, ordered_sum(terms));
  }
  return fused;
}

void require_systems(const auto& systems, const char* method) {
  if (systems.empty()) throw InvalidArgument(std::string(method) + " needs at least one system");
}

}  // namespace

double snap_score(double score) {
  if (score == 0.0 || !std::isfinite(score)) return score;
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(score))));
  const double scale = std::pow(10.0, kFusedSignificantDigits - 1 - exponent);
  return std::round(score * scale) / scale;
}

double ScoredList::score(const std::string& query_id, const std::string& doc_id) const {
  auto q = queries.find(query_id);
  if (q == queries.end()) return 0.0;
  auto d = q->second.find(doc_id);
  return d == q->second.end() ? 0.0 : d->second;
}

ScoredList normalize_reciprocal(const RunList& run, double constant) {
  if (!(constant > -1.0)) throw InvalidArgument("reciprocal constant must exceed -1");
  ScoredList scored;
  scored.run_tag = run.run_tag;
  for (const auto& [q, entries] : run.queries) {
    auto& out = scored.queries[q];
    for (const auto& e : entries) out.emplace(e.doc_id, 1.0 / (constant + e.rank));
  }
  return scored;
}

std::vector<ScoredList> normalize_reciprocal(const std::vector<RunList>& runs, double constant) {
  std::vector<ScoredList> out;
  out.reserve(runs.size());
  for (const auto& run : runs) out.push_back(normalize_reciprocal(run, constant));
  return out;
}

RunList rank_fused_scores(const FusedScores& scores, std::size_t depth, const std::string& tag) {
  if (depth < 1) throw InvalidArgument("output depth must be at least 1");
  RunList run;
  run.run_tag = tag;
  for (const auto& [q, docs] : scores) {
    std::vector<std::pair<const std::string*, double>> order;
    order.reserve(docs.size());
    for (const auto& [doc, s] : docs) order.emplace_back(&doc, snap_score(s));
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    const std::size_t n = std::min(depth, order.size());
    auto& entries = run.queries[q];
    entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      RunEntry e;
      e.query_id = q;
      e.doc_id = *order[i].first;
      e.rank = static_cast<int>(i + 1);
      e.source_rank = e.rank;
      e.raw_score = order[i].second;
      e.run_tag = tag;
      entries.push_back(std::move(e));
    }
  }
  return run;
}

RunList linear_combine(const std::vector<ScoredList>& systems, const WeightVector& weights,
                       std::size_t depth, const std::string& tag) {
  if (systems.size() != weights.weights.size()) {
    throw DimensionError("linear combination: " + std::to_string(systems.size()) +
                         " systems but " + std::to_string(weights.weights.size()) + " weights");
  }
  if (!weights.system_order.empty()) {
    if (weights.system_order.size() != systems.size()) {
      throw DimensionError("linear combination: weight system order has the wrong length");
    }
    for (std::size_t j = 0; j < systems.size(); ++j) {
      if (systems[j].run_tag != weights.system_order[j]) {
        throw DimensionError("linear combination: system " + std::to_string(j) + " is '" +
                             systems[j].run_tag + "' but the weights expect '" +
                             weights.system_order[j] + "'");
      }
    }
  }
  Contributions terms;
  for (std::size_t j = 0; j < systems.size(); ++j) {
    for (const auto& [q, docs] : systems[j].queries) {
      auto& out = terms[q];
      for (const auto& [doc, s] : docs) {
        auto [it, inserted] = out.try_emplace(doc);
        if (inserted) it->second.push_back(weights.intercept);
        it->second.push_back(weights.weights[j] * s);
      }
    }
  }
  return rank_fused_scores(sum_contributions(terms), depth, tag);
}

RunList comb_sum(const std::vector<ScoredList>& systems, std::size_t depth, const std::string& tag) {
  require_systems(systems, "CombSum");
  Contributions terms;
  for (const auto& system : systems) {
    for (const auto& [q, docs] : system.queries) {
      auto& out = terms[q];
      for (const auto& [doc, s] : docs) out[doc].push_back(s);
    }
  }
  return rank_fused_scores(sum_contributions(terms), depth, tag);
}

RunList comb_mnz(const std::vector<ScoredList>& systems, std::size_t depth, const std::string& tag) {
  require_systems(systems, "CombMNZ");
  Contributions terms;
  for (const auto& system : systems) {
    for (const auto& [q, docs] : system.queries) {
      auto& out = terms[q];
      for (const auto& [doc, s] : docs) out[doc].push_back(s);
    }
  }
  FusedScores fused;
  for (auto& [q, docs] : terms) {
    auto& out = fused[q];
    for (auto& [doc, t] : docs) out.emplace(doc, static_cast<double>(t.size()) * ordered_sum(t));
  }
  return rank_fused_scores(fused, depth, tag);
}

RunList borda(const std::vector<RunList>& runs, std::size_t depth, const std::string& tag) {
  require_systems(runs, "Borda count");
  std::map<std::string, std::size_t> candidates;
  {
    std::map<std::string, std::map<std::string, bool>> seen;
    for (const auto& run : runs) {
      for (const auto& [q, entries] : run.queries) {
        for (const auto& e : entries) seen[q][e.doc_id] = true;
      }
    }
    for (const auto& [q, docs] : seen) candidates[q] = docs.size();
  }
  FusedScores points;
  for (const auto& run : runs) {
    for (const auto& [q, entries] : run.queries) {
      const double pool = static_cast<double>(candidates[q]);
      auto& out = points[q];
      for (const auto& e : entries) out[e.doc_id] += pool - e.rank + 1.0;
    }
  }
  return rank_fused_scores(points, depth, tag);
}

}  // namespace lcfuse
