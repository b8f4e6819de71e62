#include "lcfuse/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include "lcfuse/error.hpp"

namespace lcfuse {

namespace {

ScoredList restrict_scored(const ScoredList& list, const std::vector<std::string>& queries) {
  ScoredList out;
  out.run_tag = list.run_tag;
  for (const auto& q : queries) {
    auto it = list.queries.find(q);
    if (it != list.queries.end()) out.queries.emplace(q, it->second);
  }
  return out;
}

std::vector<ScoredList> restrict_scored(const std::vector<ScoredList>& lists,
                                        const std::vector<std::string>& queries) {
  std::vector<ScoredList> out;
  out.reserve(lists.size());
  for (const auto& l : lists) out.push_back(restrict_scored(l, queries));
  return out;
}

WeightVector train_fold(const std::vector<ScoredList>& scored, const Qrels& training,
                        const std::vector<std::string>& train_queries, const FusionOptions& options,
                        const char* fold) {
  try {
    const ScoreMatrix matrix = assemble_matrix(scored, training, train_queries, options.universe);
    return solve_ols(matrix, options.ridge_epsilon);
  } catch (const Error& e) {
    throw RegressionError(std::string("training on fold ") + fold + " failed: " + e.what());
  }
}

CurveRow curve_row(const std::string& method, std::size_t n, const EvalReport& report) {
  return {method, n, report.map, report.rp, report.p10, report.p20};
}

CrossValResult cross_validate(const std::vector<RunList>& runs, const Qrels& official,
                              const Qrels& training, const std::vector<std::string>& queries,
                              const FusionOptions& options, Method method) {
  if (runs.empty()) throw InvalidArgument("fusion needs at least one run");
  CrossValResult result;
  switch (method) {
    case Method::kLinearCombination: {
      const FoldSplit split = split_odd_even(queries);
      const auto scored = normalize_reciprocal(runs, options.reciprocal_constant);
      result.trained_on_a = train_fold(scored, training, split.a, options, "A");
      result.trained_on_b = train_fold(scored, training, split.b, options, "B");
      const std::string tag = method_tag(method);
      RunList fused_b =
          linear_combine(restrict_scored(scored, split.b), result.trained_on_a, options.depth, tag);
      RunList fused_a =
          linear_combine(restrict_scored(scored, split.a), result.trained_on_b, options.depth, tag);
      result.fused = std::move(fused_a);
      result.fused.queries.merge(fused_b.queries);
      break;
    }
    case Method::kCombSum:
      result.fused = comb_sum(restrict_scored(normalize_reciprocal(runs, options.reciprocal_constant), queries),
                              options.depth);
      break;
    case Method::kCombMnz:
      result.fused = comb_mnz(restrict_scored(normalize_reciprocal(runs, options.reciprocal_constant), queries),
                              options.depth);
      break;
    case Method::kBorda: {
      std::vector<RunList> restricted;
      for (const auto& run : runs) restricted.push_back(restrict_queries(run, queries));
      result.fused = borda(restricted, options.depth);
      break;
    }
    case Method::kBestComponent: {
      result.fused = restrict_queries(runs.front(), queries);
      for (auto& [q, entries] : result.fused.queries) {
        if (entries.size() > options.depth) entries.resize(options.depth);
      }
      break;
    }
  }
  result.report = evaluate(result.fused, official, queries, "official");
  return result;
}

}  // namespace

FoldSplit split_odd_even(std::vector<std::string> query_ids) {
  std::sort(query_ids.begin(), query_ids.end());
  query_ids.erase(std::unique(query_ids.begin(), query_ids.end()), query_ids.end());
  if (query_ids.size() < 2) throw InvalidArgument("cross-validation needs at least two queries");
  query_ids = natural_sort(std::move(query_ids));
  FoldSplit split;
  for (std::size_t i = 0; i < query_ids.size(); ++i) {
    (i % 2 == 0 ? split.a : split.b).push_back(query_ids[i]);
  }
  return split;
}

std::string method_tag(Method method) {
  switch (method) {
    case Method::kLinearCombination: return "LC-mlr";
    case Method::kCombSum: return "combsum";
    case Method::kCombMnz: return "combmnz";
    case Method::kBorda: return "borda";
    case Method::kBestComponent: return "best-component";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "lc" || name == "LC-mlr") return Method::kLinearCombination;
  if (name == "combsum") return Method::kCombSum;
  if (name == "combmnz") return Method::kCombMnz;
  if (name == "borda") return Method::kBorda;
  if (name == "best" || name == "best-component") return Method::kBestComponent;
  throw InvalidArgument("unknown fusion method '" + std::string(name) + "'");
}

CrossValResult cross_validated_fusion(const std::vector<RunList>& runs, const Qrels& official,
                                      const Qrels& training, const FusionOptions& options,
                                      Method method) {
  return cross_validate(runs, official, training, all_query_ids(runs), options, method);
}

std::vector<CurveRow> incremental_fusion_curve(const std::vector<RunList>& runs, const Qrels& official,
                                               const Qrels& training, const FusionOptions& options,
                                               Method method) {
  if (runs.size() < 2) throw InvalidArgument("a fusion curve needs at least two runs");
  const auto queries = all_query_ids(runs);
  std::vector<CurveRow> rows;
  for (std::size_t k = 2; k <= runs.size(); ++k) {
    const std::vector<RunList> prefix(runs.begin(), runs.begin() + static_cast<std::ptrdiff_t>(k));
    const auto result = cross_validate(prefix, official, training, queries, options, method);
    rows.push_back(curve_row(method_tag(method), k, result.report));
  }
  return rows;
}

std::vector<CurveRow> compare_methods(const std::vector<RunList>& runs, const Qrels& official,
                                      const Qrels& training, const std::vector<Method>& methods,
                                      const FusionOptions& options) {
  if (runs.empty()) throw InvalidArgument("method comparison needs at least one run");
  std::vector<CurveRow> rows;
  for (Method method : methods) {
    if (method == Method::kBestComponent) {
      const auto queries = all_query_ids(runs);
      const auto result = cross_validate(runs, official, training, queries, options, method);
      rows.push_back(curve_row(method_tag(method), 1, result.report));
    } else {
      auto curve = incremental_fusion_curve(runs, official, training, options, method);
      rows.insert(rows.end(), curve.begin(), curve.end());
    }
  }
  return rows;
}

void write_curve_csv(const std::vector<CurveRow>& rows, std::ostream& out) {
  out << "method,num_systems,map,rp,p10,p20\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.4f,%.4f,%.4f,%.4f", r.num_systems, r.map, r.rp, r.p10, r.p20);
    out << r.method << ',' << buf << '\n';
  }
}

GroupingMode GroupingMode::parse(std::string_view text) {
  GroupingMode mode;
  if (text == "tertiles") {
    mode.kind = Kind::kTertiles;
    return mode;
  }
  constexpr std::string_view prefix = "threshold:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto number = text.substr(prefix.size());
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), mode.threshold);
    if (ec == std::errc() && ptr == number.data() + number.size() && !number.empty()) {
      mode.kind = Kind::kThreshold;
      return mode;
    }
  }
  throw InvalidArgument("grouping mode must be 'tertiles' or 'threshold:<count>', got '" +
                        std::string(text) + "'");
}

std::vector<QueryGroup> group_by_relcount(const Qrels& qrels, const GroupingMode& mode) {
  auto queries = natural_sort(qrels.query_ids());
  if (mode.kind == GroupingMode::Kind::kThreshold) {
    QueryGroup low{"A", {}}, high{"B", {}};
    for (const auto& q : queries) {
      (qrels.relevant_count(q) <= mode.threshold ? low : high).queries.push_back(q);
    }
    return {low, high};
  }
  if (queries.size() < 3) throw InvalidArgument("tertile grouping needs at least three queries");
  std::stable_sort(queries.begin(), queries.end(), [&](const std::string& a, const std::string& b) {
    return qrels.relevant_count(a) < qrels.relevant_count(b);
  });
  const std::size_t n = queries.size();
  const std::size_t base = n / 3;
  std::size_t sizes[3] = {base, base, base};
  if (n % 3 == 1) {
    sizes[1] += 1;
  } else if (n % 3 == 2) {
    sizes[0] += 1;
    sizes[2] += 1;
  }
  const char* labels[3] = {"Low", "Middle", "High"};
  std::vector<QueryGroup> groups;
  auto it = queries.begin();
  for (int g = 0; g < 3; ++g) {
    QueryGroup group{labels[g], {it, it + static_cast<std::ptrdiff_t>(sizes[g])}};
    it += static_cast<std::ptrdiff_t>(sizes[g]);
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<GroupReport> grouped_eval(const RunList& run, const Qrels& qrels,
                                      const std::vector<QueryGroup>& groups,
                                      std::vector<std::string>* warnings) {
  std::vector<GroupReport> reports;
  std::set<std::string> all;
  auto report_for = [&](const std::string& label, const std::vector<std::string>& queries) {
    GroupReport g;
    g.label = label;
    g.report = evaluate(run, qrels, queries);
    double total = 0.0;
    for (const auto& q : queries) total += static_cast<double>(qrels.relevant_count(q));
    g.mean_relevant = total / static_cast<double>(queries.size());
    if (warnings) warnings->insert(warnings->end(), g.report.warnings.begin(), g.report.warnings.end());
    return g;
  };
  for (const auto& group : groups) {
    if (group.queries.empty()) {
      if (warnings) warnings->push_back("group " + group.label + " is empty; skipped");
      continue;
    }
    all.insert(group.queries.begin(), group.queries.end());
    reports.push_back(report_for(group.label, group.queries));
  }
  if (!all.empty()) reports.push_back(report_for("all", natural_sort({all.begin(), all.end()})));
  return reports;
}

void write_group_csv(const std::vector<GroupReport>& groups, std::ostream& out) {
  out << "group,num_queries,mean_relevant,map,rp,p10,p20\n";
  char buf[160];
  for (const auto& g : groups) {
    std::snprintf(buf, sizeof(buf), "%zu,%.2f,%.4f,%.4f,%.4f,%.4f", g.report.queries.size(),
                  g.mean_relevant, g.report.map, g.report.rp, g.report.p10, g.report.p20);
    out << g.label << ',' << buf << '\n';
  }
}

}  // namespace lcfuse
