#pragma once

// Experiment protocol: two-fold odd/even cross-validation of trained
// linear combination, incremental fusion curves, method comparisons and
// query grouping by relevant-document count.

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lcfuse/corpus_io.hpp"
#include "lcfuse/evaluation.hpp"
#include "lcfuse/fusion.hpp"
#include "lcfuse/regression.hpp"

namespace lcfuse {

struct FoldSplit {
  std::vector<std::string> a;  // 1st, 3rd, 5th, ... query in natural order
  std::vector<std::string> b;  // 2nd, 4th, ...
};

/// Throws InvalidArgument for fewer than two queries.
FoldSplit split_odd_even(std::vector<std::string> query_ids);

enum class Method { kLinearCombination, kCombSum, kCombMnz, kBorda, kBestComponent };

/// "LC-mlr", "combsum", "combmnz", "borda", "best-component".
std::string method_tag(Method method);
/// Accepts the tags above plus "lc" and "best".
Method parse_method(std::string_view name);

struct FusionOptions {
  double reciprocal_constant = kReciprocalConstant;
  std::size_t depth = kDefaultRunDepth;
  DocUniverse universe = DocUniverse::kRetrievedUnion;
  double ridge_epsilon = 0.0;
};

struct CrossValResult {
  RunList fused;
  EvalReport report;
  WeightVector trained_on_a;  // applied to fold B
  WeightVector trained_on_b;  // applied to fold A
};

/// Fuses `runs` over the union of their queries. Linear combination is
/// trained on one fold with `training` and applied to the other, both ways;
/// the untrained methods fuse every query directly. The result is always
/// evaluated against `official`.
CrossValResult cross_validated_fusion(const std::vector<RunList>& runs, const Qrels& official,
                                      const Qrels& training, const FusionOptions& options = {},
                                      Method method = Method::kLinearCombination);

struct CurveRow {
  std::string method;
  std::size_t num_systems = 0;
  double map = 0.0;
  double rp = 0.0;
  double p10 = 0.0;
  double p20 = 0.0;
};

/// One row per prefix runs[0..k), k = 2..n, all scored on the same queries.
/// `runs` should be ordered best first.
std::vector<CurveRow> incremental_fusion_curve(const std::vector<RunList>& runs, const Qrels& official,
                                               const Qrels& training, const FusionOptions& options = {},
                                               Method method = Method::kLinearCombination);

/// Incremental curves for each fusion method. kBestComponent contributes a
/// single row: runs[0] evaluated on its own.
std::vector<CurveRow> compare_methods(const std::vector<RunList>& runs, const Qrels& official,
                                      const Qrels& training, const std::vector<Method>& methods,
                                      const FusionOptions& options = {});

void write_curve_csv(const std::vector<CurveRow>& rows, std::ostream& out);

struct GroupingMode {
  enum class Kind { kThreshold, kTertiles };
  Kind kind = Kind::kTertiles;
  std::size_t threshold = 10;

  /// "threshold:<t>" or "tertiles".
  static GroupingMode parse(std::string_view text);
};

struct QueryGroup {
  std::string label;
  std::vector<std::string> queries;
};

/// Threshold mode: A = {q : R(q) <= t}, B = the rest. Tertile mode: queries
/// sorted by R(q) ascending, cut into Low/Middle/High with sizes as equal as
/// possible (50 -> 17/16/17, 40 -> 13/14/13).
std::vector<QueryGroup> group_by_relcount(const Qrels& qrels, const GroupingMode& mode);

struct GroupReport {
  std::string label;
  double mean_relevant = 0.0;
  EvalReport report;
};

/// One report per non-empty group followed by an "all" report over the
/// union of the groups. Empty groups are skipped with a warning.
std::vector<GroupReport> grouped_eval(const RunList& run, const Qrels& qrels,
                                      const std::vector<QueryGroup>& groups,
                                      std::vector<std::string>* warnings = nullptr);

/// CSV: `group,num_queries,mean_relevant,map,rp,p10,p20`.
void write_group_csv(const std::vector<GroupReport>& groups, std::ostream& out);

}  // namespace lcfuse
