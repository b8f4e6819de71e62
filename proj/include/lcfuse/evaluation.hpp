#pragma once

// Binary-relevance evaluation: AP/MAP, R-precision, P@10 and P@20, plus the
// sensitivity of those numbers to the qrels they are measured against.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lcfuse/corpus_io.hpp"

namespace lcfuse {

/// Sum of precision at each relevant rank, over R(q). Relevant docs the list
/// never reaches count in R(q) only. nullopt when R(q) = 0.
std::optional<double> average_precision(std::span<const std::string> ranked, const Judgments& judgments);

/// Precision of the top R(q) docs; nullopt when R(q) = 0.
std::optional<double> r_precision(std::span<const std::string> ranked, const Judgments& judgments);

/// Relevant docs among the top `cutoff`, over `cutoff`.
double precision_at(std::span<const std::string> ranked, const Judgments& judgments, std::size_t cutoff);

struct QueryEval {
  std::string query_id;
  std::size_t relevant = 0;
  std::optional<double> ap;
  std::optional<double> rp;
  double p10 = 0.0;
  double p20 = 0.0;
  bool missing_from_run = false;
};

struct EvalReport {
  std::string run_id;
  std::string qrels_id;
  std::vector<QueryEval> queries;
  // MAP and RP average the queries with R(q) > 0; P@k averages all queries.
  double map = 0.0;
  double rp = 0.0;
  double p10 = 0.0;
  double p20 = 0.0;
  std::size_t judged_queries = 0;
  std::vector<std::string> warnings;

  /// Mean of the named metric ("map", "rp", "p10", "p20").
  double metric(const std::string& name) const;
};

inline constexpr const char* kMetricNames[] = {"map", "rp", "p10", "p20"};

/// Evaluates `run` on `query_set`. A query the run does not answer scores 0
/// and adds a warning.
EvalReport evaluate(const RunList& run, const Qrels& qrels, const std::vector<std::string>& query_set,
                    const std::string& qrels_id = "");

/// Evaluates every query the run answers.
EvalReport evaluate(const RunList& run, const Qrels& qrels, const std::string& qrels_id = "");

/// CSV with header `query_id,map,rp,p10,p20` and a trailing `__mean__` row.
/// Metrics undefined for a query (R(q) = 0) are left empty.
void write_eval_csv(const EvalReport& report, std::ostream& out);

struct SensitivityRow {
  std::string metric;
  std::string qrels_label;
  double full = 0.0;
  double partial = 0.0;
  /// (partial - full) / full; nullopt when full = 0 and partial != 0.
  std::optional<double> variance;
};

SensitivityRow sensitivity_row(const std::string& metric, const std::string& qrels_label,
                               double full, double partial);

/// Signed percentage with two decimals, e.g. "+3.22%", "-31.83%", "n/a".
std::string format_variance(const std::optional<double>& variance);

struct LabeledQrels {
  std::string label;
  Qrels qrels;
};

/// One row per (partial qrels, metric), evaluating the same run under the
/// full qrels and under each partial qrels on the run's query set.
std::vector<SensitivityRow> sensitivity_table(const RunList& run, const Qrels& full,
                                              const std::vector<LabeledQrels>& partials);

/// Table layout: `qrels,map,rp,p10,p20,map_var,rp_var,p10_var,p20_var`,
/// a `full` row followed by one row per partial label.
void write_sensitivity_csv(const std::vector<SensitivityRow>& rows, std::ostream& out);

}  // namespace lcfuse
