#include "lcfuse/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "lcfuse/error.hpp"

namespace lcfuse {

namespace {

std::size_t count_relevant(const Judgments& judgments) {
  return static_cast<std::size_t>(std::count_if(judgments.begin(), judgments.end(),
                                                [](const auto& kv) { return kv.second > 0; }));
}

bool relevant(const Judgments& judgments, const std::string& doc) {
  auto it = judgments.find(doc);
  return it != judgments.end() && it->second > 0;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::optional<double> average_precision(std::span<const std::string> ranked, const Judgments& judgments) {
  const std::size_t r = count_relevant(judgments);
  if (r == 0) return std::nullopt;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (relevant(judgments, ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(r);
}

std::optional<double> r_precision(std::span<const std::string> ranked, const Judgments& judgments) {
  const std::size_t r = count_relevant(judgments);
  if (r == 0) return std::nullopt;
  const std::size_t n = std::min(r, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += relevant(judgments, ranked[i]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(r);
}

double precision_at(std::span<const std::string> ranked, const Judgments& judgments, std::size_t cutoff) {
  if (cutoff < 1) throw InvalidArgument("precision cutoff must be at least 1");
  const std::size_t n = std::min(cutoff, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += relevant(judgments, ranked[i]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(cutoff);
}

double EvalReport::metric(const std::string& name) const {
  if (name == "map") return map;
  if (name == "rp") return rp;
  if (name == "p10") return p10;
  if (name == "p20") return p20;
  throw InvalidArgument("unknown metric '" + name + "'");
}

EvalReport evaluate(const RunList& run, const Qrels& qrels, const std::vector<std::string>& query_set,
                    const std::string& qrels_id) {
  if (query_set.empty()) throw InvalidArgument("evaluation needs at least one query");
  EvalReport report;
  report.run_id = run.run_tag;
  report.qrels_id = qrels_id;
  double sum_ap = 0.0, sum_rp = 0.0, sum_p10 = 0.0, sum_p20 = 0.0;
  for (const auto& q : query_set) {
    const Judgments& judgments = qrels.judgments(q);
    QueryEval e;
    e.query_id = q;
    e.relevant = count_relevant(judgments);
    e.missing_from_run = run.queries.find(q) == run.queries.end();
    if (e.missing_from_run) report.warnings.push_back("query " + q + " is missing from run " + run.run_tag);
    const auto docs = run.ranked_docs(q);
    e.ap = average_precision(docs, judgments);
    e.rp = r_precision(docs, judgments);
    e.p10 = precision_at(docs, judgments, 10);
    e.p20 = precision_at(docs, judgments, 20);
    if (e.ap) {
      ++report.judged_queries;
      sum_ap += *e.ap;
      sum_rp += *e.rp;
    }
    sum_p10 += e.p10;
    sum_p20 += e.p20;
    report.queries.push_back(std::move(e));
  }
  const double all = static_cast<double>(report.queries.size());
  if (report.judged_queries > 0) {
    report.map = sum_ap / static_cast<double>(report.judged_queries);
    report.rp = sum_rp / static_cast<double>(report.judged_queries);
  }
  report.p10 = sum_p10 / all;
  report.p20 = sum_p20 / all;
  return report;
}

EvalReport evaluate(const RunList& run, const Qrels& qrels, const std::string& qrels_id) {
  return evaluate(run, qrels, natural_sort(run.query_ids()), qrels_id);
}

void write_eval_csv(const EvalReport& report, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) { return v ? fixed(*v) : std::string(); };
  out << "query_id,map,rp,p10,p20\n";
  for (const auto& q : report.queries) {
    out << q.query_id << ',' << opt(q.ap) << ',' << opt(q.rp) << ',' << fixed(q.p10) << ','
        << fixed(q.p20) << '\n';
  }
  out << "__mean__," << fixed(report.map) << ',' << fixed(report.rp) << ',' << fixed(report.p10)
      << ',' << fixed(report.p20) << '\n';
}

SensitivityRow sensitivity_row(const std::string& metric, const std::string& qrels_label, double full,
                               double partial) {
  SensitivityRow row{metric, qrels_label, full, partial, std::nullopt};
  if (full != 0.0) {
    row.variance = (partial - full) / full;
  } else if (partial == 0.0) {
    row.variance = 0.0;
  }
  return row;
}

std::string format_variance(const std::optional<double>& variance) {
  if (!variance) return "n/a";
  // Round half away from zero at two decimals of a percent.
  const double hundredths = std::round(*variance * 10000.0);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%.2f%%", hundredths < 0 ? "-" : "+", std::abs(hundredths) / 100.0);
  return buf;
}

std::vector<SensitivityRow> sensitivity_table(const RunList& run, const Qrels& full,
                                              const std::vector<LabeledQrels>& partials) {
  const auto queries = natural_sort(run.query_ids());
  std::vector<SensitivityRow> rows;
  if (queries.empty()) return rows;
  const EvalReport base = evaluate(run, full, queries, "full");
  for (const auto& partial : partials) {
    const EvalReport other = evaluate(run, partial.qrels, queries, partial.label);
    for (const char* metric : kMetricNames) {
      rows.push_back(sensitivity_row(metric, partial.label, base.metric(metric), other.metric(metric)));
    }
  }
  return rows;
}

void write_sensitivity_csv(const std::vector<SensitivityRow>& rows, std::ostream& out) {
  out << "qrels,map,rp,p10,p20,map_var,rp_var,p10_var,p20_var\n";
  std::vector<std::string> labels;
  std::map<std::string, std::map<std::string, const SensitivityRow*>> by_label;
  for (const auto& row : rows) {
    if (!by_label.count(row.qrels_label)) labels.push_back(row.qrels_label);
    by_label[row.qrels_label][row.metric] = &row;
  }
  if (labels.empty()) return;
  const auto& first = by_label[labels.front()];
  out << "full";
  for (const char* m : kMetricNames) out << ',' << fixed(first.at(m)->full);
  for (int i = 0; i < 4; ++i) out << ',' << format_variance(0.0);
  out << '\n';
  for (const auto& label : labels) {
    const auto& metrics = by_label[label];
    out << label;
    for (const char* m : kMetricNames) out << ',' << fixed(metrics.at(m)->partial);
    for (const char* m : kMetricNames) out << ',' << format_variance(metrics.at(m)->variance);
    out << '\n';
  }
}

}  // namespace lcfuse
