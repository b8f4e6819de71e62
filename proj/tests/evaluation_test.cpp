#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "lcfuse/evaluation.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace lcfuse;

namespace {

// Relevant at ranks 1 and 20 of a 20-doc list.
std::vector<std::string> twenty() { return test::doc_ids(20); }

Judgments two_relevant() { return {{"d00", 1}, {"d19", 2}, {"d05", 0}}; }

}  // namespace

TEST(AveragePrecision, DeletingALabelCanRaiseAp) {
  const auto list = twenty();
  EXPECT_DOUBLE_EQ(*average_precision(list, two_relevant()), 0.55);
  Judgments partial = two_relevant();
  partial.erase("d19");
  EXPECT_DOUBLE_EQ(*average_precision(list, partial), 1.0);
}

TEST(AveragePrecision, NothingRetrievedAndUndefined) {
  const auto list = twenty();
  EXPECT_EQ(*average_precision(list, {{"x", 1}, {"y", 1}, {"z", 2}}), 0.0);
  EXPECT_FALSE(average_precision(list, {{"d00", 0}}).has_value());
  EXPECT_FALSE(r_precision(list, {}).has_value());
}

TEST(RPrecision, Cases) {
  const std::vector<std::string> list = {"a", "b", "c", "d"};
  EXPECT_DOUBLE_EQ(*r_precision(list, {{"b", 1}, {"d", 1}}), 0.5);
  EXPECT_DOUBLE_EQ(*r_precision(list, {{"a", 1}, {"b", 1}}), 1.0);
  EXPECT_DOUBLE_EQ(*r_precision(list, {{"a", 1}, {"z", 1}, {"y", 1}, {"x", 1}, {"w", 1}}), 0.2);
}

TEST(PrecisionAt, ShortListsKeepTheCutoffDenominator) {
  const auto list = twenty();
  EXPECT_DOUBLE_EQ(precision_at(list, {{"d00", 1}, {"d03", 1}, {"d09", 1}, {"d10", 1}}, 10), 0.3);
  const std::vector<std::string> five = {"a", "b", "c", "d", "e"};
  EXPECT_DOUBLE_EQ(precision_at(five, {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}}, 10), 0.5);
  EXPECT_EQ(precision_at({}, {{"a", 1}}, 20), 0.0);
}

TEST(Evaluate, ReportsMeans) {
  const RunList run = test::make_run("r", {{"q", twenty()}});
  const Qrels qrels = test::make_qrels({{"q", two_relevant()}});
  const EvalReport report = evaluate(run, qrels);
  EXPECT_DOUBLE_EQ(report.map, 0.55);
  EXPECT_DOUBLE_EQ(report.rp, 0.5);
  EXPECT_DOUBLE_EQ(report.p10, 0.1);
  EXPECT_DOUBLE_EQ(report.p20, 0.1);
  EXPECT_EQ(report.metric("map"), report.map);
  EXPECT_THROW(report.metric("ndcg"), std::exception);
}

TEST(Evaluate, PerfectRetrieval) {
  const RunList run = test::make_run("r", {{"q", {"c", "a", "b"}}});
  const Qrels qrels = test::make_qrels({{"q", {{"a", 1}, {"b", 1}, {"c", 2}, {"n", 0}}}});
  const EvalReport report = evaluate(run, qrels);
  EXPECT_DOUBLE_EQ(report.rp, 1.0);
  EXPECT_DOUBLE_EQ(report.map, 1.0);
}

TEST(Evaluate, RankOnly) {
  RunList run = test::make_run("r", {{"1", twenty()}, {"2", {"d05", "d19", "d00"}}});
  const Qrels qrels = test::make_qrels({{"1", two_relevant()}, {"2", two_relevant()}});
  const EvalReport a = evaluate(run, qrels);
  run.run_tag = "renamed";
  for (auto& [q, entries] : run.queries) {
    for (auto& e : entries) e.raw_score = 1000.0 - e.rank * 7.5;
  }
  const EvalReport b = evaluate(run, qrels);
  EXPECT_EQ(a.map, b.map);
  EXPECT_EQ(a.rp, b.rp);
  EXPECT_EQ(a.p10, b.p10);
  EXPECT_EQ(a.p20, b.p20);
}

TEST(Evaluate, UnjudgedQueriesCountOnlyForPrecisionAtK) {
  const RunList run = test::make_run("r", {{"1", {"a", "b"}}, {"2", {"c"}}});
  const Qrels qrels = test::make_qrels({{"1", {{"a", 1}}}, {"2", {{"c", 0}}}});
  const EvalReport report = evaluate(run, qrels);
  EXPECT_EQ(report.judged_queries, 1u);
  EXPECT_DOUBLE_EQ(report.map, 1.0);
  EXPECT_DOUBLE_EQ(report.p10, 0.05);
}

TEST(Evaluate, MissingQueryScoresZeroWithWarning) {
  const RunList run = test::make_run("r", {{"1", {"a"}}});
  const Qrels qrels = test::make_qrels({{"1", {{"a", 1}}}, {"2", {{"b", 1}}}});
  const EvalReport report = evaluate(run, qrels, std::vector<std::string>{"1", "2"});
  EXPECT_DOUBLE_EQ(report.map, 0.5);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("2"), std::string::npos);
  EXPECT_TRUE(report.queries[1].missing_from_run);
}

TEST(Evaluate, AgreesWithOracle) {
  std::mt19937_64 rng(41);
  const auto docs = test::doc_ids(20);
  for (int trial = 0; trial < 300; ++trial) {
    auto ranked = docs;
    std::shuffle(ranked.begin(), ranked.end(), rng);
    ranked.resize(1 + rng() % 20);
    Judgments labels;
    const std::size_t rel = rng() % 6;
    for (std::size_t i = 0; i < rel; ++i) labels[docs[rng() % 20]] = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < 3; ++i) labels.emplace(docs[rng() % 20], 0);

    const double ap = oracle::average_precision(ranked, labels);
    const auto got = average_precision(ranked, labels);
    ASSERT_EQ(got.has_value(), ap >= 0.0);
    if (got) {
      EXPECT_NEAR(*got, ap, 1e-12);
      EXPECT_NEAR(*r_precision(ranked, labels), oracle::r_precision(ranked, labels), 1e-12);
    }
    for (std::size_t k : {1u, 5u, 10u, 20u}) {
      EXPECT_NEAR(precision_at(ranked, labels, k), oracle::precision_at(ranked, labels, k), 1e-12);
    }
  }
}

TEST(Evaluate, RemovingLabelsNeverRaisesPrecisionAtK) {
  std::mt19937_64 rng(43);
  const auto docs = test::doc_ids(30);
  for (int trial = 0; trial < 100; ++trial) {
    auto ranked = docs;
    std::shuffle(ranked.begin(), ranked.end(), rng);
    Judgments full;
    for (int i = 0; i < 8; ++i) full[docs[rng() % 30]] = 1;
    Judgments partial = full;
    for (auto it = partial.begin(); it != partial.end();) it = rng() % 2 ? partial.erase(it) : std::next(it);
    for (std::size_t k : {10u, 20u}) EXPECT_LE(precision_at(ranked, partial, k), precision_at(ranked, full, k));
  }
}

TEST(EvalCsv, Layout) {
  const RunList run = test::make_run("r", {{"1", twenty()}, {"2", {"x"}}});
  const Qrels qrels = test::make_qrels({{"1", two_relevant()}});
  std::ostringstream out;
  write_eval_csv(evaluate(run, qrels), out);
  EXPECT_EQ(out.str(),
            "query_id,map,rp,p10,p20\n"
            "1,0.5500,0.5000,0.1000,0.1000\n"
            "2,,,0.0000,0.0000\n"
            "__mean__,0.5500,0.5000,0.0500,0.0500\n");
}

TEST(Sensitivity, VarianceFormatting) {
  EXPECT_EQ(format_variance(sensitivity_row("map", "50%", 0.4230, 0.4366).variance), "+3.22%");
  EXPECT_EQ(format_variance(sensitivity_row("p20", "20%", 0.6540, 0.4458).variance), "-31.83%");
  EXPECT_EQ(format_variance(sensitivity_row("map", "x", 0.5, 0.5).variance), "+0.00%");
  EXPECT_EQ(format_variance(sensitivity_row("map", "x", 0.0, 0.5).variance), "n/a");
  EXPECT_EQ(format_variance(sensitivity_row("map", "x", 0.0, 0.0).variance), "+0.00%");
}

TEST(Sensitivity, IdentityAndLayout) {
  const RunList run = test::make_run("r", {{"q", twenty()}});
  const Qrels full = test::make_qrels({{"q", two_relevant()}});
  Qrels partial = full;
  partial.queries["q"].erase("d19");
  const auto rows = sensitivity_table(run, full, {{"same", full}, {"half", partial}});
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& row : rows) {
    if (row.qrels_label == "same") {
      EXPECT_EQ(format_variance(row.variance), "+0.00%");
    }
  }
  std::ostringstream out;
  write_sensitivity_csv(rows, out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "qrels,map,rp,p10,p20,map_var,rp_var,p10_var,p20_var");
  EXPECT_NE(text.find("\nfull,0.5500,"), std::string::npos);
  EXPECT_NE(text.find("\nhalf,1.0000,1.0000,0.1000,0.0500,+81.82%,+100.00%,+0.00%,-50.00%"), std::string::npos);
}
