#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lcfuse/error.hpp"
#include "lcfuse/harness.hpp"
#include "lcfuse/synthetic.hpp"
#include "test_support.hpp"

using namespace lcfuse;

namespace {

std::vector<std::string> numbered(int from, int to) {
  std::vector<std::string> ids;
  for (int i = from; i <= to; ++i) ids.push_back(std::to_string(i));
  return ids;
}

// Qrels where query i has `counts[i]` relevant docs.
Qrels with_counts(const std::vector<int>& counts) {
  Qrels q;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    auto& j = q.queries[std::to_string(i + 1)];
    for (int d = 0; d < counts[i]; ++d) j["d" + std::to_string(d)] = 1;
    j["n"] = 0;
  }
  return q;
}

SyntheticData small_data(std::uint64_t seed) {
  SyntheticConfig config;
  config.seed = seed;
  config.num_queries = 12;
  config.num_systems = 4;
  config.docs_per_query = 60;
  config.relevant_per_query = 8;
  config.list_length = 40;
  return generate_synthetic(config);
}

}  // namespace

TEST(SplitOddEven, Alternation) {
  auto s = split_odd_even({"304", "302", "301", "303"});
  EXPECT_EQ(s.a, (std::vector<std::string>{"301", "303"}));
  EXPECT_EQ(s.b, (std::vector<std::string>{"302", "304"}));
  s = split_odd_even({"1", "2", "3"});
  EXPECT_EQ(s.a, (std::vector<std::string>{"1", "3"}));
  EXPECT_EQ(s.b, (std::vector<std::string>{"2"}));
  s = split_odd_even({"qd", "qb", "qa", "qc"});
  EXPECT_EQ(s.a, (std::vector<std::string>{"qa", "qc"}));
  EXPECT_EQ(s.b, (std::vector<std::string>{"qb", "qd"}));
  s = split_odd_even({"9", "10", "11"});
  EXPECT_EQ(s.a, (std::vector<std::string>{"9", "11"}));
  EXPECT_THROW(split_odd_even({"1"}), InvalidArgument);
  EXPECT_THROW(split_odd_even({"1", "1"}), InvalidArgument);
}

TEST(Methods, TagsRoundTrip) {
  for (Method m : {Method::kLinearCombination, Method::kCombSum, Method::kCombMnz, Method::kBorda,
                   Method::kBestComponent}) {
    EXPECT_EQ(parse_method(method_tag(m)), m);
  }
  EXPECT_EQ(parse_method("lc"), Method::kLinearCombination);
  EXPECT_THROW(parse_method("rrf"), InvalidArgument);
}

TEST(CrossValidation, IdenticalRunsKeepTheirOrder) {
  std::mt19937_64 rng(1);
  const auto base = test::random_runs(rng, 1, 6, 30, 30)[0];
  RunList twin = base;
  twin.run_tag = "twin";
  for (auto& [q, entries] : twin.queries) {
    for (auto& e : entries) e.run_tag = "twin";
  }
  Qrels qrels;
  for (const auto& q : base.query_ids()) qrels.queries[q] = {{"d01", 1}, {"d05", 1}, {"d07", 0}};
  const auto result = cross_validated_fusion({base, twin}, qrels, qrels);
  for (const auto& q : base.query_ids()) EXPECT_EQ(result.fused.ranked_docs(q), base.ranked_docs(q));
}

TEST(CrossValidation, PerfectSystemGetsTheLargerWeight) {
  std::mt19937_64 rng(2);
  std::map<std::string, std::vector<std::string>> perfect, noise;
  Qrels qrels;
  for (const auto& q : numbered(1, 10)) {
    auto docs = test::doc_ids(40);
    for (int d = 0; d < 5; ++d) qrels.queries[q][docs[d]] = 1;
    perfect[q] = docs;
    std::shuffle(docs.begin(), docs.end(), rng);
    noise[q] = docs;
  }
  const auto runs = std::vector<RunList>{test::make_run("perfect", perfect), test::make_run("random", noise)};
  const auto result = cross_validated_fusion(runs, qrels, qrels);
  EXPECT_GT(result.trained_on_a.weights[0], result.trained_on_a.weights[1]);
  EXPECT_GT(result.trained_on_b.weights[0], result.trained_on_b.weights[1]);
  EXPECT_EQ(result.report.map, 1.0);
  EXPECT_EQ(result.fused.query_ids().size(), 10u);
}

TEST(CrossValidation, TestFoldLabelsNeverReachTraining) {
  const SyntheticData data = small_data(5);
  const FoldSplit split = split_odd_even(all_query_ids(data.runs));
  std::mt19937_64 rng(77);
  auto poison = [&](const std::vector<std::string>& fold) {
    Qrels q = data.qrels;
    for (const auto& id : fold) {
      auto& j = q.queries[id];
      j.clear();
      for (const auto& run : data.runs) {
        for (const auto& doc : run.ranked_docs(id)) j[doc] = static_cast<int>(rng() % 3);
      }
    }
    return q;
  };
  const auto clean = cross_validated_fusion(data.runs, data.qrels, data.qrels);
  const auto poisoned_b = cross_validated_fusion(data.runs, data.qrels, poison(split.b));
  const auto poisoned_a = cross_validated_fusion(data.runs, data.qrels, poison(split.a));
  EXPECT_EQ(poisoned_b.trained_on_a.weights, clean.trained_on_a.weights);
  EXPECT_EQ(poisoned_b.trained_on_a.intercept, clean.trained_on_a.intercept);
  EXPECT_EQ(poisoned_a.trained_on_b.weights, clean.trained_on_b.weights);
  EXPECT_EQ(poisoned_a.trained_on_b.intercept, clean.trained_on_b.intercept);
  EXPECT_NE(poisoned_b.trained_on_b.weights, clean.trained_on_b.weights);
  for (const auto& q : split.b) EXPECT_EQ(poisoned_b.fused.ranked_docs(q), clean.fused.ranked_docs(q));
}

TEST(CrossValidation, EvaluatesAgainstOfficialQrels) {
  const SyntheticData data = small_data(6);
  Qrels sparse = data.qrels;
  for (auto& [q, j] : sparse.queries) {
    for (auto it = j.begin(); it != j.end();) it = it->second > 0 && q.size() % 2 ? j.erase(it) : std::next(it);
  }
  const auto result = cross_validated_fusion(data.runs, data.qrels, sparse);
  const EvalReport expected = evaluate(result.fused, data.qrels, natural_sort(data.qrels.query_ids()));
  EXPECT_EQ(result.report.map, expected.map);
  EXPECT_EQ(result.report.qrels_id, "official");
  EXPECT_EQ(result.report.judged_queries, 12u);
}

TEST(CrossValidation, FailingFoldIsNamed) {
  const SyntheticData data = small_data(7);
  FusionOptions options;
  options.ridge_epsilon = -1.0;
  try {
    cross_validated_fusion(data.runs, data.qrels, data.qrels, options);
    FAIL();
  } catch (const RegressionError& e) {
    EXPECT_NE(std::string(e.what()).find("fold A"), std::string::npos);
  }
}

TEST(CrossValidation, Deterministic) {
  const SyntheticData data = small_data(8);
  std::ostringstream a, b;
  write_run(cross_validated_fusion(data.runs, data.qrels, data.qrels).fused, a);
  write_run(cross_validated_fusion(data.runs, data.qrels, data.qrels).fused, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
}

TEST(Curve, RowsPerPrefix) {
  const SyntheticData data = small_data(9);
  const auto two = incremental_fusion_curve({data.runs[0], data.runs[1]}, data.qrels, data.qrels);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0].num_systems, 2u);
  const auto all = incremental_fusion_curve(data.runs, data.qrels, data.qrels);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[2].num_systems, 4u);
  EXPECT_THROW(incremental_fusion_curve({data.runs[0]}, data.qrels, data.qrels), InvalidArgument);
}

TEST(Compare, BestComponentMatchesEvaluate) {
  const SyntheticData data = small_data(10);
  const auto rows = compare_methods(data.runs, data.qrels, data.qrels,
                                    {Method::kBestComponent, Method::kCombSum, Method::kBorda});
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0].method, "best-component");
  const EvalReport best = evaluate(data.runs[0], data.qrels);
  EXPECT_EQ(rows[0].map, best.map);
  EXPECT_EQ(rows[0].p20, best.p20);
  for (const auto& row : rows) {
    EXPECT_GE(row.map, 0.0);
    EXPECT_GE(row.p10, 0.0);
  }
  std::ostringstream out;
  write_curve_csv(rows, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "method,num_systems,map,rp,p10,p20");
}

TEST(Grouping, TertileSizes) {
  std::vector<int> fifty, forty;
  for (int i = 0; i < 50; ++i) fifty.push_back((i * 37) % 50 + 1);
  for (int i = 0; i < 40; ++i) forty.push_back((i * 13) % 40 + 1);
  auto g = group_by_relcount(with_counts(fifty), GroupingMode::parse("tertiles"));
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].queries.size(), 17u);
  EXPECT_EQ(g[1].queries.size(), 16u);
  EXPECT_EQ(g[2].queries.size(), 17u);
  EXPECT_EQ(g[0].label, "Low");
  EXPECT_EQ(g[2].label, "High");
  g = group_by_relcount(with_counts(forty), GroupingMode::parse("tertiles"));
  EXPECT_EQ(g[0].queries.size(), 13u);
  EXPECT_EQ(g[1].queries.size(), 14u);
  EXPECT_EQ(g[2].queries.size(), 13u);
  EXPECT_THROW(group_by_relcount(with_counts({1, 2}), GroupingMode{}), InvalidArgument);
}

TEST(Grouping, ThresholdIsInclusive) {
  const auto g = group_by_relcount(with_counts({5, 10, 11}), GroupingMode::parse("threshold:10"));
  EXPECT_EQ(g[0].queries, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(g[1].queries, (std::vector<std::string>{"3"}));
  EXPECT_THROW(GroupingMode::parse("threshold:"), InvalidArgument);
  EXPECT_THROW(GroupingMode::parse("halves"), InvalidArgument);
}

TEST(Grouping, GroupMeansRecombine) {
  const SyntheticData data = [] {
    SyntheticConfig c;
    c.seed = 3;
    c.num_queries = 15;
    c.num_systems = 2;
    c.docs_per_query = 80;
    c.relevant_per_query = 10;
    return generate_synthetic(c);
  }();
  // Vary R(q) so tertiles differ.
  Qrels qrels = data.qrels;
  int q_index = 0;
  for (auto& [q, j] : qrels.queries) {
    int drop = q_index++ % 8;
    for (auto& [doc, grade] : j) {
      if (grade > 0 && drop-- > 0) grade = 0;
    }
  }
  const auto groups = group_by_relcount(qrels, GroupingMode{});
  std::vector<std::string> warnings;
  const auto reports = grouped_eval(data.runs[0], qrels, groups, &warnings);
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_LE(reports[0].mean_relevant, reports[1].mean_relevant);
  EXPECT_LE(reports[1].mean_relevant, reports[2].mean_relevant);
  double weighted = 0.0;
  for (int g = 0; g < 3; ++g) weighted += reports[g].report.map * static_cast<double>(reports[g].report.judged_queries);
  EXPECT_NEAR(weighted / static_cast<double>(reports[3].report.judged_queries), reports[3].report.map, 1e-12);
  const EvalReport plain = evaluate(data.runs[0], qrels);
  EXPECT_NEAR(reports[3].report.map, plain.map, 1e-12);

  const auto single = grouped_eval(data.runs[0], qrels, {{"everything", natural_sort(qrels.query_ids())}});
  EXPECT_NEAR(single[0].report.p20, plain.p20, 1e-12);
}

TEST(Grouping, EmptyGroupWarns) {
  const RunList run = test::make_run("r", {{"1", {"d0"}}});
  std::vector<std::string> warnings;
  const auto reports = grouped_eval(run, with_counts({1}), {{"A", {"1"}}, {"B", {}}}, &warnings);
  EXPECT_EQ(reports.size(), 2u);
  ASSERT_FALSE(warnings.empty());
  std::ostringstream out;
  write_group_csv(reports, out);
  EXPECT_EQ(out.str(), "group,num_queries,mean_relevant,map,rp,p10,p20\n"
                       "A,1,1.00,1.0000,1.0000,0.1000,0.0500\n"
                       "all,1,1.00,1.0000,1.0000,0.1000,0.0500\n");
}
