#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lcfuse/error.hpp"
#include "lcfuse/fusion.hpp"
#include "lcfuse/regression.hpp"
#include "test_support.hpp"

using namespace lcfuse;

namespace {

ScoredList scored(const std::string& tag, const std::map<std::string, double>& docs) {
  ScoredList s;
  s.run_tag = tag;
  s.queries["q"] = docs;
  return s;
}

WeightVector weights(std::vector<double> w, double intercept = 0.0) {
  WeightVector v;
  v.weights = std::move(w);
  v.intercept = intercept;
  return v;
}

std::vector<std::string> order(const RunList& run, const std::string& q = "q") { return run.ranked_docs(q); }

double fused_score(const RunList& run, const std::string& doc, const std::string& q = "q") {
  for (const auto& e : run.queries.at(q)) {
    if (e.doc_id == doc) return e.raw_score;
  }
  return -1.0;
}

}  // namespace

TEST(Reciprocal, Values) {
  const RunList run = test::make_run("r", {{"q", test::doc_ids(40)}});
  const ScoredList s = normalize_reciprocal(run);
  EXPECT_DOUBLE_EQ(s.score("q", "d00"), 1.0 / 61.0);
  EXPECT_NEAR(s.score("q", "d00"), 0.0163934, 1e-7);
  EXPECT_DOUBLE_EQ(s.score("q", "d39"), 0.01);
  EXPECT_EQ(s.score("q", "missing"), 0.0);
  EXPECT_EQ(s.score("other", "d00"), 0.0);
  EXPECT_DOUBLE_EQ(normalize_reciprocal(run, 0.0).score("q", "d01"), 0.5);
  EXPECT_THROW(normalize_reciprocal(run, -1.0), InvalidArgument);
}

TEST(LinearCombine, HandArithmetic) {
  const std::vector<ScoredList> in = {scored("s1", {{"a", 0.5}, {"b", 0.2}}),
                                      scored("s2", {{"a", 0.1}, {"b", 0.4}})};
  const RunList fused = linear_combine(in, weights({1.0, 2.0}));
  EXPECT_EQ(order(fused), (std::vector<std::string>{"b", "a"}));
  EXPECT_DOUBLE_EQ(fused_score(fused, "a"), 0.7);
  EXPECT_DOUBLE_EQ(fused_score(fused, "b"), 1.0);
  EXPECT_EQ(fused.run_tag, "LC-mlr");
}

TEST(LinearCombine, UnitWeightsMatchCombSum) {
  std::mt19937_64 rng(4);
  const auto runs = normalize_reciprocal(test::random_runs(rng, 4, 6, 30, 20));
  EXPECT_EQ(linear_combine(runs, weights({1, 1, 1, 1}), 1000, "x").queries,
            comb_sum(runs, 1000, "x").queries);
}

TEST(LinearCombine, InterceptShiftKeepsOrder) {
  std::mt19937_64 rng(6);
  const auto runs = normalize_reciprocal(test::random_runs(rng, 3, 5, 30, 25));
  const RunList a = linear_combine(runs, weights({0.3, -0.2, 1.1}, 0.0));
  const RunList b = linear_combine(runs, weights({0.3, -0.2, 1.1}, 5.0));
  for (const auto& q : a.query_ids()) EXPECT_EQ(a.ranked_docs(q), b.ranked_docs(q));
}

TEST(LinearCombine, DimensionChecks) {
  const std::vector<ScoredList> in = {scored("s1", {{"a", 0.5}}), scored("s2", {{"a", 0.1}})};
  EXPECT_THROW(linear_combine(in, weights({1.0})), DimensionError);
  WeightVector named = weights({1.0, 1.0});
  named.system_order = {"s2", "s1"};
  EXPECT_THROW(linear_combine(in, named), DimensionError);
  named.system_order = {"s1", "s2"};
  EXPECT_NO_THROW(linear_combine(in, named));
}

TEST(CombSum, TieBreaksByDocId) {
  const std::vector<ScoredList> in = {scored("s1", {{"b", 0.2}, {"a", 0.5}}),
                                      scored("s2", {{"b", 0.4}, {"a", 0.1}})};
  const RunList fused = comb_sum(in);
  EXPECT_EQ(order(fused), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(fused_score(fused, "a"), fused_score(fused, "b"));
}

TEST(CombSum, SingleSystemIsIdentity) {
  const RunList run = test::make_run("r", {{"q", {"z", "c", "m", "a"}}});
  EXPECT_EQ(order(comb_sum({normalize_reciprocal(run)})), order(run));
  EXPECT_EQ(order(comb_mnz({normalize_reciprocal(run)})), order(run));
  EXPECT_THROW(comb_sum({}), InvalidArgument);
  EXPECT_THROW(comb_mnz({}), InvalidArgument);
}

TEST(CombMnz, MultiplierFavorsAgreement) {
  const std::vector<ScoredList> in = {scored("s1", {{"x", 0.1}, {"y", 0.5}}), scored("s2", {{"x", 0.2}})};
  const RunList fused = comb_mnz(in);
  EXPECT_EQ(order(fused), (std::vector<std::string>{"x", "y"}));
  EXPECT_DOUBLE_EQ(fused_score(fused, "x"), 0.6);
  EXPECT_DOUBLE_EQ(fused_score(fused, "y"), 0.5);
}

TEST(CombMnz, FullOverlapEqualsCombSum) {
  std::mt19937_64 rng(9);
  std::vector<RunList> runs;
  for (int r = 0; r < 3; ++r) {
    auto docs = test::doc_ids(15);
    std::shuffle(docs.begin(), docs.end(), rng);
    runs.push_back(test::make_run("r" + std::to_string(r), {{"q", docs}}));
  }
  const auto s = normalize_reciprocal(runs);
  EXPECT_EQ(order(comb_mnz(s)), order(comb_sum(s)));
}

TEST(Borda, Points) {
  const RunList single = borda({test::make_run("r", {{"q", {"a", "b", "c"}}})});
  EXPECT_EQ(order(single), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(fused_score(single, "a"), 3.0);
  EXPECT_EQ(fused_score(single, "c"), 1.0);

  const RunList sym = borda({test::make_run("r1", {{"q", {"b", "a"}}}), test::make_run("r2", {{"q", {"a", "b"}}})});
  EXPECT_EQ(order(sym), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(fused_score(sym, "a"), 3.0);

  const RunList mixed =
      borda({test::make_run("r1", {{"q", {"a", "b", "c"}}}), test::make_run("r2", {{"q", {"c", "a"}}})});
  EXPECT_EQ(order(mixed), (std::vector<std::string>{"a", "c", "b"}));
  EXPECT_EQ(fused_score(mixed, "a"), 5.0);
  EXPECT_EQ(fused_score(mixed, "c"), 4.0);
  EXPECT_EQ(fused_score(mixed, "b"), 2.0);
  EXPECT_THROW(borda({}), InvalidArgument);
}

TEST(Fusion, SystemOrderDoesNotMatter) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto runs = test::random_runs(rng, 4, 3, 25, 25);
    auto shuffled = runs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = normalize_reciprocal(runs);
    const auto b = normalize_reciprocal(shuffled);
    EXPECT_EQ(comb_sum(a).queries, comb_sum(b).queries);
    EXPECT_EQ(comb_mnz(a).queries, comb_mnz(b).queries);
    EXPECT_EQ(borda(runs).queries, borda(shuffled).queries);
  }
}

TEST(Fusion, ScoresAreSnappedToTwelveDigits) {
  EXPECT_EQ(snap_score(0.1 + 0.2), snap_score(0.3));
  EXPECT_EQ(snap_score(0.0), 0.0);
  EXPECT_DOUBLE_EQ(snap_score(-1.23456789012345), -1.23456789012);
}

TEST(Fusion, DepthTruncates) {
  const RunList run = test::make_run("r", {{"q", test::doc_ids(30)}});
  EXPECT_EQ(comb_sum({normalize_reciprocal(run)}, 10).queries.at("q").size(), 10u);
  EXPECT_THROW(comb_sum({normalize_reciprocal(run)}, 0), InvalidArgument);
}
