#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcfuse/corpus_io.hpp"
#include "lcfuse/error.hpp"
#include "lcfuse/evaluation.hpp"
#include "lcfuse/fusion.hpp"
#include "lcfuse/harness.hpp"
#include "lcfuse/pooling.hpp"
#include "lcfuse/regression.hpp"
#include "lcfuse/synthetic.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace lcfuse;

namespace {

void bind_corpus(py::module_& m) {
  py::class_<RunEntry>(m, "RunEntry")
      .def(py::init<>())
      .def_readwrite("query_id", &RunEntry::query_id)
      .def_readwrite("doc_id", &RunEntry::doc_id)
      .def_readwrite("rank", &RunEntry::rank)
      .def_readwrite("raw_score", &RunEntry::raw_score)
      .def_readwrite("run_tag", &RunEntry::run_tag)
      .def_readwrite("source_rank", &RunEntry::source_rank)
      .def("__eq__", [](const RunEntry& a, const RunEntry& b) { return a == b; })
      .def("__repr__", [](const RunEntry& e) {
        return "<RunEntry " + e.query_id + " " + e.doc_id + " rank=" + std::to_string(e.rank) + ">";
      });

  py::class_<RunList>(m, "RunList")
      .def(py::init<>())
      .def_readwrite("run_tag", &RunList::run_tag)
      .def_readwrite("queries", &RunList::queries)
      .def("query_ids", &RunList::query_ids)
      .def("ranked_docs", &RunList::ranked_docs, py::arg("query_id"))
      .def("__len__", &RunList::size)
      .def("__eq__", [](const RunList& a, const RunList& b) { return a == b; });

  py::class_<Qrels>(m, "Qrels")
      .def(py::init<>())
      .def_readwrite("queries", &Qrels::queries)
      .def_readonly("duplicate_lines", &Qrels::duplicate_lines)
      .def("grade", &Qrels::grade)
      .def("is_relevant", &Qrels::is_relevant)
      .def("relevant_count", &Qrels::relevant_count)
      .def("total_relevant", &Qrels::total_relevant)
      .def("query_ids", &Qrels::query_ids)
      .def("__eq__", [](const Qrels& a, const Qrels& b) { return a == b; });

  m.def("parse_run", &parse_run_string, py::arg("text"), "Parse and canonicalize TREC run text.");
  m.def("parse_qrels", &parse_qrels_string, py::arg("text"));
  m.def("read_run_file", &read_run_file, py::arg("path"));
  m.def("read_qrels_file", &read_qrels_file, py::arg("path"));
  m.def("write_run", &write_run_string, py::arg("run"), py::arg("depth") = kDefaultRunDepth);
  m.def("write_qrels", &write_qrels_string, py::arg("qrels"));
  m.def("natural_sort", &natural_sort, py::arg("ids"));
}

void bind_pooling(py::module_& m) {
  py::class_<Pool>(m, "Pool").def(py::init<>()).def_readwrite("queries", &Pool::queries).def("__len__", &Pool::size);
  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("depth", &SweepRow::depth)
      .def_readonly("relevant_count", &SweepRow::relevant_count)
      .def_readonly("fraction", &SweepRow::fraction)
      .def_property_readonly("percent", &SweepRow::percent);
  py::class_<DepthChoice>(m, "DepthChoice")
      .def_readonly("depth", &DepthChoice::depth)
      .def_readonly("fraction", &DepthChoice::fraction);

  m.def("build_pool", &build_pool, py::arg("runs"), py::arg("depth"));
  m.def(
      "make_partial_qrels",
      [](const Pool& pool, const Qrels& full) { return make_partial_qrels(pool, full); },
      py::arg("pool"), py::arg("full"));
  m.def("pool_sweep", &pool_sweep, py::arg("runs"), py::arg("full"), py::arg("depths"));
  m.def("pick_depth_for_fraction", &pick_depth_for_fraction, py::arg("runs"), py::arg("full"),
        py::arg("target_fraction"));
}

void bind_regression(py::module_& m) {
  py::enum_<DocUniverse>(m, "DocUniverse")
      .value("RETRIEVED_UNION", DocUniverse::kRetrievedUnion)
      .value("RETRIEVED_PLUS_RELEVANT", DocUniverse::kRetrievedPlusRelevant);

  py::class_<MatrixRow>(m, "MatrixRow")
      .def(py::init<>())
      .def_readwrite("query_id", &MatrixRow::query_id)
      .def_readwrite("doc_id", &MatrixRow::doc_id)
      .def_readwrite("scores", &MatrixRow::scores)
      .def_readwrite("target", &MatrixRow::target);
  py::class_<ScoreMatrix>(m, "ScoreMatrix")
      .def(py::init<>())
      .def_readwrite("system_order", &ScoreMatrix::system_order)
      .def_readwrite("rows", &ScoreMatrix::rows);
  py::class_<WeightVector>(m, "WeightVector")
      .def(py::init<>())
      .def_readwrite("intercept", &WeightVector::intercept)
      .def_readwrite("weights", &WeightVector::weights)
      .def_readwrite("system_order", &WeightVector::system_order)
      .def_readwrite("rss", &WeightVector::rss)
      .def_readonly("condition", &WeightVector::condition)
      .def_readonly("regularized", &WeightVector::regularized)
      .def_readonly("degenerate", &WeightVector::degenerate);

  m.def("assemble_matrix", &assemble_matrix, py::arg("systems"), py::arg("qrels"), py::arg("queries"),
        py::arg("universe") = DocUniverse::kRetrievedUnion);
  m.def("solve_ols", &solve_ols, py::arg("matrix"), py::arg("ridge_epsilon") = 0.0);
  m.def("objective_g", &objective_g, py::arg("matrix"), py::arg("candidate"));
}

void bind_fusion(py::module_& m) {
  py::class_<ScoredList>(m, "ScoredList")
      .def(py::init<>())
      .def_readwrite("run_tag", &ScoredList::run_tag)
      .def_readwrite("queries", &ScoredList::queries)
      .def("score", &ScoredList::score);

  m.def("normalize_reciprocal", py::overload_cast<const RunList&, double>(&normalize_reciprocal),
        py::arg("run"), py::arg("constant") = kReciprocalConstant);
  m.def("linear_combine", &linear_combine, py::arg("systems"), py::arg("weights"),
        py::arg("depth") = kDefaultRunDepth, py::arg("tag") = "LC-mlr");
  m.def("comb_sum", &comb_sum, py::arg("systems"), py::arg("depth") = kDefaultRunDepth,
        py::arg("tag") = "combsum");
  m.def("comb_mnz", &comb_mnz, py::arg("systems"), py::arg("depth") = kDefaultRunDepth,
        py::arg("tag") = "combmnz");
  m.def("borda", &borda, py::arg("runs"), py::arg("depth") = kDefaultRunDepth, py::arg("tag") = "borda");
}

void bind_evaluation(py::module_& m) {
  py::class_<QueryEval>(m, "QueryEval")
      .def_readonly("query_id", &QueryEval::query_id)
      .def_readonly("relevant", &QueryEval::relevant)
      .def_readonly("ap", &QueryEval::ap)
      .def_readonly("rp", &QueryEval::rp)
      .def_readonly("p10", &QueryEval::p10)
      .def_readonly("p20", &QueryEval::p20)
      .def_readonly("missing_from_run", &QueryEval::missing_from_run);
  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("run_id", &EvalReport::run_id)
      .def_readonly("qrels_id", &EvalReport::qrels_id)
      .def_readonly("queries", &EvalReport::queries)
      .def_readonly("map", &EvalReport::map)
      .def_readonly("rp", &EvalReport::rp)
      .def_readonly("p10", &EvalReport::p10)
      .def_readonly("p20", &EvalReport::p20)
      .def_readonly("judged_queries", &EvalReport::judged_queries)
      .def_readonly("warnings", &EvalReport::warnings);
  py::class_<SensitivityRow>(m, "SensitivityRow")
      .def_readonly("metric", &SensitivityRow::metric)
      .def_readonly("qrels_label", &SensitivityRow::qrels_label)
      .def_readonly("full", &SensitivityRow::full)
      .def_readonly("partial", &SensitivityRow::partial)
      .def_readonly("variance", &SensitivityRow::variance)
      .def_property_readonly("formatted", [](const SensitivityRow& r) { return format_variance(r.variance); });

  m.def(
      "average_precision",
      [](const std::vector<std::string>& ranked, const Judgments& j) { return average_precision(ranked, j); },
      py::arg("ranked"), py::arg("judgments"));
  m.def(
      "r_precision", [](const std::vector<std::string>& ranked, const Judgments& j) { return r_precision(ranked, j); },
      py::arg("ranked"), py::arg("judgments"));
  m.def(
      "precision_at",
      [](const std::vector<std::string>& ranked, const Judgments& j, std::size_t k) { return precision_at(ranked, j, k); },
      py::arg("ranked"), py::arg("judgments"), py::arg("cutoff"));
  m.def(
      "evaluate",
      [](const RunList& run, const Qrels& qrels, const std::optional<std::vector<std::string>>& queries) {
        return queries ? evaluate(run, qrels, *queries) : evaluate(run, qrels);
      },
      py::arg("run"), py::arg("qrels"), py::arg("queries") = py::none());
  m.def("sensitivity_row", &sensitivity_row, py::arg("metric"), py::arg("qrels_label"), py::arg("full"),
        py::arg("partial"));
  m.def("format_variance", &format_variance, py::arg("variance"));
  m.def(
      "sensitivity_table",
      [](const RunList& run, const Qrels& full, const std::vector<std::pair<std::string, Qrels>>& partials) {
        std::vector<LabeledQrels> labeled;
        for (const auto& [label, q] : partials) labeled.push_back({label, q});
        return sensitivity_table(run, full, labeled);
      },
      py::arg("run"), py::arg("full"), py::arg("partials"));
}

void bind_harness(py::module_& m) {
  py::enum_<Method>(m, "Method")
      .value("LINEAR_COMBINATION", Method::kLinearCombination)
      .value("COMBSUM", Method::kCombSum)
      .value("COMBMNZ", Method::kCombMnz)
      .value("BORDA", Method::kBorda)
      .value("BEST_COMPONENT", Method::kBestComponent);

  py::class_<FoldSplit>(m, "FoldSplit").def_readonly("a", &FoldSplit::a).def_readonly("b", &FoldSplit::b);
  py::class_<FusionOptions>(m, "FusionOptions")
      .def(py::init<>())
      .def_readwrite("reciprocal_constant", &FusionOptions::reciprocal_constant)
      .def_readwrite("depth", &FusionOptions::depth)
      .def_readwrite("universe", &FusionOptions::universe)
      .def_readwrite("ridge_epsilon", &FusionOptions::ridge_epsilon);
  py::class_<CrossValResult>(m, "CrossValResult")
      .def_readonly("fused", &CrossValResult::fused)
      .def_readonly("report", &CrossValResult::report)
      .def_readonly("trained_on_a", &CrossValResult::trained_on_a)
      .def_readonly("trained_on_b", &CrossValResult::trained_on_b);
  py::class_<CurveRow>(m, "CurveRow")
      .def_readonly("method", &CurveRow::method)
      .def_readonly("num_systems", &CurveRow::num_systems)
      .def_readonly("map", &CurveRow::map)
      .def_readonly("rp", &CurveRow::rp)
      .def_readonly("p10", &CurveRow::p10)
      .def_readonly("p20", &CurveRow::p20);
  py::class_<QueryGroup>(m, "QueryGroup")
      .def_readonly("label", &QueryGroup::label)
      .def_readonly("queries", &QueryGroup::queries);
  py::class_<GroupReport>(m, "GroupReport")
      .def_readonly("label", &GroupReport::label)
      .def_readonly("mean_relevant", &GroupReport::mean_relevant)
      .def_readonly("report", &GroupReport::report);

  m.def("split_odd_even", &split_odd_even, py::arg("query_ids"));
  m.def("method_tag", &method_tag);
  m.def("parse_method", &parse_method);
  m.def("cross_validated_fusion", &cross_validated_fusion, py::arg("runs"), py::arg("official"),
        py::arg("training"), py::arg("options") = FusionOptions{}, py::arg("method") = Method::kLinearCombination);
  m.def("incremental_fusion_curve", &incremental_fusion_curve, py::arg("runs"), py::arg("official"),
        py::arg("training"), py::arg("options") = FusionOptions{}, py::arg("method") = Method::kLinearCombination);
  m.def("compare_methods", &compare_methods, py::arg("runs"), py::arg("official"), py::arg("training"),
        py::arg("methods"), py::arg("options") = FusionOptions{});
  m.def(
      "group_by_relcount",
      [](const Qrels& qrels, const std::string& mode) { return group_by_relcount(qrels, GroupingMode::parse(mode)); },
      py::arg("qrels"), py::arg("mode") = "tertiles");
  m.def(
      "grouped_eval",
      [](const RunList& run, const Qrels& qrels, const std::vector<QueryGroup>& groups) {
        return grouped_eval(run, qrels, groups);
      },
      py::arg("run"), py::arg("qrels"), py::arg("groups"));
}

void bind_synthetic(py::module_& m) {
  py::class_<SyntheticConfig>(m, "SyntheticConfig")
      .def(py::init<>())
      .def_readwrite("seed", &SyntheticConfig::seed)
      .def_readwrite("num_queries", &SyntheticConfig::num_queries)
      .def_readwrite("num_systems", &SyntheticConfig::num_systems)
      .def_readwrite("docs_per_query", &SyntheticConfig::docs_per_query)
      .def_readwrite("relevant_per_query", &SyntheticConfig::relevant_per_query)
      .def_readwrite("list_length", &SyntheticConfig::list_length)
      .def_readwrite("judged_depth", &SyntheticConfig::judged_depth)
      .def_readwrite("quality", &SyntheticConfig::quality);
  py::class_<SyntheticData>(m, "SyntheticData")
      .def_readonly("runs", &SyntheticData::runs)
      .def_readonly("qrels", &SyntheticData::qrels);
  m.def("generate_synthetic", &generate_synthetic, py::arg("config"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear-combination rank fusion trained from pooled relevance judgments.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());

  bind_corpus(m);
  bind_pooling(m);
  bind_regression(m);
  bind_fusion(m);
  bind_evaluation(m);
  bind_harness(m);
  bind_synthetic(m);

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
