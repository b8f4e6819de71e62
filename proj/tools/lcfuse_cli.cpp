// lcfuse: command-line front end for pooling, weight training, fusion and
// evaluation experiments. Every table is written as CSV with a header row.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lcfuse/corpus_io.hpp"
#include "lcfuse/error.hpp"
#include "lcfuse/evaluation.hpp"
#include "lcfuse/fusion.hpp"
#include "lcfuse/harness.hpp"
#include "lcfuse/pooling.hpp"
#include "lcfuse/regression.hpp"
#include "lcfuse/synthetic.hpp"

namespace fs = std::filesystem;
using namespace lcfuse;

namespace {

// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write(out);
  if (!out) throw Error("write failed for " + path);
}

std::vector<RunList> load_runs(const std::vector<std::string>& paths) {
  std::vector<RunList> runs;
  runs.reserve(paths.size());
  for (const auto& p : paths) runs.push_back(read_run_file(p));
  return runs;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// "2-20", "1,2,5" or a mix of both.
std::vector<std::size_t> parse_depths(const std::string& text) {
  std::vector<std::size_t> depths;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        depths.push_back(std::stoul(item));
      } else {
        const std::size_t lo = std::stoul(item.substr(0, dash));
        const std::size_t hi = std::stoul(item.substr(dash + 1));
        for (std::size_t d = lo; d <= hi; ++d) depths.push_back(d);
      }
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad depth list '" + text + "'");
    }
  }
  for (auto d : depths) {
    if (d == 0) throw InvalidArgument("depths must be positive");
  }
  return depths;
}

// Comma-separated ids, or @path to a file with one id per line.
std::vector<std::string> parse_queries(const std::string& text) {
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw Error("cannot open " + text.substr(1));
    std::vector<std::string> ids;
    std::string line;
    while (in >> line) ids.push_back(line);
    return ids;
  }
  return split_list(text);
}

DocUniverse parse_universe(const std::string& text) {
  if (text == "retrieved") return DocUniverse::kRetrievedUnion;
  if (text == "with-relevant") return DocUniverse::kRetrievedPlusRelevant;
  throw InvalidArgument("universe must be 'retrieved' or 'with-relevant'");
}

struct FusionFlags {
  double reciprocal_k = kReciprocalConstant;
  std::size_t depth = kDefaultRunDepth;
  double ridge = 0.0;
  std::string universe = "retrieved";

  void add_to(CLI::App* cmd, bool training) {
    cmd->add_option("--reciprocal-k", reciprocal_k, "Constant k in 1/(k + rank)")->capture_default_str();
    cmd->add_option("--depth", depth, "Output depth per query")->capture_default_str()->check(CLI::PositiveNumber);
    if (training) {
      cmd->add_option("--ridge", ridge, "Ridge term added to the normal equations")->capture_default_str();
      cmd->add_option("--universe", universe, "Training rows: retrieved | with-relevant")->capture_default_str();
    }
  }

  FusionOptions options() const {
    FusionOptions o;
    o.reciprocal_constant = reciprocal_k;
    o.depth = depth;
    o.ridge_epsilon = ridge;
    o.universe = parse_universe(universe);
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-combination rank fusion with pooled relevance judgments"};
  app.require_subcommand(1);
  std::function<void()> action;

  // pool
  std::vector<std::string> pool_runs;
  std::string pool_qrels, pool_out;
  std::size_t pool_depth = 0;
  double pool_fraction = 0.0;
  auto* pool = app.add_subcommand("pool", "Build partial qrels from a fixed-depth pool");
  pool->add_option("--runs", pool_runs, "Run files")->required()->check(CLI::ExistingFile);
  pool->add_option("--qrels", pool_qrels, "Full qrels")->required()->check(CLI::ExistingFile);
  auto* depth_opt = pool->add_option("--depth", pool_depth, "Pool depth")->check(CLI::PositiveNumber);
  auto* frac_opt = pool->add_option("--target-fraction", pool_fraction,
                                    "Pick the depth whose relevant fraction is closest to this")
                       ->check(CLI::Range(0.0, 1.0));
  depth_opt->excludes(frac_opt);
  pool->add_option("--out", pool_out, "Output qrels (default stdout)");
  pool->callback([&] {
    action = [&] {
      if (pool_depth == 0 && pool_fraction <= 0.0) {
        throw InvalidArgument("pool needs --depth or --target-fraction");
      }
      const auto runs = load_runs(pool_runs);
      const auto full = read_qrels_file(pool_qrels);
      std::size_t depth = pool_depth;
      if (depth == 0) depth = pick_depth_for_fraction(runs, full, pool_fraction).depth;
      std::vector<std::string> warnings;
      const Qrels partial = make_partial_qrels(build_pool(runs, depth), full, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      const std::size_t total = full.total_relevant();
      std::fprintf(stderr, "depth=%zu relevant=%zu fraction=%.4f\n", depth, partial.total_relevant(),
                   total == 0 ? 1.0 : static_cast<double>(partial.total_relevant()) / total);
      emit(pool_out, [&](std::ostream& out) { write_qrels(partial, out); });
    };
  });

  // sweep
  std::vector<std::string> sweep_runs;
  std::string sweep_qrels, sweep_depths = "1-20", sweep_csv;
  auto* sweep = app.add_subcommand("sweep", "Relevant documents found per pool depth");
  sweep->add_option("--runs", sweep_runs, "Run files")->required()->check(CLI::ExistingFile);
  sweep->add_option("--qrels", sweep_qrels, "Full qrels")->required()->check(CLI::ExistingFile);
  sweep->add_option("--depths", sweep_depths, "Depths, e.g. 2-20 or 1,5,10")->capture_default_str();
  sweep->add_option("--csv", sweep_csv, "Output CSV (default stdout)");
  sweep->callback([&] {
    action = [&] {
      const auto rows = pool_sweep(load_runs(sweep_runs), read_qrels_file(sweep_qrels), parse_depths(sweep_depths));
      emit(sweep_csv, [&](std::ostream& out) { write_sweep_csv(rows, out); });
    };
  });

  // train
  std::vector<std::string> train_runs;
  std::string train_qrels, train_queries, train_out;
  FusionFlags train_flags;
  auto* train = app.add_subcommand("train", "Fit linear-combination weights by least squares");
  train->add_option("--runs", train_runs, "Run files, in weight order")->required()->check(CLI::ExistingFile);
  train->add_option("--qrels", train_qrels, "Training qrels")->required()->check(CLI::ExistingFile);
  train->add_option("--queries", train_queries, "Training queries: a,b,c or @file (default all)");
  train->add_option("--out-weights", train_out, "Output weights CSV (default stdout)");
  train_flags.add_to(train, true);
  train->callback([&] {
    action = [&] {
      const auto runs = load_runs(train_runs);
      const auto qrels = read_qrels_file(train_qrels);
      const auto options = train_flags.options();
      auto queries = train_queries.empty() ? all_query_ids(runs) : parse_queries(train_queries);
      const auto matrix =
          assemble_matrix(normalize_reciprocal(runs, options.reciprocal_constant), qrels, queries, options.universe);
      const auto weights = solve_ols(matrix, options.ridge_epsilon);
      if (weights.regularized) std::cerr << "warning: design is rank deficient; ridge applied\n";
      if (weights.degenerate) std::cerr << "warning: no relevant training rows; weights are zero\n";
      emit(train_out, [&](std::ostream& out) { write_weights_csv(weights, out); });
    };
  });

  // fuse
  std::vector<std::string> fuse_runs;
  std::string fuse_method = "lc", fuse_weights, fuse_tag, fuse_out;
  FusionFlags fuse_flags;
  auto* fuse = app.add_subcommand("fuse", "Fuse runs into one run");
  fuse->add_option("--runs", fuse_runs, "Run files")->required()->check(CLI::ExistingFile);
  fuse->add_option("--method", fuse_method, "lc | combsum | combmnz | borda")->capture_default_str();
  fuse->add_option("--weights", fuse_weights, "Weights CSV (lc only)")->check(CLI::ExistingFile);
  fuse->add_option("--tag", fuse_tag, "Run tag of the fused run (default: method name)");
  fuse->add_option("--out", fuse_out, "Output run (default stdout)");
  fuse_flags.add_to(fuse, false);
  fuse->callback([&] {
    action = [&] {
      const auto runs = load_runs(fuse_runs);
      const Method method = parse_method(fuse_method);
      const std::string tag = fuse_tag.empty() ? method_tag(method) : fuse_tag;
      const auto scored = normalize_reciprocal(runs, fuse_flags.reciprocal_k);
      RunList fused;
      switch (method) {
        case Method::kLinearCombination: {
          if (fuse_weights.empty()) throw InvalidArgument("--method lc requires --weights");
          std::ifstream in(fuse_weights);
          fused = linear_combine(scored, read_weights_csv(in), fuse_flags.depth, tag);
          break;
        }
        case Method::kCombSum: fused = comb_sum(scored, fuse_flags.depth, tag); break;
        case Method::kCombMnz: fused = comb_mnz(scored, fuse_flags.depth, tag); break;
        case Method::kBorda: fused = borda(runs, fuse_flags.depth, tag); break;
        case Method::kBestComponent: throw InvalidArgument("best-component is not a fusion method");
      }
      emit(fuse_out, [&](std::ostream& out) { write_run(fused, out, fuse_flags.depth); });
    };
  });

  // eval
  std::string eval_run, eval_qrels, eval_csv;
  auto* eval = app.add_subcommand("eval", "MAP, R-precision, P@10 and P@20 per query");
  eval->add_option("--run", eval_run, "Run file")->required()->check(CLI::ExistingFile);
  eval->add_option("--qrels", eval_qrels, "Qrels")->required()->check(CLI::ExistingFile);
  eval->add_option("--csv", eval_csv, "Output CSV (default stdout)");
  eval->callback([&] {
    action = [&] {
      const auto report = evaluate(read_run_file(eval_run), read_qrels_file(eval_qrels), eval_qrels);
      emit(eval_csv, [&](std::ostream& out) { write_eval_csv(report, out); });
    };
  });

  // xval, curve and compare share their inputs.
  struct ProtocolFlags {
    std::vector<std::string> runs;
    std::string qrels, training_qrels, csv;
    FusionFlags fusion;

    void add_to(CLI::App* cmd) {
      cmd->add_option("--runs", runs, "Run files, best first")->required()->check(CLI::ExistingFile);
      cmd->add_option("--qrels", qrels, "Official qrels used for evaluation")->required()->check(CLI::ExistingFile);
      cmd->add_option("--training-qrels", training_qrels, "Qrels used for weight training (default --qrels)")
          ->check(CLI::ExistingFile);
      cmd->add_option("--csv", csv, "Output CSV (default stdout)");
      fusion.add_to(cmd, true);
    }
    std::vector<RunList> load() const {
      if (runs.size() < 2) throw InvalidArgument("fusion experiments need at least two runs");
      return load_runs(runs);
    }
    Qrels training(const Qrels& official) const {
      return training_qrels.empty() ? official : read_qrels_file(training_qrels);
    }
  };

  ProtocolFlags xval_flags;
  std::string xval_method = "lc", xval_out_run;
  auto* xval = app.add_subcommand("xval", "Two-fold odd/even cross-validated fusion");
  xval_flags.add_to(xval);
  xval->add_option("--method", xval_method, "lc | combsum | combmnz | borda")->capture_default_str();
  xval->add_option("--out-run", xval_out_run, "Write the fused run here");
  xval->callback([&] {
    action = [&] {
      const auto runs = xval_flags.load();
      const auto official = read_qrels_file(xval_flags.qrels);
      const auto result = cross_validated_fusion(runs, official, xval_flags.training(official),
                                                 xval_flags.fusion.options(), parse_method(xval_method));
      if (!xval_out_run.empty()) write_run_file(result.fused, xval_out_run, xval_flags.fusion.depth);
      emit(xval_flags.csv, [&](std::ostream& out) { write_eval_csv(result.report, out); });
    };
  });

  ProtocolFlags curve_flags;
  std::string curve_method = "lc";
  auto* curve = app.add_subcommand("curve", "Fuse the top 2, 3, ..., n runs");
  curve_flags.add_to(curve);
  curve->add_option("--method", curve_method, "lc | combsum | combmnz | borda")->capture_default_str();
  curve->callback([&] {
    action = [&] {
      const auto runs = curve_flags.load();
      const auto official = read_qrels_file(curve_flags.qrels);
      const auto rows = incremental_fusion_curve(runs, official, curve_flags.training(official),
                                                 curve_flags.fusion.options(), parse_method(curve_method));
      emit(curve_flags.csv, [&](std::ostream& out) { write_curve_csv(rows, out); });
    };
  });

  ProtocolFlags compare_flags;
  std::string compare_methods_text = "lc,combsum,combmnz,borda,best";
  auto* compare = app.add_subcommand("compare", "Fusion curves for several methods");
  compare_flags.add_to(compare);
  compare->add_option("--methods", compare_methods_text, "Comma-separated methods")->capture_default_str();
  compare->callback([&] {
    action = [&] {
      const auto runs = compare_flags.load();
      const auto official = read_qrels_file(compare_flags.qrels);
      std::vector<Method> methods;
      for (const auto& m : split_list(compare_methods_text)) methods.push_back(parse_method(m));
      const auto rows = compare_methods(runs, official, compare_flags.training(official), methods,
                                        compare_flags.fusion.options());
      emit(compare_flags.csv, [&](std::ostream& out) { write_curve_csv(rows, out); });
    };
  });

  // group-eval
  std::string group_run, group_qrels, group_by_qrels, group_mode = "tertiles", group_csv;
  auto* group = app.add_subcommand("group-eval", "Evaluate query groups split by relevant-document count");
  group->add_option("--run", group_run, "Run file")->required()->check(CLI::ExistingFile);
  group->add_option("--qrels", group_qrels, "Qrels for evaluation")->required()->check(CLI::ExistingFile);
  group->add_option("--group-qrels", group_by_qrels, "Qrels whose R(q) defines the groups (default --qrels)")
      ->check(CLI::ExistingFile);
  group->add_option("--mode", group_mode, "threshold:<t> | tertiles")->capture_default_str();
  group->add_option("--csv", group_csv, "Output CSV (default stdout)");
  group->callback([&] {
    action = [&] {
      const auto qrels = read_qrels_file(group_qrels);
      const auto grouping = group_by_qrels.empty() ? qrels : read_qrels_file(group_by_qrels);
      const auto groups = group_by_relcount(grouping, GroupingMode::parse(group_mode));
      std::vector<std::string> warnings;
      const auto reports = grouped_eval(read_run_file(group_run), qrels, groups, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      emit(group_csv, [&](std::ostream& out) { write_group_csv(reports, out); });
    };
  });

  // sensitivity
  std::string sens_run, sens_qrels, sens_csv;
  std::vector<std::string> sens_partials;
  auto* sens = app.add_subcommand("sensitivity", "Metric change when evaluating with partial qrels");
  sens->add_option("--run", sens_run, "Run file")->required()->check(CLI::ExistingFile);
  sens->add_option("--qrels", sens_qrels, "Full qrels")->required()->check(CLI::ExistingFile);
  sens->add_option("--partial", sens_partials, "Partial qrels as label=path or path")->required();
  sens->add_option("--csv", sens_csv, "Output CSV (default stdout)");
  sens->callback([&] {
    action = [&] {
      std::vector<LabeledQrels> partials;
      for (const auto& arg : sens_partials) {
        const auto eq = arg.find('=');
        const std::string label = eq == std::string::npos ? fs::path(arg).stem().string() : arg.substr(0, eq);
        const std::string path = eq == std::string::npos ? arg : arg.substr(eq + 1);
        partials.push_back({label, read_qrels_file(path)});
      }
      const auto rows = sensitivity_table(read_run_file(sens_run), read_qrels_file(sens_qrels), partials);
      emit(sens_csv, [&](std::ostream& out) { write_sensitivity_csv(rows, out); });
    };
  });

  // synth
  SyntheticConfig synth_config;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic data set");
  synth->add_option("--seed", synth_config.seed)->capture_default_str();
  synth->add_option("--queries", synth_config.num_queries)->capture_default_str();
  synth->add_option("--systems", synth_config.num_systems)->capture_default_str();
  synth->add_option("--docs", synth_config.docs_per_query, "Documents per query")->capture_default_str();
  synth->add_option("--relevant", synth_config.relevant_per_query, "Relevant documents per query")
      ->capture_default_str();
  synth->add_option("--list-length", synth_config.list_length, "Run length per query (0 = all docs)")
      ->capture_default_str();
  synth->add_option("--judged-depth", synth_config.judged_depth, "Depth judged non-relevant in the qrels")
      ->capture_default_str();
  synth->add_option("--quality", synth_config.quality, "Per-system quality in [0,1], best first");
  synth->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth->callback([&] {
    action = [&] {
      const auto data = generate_synthetic(synth_config);
      fs::create_directories(synth_dir);
      for (const auto& run : data.runs) {
        write_run_file(run, (fs::path(synth_dir) / (run.run_tag + ".run")).string(),
                       std::numeric_limits<std::size_t>::max());
      }
      write_qrels_file(data.qrels, (fs::path(synth_dir) / "qrels.txt").string());
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    std::cerr << "lcfuse: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
