#include "lcfuse/regression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <string_view>

#include "lcfuse/error.hpp"

namespace lcfuse {

namespace {

// A pivot below this fraction of its own diagonal means the column is
// (numerically) a combination of the earlier ones.
constexpr double kCollinearityTolerance = 1e-10;

struct Factorization {
  std::vector<double> lower;  // row-major n x n
  std::vector<double> pivots;
};

// Cholesky of the symmetric n x n matrix `a` (row-major). Returns nullopt when
// a pivot is rejected: with `strict`, pivots below kCollinearityTolerance of
// their diagonal; otherwise only non-positive pivots.
std::optional<Factorization> cholesky(const std::vector<double>& a, std::size_t n, bool strict) {
  Factorization f;
  f.lower.assign(n * n, 0.0);
  f.pivots.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= f.lower[j * n + k] * f.lower[j * n + k];
    const double diag = a[j * n + j];
    if (!(d > 0.0) || (strict && d <= kCollinearityTolerance * diag)) return std::nullopt;
    f.pivots[j] = d;
    const double root = std::sqrt(d);
    f.lower[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= f.lower[i * n + k] * f.lower[j * n + k];
      f.lower[i * n + j] = s / root;
    }
  }
  return f;
}

std::vector<double> cholesky_solve(const Factorization& f, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= f.lower[i * n + k] * b[k];
    b[i] /= f.lower[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= f.lower[k * n + i] * b[k];
    b[i] /= f.lower[i * n + i];
  }
  return b;
}

void check_row_widths(const ScoreMatrix& matrix) {
  const std::size_t n = matrix.num_systems();
  for (const auto& row : matrix.rows) {
    if (row.scores.size() != n) {
      throw DimensionError("row (" + row.query_id + ", " + row.doc_id + ") has " +
                           std::to_string(row.scores.size()) + " scores, expected " +
                           std::to_string(n));
    }
  }
}

}  // namespace

double WeightVector::predict(const std::vector<double>& scores) const {
  if (scores.size() != weights.size()) throw DimensionError("prediction: score vector has the wrong length");
  double y = intercept;
  for (std::size_t j = 0; j < scores.size(); ++j) y += weights[j] * scores[j];
  return y;
}

ScoreMatrix assemble_matrix(const std::vector<ScoredList>& systems, const Qrels& qrels,
                            const std::vector<std::string>& queries, DocUniverse universe) {
  if (systems.empty()) throw InvalidArgument("training needs at least one system");
  if (queries.empty()) throw InvalidArgument("training needs at least one query");
  ScoreMatrix matrix;
  for (const auto& s : systems) matrix.system_order.push_back(s.run_tag);
  const std::size_t n = systems.size();
  for (const auto& q : queries) {
    std::set<std::string> docs;
    for (const auto& s : systems) {
      auto it = s.queries.find(q);
      if (it == s.queries.end()) continue;
      for (const auto& [doc, score] : it->second) docs.insert(doc);
    }
    if (universe == DocUniverse::kRetrievedPlusRelevant) {
      for (const auto& [doc, grade] : qrels.judgments(q)) {
        if (grade > 0) docs.insert(doc);
      }
    }
    for (const auto& doc : docs) {
      MatrixRow row;
      row.query_id = q;
      row.doc_id = doc;
      row.scores.resize(n);
      for (std::size_t j = 0; j < n; ++j) row.scores[j] = systems[j].score(q, doc);
      row.target = qrels.is_relevant(q, doc) ? 1 : 0;
      matrix.rows.push_back(std::move(row));
    }
  }
  return matrix;
}

double objective_g(const ScoreMatrix& matrix, const WeightVector& candidate) {
  if (candidate.weights.size() != matrix.num_systems()) {
    throw DimensionError("objective: " + std::to_string(candidate.weights.size()) +
                         " weights for " + std::to_string(matrix.num_systems()) + " systems");
  }
  check_row_widths(matrix);
  double g = 0.0;
  for (const auto& row : matrix.rows) {
    const double r = row.target - candidate.predict(row.scores);
    g += r * r;
  }
  return g;
}

WeightVector solve_ols(const ScoreMatrix& matrix, double ridge_epsilon) {
  if (matrix.rows.empty()) throw RegressionError("cannot fit weights on an empty matrix");
  if (ridge_epsilon < 0.0) throw InvalidArgument("ridge epsilon must be non-negative");
  check_row_widths(matrix);
  const std::size_t n = matrix.num_systems();
  const double rows = static_cast<double>(matrix.rows.size());

  WeightVector result;
  result.system_order = matrix.system_order;
  result.weights.assign(n, 0.0);

  const bool all_zero = std::all_of(matrix.rows.begin(), matrix.rows.end(),
                                    [](const MatrixRow& r) { return r.target == 0; });
  if (all_zero) {
    result.degenerate = true;
    result.rss = 0.0;
    return result;
  }

  std::vector<double> mean(n, 0.0);
  double mean_y = 0.0;
  for (const auto& row : matrix.rows) {
    for (std::size_t j = 0; j < n; ++j) mean[j] += row.scores[j];
    mean_y += row.target;
  }
  for (auto& m : mean) m /= rows;
  mean_y /= rows;

  std::vector<double> gram(n * n, 0.0);
  std::vector<double> rhs(n, 0.0);
  std::vector<double> centered(n);
  for (const auto& row : matrix.rows) {
    for (std::size_t j = 0; j < n; ++j) centered[j] = row.scores[j] - mean[j];
    const double cy = row.target - mean_y;
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] += centered[i] * cy;
      for (std::size_t k = 0; k <= i; ++k) gram[i * n + k] += centered[i] * centered[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) gram[k * n + i] = gram[i * n + k];
  }

  auto with_ridge = [&](double ridge) {
    auto a = gram;
    for (std::size_t j = 0; j < n; ++j) a[j * n + j] += ridge;
    return a;
  };

  std::optional<Factorization> factor;
  if (n > 0) {
    factor = cholesky(with_ridge(ridge_epsilon), n, /*strict=*/true);
    result.regularized = ridge_epsilon > 0.0;
    if (!factor) {
      const double ridge = std::max(ridge_epsilon, kFallbackRidge);
      factor = cholesky(with_ridge(ridge), n, /*strict=*/false);
      result.regularized = true;
      if (!factor) throw RegressionError("design matrix is singular even with ridge regularization");
    }
    result.weights = cholesky_solve(*factor, rhs);
    const auto [lo, hi] = std::minmax_element(factor->pivots.begin(), factor->pivots.end());
    result.condition = *hi / *lo;
  }

  result.intercept = mean_y;
  for (std::size_t j = 0; j < n; ++j) result.intercept -= result.weights[j] * mean[j];
  result.rss = objective_g(matrix, result);
  return result;
}

void write_weights_csv(const WeightVector& weights, std::ostream& out) {
  if (weights.system_order.size() != weights.weights.size()) {
    throw DimensionError("weights and system order differ in length");
  }
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "system,weight\n";
  for (std::size_t j = 0; j < weights.weights.size(); ++j) {
    out << weights.system_order[j] << ',' << fmt(weights.weights[j]) << '\n';
  }
  out << "__intercept__," << fmt(weights.intercept) << '\n';
  out << "__rss__," << fmt(weights.rss) << '\n';
}

WeightVector read_weights_csv(std::istream& in) {
  WeightVector weights;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "system,weight") throw ParseError(number, "expected header 'system,weight'");
      header = true;
      continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw ParseError(number, "expected 'system,weight'");
    const std::string name = line.substr(0, comma);
    const std::string_view text = std::string_view(line).substr(comma + 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError(number, "weight is not a number: '" + std::string(text) + "'");
    }
    if (name == "__intercept__") {
      weights.intercept = value;
    } else if (name == "__rss__") {
      weights.rss = value;
    } else {
      weights.system_order.push_back(name);
      weights.weights.push_back(value);
    }
  }
  if (!header) throw ParseError(number, "weights file is empty");
  return weights;
}

}  // namespace lcfuse
