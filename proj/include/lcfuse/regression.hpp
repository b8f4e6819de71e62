#pragma once

// Least-squares training of linear-combination weights.
//
// Each training row pairs the n system scores of one (query, doc) with its
// binary relevance y. The weights minimize
//
//   G = sum over rows of (y - intercept - sum_j weight_j * score_j)^2.

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lcfuse/corpus_io.hpp"
#include "lcfuse/fusion.hpp"

namespace lcfuse {

enum class DocUniverse {
  /// Docs retrieved by at least one system for the query.
  kRetrievedUnion,
  /// The retrieved union plus judged-relevant docs no system retrieved
  /// (those rows have all-zero scores).
  kRetrievedPlusRelevant,
};

struct MatrixRow {
  std::string query_id;
  std::string doc_id;
  std::vector<double> scores;
  int target = 0;  // 0 or 1
};

struct ScoreMatrix {
  std::vector<std::string> system_order;
  std::vector<MatrixRow> rows;

  std::size_t num_systems() const { return system_order.size(); }
};

struct WeightVector {
  double intercept = 0.0;
  std::vector<double> weights;
  std::vector<std::string> system_order;
  /// G at this solution on the training matrix.
  double rss = 0.0;
  /// Ratio of the largest to the smallest Cholesky pivot; 1 when n <= 1.
  double condition = 1.0;
  bool regularized = false;
  /// The training targets were all zero; the solution is the zero vector.
  bool degenerate = false;

  double predict(const std::vector<double>& scores) const;
};

/// One row per (query, doc) in the doc universe of each training query.
/// Missing scores are 0; the target is the binarized grade (unjudged -> 0).
ScoreMatrix assemble_matrix(const std::vector<ScoredList>& systems, const Qrels& qrels,
                            const std::vector<std::string>& queries,
                            DocUniverse universe = DocUniverse::kRetrievedUnion);

inline constexpr double kFallbackRidge = 1e-8;

/// Minimizes G through the normal equations on centered columns, factored
/// by Cholesky. `ridge_epsilon` is added to the diagonal (never to the
/// intercept). A rank-deficient design is retried with kFallbackRidge and the
/// result is flagged as regularized.
WeightVector solve_ols(const ScoreMatrix& matrix, double ridge_epsilon = 0.0);

/// G for an arbitrary candidate. Throws DimensionError on a size mismatch.
double objective_g(const ScoreMatrix& matrix, const WeightVector& candidate);

/// CSV: `system,weight` header, one row per system, then `__intercept__` and
/// `__rss__` rows.
void write_weights_csv(const WeightVector& weights, std::ostream& out);
WeightVector read_weights_csv(std::istream& in);

}  // namespace lcfuse
