#pragma once

// TREC run and qrels files and the in-memory model built from them.
//
// Run files:   <query_id> <iter> <doc_id> <rank> <score> <tag>
// Qrels files: <query_id> <iter> <doc_id> <grade>

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lcfuse {

inline constexpr std::size_t kDefaultRunDepth = 1000;

struct RunEntry {
  std::string query_id;
  std::string doc_id;
  int rank = 1;  // canonical, dense 1..L within the query
  double raw_score = 0.0;
  std::string run_tag;
  long source_rank = 0;  // rank column as read from the file; diagnostics only

  // source_rank is not part of the identity.
  bool operator==(const RunEntry& o) const {
    return query_id == o.query_id && doc_id == o.doc_id && rank == o.rank &&
           raw_score == o.raw_score && run_tag == o.run_tag;
  }
};

/// One system's ranked output. Per query, entries are sorted by score
/// descending with doc_id ascending as the tie-break, and ranks are 1..L.
struct RunList {
  std::string run_tag;
  std::map<std::string, std::vector<RunEntry>> queries;

  std::vector<std::string> query_ids() const;
  /// Doc ids of `query_id` in rank order; empty if the query is absent.
  std::vector<std::string> ranked_docs(const std::string& query_id) const;
  std::size_t size() const;

  bool operator==(const RunList&) const = default;
};

/// doc_id -> grade for a single query.
using Judgments = std::map<std::string, int>;

/// Relevance judgments. A grade > 0 counts as relevant.
struct Qrels {
  std::map<std::string, Judgments> queries;
  /// Repeated (query, doc) lines that carried the same grade.
  std::size_t duplicate_lines = 0;

  /// Grade of the pair, 0 when unjudged.
  int grade(const std::string& query_id, const std::string& doc_id) const;
  bool is_relevant(const std::string& query_id, const std::string& doc_id) const;
  /// R(q): number of docs with grade > 0.
  std::size_t relevant_count(const std::string& query_id) const;
  std::size_t total_relevant() const;
  std::vector<std::string> query_ids() const;
  const Judgments& judgments(const std::string& query_id) const;

  bool operator==(const Qrels& other) const { return queries == other.queries; }
};

/// Parses one run line. Throws ParseError naming the bad field.
RunEntry parse_run_line(std::string_view line, std::size_t line_number);

/// Parses and canonicalizes a run. Throws ParseError, DuplicateError or
/// InconsistencyError.
RunList parse_run(std::istream& in);
RunList parse_run_string(std::string_view text);
RunList read_run_file(const std::string& path);

/// Re-sorts every query by score (descending, doc_id ascending on ties) and
/// rewrites ranks densely. Idempotent.
void canonicalize(RunList& run);

/// Writes the top `depth` entries per query. Scores are printed with six
/// significant digits, widened per query only where six digits would merge
/// two distinct adjacent scores.
void write_run(const RunList& run, std::ostream& out, std::size_t depth = kDefaultRunDepth);
std::string write_run_string(const RunList& run, std::size_t depth = kDefaultRunDepth);
void write_run_file(const RunList& run, const std::string& path,
                    std::size_t depth = kDefaultRunDepth);

Qrels parse_qrels(std::istream& in);
Qrels parse_qrels_string(std::string_view text);
Qrels read_qrels_file(const std::string& path);

/// Writes "<q> 0 <doc> <grade>" lines sorted by (query_id, doc_id).
void write_qrels(const Qrels& qrels, std::ostream& out);
std::string write_qrels_string(const Qrels& qrels);
void write_qrels_file(const Qrels& qrels, const std::string& path);

/// Copy of `run` keeping only the listed queries.
RunList restrict_queries(const RunList& run, const std::vector<std::string>& query_ids);

/// Orders ids numerically when every id is an unsigned integer, otherwise
/// lexicographically.
std::vector<std::string> natural_sort(std::vector<std::string> ids);

/// Union of the query ids of all runs, naturally sorted.
std::vector<std::string> all_query_ids(const std::vector<RunList>& runs);

}  // namespace lcfuse
