#include "lcfuse/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lcfuse/error.hpp"

namespace lcfuse {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

std::string format_score(double score, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, score);
  return buf;
}

// Smallest precision >= 6 under which adjacent distinct scores stay distinct.
int query_precision(const std::vector<RunEntry>& entries, std::size_t depth) {
  const std::size_t n = std::min(depth, entries.size());
  for (int precision = 6; precision < 17; ++precision) {
    bool ok = true;
    for (std::size_t i = 1; i < n && ok; ++i) {
      if (entries[i - 1].raw_score != entries[i].raw_score &&
          format_score(entries[i - 1].raw_score, precision) ==
              format_score(entries[i].raw_score, precision)) {
        ok = false;
      }
    }
    if (ok) return precision;
  }
  return 17;
}

template <typename F>
void for_each_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    f(std::string_view(line), number);
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

std::vector<std::string> RunList::query_ids() const {
  std::vector<std::string> ids;
  ids.reserve(queries.size());
  for (const auto& [q, entries] : queries) ids.push_back(q);
  return ids;
}

std::vector<std::string> RunList::ranked_docs(const std::string& query_id) const {
  std::vector<std::string> docs;
  auto it = queries.find(query_id);
  if (it == queries.end()) return docs;
  docs.reserve(it->second.size());
  for (const auto& e : it->second) docs.push_back(e.doc_id);
  return docs;
}

std::size_t RunList::size() const {
  std::size_t n = 0;
  for (const auto& [q, entries] : queries) n += entries.size();
  return n;
}

int Qrels::grade(const std::string& query_id, const std::string& doc_id) const {
  auto q = queries.find(query_id);
  if (q == queries.end()) return 0;
  auto d = q->second.find(doc_id);
  return d == q->second.end() ? 0 : d->second;
}

bool Qrels::is_relevant(const std::string& query_id, const std::string& doc_id) const {
  return grade(query_id, doc_id) > 0;
}

std::size_t Qrels::relevant_count(const std::string& query_id) const {
  auto q = queries.find(query_id);
  if (q == queries.end()) return 0;
  return static_cast<std::size_t>(std::count_if(
      q->second.begin(), q->second.end(), [](const auto& kv) { return kv.second > 0; }));
}

std::size_t Qrels::total_relevant() const {
  std::size_t n = 0;
  for (const auto& [q, j] : queries) n += relevant_count(q);
  return n;
}

std::vector<std::string> Qrels::query_ids() const {
  std::vector<std::string> ids;
  for (const auto& [q, j] : queries) ids.push_back(q);
  return ids;
}

const Judgments& Qrels::judgments(const std::string& query_id) const {
  static const Judgments empty;
  auto q = queries.find(query_id);
  return q == queries.end() ? empty : q->second;
}

RunEntry parse_run_line(std::string_view line, std::size_t line_number) {
  auto fields = split_fields(line);
  if (fields.size() != 6) {
    throw ParseError(line_number, "expected 6 fields in run line, found " +
                                      std::to_string(fields.size()));
  }
  RunEntry e;
  e.query_id = std::string(fields[0]);
  e.doc_id = std::string(fields[2]);
  if (!parse_number(fields[3], e.source_rank)) {
    throw ParseError(line_number, "rank field is not an integer: '" + std::string(fields[3]) + "'");
  }
  if (!parse_number(fields[4], e.raw_score) || !std::isfinite(e.raw_score)) {
    throw ParseError(line_number, "score field is not a finite number: '" +
                                      std::string(fields[4]) + "'");
  }
  e.run_tag = std::string(fields[5]);
  e.rank = e.source_rank >= 1 ? static_cast<int>(e.source_rank) : 1;
  return e;
}

void canonicalize(RunList& run) {
  for (auto& [q, entries] : run.queries) {
    std::sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) {
      if (a.raw_score != b.raw_score) return a.raw_score > b.raw_score;
      return a.doc_id < b.doc_id;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = static_cast<int>(i + 1);
  }
}

RunList parse_run(std::istream& in) {
  RunList run;
  bool have_tag = false;
  std::map<std::string, std::set<std::string>> seen;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    RunEntry e = parse_run_line(line, number);
    if (!have_tag) {
      run.run_tag = e.run_tag;
      have_tag = true;
    } else if (e.run_tag != run.run_tag) {
      throw InconsistencyError(number, "run tag '" + e.run_tag + "' differs from '" +
                                           run.run_tag + "'");
    }
    if (!seen[e.query_id].insert(e.doc_id).second) {
      throw DuplicateError(number, "duplicate document " + e.doc_id + " for query " + e.query_id);
    }
    run.queries[e.query_id].push_back(std::move(e));
  });
  canonicalize(run);
  return run;
}

RunList parse_run_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_run(in);
}

RunList read_run_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return parse_run(in);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_run(const RunList& run, std::ostream& out, std::size_t depth) {
  if (run.run_tag.empty() && run.size() > 0) throw InvalidArgument("cannot write a run without a tag");
  for (const auto& [q, entries] : run.queries) {
    const int precision = query_precision(entries, depth);
    const std::size_t n = std::min(depth, entries.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = entries[i];
      out << q << " Q0 " << e.doc_id << ' ' << e.rank << ' '
          << format_score(e.raw_score, precision) << ' ' << run.run_tag << '\n';
    }
  }
}

std::string write_run_string(const RunList& run, std::size_t depth) {
  std::ostringstream out;
  write_run(run, out, depth);
  return out.str();
}

void write_run_file(const RunList& run, const std::string& path, std::size_t depth) {
  auto out = open_output(path);
  write_run(run, out, depth);
}

Qrels parse_qrels(std::istream& in) {
  Qrels qrels;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw ParseError(number, "expected 4 fields in qrels line, found " +
                                   std::to_string(fields.size()));
    }
    int grade = 0;
    if (!parse_number(fields[3], grade) || grade < 0) {
      throw ParseError(number, "grade field is not a non-negative integer: '" +
                                   std::string(fields[3]) + "'");
    }
    auto& judgments = qrels.queries[std::string(fields[0])];
    auto [it, inserted] = judgments.emplace(std::string(fields[2]), grade);
    if (!inserted) {
      if (it->second != grade) {
        throw ConflictError(number, "conflicting grades for document " + it->first +
                                        " in query " + std::string(fields[0]));
      }
      ++qrels.duplicate_lines;
    }
  });
  return qrels;
}

Qrels parse_qrels_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_qrels(in);
}

Qrels read_qrels_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return parse_qrels(in);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_qrels(const Qrels& qrels, std::ostream& out) {
  for (const auto& [q, judgments] : qrels.queries) {
    for (const auto& [doc, grade] : judgments) out << q << " 0 " << doc << ' ' << grade << '\n';
  }
}

std::string write_qrels_string(const Qrels& qrels) {
  std::ostringstream out;
  write_qrels(qrels, out);
  return out.str();
}

void write_qrels_file(const Qrels& qrels, const std::string& path) {
  auto out = open_output(path);
  write_qrels(qrels, out);
}

RunList restrict_queries(const RunList& run, const std::vector<std::string>& query_ids) {
  RunList out;
  out.run_tag = run.run_tag;
  for (const auto& q : query_ids) {
    auto it = run.queries.find(q);
    if (it != run.queries.end()) out.queries.emplace(q, it->second);
  }
  return out;
}

std::vector<std::string> natural_sort(std::vector<std::string> ids) {
  const bool numeric = std::all_of(ids.begin(), ids.end(), [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  });
  if (numeric) {
    std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
      auto strip = [](const std::string& s) {
        auto p = s.find_first_not_of('0');
        return p == std::string::npos ? std::string_view("") : std::string_view(s).substr(p);
      };
      auto sa = strip(a), sb = strip(b);
      if (sa.size() != sb.size()) return sa.size() < sb.size();
      if (sa != sb) return sa < sb;
      return a < b;
    });
  } else {
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

std::vector<std::string> all_query_ids(const std::vector<RunList>& runs) {
  std::set<std::string> ids;
  for (const auto& run : runs) {
    for (const auto& [q, entries] : run.queries) ids.insert(q);
  }
  return natural_sort({ids.begin(), ids.end()});
}

}  // namespace lcfuse
