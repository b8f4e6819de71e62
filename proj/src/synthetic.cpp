#include "lcfuse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "lcfuse/error.hpp"

namespace lcfuse {

namespace {

// mt19937_64 output is fixed by the standard; the std distributions are not,
// so the conversions below are done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in the open interval (0, 1).
  double open01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform in [0, n).
  std::size_t index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

 private:
  std::mt19937_64 engine_;
};

std::string padded(const char* prefix, std::size_t value, std::size_t max_value) {
  const int width = static_cast<int>(std::to_string(max_value).size());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, value);
  return buf;
}

}  // namespace

std::vector<double> effective_quality(const SyntheticConfig& config) {
  if (!config.quality.empty()) return config.quality;
  std::vector<double> quality(config.num_systems);
  for (std::size_t j = 0; j < config.num_systems; ++j) {
    quality[j] = config.num_systems == 1
                     ? 0.9
                     : 0.9 - 0.6 * static_cast<double>(j) / static_cast<double>(config.num_systems - 1);
  }
  return quality;
}

SyntheticData generate_synthetic(const SyntheticConfig& config) {
  if (config.num_queries == 0 || config.num_systems == 0 || config.docs_per_query == 0 ||
      config.relevant_per_query == 0) {
    throw InvalidArgument("synthetic counts must all be positive");
  }
  if (config.relevant_per_query > config.docs_per_query) {
    throw InvalidArgument("relevant_per_query exceeds docs_per_query");
  }
  const std::size_t list_length = config.list_length == 0 ? config.docs_per_query : config.list_length;
  if (list_length > config.docs_per_query) throw InvalidArgument("list_length exceeds docs_per_query");
  const auto quality = effective_quality(config);
  if (quality.size() != config.num_systems) {
    throw InvalidArgument("quality profile needs one value per system");
  }
  for (double q : quality) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("system quality must lie in [0, 1]");
  }

  Rng rng(config.seed);
  SyntheticData data;
  data.runs.resize(config.num_systems);
  for (std::size_t j = 0; j < config.num_systems; ++j) {
    data.runs[j].run_tag = padded("sys", j + 1, config.num_systems);
  }

  const std::size_t n_docs = config.docs_per_query;
  std::vector<std::size_t> order(n_docs);
  std::vector<double> keys(n_docs);
  for (std::size_t qi = 0; qi < config.num_queries; ++qi) {
    const std::string query_id = std::to_string(qi + 1);
    std::vector<std::string> doc_ids(n_docs);
    for (std::size_t k = 0; k < n_docs; ++k) {
      doc_ids[k] = "q" + query_id + "-" + padded("d", k + 1, n_docs);
    }

    // Partial Fisher-Yates picks the relevant set.
    std::vector<std::size_t> pick(n_docs);
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<int> grade(n_docs, 0);
    for (std::size_t r = 0; r < config.relevant_per_query; ++r) {
      std::swap(pick[r], pick[r + rng.index(n_docs - r)]);
      grade[pick[r]] = rng.open01() < 0.3 ? 2 : 1;
    }

    auto& judgments = data.qrels.queries[query_id];
    for (std::size_t k = 0; k < n_docs; ++k) {
      if (grade[k] > 0) judgments.emplace(doc_ids[k], grade[k]);
    }

    for (std::size_t j = 0; j < config.num_systems; ++j) {
      const double q = quality[j];
      const double boost = q < 1.0 ? 1.0 / (1.0 - q) : 0.0;
      // Efraimidis-Spirakis keys: log(u) / weight, largest drawn first.
      for (std::size_t k = 0; k < n_docs; ++k) {
        const double u = rng.open01();
        if (q >= 1.0) {
          keys[k] = grade[k] > 0 ? 1.0 + u : u;
        } else {
          keys[k] = std::log(u) / (grade[k] > 0 ? boost : 1.0);
        }
      }
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
      auto& entries = data.runs[j].queries[query_id];
      entries.reserve(list_length);
      for (std::size_t r = 0; r < list_length; ++r) {
        RunEntry e;
        e.query_id = query_id;
        e.doc_id = doc_ids[order[r]];
        e.rank = static_cast<int>(r + 1);
        e.source_rank = e.rank;
        e.raw_score = static_cast<double>(list_length - r);
        e.run_tag = data.runs[j].run_tag;
        entries.push_back(std::move(e));
        if (r < config.judged_depth) judgments.emplace(doc_ids[order[r]], 0);
      }
    }
  }
  for (auto& run : data.runs) canonicalize(run);
  return data;
}

}  // namespace lcfuse
