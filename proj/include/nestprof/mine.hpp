#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nestprof/fd_mining.hpp"
#include "nestprof/ind_mining.hpp"
#include "nestprof/json_write.hpp"
#include "nestprof/memory_budget.hpp"
#include "nestprof/rational.hpp"
#include "nestprof/unroll.hpp"

namespace nestprof {

enum class MineKind { Ind, Fd };
enum class MineAlgorithm { Spider, DeMarchi, Tane, Fdep };
enum class UnrollMode { Static, Dynamic };

inline MineKind algorithm_kind(MineAlgorithm algorithm) {
  switch (algorithm) {
    case MineAlgorithm::Spider:
    case MineAlgorithm::DeMarchi:
      return MineKind::Ind;
    default:
      return MineKind::Fd;
  }
}

struct MineOptions {
  MineKind kind = MineKind::Ind;
  MineAlgorithm algorithm = MineAlgorithm::Spider;
  UnrollMode unroll = UnrollMode::Dynamic;
  Rational threshold{99, 100};
  std::size_t max_lhs = 3;
  int threads = 1;
  MemoryBudget* budget = nullptr;
};

/// One mined dependency, paths in serialized form, ready for output.
struct DependencyRecord {
  std::string kind;              // "nind" or "nfd"
  std::vector<std::string> lhs;  // sorted serialized paths
  std::string rhs;
  Rational strength;
  bool satisfied = false;

  friend bool operator==(const DependencyRecord& a, const DependencyRecord& b) {
    return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs &&
           a.strength == b.strength && a.satisfied == b.satisfied;
  }
};

struct MineTiming {
  double collect_s = 0.0;
  double mine_s = 0.0;
  std::uint64_t rows_processed = 0;  // flat rows (static) or update calls (dynamic)
  double expansion_factor = 0.0;
};

struct MineResult {
  std::vector<DependencyRecord> records;
  MineTiming timing;
};

namespace detail {

inline DependencyRecord record_of(const Nind& dep) {
  return DependencyRecord{"nind",
                          {dep.lhs.serialize()},
                          dep.rhs.serialize(),
                          dep.strength,
                          dep.satisfied};
}

inline DependencyRecord record_of(const Nfd& dep) {
  DependencyRecord rec;
  rec.kind = "nfd";
  for (const Path& p : dep.lhs) rec.lhs.push_back(p.serialize());
  rec.rhs = dep.rhs.serialize();
  rec.strength = dep.strength;
  rec.satisfied = dep.satisfied;
  return rec;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Runs one mining configuration end to end: unroll (static or dynamic),
/// collect algorithm metadata, then validate dependencies. Output is
/// sorted by serialized (lhs, rhs) and is byte-identical regardless of
/// the worker count.
inline MineResult mine(const DocumentCollection& collection, const MineOptions& options) {
  if (algorithm_kind(options.algorithm) != options.kind)
    throw std::invalid_argument("algorithm does not mine this dependency kind");
  const Threshold threshold = Threshold::checked(options.threshold);
  if (collection.empty()) throw MiningError("empty collection");

  MineResult result;
  result.timing.expansion_factor = expansion_factor(collection);

  const bool is_static = options.unroll == UnrollMode::Static;
  detail::Stopwatch watch;

  auto finish = [&](auto&& deps) {
    for (const auto& dep : deps) result.records.push_back(detail::record_of(dep));
    result.timing.mine_s = watch.lap();
  };

  switch (options.algorithm) {
    case MineAlgorithm::Spider: {
      SpiderMeta meta;
      if (is_static) {
        const FlatTable table = static_unroll(collection, options.threads, options.budget);
        result.timing.rows_processed = table.rows().size();
        meta = spider_collect(table, options.budget);
      } else {
        std::uint64_t updates = 0;
        meta = collect_dynamic<SpiderSink>(collection, options.threads, options.budget,
                                           &updates)
                   .freeze();
        result.timing.rows_processed = updates;
      }
      result.timing.collect_s = watch.lap();
      finish(spider_mine(meta, threshold));
      break;
    }
    case MineAlgorithm::DeMarchi: {
      DeMarchiMeta meta;
      if (is_static) {
        const FlatTable table = static_unroll(collection, options.threads, options.budget);
        result.timing.rows_processed = table.rows().size();
        meta = demarchi_collect(table, options.budget);
      } else {
        std::uint64_t updates = 0;
        meta = collect_dynamic<DeMarchiSink>(collection, options.threads, options.budget,
                                             &updates)
                   .take_meta();
        result.timing.rows_processed = updates;
      }
      result.timing.collect_s = watch.lap();
      finish(demarchi_mine(meta, threshold));
      break;
    }
    case MineAlgorithm::Tane: {
      TaneSink sink(options.budget);
      if (is_static) {
        const FlatTable table = static_unroll(collection, options.threads, options.budget);
        result.timing.rows_processed = table.rows().size();
        table.feed(sink);
      } else {
        std::uint64_t updates = 0;
        sink = collect_dynamic<TaneSink>(collection, options.threads, options.budget,
                                         &updates);
        result.timing.rows_processed = updates;
      }
      result.timing.collect_s = watch.lap();
      const auto adjacency =
          build_adjacency(sink, collection.size(), options.threads, options.budget);
      finish(tane_mine(adjacency, collection.size(), threshold, options.max_lhs));
      break;
    }
    case MineAlgorithm::Fdep: {
      FdepSink sink(options.budget);
      if (is_static) {
        const FlatTable table = static_unroll(collection, options.threads, options.budget);
        result.timing.rows_processed = table.rows().size();
        table.feed(sink);
      } else {
        std::uint64_t updates = 0;
        sink = collect_dynamic<FdepSink>(collection, options.threads, options.budget,
                                         &updates);
        result.timing.rows_processed = updates;
      }
      result.timing.collect_s = watch.lap();
      finish(fdep_mine(sink, collection.size(), threshold, options.max_lhs,
                       options.threads, options.budget));
      break;
    }
  }
  return result;
}

/// Fixed-width decimal used everywhere a strength or timing value is
/// printed, so outputs diff cleanly.
inline std::string format_fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

/// One dependency as a single JSON line.
inline std::string format_record(const DependencyRecord& record) {
  std::string out = "{\"kind\":";
  append_json_string(out, record.kind);
  out += ",\"lhs\":[";
  for (std::size_t i = 0; i < record.lhs.size(); ++i) {
    if (i) out += ',';
    append_json_string(out, record.lhs[i]);
  }
  out += "],\"rhs\":";
  append_json_string(out, record.rhs);
  out += ",\"strength\":";
  out += format_fixed6(record.strength.to_double());
  out += ",\"satisfied\":";
  out += record.satisfied ? "true" : "false";
  out += '}';
  return out;
}

inline std::string format_records(const std::vector<DependencyRecord>& records) {
  std::string out;
  for (const DependencyRecord& r : records) {
    out += format_record(r);
    out += '\n';
  }
  return out;
}

inline std::string format_timing(const MineTiming& timing) {
  std::string out = "{\"phase_collect_s\":";
  out += format_fixed6(timing.collect_s);
  out += ",\"phase_mine_s\":";
  out += format_fixed6(timing.mine_s);
  out += ",\"rows_processed\":";
  out += std::to_string(timing.rows_processed);
  out += ",\"expansion_factor\":";
  out += format_fixed6(timing.expansion_factor);
  out += '}';
  return out;
}

}  // namespace nestprof
