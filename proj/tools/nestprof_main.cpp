// nestprof: mine nested inclusion and functional dependencies from
// collections of JSON documents.
//
// Exit codes: 0 success, 1 usage error, 2 input error, 3 resource limit.

#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nestprof/nestprof.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nestprof::Error("cannot open input file '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw nestprof::Error("cannot open output file '" + path + "'");
  out << text;
}

nestprof::MineAlgorithm parse_algorithm(const std::string& name) {
  if (name == "spider") return nestprof::MineAlgorithm::Spider;
  if (name == "demarchi") return nestprof::MineAlgorithm::DeMarchi;
  if (name == "tane") return nestprof::MineAlgorithm::Tane;
  if (name == "fdep") return nestprof::MineAlgorithm::Fdep;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

struct VerifyExpr {
  bool is_nfd = false;
  std::vector<nestprof::Path> lhs;
  nestprof::Path rhs;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

// "LHS < RHS" checks an inclusion dependency; "L1, L2 -> RHS" checks a
// functional dependency.
VerifyExpr parse_verify_expression(const std::string& text) {
  VerifyExpr expr;
  std::size_t arrow = text.find("->");
  std::string lhs_text;
  std::string rhs_text;
  if (arrow != std::string::npos) {
    expr.is_nfd = true;
    lhs_text = text.substr(0, arrow);
    rhs_text = text.substr(arrow + 2);
  } else {
    const std::size_t lt = text.find('<');
    if (lt == std::string::npos)
      throw std::invalid_argument(
          "dependency must look like '$.lhs < $.rhs' or '$.l1, $.l2 -> $.rhs'");
    lhs_text = text.substr(0, lt);
    rhs_text = text.substr(lt + 1);
  }
  std::stringstream lhs_stream(lhs_text);
  std::string part;
  while (std::getline(lhs_stream, part, ',')) {
    part = trim(part);
    if (!part.empty()) expr.lhs.push_back(nestprof::Path::parse(part));
  }
  if (expr.lhs.empty()) throw std::invalid_argument("dependency needs a left-hand side");
  if (!expr.is_nfd && expr.lhs.size() != 1)
    throw std::invalid_argument("inclusion dependencies take a single left-hand path");
  expr.rhs = nestprof::Path::parse(trim(rhs_text));
  return expr;
}

int run_mine(const std::string& input, const std::string& format_name,
             const std::string& kind_name, const std::string& algorithm_name,
             const std::string& unroll_name, const std::string& threshold_text,
             std::size_t max_lhs, int threads, bool timing, const std::string& output) {
  nestprof::MineOptions options;
  options.kind = kind_name == "ind" ? nestprof::MineKind::Ind : nestprof::MineKind::Fd;
  options.algorithm = parse_algorithm(algorithm_name);
  if (nestprof::algorithm_kind(options.algorithm) != options.kind)
    throw std::invalid_argument("algorithm '" + algorithm_name + "' does not mine '" +
                                kind_name + "' dependencies");
  options.unroll = unroll_name == "static" ? nestprof::UnrollMode::Static
                                           : nestprof::UnrollMode::Dynamic;
  options.threshold = nestprof::Rational::parse_decimal(threshold_text);
  nestprof::Threshold::checked(options.threshold);  // range check up front
  options.max_lhs = max_lhs;
  options.threads = threads;
  auto budget = nestprof::MemoryBudget::from_env();
  options.budget = budget.get();

  const nestprof::DocumentCollection collection = nestprof::parse_collection(
      read_input(input), nestprof::parse_input_format(format_name));
  const nestprof::MineResult result = nestprof::mine(collection, options);

  std::string text = nestprof::format_records(result.records);
  if (timing) {
    text += nestprof::format_timing(result.timing);
    text += '\n';
  }
  write_output(output, text);
  return kExitOk;
}

int run_verify(const std::string& input, const std::string& format_name,
               const std::string& expression) {
  const VerifyExpr expr = parse_verify_expression(expression);
  const nestprof::DocumentCollection collection = nestprof::parse_collection(
      read_input(input), nestprof::parse_input_format(format_name));
  if (collection.empty()) throw nestprof::MiningError("empty collection");

  std::string out = "{\"kind\":";
  if (!expr.is_nfd) {
    const auto check = nestprof::oracle::validate_nind(collection, expr.lhs[0], expr.rhs);
    out += "\"nind\",\"lhs\":[";
    nestprof::append_json_string(out, expr.lhs[0].serialize());
    out += "],\"rhs\":";
    nestprof::append_json_string(out, expr.rhs.serialize());
    out += ",\"valid\":";
    out += check.valid ? "true" : "false";
    out += ",\"strength\":";
    out += nestprof::format_fixed6(check.exact_strength.to_double());
    out += "}\n";
  } else {
    const bool valid = nestprof::oracle::validate_nfd(collection, expr.lhs, {expr.rhs});
    const nestprof::ViolationGraph graph =
        nestprof::oracle::nfd_violations(collection, expr.lhs, expr.rhs);
    std::set<nestprof::DocId> vertices;
    for (const auto& [a, b] : graph.edges()) {
      vertices.insert(a);
      vertices.insert(b);
    }
    const bool exact = vertices.size() <= 20;
    const std::size_t cover = exact ? nestprof::oracle::exact_min_vertex_cover(graph)
                                    : nestprof::greedy_vertex_cover(graph);
    const nestprof::Rational strength =
        nestprof::strength_from_cover(cover, collection.size());
    out += "\"nfd\",\"lhs\":[";
    bool first = true;
    for (const nestprof::Path& p : expr.lhs) {
      if (!first) out += ',';
      first = false;
      nestprof::append_json_string(out, p.serialize());
    }
    out += "],\"rhs\":";
    nestprof::append_json_string(out, expr.rhs.serialize());
    out += ",\"valid\":";
    out += valid ? "true" : "false";
    out += ",\"strength\":";
    out += nestprof::format_fixed6(strength.to_double());
    out += ",\"estimator\":";
    out += exact ? "\"exact\"" : "\"greedy\"";
    out += "}\n";
  }
  std::cout << out;
  return kExitOk;
}

int run_gen(const std::string& config_path, const std::string& output,
            std::uint64_t seed, bool seed_set, std::size_t docs, bool docs_set,
            double violation_rate, bool rate_set) {
  nestprof::GenSpec spec;
  if (!config_path.empty()) {
    const std::string text = read_input(config_path);
    spec = nestprof::gen_spec_from_json(nestprof::parse_json_text(text, 1));
  }
  if (seed_set) spec.seed = seed;
  if (docs_set) spec.n_docs = docs;
  if (rate_set) spec.violation_rate = violation_rate;
  const nestprof::DocumentCollection collection = nestprof::generate(spec);
  write_output(output, nestprof::write_json_lines(collection));
  return kExitOk;
}

struct BenchCell {
  double static_s = 0.0;
  double dynamic_s = 0.0;
};

int run_bench(const std::vector<std::size_t>& sizes, const std::string& algorithms_csv,
              std::size_t scalar_keys, std::size_t array_keys, std::size_t array_len,
              std::size_t domain, std::uint64_t seed, const std::string& threshold_text,
              int threads, const std::string& output) {
  std::vector<std::string> algorithms;
  std::stringstream names(algorithms_csv);
  std::string name;
  while (std::getline(names, name, ',')) {
    name = trim(name);
    if (!name.empty()) {
      parse_algorithm(name);  // validates
      algorithms.push_back(name);
    }
  }
  if (algorithms.empty()) throw std::invalid_argument("no algorithms selected");

  const nestprof::Rational threshold = nestprof::Rational::parse_decimal(threshold_text);
  nestprof::Threshold::checked(threshold);
  auto budget = nestprof::MemoryBudget::from_env();

  std::string table = "docs\texpansion";
  for (const std::string& a : algorithms)
    table += "\t" + a + "_static_s\t" + a + "_dynamic_s\t" + a + "_speedup";
  table += '\n';

  for (std::size_t size : sizes) {
    nestprof::GenSpec spec;
    spec.seed = seed;
    spec.n_docs = size;
    spec.n_scalar_keys = scalar_keys;
    spec.n_array_keys = array_keys;
    spec.array_len = array_len;
    spec.domain_size = domain;
    const nestprof::DocumentCollection collection = nestprof::generate(spec);

    table += std::to_string(size);
    table += '\t';
    table += nestprof::format_fixed6(nestprof::expansion_factor(collection));
    for (const std::string& a : algorithms) {
      BenchCell cell;
      for (const auto unroll :
           {nestprof::UnrollMode::Static, nestprof::UnrollMode::Dynamic}) {
        nestprof::MineOptions options;
        options.algorithm = parse_algorithm(a);
        options.kind = nestprof::algorithm_kind(options.algorithm);
        options.unroll = unroll;
        options.threshold = threshold;
        options.threads = threads;
        options.budget = budget.get();
        const nestprof::MineResult result = nestprof::mine(collection, options);
        const double seconds = result.timing.collect_s + result.timing.mine_s;
        (unroll == nestprof::UnrollMode::Static ? cell.static_s : cell.dynamic_s) = seconds;
      }
      table += '\t' + nestprof::format_fixed6(cell.static_s);
      table += '\t' + nestprof::format_fixed6(cell.dynamic_s);
      table += '\t' +
               (cell.dynamic_s > 0.0
                    ? nestprof::format_fixed6(cell.static_s / cell.dynamic_s) + "x"
                    : std::string("-"));
    }
    table += '\n';
  }
  write_output(output, table);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nestprof: nested dependency profiling for JSON collections"};
  app.require_subcommand(1);

  // mine
  auto* mine_cmd = app.add_subcommand("mine", "Mine dependencies from a collection");
  std::string mine_input;
  std::string mine_format = "json-lines";
  std::string mine_kind;
  std::string mine_algorithm;
  std::string mine_unroll = "dynamic";
  std::string mine_threshold = "0.99";
  std::size_t mine_max_lhs = 3;
  int mine_threads = 1;
  bool mine_timing = false;
  std::string mine_output;
  mine_cmd->add_option("--input", mine_input, "Input file ('-' for stdin)")->required();
  mine_cmd->add_option("--format", mine_format, "Input format")
      ->check(CLI::IsMember({"json-lines", "json-array"}));
  mine_cmd->add_option("--kind", mine_kind, "Dependency kind")
      ->required()
      ->check(CLI::IsMember({"ind", "fd"}));
  mine_cmd->add_option("--algorithm", mine_algorithm, "Mining algorithm")
      ->required()
      ->check(CLI::IsMember({"spider", "demarchi", "tane", "fdep"}));
  mine_cmd->add_option("--unroll", mine_unroll, "Unrolling strategy")
      ->check(CLI::IsMember({"static", "dynamic"}));
  mine_cmd->add_option("--threshold", mine_threshold,
                       "Strength threshold in (0, 1], default 0.99");
  mine_cmd->add_option("--max-lhs", mine_max_lhs,
                       "Maximum left-hand side size (fd only, default 3)")
      ->check(CLI::PositiveNumber);
  mine_cmd->add_option("--threads", mine_threads, "Worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  mine_cmd->add_flag("--timing", mine_timing, "Append a timing record");
  mine_cmd->add_option("--output", mine_output, "Output file (default stdout)");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "Check one dependency against a collection");
  std::string verify_input;
  std::string verify_format = "json-lines";
  std::string verify_expr;
  verify_cmd->add_option("--input", verify_input, "Input file ('-' for stdin)")->required();
  verify_cmd->add_option("--format", verify_format, "Input format")
      ->check(CLI::IsMember({"json-lines", "json-array"}));
  verify_cmd
      ->add_option("expression", verify_expr,
                   "'$.lhs < $.rhs' (inclusion) or '$.l1, $.l2 -> $.rhs' (functional)")
      ->required();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic collection");
  std::string gen_config;
  std::string gen_output;
  std::uint64_t gen_seed = 0;
  std::size_t gen_docs = 0;
  double gen_rate = 0.0;
  gen_cmd->add_option("--config", gen_config, "Generator config (JSON file)");
  auto* seed_opt = gen_cmd->add_option("--seed", gen_seed, "Override seed");
  auto* docs_opt = gen_cmd->add_option("--docs", gen_docs, "Override document count");
  auto* rate_opt =
      gen_cmd->add_option("--violation-rate", gen_rate, "Override violation rate");
  gen_cmd->add_option("--output", gen_output, "Output file (default stdout)");

  // bench
  auto* bench_cmd =
      app.add_subcommand("bench", "Time algorithms across unroll modes and sizes");
  std::vector<std::size_t> bench_sizes{1000};
  std::string bench_algorithms = "spider,demarchi";
  std::size_t bench_scalar = 2;
  std::size_t bench_arrays = 2;
  std::size_t bench_len = 10;
  std::size_t bench_domain = 1000;
  std::uint64_t bench_seed = 1;
  std::string bench_threshold = "0.99";
  int bench_threads = 1;
  std::string bench_output;
  bench_cmd->add_option("--sizes", bench_sizes, "Document counts to benchmark");
  bench_cmd->add_option("--algorithms", bench_algorithms, "Comma-separated algorithms");
  bench_cmd->add_option("--scalar-keys", bench_scalar, "Scalar fields per document");
  bench_cmd->add_option("--array-keys", bench_arrays, "Array fields per document");
  bench_cmd->add_option("--array-len", bench_len, "Array length");
  bench_cmd->add_option("--domain", bench_domain, "Value domain size");
  bench_cmd->add_option("--seed", bench_seed, "Generator seed");
  bench_cmd->add_option("--threshold", bench_threshold, "Strength threshold");
  bench_cmd->add_option("--threads", bench_threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--output", bench_output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (mine_cmd->parsed())
      return run_mine(mine_input, mine_format, mine_kind, mine_algorithm, mine_unroll,
                      mine_threshold, mine_max_lhs, mine_threads, mine_timing,
                      mine_output);
    if (verify_cmd->parsed()) return run_verify(verify_input, verify_format, verify_expr);
    if (gen_cmd->parsed())
      return run_gen(gen_config, gen_output, gen_seed, seed_opt->count() > 0, gen_docs,
                     docs_opt->count() > 0, gen_rate, rate_opt->count() > 0);
    if (bench_cmd->parsed())
      return run_bench(bench_sizes, bench_algorithms, bench_scalar, bench_arrays,
                       bench_len, bench_domain, bench_seed, bench_threshold,
                       bench_threads, bench_output);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nestprof::PathParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nestprof::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const nestprof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
