// gt-designer: command line front end for the group testing designs.
//
// Exit codes: 0 success, 1 runtime or file error, 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gtdesign/bounds.hpp"
#include "gtdesign/core.hpp"
#include "gtdesign/eval.hpp"
#include "gtdesign/nested.hpp"
#include "gtdesign/partition.hpp"
#include "gtdesign/report.hpp"
#include "gtdesign/robustness.hpp"
#include "gtdesign/size_opt.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 12345;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::string format = "text";
  int precision = gtd::kDefaultSignificantDigits;
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--precision", out.precision, "Significant digits for text and CSV numbers")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
}

const CLI::Validator kOpenUnit(
    [](std::string& input) -> std::string {
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(input, &used);
        if (used != input.size()) return "not a decimal number: " + input;
      } catch (const std::exception&) {
        return "not a decimal number: " + input;
      }
      if (!(value > 0.0 && value < 1.0)) return "value must lie in the open interval (0, 1)";
      return {};
    },
    "(0,1)");

// Ordered key/value report printed as "key: value" lines, one CSV row, or a
// JSON object.
class Record {
 public:
  Record& add(std::string key, json value) {
    fields_.emplace_back(std::move(key), std::move(value));
    return *this;
  }

  std::string render(const OutputOptions& out) const {
    const auto format = gtd::parse_format(out.format);
    std::ostringstream s;
    if (format == gtd::ReportFormat::JSON) {
      json doc = json::object();
      for (const auto& [key, value] : fields_) doc[key] = value;
      s << doc.dump(2) << '\n';
      return s.str();
    }
    if (format == gtd::ReportFormat::CSV) {
      for (std::size_t i = 0; i < fields_.size(); ++i) s << (i ? "," : "") << fields_[i].first;
      s << '\n';
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        s << (i ? "," : "") << csv(text(fields_[i].second, out.precision));
      }
      s << '\n';
      return s.str();
    }
    for (const auto& [key, value] : fields_) s << key << ": " << text(value, out.precision) << '\n';
    return s.str();
  }

 private:
  static std::string text(const json& value, int precision) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_float()) return gtd::format_number(value.get<double>(), precision);
    if (value.is_null()) return "n/a";
    return value.dump();
  }

  static std::string csv(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char c : cell) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }

  std::vector<std::pair<std::string, json>> fields_;
};

gtd::ProcedureKind parse_kind(const std::string& name) {
  try {
    return gtd::parse_procedure(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GT_DESIGNER_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used, 0);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return value;
    } catch (const std::exception&) {
      throw UsageError(std::string("GT_DESIGNER_SEED is not an unsigned integer: ") + env);
    }
  }
  return kDefaultSeed;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(token, &used);
      if (used != token.size() || value < 1) throw std::invalid_argument(token);
      sizes.push_back(value);
    } catch (const std::exception&) {
      throw UsageError("--sizes expects comma-separated positive integers, got '" + text + "'");
    }
  }
  if (sizes.empty()) throw UsageError("--sizes is empty");
  return sizes;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw gtd::SchemaError(path + ": invalid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out.flush()) throw std::runtime_error("cannot write " + path);
}

std::string aligned_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::ostringstream s;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        s << row[i] << std::string(widths[i] - row[i].size(), ' ');
      } else {
        s << ' ' << std::string(widths[i] - row[i].size(), ' ') << row[i];
      }
    }
    s << '\n';
  }
  return s.str();
}

// Decision table with the largest set size first, then the value tables.
std::string decision_table(const gtd::NestedPolicy& policy, int precision) {
  std::vector<std::vector<std::string>> decisions{{"n"}, {"x_H"}, {"x_G"}};
  std::vector<std::vector<std::string>> values{{"n"}, {"H1"}, {"F1*"}};
  for (int n = policy.N; n >= 2; --n) {
    decisions[0].push_back(std::to_string(n));
    decisions[1].push_back(std::to_string(policy.x_H[n]));
    decisions[2].push_back(std::to_string(policy.x_G[n]));
    values[0].push_back(std::to_string(n));
    values[1].push_back(gtd::format_number(policy.H1[n], precision));
    values[2].push_back(gtd::format_number(policy.F1star[n], precision));
  }
  if (decisions[0].size() == 1) return {};
  return aligned_rows(decisions) + "\n" + aligned_rows(values);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal group testing designs: pool sizes, partitions and nested policies"};
  app.require_subcommand(1);

  // optimal-size
  auto* size_cmd = app.add_subcommand("optimal-size", "Optimal common group size for an infinite population");
  std::string size_proc;
  double size_p = 0.0;
  OutputOptions size_out;
  size_cmd->add_option("--procedure", size_proc, "D, Dprime or S")->required();
  size_cmd->add_option("--p", size_p, "Prevalence")->required()->check(kOpenUnit);
  add_output_options(size_cmd, size_out);

  // partition
  auto* part_cmd = app.add_subcommand("partition", "Optimal partition of N units into pools");
  std::string part_proc;
  int part_N = 0;
  double part_p = 0.0;
  std::string part_method = "dp";
  OutputOptions part_out;
  part_cmd->add_option("--procedure", part_proc, "D, Dprime or S")->required();
  part_cmd->add_option("--N", part_N, "Population size")->required()->check(CLI::PositiveNumber);
  part_cmd->add_option("--p", part_p, "Prevalence")->required()->check(kOpenUnit);
  part_cmd->add_option("--method", part_method, "dp (exact) or direct (two-candidate construction)")
      ->check(CLI::IsMember({"dp", "direct"}))
      ->capture_default_str();
  add_output_options(part_cmd, part_out);

  // nested
  auto* nested_cmd = app.add_subcommand("nested", "Optimal nested procedure R1");
  int nested_N = 0;
  double nested_p = 0.0;
  bool nested_verbose = false;
  std::string nested_policy_out;
  OutputOptions nested_out;
  nested_cmd->add_option("--N", nested_N, "Population size")->required()->check(CLI::PositiveNumber);
  nested_cmd->add_option("--p", nested_p, "Prevalence")->required()->check(kOpenUnit);
  nested_cmd->add_flag("--verbose", nested_verbose, "Print the decision table");
  nested_cmd->add_option("--policy-out", nested_policy_out, "Write the policy as JSON");
  add_output_options(nested_cmd, nested_out);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Expected tests of a saved policy at another prevalence");
  std::string eval_policy;
  double eval_p_true = 0.0;
  OutputOptions eval_out;
  eval_cmd->add_option("--policy", eval_policy, "Policy JSON file")->required();
  eval_cmd->add_option("--p-true", eval_p_true, "True prevalence")->required()->check(kOpenUnit);
  add_output_options(eval_cmd, eval_out);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the expected number of tests");
  std::string sim_proc;
  int sim_N = 0;
  double sim_p = 0.0;
  std::size_t sim_replicates = 100000;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_sizes;
  OutputOptions sim_out;
  sim_cmd->add_option("--procedure", sim_proc, "D, Dprime, S or R1")->required();
  sim_cmd->add_option("--N", sim_N, "Population size")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--p", sim_p, "Prevalence")->required()->check(kOpenUnit);
  sim_cmd->add_option("--replicates", sim_replicates, "Number of replicates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "Seed (default: GT_DESIGNER_SEED, else 12345)");
  sim_cmd->add_option("--sizes", sim_sizes, "Pool sizes, e.g. 7,6 (default: optimal partition)");
  add_output_options(sim_cmd, sim_out);

  // table
  auto* table_cmd = app.add_subcommand("table", "Regenerate a reference table");
  int table_which = 1;
  std::optional<double> table_U;
  int table_N = 100;
  double table_step = 1e-4;
  bool table_grid_only = false;
  std::string table_method = "direct";
  OutputOptions table_out;
  table_cmd->add_option("--which", table_which, "1, 2 or 3")->required()->check(CLI::IsMember({1, 2, 3}));
  table_cmd->add_option("--U", table_U, "Prevalence upper bound (table 3)")->check(kOpenUnit);
  table_cmd->add_option("--N", table_N, "Population size (tables 2 and 3)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  table_cmd->add_option("--grid-step", table_step, "Prevalence grid step (table 3)")->capture_default_str();
  table_cmd->add_flag("--grid-only", table_grid_only, "Drop the p -> 0 limit from the minimax supremum");
  table_cmd->add_option("--method", table_method, "Partition method for table 2")
      ->check(CLI::IsMember({"dp", "direct"}))
      ->capture_default_str();
  add_output_options(table_cmd, table_out);

  // minimax
  auto* mm_cmd = app.add_subcommand("minimax", "Minimax-regret group size when p <= U");
  std::string mm_proc;
  double mm_U = 0.0;
  double mm_step = 1e-4;
  bool mm_grid_only = false;
  OutputOptions mm_out;
  mm_cmd->add_option("--procedure", mm_proc, "D, Dprime or S")->required();
  mm_cmd->add_option("--U", mm_U, "Prevalence upper bound")->required()->check(kOpenUnit);
  mm_cmd->add_option("--grid-step", mm_step, "Prevalence grid step")->capture_default_str();
  mm_cmd->add_flag("--grid-only", mm_grid_only, "Drop the p -> 0 limit from the supremum");
  add_output_options(mm_cmd, mm_out);

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "Information lower bounds for N units");
  int bound_N = 0;
  double bound_p = 0.0;
  OutputOptions bound_out;
  bound_cmd->add_option("--N", bound_N, "Population size")->required()->check(CLI::PositiveNumber);
  bound_cmd->add_option("--p", bound_p, "Prevalence")->required()->check(kOpenUnit);
  add_output_options(bound_cmd, bound_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (size_cmd->parsed()) {
      const auto kind = parse_kind(size_proc);
      gtd::require_fixed_size_procedure(kind);
      const auto result = gtd::optimal_size(kind, gtd::Prevalence(size_p));
      Record r;
      r.add("procedure", std::string(gtd::to_string(kind)))
          .add("p", size_p)
          .add("k_star", result.k_star);
      if (result.co_optimal) r.add("co_optimal", *result.co_optimal);
      r.add("cost_per_person", result.cost_per_person).add("cost_per_100", 100.0 * result.cost_per_person);
      std::cout << r.render(size_out);
    } else if (part_cmd->parsed()) {
      const auto kind = parse_kind(part_proc);
      gtd::require_fixed_size_procedure(kind);
      const gtd::Prevalence prev(part_p);
      Record r;
      gtd::Partition partition;
      if (part_method == "direct") {
        const auto direct = gtd::optimal_partition_direct(kind, part_N, prev);
        partition = direct.best();
        r.add("a", direct.a).add("s", direct.s).add("theta", direct.theta);
        r.add("option_i", gtd::format_group_counts(direct.option_i.sizes))
            .add("option_i_tests", direct.option_i.total_expected_tests)
            .add("option_ii", gtd::format_group_counts(direct.option_ii.sizes))
            .add("option_ii_tests", direct.option_ii.total_expected_tests)
            .add("chosen", direct.chosen == gtd::DirectConstruction::Choice::OptionI ? "i" : "ii");
      } else {
        partition = gtd::optimal_partition_dp(kind, part_N, prev);
      }
      if (gtd::parse_format(part_out.format) == gtd::ReportFormat::JSON) {
        json doc = gtd::partition_to_json(partition);
        doc["method"] = part_method;
        std::cout << doc.dump(2) << '\n';
      } else {
        Record head;
        head.add("procedure", std::string(gtd::to_string(kind)))
            .add("N", part_N)
            .add("p", part_p)
            .add("method", part_method)
            .add("partition", gtd::format_group_counts(partition.sizes))
            .add("sizes", gtd::format_sizes(partition.sizes))
            .add("expected_tests", partition.total_expected_tests);
        std::cout << head.render(part_out);
        if (part_method == "direct" && gtd::parse_format(part_out.format) == gtd::ReportFormat::HumanText) {
          std::cout << r.render(part_out);
        }
      }
    } else if (nested_cmd->parsed()) {
      const auto policy = gtd::solve_nested(nested_N, gtd::Prevalence(nested_p));
      if (!nested_policy_out.empty()) {
        write_text_file(nested_policy_out, gtd::policy_to_json(policy).dump(2) + "\n");
      }
      Record r;
      r.add("N", nested_N).add("p", nested_p).add("H1", policy.H1[nested_N]).add("x_H", policy.x_H[nested_N]);
      std::cout << r.render(nested_out);
      if (nested_verbose) {
        if (gtd::parse_format(nested_out.format) == gtd::ReportFormat::JSON) {
          std::cout << gtd::policy_to_json(policy).dump(2) << '\n';
        } else {
          std::cout << decision_table(policy, nested_out.precision);
        }
      }
    } else if (eval_cmd->parsed()) {
      const auto policy = gtd::policy_from_json(read_json_file(eval_policy));
      const double value = gtd::evaluate_policy_mismatch(policy, gtd::Prevalence(eval_p_true));
      Record r;
      r.add("N", policy.N)
          .add("design_p", policy.design_p.p())
          .add("p_true", eval_p_true)
          .add("expected_tests", value);
      std::cout << r.render(eval_out);
    } else if (sim_cmd->parsed()) {
      const auto kind = parse_kind(sim_proc);
      const gtd::Prevalence prev(sim_p);
      const std::uint64_t seed = resolve_seed(sim_seed);
      gtd::Design design;
      if (kind == gtd::ProcedureKind::NestedR1) {
        if (!sim_sizes.empty()) throw UsageError("--sizes does not apply to R1");
        design = gtd::solve_nested(sim_N, prev);
      } else if (!sim_sizes.empty()) {
        auto sizes = parse_sizes(sim_sizes);
        long total = 0;
        for (int s : sizes) total += s;
        if (total != sim_N) throw UsageError("--sizes must sum to --N");
        design = gtd::make_partition(kind, std::move(sizes), prev);
      } else {
        design = gtd::optimal_partition_dp(kind, sim_N, prev);
      }
      const auto report = gtd::monte_carlo_expected_tests(kind, design, prev, sim_replicates, seed);
      Record r;
      r.add("procedure", std::string(gtd::to_string(kind)))
          .add("N", sim_N)
          .add("p", sim_p)
          .add("design", report.design)
          .add("replicates", report.replicates)
          .add("seed", report.seed)
          .add("mean", report.expected_tests)
          .add("std_error", report.std_error);
      std::cout << r.render(sim_out);
    } else if (table_cmd->parsed()) {
      const auto format = gtd::parse_format(table_out.format);
      if (table_which == 1) {
        std::cout << gtd::render_table1(gtd::table1(), format, table_out.precision);
      } else if (table_which == 2) {
        const auto method = table_method == "dp" ? gtd::PartitionMethod::DP : gtd::PartitionMethod::Direct;
        std::cout << gtd::render_table2(gtd::table2(table_N, method), format, table_out.precision);
      } else {
        if (!table_U) throw UsageError("--U is required for table 3");
        gtd::MinimaxOptions options;
        options.include_zero_limit = !table_grid_only;
        std::cout << gtd::render_table3(gtd::table3(*table_U, table_N, table_step, options), format,
                                        table_out.precision);
      }
    } else if (mm_cmd->parsed()) {
      const auto kind = parse_kind(mm_proc);
      gtd::require_fixed_size_procedure(kind);
      gtd::MinimaxOptions options;
      options.include_zero_limit = !mm_grid_only;
      const auto result = gtd::minimax_group_size(kind, mm_U, mm_step, options);
      Record r;
      r.add("procedure", std::string(gtd::to_string(kind)))
          .add("U", mm_U)
          .add("grid_step", mm_step)
          .add("zero_limit", !mm_grid_only)
          .add("k_star_star", result.k_star_star)
          .add("worst_regret", result.worst_regret);
      std::cout << r.render(mm_out);
    } else if (bound_cmd->parsed()) {
      const gtd::Prevalence prev(bound_p);
      const auto report = gtd::bound_report(bound_N, prev);
      Record r;
      r.add("N", bound_N)
          .add("p", bound_p)
          .add("entropy_bound", report.entropy_bound)
          .add("huffman_bound", report.huffman_bound ? json(*report.huffman_bound) : json(nullptr))
          .add("nested_R1", gtd::expected_tests_nested(bound_N, prev))
          .add("pair_tree_per_person", gtd::ungar_pair_cost(prev));
      std::cout << r.render(bound_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  } catch (const gtd::UnsupportedProcedure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
