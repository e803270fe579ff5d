#include "gtdesign/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "gtdesign/bounds.hpp"

namespace gtd {

using nlohmann::json;

ReportFormat parse_format(std::string_view name) {
  if (name == "text" || name == "human") return ReportFormat::HumanText;
  if (name == "csv") return ReportFormat::CSV;
  if (name == "json") return ReportFormat::JSON;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (text, csv, json)");
}

std::string format_number(double value, int significant) {
  if (significant < 1 || significant > 17) {
    throw std::invalid_argument("significant digits must lie in 1..17");
  }
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, significant);
  return std::string(buffer, result.ptr);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T>
T require_field(const json& doc, const char* key, const char* what) {
  if (!doc.is_object()) throw SchemaError(std::string(what) + ": expected a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw SchemaError(std::string(what) + ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

Prevalence checked_prevalence(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw SchemaError(std::string(what) + ": prevalence must lie in (0, 1)");
  }
  return Prevalence(p);
}

}  // namespace

json partition_to_json(const Partition& partition) {
  return json{{"procedure", std::string(to_string(partition.procedure))},
              {"N", partition.N},
              {"p", partition.p.p()},
              {"sizes", partition.sizes},
              {"total_expected_tests", partition.total_expected_tests}};
}

Partition partition_from_json(const json& doc) {
  constexpr const char* what = "partition";
  ProcedureKind kind;
  try {
    kind = parse_procedure(require_field<std::string>(doc, "procedure", what));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
  if (kind == ProcedureKind::NestedR1) {
    throw SchemaError("partition: R1 is described by a policy, not a partition");
  }
  const int N = require_field<int>(doc, "N", what);
  const Prevalence prev = checked_prevalence(require_field<double>(doc, "p", what), what);
  auto sizes = require_field<std::vector<int>>(doc, "sizes", what);
  long total = 0;
  for (int s : sizes) {
    if (s < 1) throw SchemaError("partition: group sizes must be >= 1");
    total += s;
  }
  if (total != N) {
    throw SchemaError("partition: sizes sum to " + std::to_string(total) + ", expected N = " +
                      std::to_string(N));
  }
  return make_partition(kind, std::move(sizes), prev);
}

json policy_to_json(const NestedPolicy& policy) {
  return json{{"design_p", policy.design_p.p()},
              {"N", policy.N},
              {"H1", policy.H1},
              {"F1star", policy.F1star},
              {"x_H", policy.x_H},
              {"x_G", policy.x_G}};
}

NestedPolicy policy_from_json(const json& doc) {
  constexpr const char* what = "policy";
  NestedPolicy policy;
  policy.design_p = checked_prevalence(require_field<double>(doc, "design_p", what), what);
  policy.N = require_field<int>(doc, "N", what);
  policy.H1 = require_field<std::vector<double>>(doc, "H1", what);
  policy.F1star = require_field<std::vector<double>>(doc, "F1star", what);
  policy.x_H = require_field<std::vector<int>>(doc, "x_H", what);
  policy.x_G = require_field<std::vector<int>>(doc, "x_G", what);
  validate_policy(policy);
  return policy;
}

void validate_policy(const NestedPolicy& policy) {
  if (policy.N < 0) throw SchemaError("policy: N must be >= 0");
  const auto expected = static_cast<std::size_t>(policy.N) + 1;
  auto check_length = [&](std::size_t length, const char* name) {
    if (length != expected) {
      throw SchemaError(std::string("policy: ") + name + " has length " + std::to_string(length) +
                        ", expected N + 1 = " + std::to_string(expected));
    }
  };
  check_length(policy.H1.size(), "H1");
  check_length(policy.F1star.size(), "F1star");
  check_length(policy.x_H.size(), "x_H");
  check_length(policy.x_G.size(), "x_G");
  for (int n = 1; n <= policy.N; ++n) {
    if (policy.x_H[n] < 1 || policy.x_H[n] > n) {
      throw SchemaError("policy: x_H[" + std::to_string(n) + "] = " +
                        std::to_string(policy.x_H[n]) + " outside 1.." + std::to_string(n));
    }
  }
  for (int m = 2; m <= policy.N; ++m) {
    if (policy.x_G[m] < 1 || policy.x_G[m] > m - 1) {
      throw SchemaError("policy: x_G[" + std::to_string(m) + "] = " +
                        std::to_string(policy.x_G[m]) + " outside 1.." + std::to_string(m - 1));
    }
  }
  for (double v : policy.H1) {
    if (!std::isfinite(v)) throw SchemaError("policy: H1 contains a non-finite value");
  }
  for (double v : policy.F1star) {
    if (!std::isfinite(v)) throw SchemaError("policy: F1star contains a non-finite value");
  }
}

// ---------------------------------------------------------------------------
// Tables

const std::vector<double>& reference_prevalences() {
  static const std::vector<double> values{0.001, 0.005, 0.01, 0.03, 0.05, 0.07, 0.1,  0.13,
                                          0.15,  0.2,   0.25, 0.27, 0.3,  0.32, 0.35, 0.38};
  return values;
}

std::vector<Table1Row> table1(const std::vector<double>& prevalences) {
  std::vector<Table1Row> rows;
  rows.reserve(prevalences.size());
  for (double p : prevalences) {
    const Prevalence prev(p);
    rows.push_back({p, optimal_size_D(prev), optimal_size_DPrime(prev), optimal_size_S(prev)});
  }
  return rows;
}

std::vector<Table2Row> table2(int N, PartitionMethod method,
                              const std::vector<double>& prevalences) {
  auto build = [&](ProcedureKind kind, const Prevalence& prev) {
    return method == PartitionMethod::DP ? optimal_partition_dp(kind, N, prev)
                                         : optimal_partition_direct(kind, N, prev).best();
  };
  std::vector<Table2Row> rows;
  rows.reserve(prevalences.size());
  for (double p : prevalences) {
    const Prevalence prev(p);
    rows.push_back({p, build(ProcedureKind::D, prev), build(ProcedureKind::DPrime, prev),
                    build(ProcedureKind::Sterrett, prev), expected_tests_nested(N, prev),
                    entropy_bound(N, prev)});
  }
  return rows;
}

std::vector<double> table3_prevalences(double U) {
  if (U == 0.05) return {0.001, 0.005, 0.01, 0.05};
  if (U == 0.1) return {0.001, 0.01, 0.05, 0.1};
  if (U == 0.2) return {0.001, 0.01, 0.1, 0.2};
  return {0.001, 0.01, U / 2.0, U};
}

RobustnessTable table3(double U, int N, double grid_step, MinimaxOptions options) {
  return robustness_table(U, table3_prevalences(U), N, grid_step, options);
}

namespace {

// Rows of string cells rendered as aligned text or CSV.
struct Grid {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

// Display width of a UTF-8 string (counts code points).
std::size_t display_width(const std::string& s) {
  std::size_t width = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++width;
  }
  return width;
}

std::string render_grid(const Grid& grid, ReportFormat format, const std::string& preamble) {
  std::ostringstream out;
  if (format == ReportFormat::CSV) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << csv_cell(cells[i]);
      }
      out << '\n';
    };
    line(grid.header);
    for (const auto& row : grid.rows) line(row);
    return out.str();
  }
  std::vector<std::size_t> widths(grid.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      widths[i] = std::max(widths[i], display_width(cells[i]));
    }
  };
  widen(grid.header);
  for (const auto& row : grid.rows) widen(row);
  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += "  ";
      text += std::string(widths[i] - display_width(cells[i]), ' ') + cells[i];
    }
    out << text << '\n';
  };
  if (!preamble.empty()) out << preamble << '\n';
  line(grid.header);
  for (const auto& row : grid.rows) line(row);
  return out.str();
}

std::string k_cell(const OptimalSize& size) {
  std::string cell = std::to_string(size.k_star);
  if (size.co_optimal) cell += "/" + std::to_string(*size.co_optimal);
  return cell;
}

json optimal_size_json(const OptimalSize& size) {
  json j{{"k_star", size.k_star}, {"cost_per_100", 100.0 * size.cost_per_person}};
  if (size.co_optimal) j["co_optimal"] = *size.co_optimal;
  return j;
}

}  // namespace

std::string render_table1(const std::vector<Table1Row>& rows, ReportFormat format,
                          int significant) {
  if (format == ReportFormat::JSON) {
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"p", r.p},
                     {"D", optimal_size_json(r.d)},
                     {"Dprime", optimal_size_json(r.d_prime)},
                     {"S", optimal_size_json(r.s)}});
    }
    return out.dump(2) + "\n";
  }
  Grid grid{{"p", "k_D", "100E_D", "k_Dprime", "100E_Dprime", "k_S", "100E_S"}, {}};
  auto per100 = [&](const OptimalSize& s) { return format_number(100.0 * s.cost_per_person, significant); };
  for (const auto& r : rows) {
    grid.rows.push_back({format_number(r.p, significant), k_cell(r.d), per100(r.d),
                         k_cell(r.d_prime), per100(r.d_prime), k_cell(r.s), per100(r.s)});
  }
  return render_grid(grid, format, "Optimal group size and expected tests per 100 units (infinite population)");
}

std::string render_table2(const std::vector<Table2Row>& rows, ReportFormat format,
                          int significant) {
  if (format == ReportFormat::JSON) {
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"p", r.p},
                     {"D", partition_to_json(r.d)},
                     {"Dprime", partition_to_json(r.d_prime)},
                     {"S", partition_to_json(r.s)},
                     {"R1", r.nested},
                     {"entropy", r.entropy}});
    }
    return out.dump(2) + "\n";
  }
  const int N = rows.empty() ? 0 : rows.front().s.N;
  Grid grid{{"p", "OP_D", "H_D", "OP_Dprime", "H_Dprime", "OP_S", "H_S", "E1", "H(p)"}, {}};
  for (const auto& r : rows) {
    grid.rows.push_back({format_number(r.p, significant), format_group_counts(r.d.sizes),
                         format_number(r.d.total_expected_tests, significant),
                         format_group_counts(r.d_prime.sizes),
                         format_number(r.d_prime.total_expected_tests, significant),
                         format_group_counts(r.s.sizes),
                         format_number(r.s.total_expected_tests, significant),
                         format_number(r.nested, significant),
                         format_number(r.entropy, significant)});
  }
  return render_grid(grid, format,
                     "Optimal partitions and expected tests for N = " + std::to_string(N) +
                         "");
}

std::string render_table3(const RobustnessTable& table, ReportFormat format, int significant) {
  if (format == ReportFormat::JSON) {
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"p", r.p},
                      {"D_per_100", 100.0 * r.e_D},
                      {"Dprime_per_100", 100.0 * r.e_DPrime},
                      {"S_per_100", 100.0 * r.e_S},
                      {"R1_design_U", r.h1_design_U},
                      {"R1_design_half_U", r.h1_design_half_U}});
    }
    json out{{"U", table.U},
             {"N", table.N},
             {"grid_step", table.grid_step},
             {"k_D", table.k_D},
             {"k_Dprime", table.k_DPrime},
             {"k_S", table.k_S},
             {"rows", rows}};
    return out.dump(2) + "\n";
  }
  Grid grid{{"p", "U", "k_D", "D", "k_Dprime", "Dprime", "k_S", "S", "R1(U)", "R1(U/2)"}, {}};
  for (const auto& r : table.rows) {
    grid.rows.push_back({format_number(r.p, significant), format_number(table.U, significant),
                         std::to_string(table.k_D), format_number(100.0 * r.e_D, significant),
                         std::to_string(table.k_DPrime),
                         format_number(100.0 * r.e_DPrime, significant),
                         std::to_string(table.k_S), format_number(100.0 * r.e_S, significant),
                         format_number(r.h1_design_U, significant),
                         format_number(r.h1_design_half_U, significant)});
  }
  return render_grid(grid, format,
                     "Minimax group sizes for p <= U and expected tests per " +
                         std::to_string(table.N) + " units");
}

}  // namespace gtd
