#pragma once

// Serialization, number formatting and reproduction of the reference tables.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gtdesign/nested.hpp"
#include "gtdesign/partition.hpp"
#include "gtdesign/robustness.hpp"
#include "gtdesign/size_opt.hpp"

namespace gtd {

/// Malformed partition or policy document.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { HumanText, CSV, JSON };

ReportFormat parse_format(std::string_view name);

inline constexpr int kDefaultSignificantDigits = 5;

/// Locale-independent shortest "%g"-style rendering with the given number of
/// significant digits, e.g. 35.9773 -> "35.977", 100.0 -> "100".
std::string format_number(double value, int significant = kDefaultSignificantDigits);

nlohmann::json partition_to_json(const Partition& partition);
Partition partition_from_json(const nlohmann::json& doc);

/// {design_p, N, H1, F1star, x_H, x_G}; arrays have length N + 1 with slot 0
/// as padding.
nlohmann::json policy_to_json(const NestedPolicy& policy);
NestedPolicy policy_from_json(const nlohmann::json& doc);

/// Throws SchemaError when table lengths or decisions are inconsistent.
void validate_policy(const NestedPolicy& policy);

/// The sixteen prevalences tabulated for the infinite and N = 100 cases.
const std::vector<double>& reference_prevalences();

struct Table1Row {
  double p;
  OptimalSize d;
  OptimalSize d_prime;
  OptimalSize s;
};

std::vector<Table1Row> table1(const std::vector<double>& prevalences = reference_prevalences());

enum class PartitionMethod { DP, Direct };

struct Table2Row {
  double p;
  Partition d;
  Partition d_prime;
  Partition s;
  double nested = 0.0;   // H1(N)
  double entropy = 0.0;  // information lower bound for N units
};

/// The reference table was built with the two-candidate direct construction;
/// PartitionMethod::DP gives the exact optimum instead (they differ for D
/// at p = 0.27 and 0.30, where splitting off a single unit is cheaper).
std::vector<Table2Row> table2(int N = 100, PartitionMethod method = PartitionMethod::Direct,
                              const std::vector<double>& prevalences = reference_prevalences());

/// Truth prevalences reported for a given U (the printed columns for
/// U = 0.05, 0.10, 0.20; otherwise 0.001, 0.01, U/2, U).
std::vector<double> table3_prevalences(double U);

RobustnessTable table3(double U, int N = 100, double grid_step = 1e-4,
                       MinimaxOptions options = {});

std::string render_table1(const std::vector<Table1Row>& rows, ReportFormat format,
                          int significant = kDefaultSignificantDigits);
std::string render_table2(const std::vector<Table2Row>& rows, ReportFormat format,
                          int significant = kDefaultSignificantDigits);
std::string render_table3(const RobustnessTable& table, ReportFormat format,
                          int significant = kDefaultSignificantDigits);

}  // namespace gtd
