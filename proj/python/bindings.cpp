#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gtdesign/bounds.hpp"
#include "gtdesign/core.hpp"
#include "gtdesign/eval.hpp"
#include "gtdesign/nested.hpp"
#include "gtdesign/partition.hpp"
#include "gtdesign/report.hpp"
#include "gtdesign/robustness.hpp"
#include "gtdesign/size_opt.hpp"

namespace py = pybind11;
using namespace gtd;

namespace {

// Python callers pass prevalences as plain floats.
Prevalence prev(double p) { return Prevalence(p); }

Design as_design(const py::object& obj) {
  if (py::isinstance<NestedPolicy>(obj)) return obj.cast<NestedPolicy>();
  return obj.cast<Partition>();
}

}  // namespace

PYBIND11_MODULE(_gtdesign, m) {
  m.doc() = "Optimal group testing designs: pool sizes, partitions, nested policies and bounds.";

  py::register_exception<UnsupportedProcedure>(m, "UnsupportedProcedure", PyExc_ValueError);
  py::register_exception<CapacityExceeded>(m, "CapacityExceeded", PyExc_ValueError);
  py::register_exception<InvalidState>(m, "InvalidState", PyExc_IndexError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  py::enum_<ProcedureKind>(m, "ProcedureKind")
      .value("D", ProcedureKind::D)
      .value("DPrime", ProcedureKind::DPrime)
      .value("Sterrett", ProcedureKind::Sterrett)
      .value("NestedR1", ProcedureKind::NestedR1);
  m.def("parse_procedure", [](const std::string& name) { return parse_procedure(name); });

  py::class_<CutoffConstants>(m, "CutoffConstants")
      .def_readonly("p_U", &CutoffConstants::p_U)
      .def_readonly("p_D", &CutoffConstants::p_D)
      .def_readonly("pairwise_lower", &CutoffConstants::pairwise_lower);
  m.def("cutoffs", &cutoffs, py::return_value_policy::reference);

  py::class_<GroupCost>(m, "GroupCost")
      .def_readonly("per_person", &GroupCost::per_person)
      .def_readonly("total", &GroupCost::total)
      .def_readonly("k", &GroupCost::k);
  m.def("group_cost", [](ProcedureKind kind, int k, double p) { return group_cost(kind, k, prev(p)); },
        py::arg("kind"), py::arg("k"), py::arg("p"));
  m.def("expected_per_person_S_recursive",
        [](int k, double p) { return expected_per_person_S_recursive(k, prev(p)).per_person; },
        py::arg("k"), py::arg("p"));

  py::class_<OptimalSize>(m, "OptimalSize")
      .def_readonly("k_star", &OptimalSize::k_star)
      .def_readonly("cost_per_person", &OptimalSize::cost_per_person)
      .def_readonly("co_optimal", &OptimalSize::co_optimal);
  m.def("optimal_size", [](ProcedureKind kind, double p) { return optimal_size(kind, prev(p)); },
        py::arg("kind"), py::arg("p"));
  m.def("individual_testing_optimal", [](double p) { return individual_testing_optimal(prev(p)); },
        py::arg("p"));

  py::class_<Partition>(m, "Partition")
      .def_readonly("procedure", &Partition::procedure)
      .def_readonly("N", &Partition::N)
      .def_property_readonly("p", [](const Partition& x) { return x.p.p(); })
      .def_readonly("sizes", &Partition::sizes)
      .def_readonly("total_expected_tests", &Partition::total_expected_tests)
      .def("group_counts", [](const Partition& x) { return format_group_counts(x.sizes); })
      .def("to_json", [](const Partition& x) { return partition_to_json(x).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return partition_from_json(nlohmann::json::parse(text)); })
      .def("__repr__", [](const Partition& x) {
        return "Partition(" + std::string(to_string(x.procedure)) + ", " + format_sizes(x.sizes) + ")";
      });
  m.def("make_partition",
        [](ProcedureKind kind, std::vector<int> sizes, double p) {
          return make_partition(kind, std::move(sizes), prev(p));
        },
        py::arg("kind"), py::arg("sizes"), py::arg("p"));
  m.def("optimal_partition_dp",
        [](ProcedureKind kind, int N, double p) { return optimal_partition_dp(kind, N, prev(p)); },
        py::arg("kind"), py::arg("N"), py::arg("p"));

  py::class_<DirectConstruction> direct(m, "DirectConstruction");
  py::enum_<DirectConstruction::Choice>(direct, "Choice")
      .value("OptionI", DirectConstruction::Choice::OptionI)
      .value("OptionII", DirectConstruction::Choice::OptionII);
  direct.def_readonly("a", &DirectConstruction::a)
      .def_readonly("s", &DirectConstruction::s)
      .def_readonly("theta", &DirectConstruction::theta)
      .def_readonly("option_i", &DirectConstruction::option_i)
      .def_readonly("option_ii", &DirectConstruction::option_ii)
      .def_readonly("chosen", &DirectConstruction::chosen)
      .def("best", &DirectConstruction::best, py::return_value_policy::copy);
  m.def("optimal_partition_direct",
        [](ProcedureKind kind, int N, double p) { return optimal_partition_direct(kind, N, prev(p)); },
        py::arg("kind"), py::arg("N"), py::arg("p"));
  m.def("balance_improve",
        [](ProcedureKind kind, std::vector<int> sizes, double p) {
          return balance_improve(kind, std::move(sizes), prev(p));
        },
        py::arg("kind"), py::arg("sizes"), py::arg("p"));

  py::class_<NestedPolicy>(m, "NestedPolicy")
      .def_property_readonly("design_p", [](const NestedPolicy& x) { return x.design_p.p(); })
      .def_readonly("N", &NestedPolicy::N)
      .def_readonly("H1", &NestedPolicy::H1)
      .def_readonly("F1star", &NestedPolicy::F1star)
      .def_readonly("x_H", &NestedPolicy::x_H)
      .def_readonly("x_G", &NestedPolicy::x_G)
      .def("to_json", [](const NestedPolicy& x) { return policy_to_json(x).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return policy_from_json(nlohmann::json::parse(text)); });
  m.def("solve_nested", [](int N, double p) { return solve_nested(N, prev(p)); }, py::arg("N"), py::arg("p"));
  m.def("expected_tests_nested", [](int N, double p) { return expected_tests_nested(N, prev(p)); },
        py::arg("N"), py::arg("p"));

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("expected_tests", &EvalReport::expected_tests)
      .def_readonly("replicates", &EvalReport::replicates)
      .def_readonly("seed", &EvalReport::seed)
      .def_readonly("std_error", &EvalReport::std_error)
      .def_readonly("design", &EvalReport::design);
  m.def("run_procedure",
        [](ProcedureKind kind, const py::object& design, std::vector<std::uint8_t> bits) {
          return run_procedure(kind, as_design(design), OutcomeVector{std::move(bits)});
        },
        py::arg("kind"), py::arg("design"), py::arg("outcome"));
  m.def("exact_expected_tests",
        [](ProcedureKind kind, const py::object& design, double p) {
          return exact_expected_tests(kind, as_design(design), prev(p));
        },
        py::arg("kind"), py::arg("design"), py::arg("p"));
  m.def("monte_carlo_expected_tests",
        [](ProcedureKind kind, const py::object& design, double p, std::size_t replicates,
           std::uint64_t seed) {
          const Design d = as_design(design);
          py::gil_scoped_release release;
          return monte_carlo_expected_tests(kind, d, prev(p), replicates, seed);
        },
        py::arg("kind"), py::arg("design"), py::arg("p"), py::arg("replicates"), py::arg("seed"));
  m.def("evaluate_policy_mismatch",
        [](const NestedPolicy& policy, double p_true) { return evaluate_policy_mismatch(policy, prev(p_true)); },
        py::arg("policy"), py::arg("p_true"));

  m.def("entropy_bound", [](int N, double p) { return entropy_bound(N, prev(p)); }, py::arg("N"), py::arg("p"));
  m.def("huffman_lower_bound", [](int N, double p) { return huffman_lower_bound(N, prev(p)); },
        py::arg("N"), py::arg("p"));
  m.def("ungar_pair_cost", [](double p) { return ungar_pair_cost(prev(p)); }, py::arg("p"));

  py::class_<MinimaxResult>(m, "MinimaxResult")
      .def_readonly("k_star_star", &MinimaxResult::k_star_star)
      .def_readonly("worst_regret", &MinimaxResult::worst_regret)
      .def_readonly("U", &MinimaxResult::U)
      .def_readonly("procedure", &MinimaxResult::procedure);
  m.def("regret", [](ProcedureKind kind, int k, double p) { return regret(kind, k, prev(p)); },
        py::arg("kind"), py::arg("k"), py::arg("p"));
  m.def("minimax_group_size",
        [](ProcedureKind kind, double U, double grid_step, bool include_zero_limit) {
          return minimax_group_size(kind, U, grid_step, MinimaxOptions{include_zero_limit});
        },
        py::arg("kind"), py::arg("U"), py::arg("grid_step") = 1e-4, py::arg("include_zero_limit") = true);

  m.def("format_number", &format_number, py::arg("value"), py::arg("significant") = kDefaultSignificantDigits);
  m.def("table",
        [](int which, double U, const std::string& format) {
          const auto f = parse_format(format);
          if (which == 1) return render_table1(table1(), f);
          if (which == 2) return render_table2(table2(), f);
          if (which == 3) return render_table3(table3(U), f);
          throw std::invalid_argument("table must be 1, 2 or 3");
        },
        py::arg("which"), py::arg("U") = 0.1, py::arg("format") = "text");
}
