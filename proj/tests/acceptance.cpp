// Acceptance suite: one PASS/FAIL line per check, grouped by criterion.
// Exit status is nonzero when any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gtdesign/bounds.hpp"
#include "gtdesign/core.hpp"
#include "gtdesign/eval.hpp"
#include "gtdesign/nested.hpp"
#include "gtdesign/partition.hpp"
#include "gtdesign/report.hpp"
#include "gtdesign/robustness.hpp"
#include "gtdesign/size_opt.hpp"

using namespace gtd;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string num(double v) { return format_number(v, 8); }

// Printed reference values.
struct Table1Ref {
  double p;
  int kD;
  double eD;
  int kDp;
  double eDp;
  int kS;
  double eS;
};

const Table1Ref kTable1[] = {
    {0.001, 32, 6.2759, 32, 6.2729, 45, 4.5844}, {0.005, 15, 13.910, 15, 13.879, 21, 10.535},
    {0.01, 11, 19.557, 10, 19.470, 15, 15.172},  {0.03, 6, 33.369, 6, 32.940, 9, 27.305},
    {0.05, 5, 42.622, 5, 41.807, 7, 35.977},     {0.07, 4, 50.195, 4, 48.787, 6, 43.167},
    {0.10, 4, 59.390, 4, 57.567, 5, 52.288},     {0.13, 3, 67.483, 3, 64.203, 4, 60.042},
    {0.15, 3, 71.921, 3, 68.308, 4, 64.784},     {0.20, 3, 82.133, 3, 77.867, 3, 74.933},
    {0.25, 3, 91.146, 2, 84.375, 3, 83.854},     {0.27, 3, 94.432, 2, 86.855, 2, 86.855},
    {0.30, 3, 99.033, 2, 90.500, 2, 90.500},     {0.32, 1, 100.0, 2, 92.880, 2, 92.880},
    {0.35, 1, 100.0, 2, 96.375, 2, 96.375},      {0.38, 1, 100.0, 2, 99.780, 2, 99.780},
};

struct Table2Ref {
  double p;
  const char* opD;
  double hD;
  const char* opDp;
  double hDp;
  const char* opS;
  double hS;
  double e1;
  double entropy;
};

const Table2Ref kTable2[] = {
    {0.001, "2×33, 1×34", 6.281, "2×33, 1×34", 6.278, "2×50", 4.605, 1.766, 1.141},
    {0.005, "5×14, 2×15", 13.917, "5×14, 2×15", 13.884, "5×20", 10.537, 4.749, 4.541},
    {0.01, "10×10", 19.562, "10×10", 19.470, "5×14, 2×15", 15.181, 8.320, 8.079},
    {0.03, "12×6, 4×7", 33.402, "12×6, 4×7", 32.993, "10×9, 1×10", 27.325, 19.693, 19.439},
    {0.05, "20×5", 42.622, "20×5", 41.807, "5×6, 10×7", 36.018, 28.958, 28.640},
    {0.07, "25×4", 50.195, "25×4", 48.787, "2×5, 15×6", 43.184, 36.916, 36.592},
    {0.10, "25×4", 59.390, "25×4", 57.567, "20×5", 52.288, 47.375, 46.900},
    {0.13, "32×3, 1×4", 67.492, "32×3, 1×4", 64.258, "25×4", 60.042, 56.183, 55.744},
    {0.15, "32×3, 1×4", 71.956, "32×3, 1×4", 68.396, "25×4", 64.784, 61.485, 60.984},
    {0.20, "32×3, 1×4", 82.210, "2×2, 32×3", 77.872, "32×3, 1×4", 74.974, 72.875, 72.192},
    {0.25, "32×3, 1×4", 91.234, "50×2", 84.375, "2×2, 32×3", 83.875, 82.191, 81.128},
    {0.27, "32×3, 1×4", 94.518, "50×2", 86.855, "50×2", 86.855, 84.864, 84.146},
    {0.30, "32×3, 1×4", 99.117, "50×2", 90.500, "50×2", 90.500, 88.889, 88.129},
    {0.32, "100×1", 100.0, "50×2", 92.880, "50×2", 92.880, 91.574, 90.438},
    {0.35, "100×1", 100.0, "50×2", 96.375, "50×2", 96.375, 95.633, 93.407},
    {0.38, "100×1", 100.0, "50×2", 99.780, "50×2", 99.780, 99.730, 95.804},
};

struct Table3Ref {
  double U;
  int kD, kDp, kS;
  double p[4];
  double eD[4], eDp[4], eS[4], h1[4], h1_half[4];
};

const Table3Ref kTable3[] = {
    {0.05, 11, 10, 14, {0.001, 0.005, 0.01, 0.05},
     {10.185, 14.455, 19.557, 52.211}, {10.985, 14.841, 19.470, 49.811},
     {7.975, 11.241, 15.185, 41.899}, {7.468, 9.311, 11.567, 28.958},
     {4.511, 6.578, 9.194, 30.242}},
    {0.10, 8, 8, 10, {0.001, 0.01, 0.05, 0.10},
     {13.297, 20.226, 46.158, 69.453}, {13.285, 20.109, 45.721, 68.855},
     {10.628, 16.138, 37.760, 59.381}, {15.287, 18.007, 30.979, 47.375},
     {7.468, 11.567, 28.958, 50.282}},
    {0.20, 8, 7, 8, {0.001, 0.01, 0.1, 0.2},
     {13.297, 20.226, 69.453, 95.723}, {14.969, 20.945, 65.697, 92.565},
     {13.024, 17.647, 55.928, 85.889}, {33.233, 35.221, 53.271, 72.875},
     {15.287, 18.007, 47.375, 79.988}},
};

void criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const double tol = 1e-3;
  for (const auto& ref : kTable1) {
    const Prevalence prev(ref.p);
    const OptimalSize got[] = {optimal_size_D(prev), optimal_size_DPrime(prev), optimal_size_S(prev)};
    const int k[] = {ref.kD, ref.kDp, ref.kS};
    const double e[] = {ref.eD, ref.eDp, ref.eS};
    const char* names[] = {"D", "Dprime", "S"};
    for (int i = 0; i < 3; ++i) {
      const double cost = 100.0 * got[i].cost_per_person;
      const bool ok = got[i].k_star == k[i] && std::abs(cost - e[i]) <= tol + 1e-9;
      report("1 table1 p=" + format_number(ref.p) + " " + names[i], ok,
             "k*=" + std::to_string(got[i].k_star) + " (ref " + std::to_string(k[i]) + "), 100E=" + num(cost) +
                 " (ref " + format_number(e[i]) + ", tol 0.001)");
    }
  }
  const double elapsed = seconds_since(start);
  report("1 runtime", elapsed < 1.0, num(elapsed) + " s (limit 1 s)");
}

void criterion2() {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = table2(100, PartitionMethod::Direct);
  const double elapsed = seconds_since(start);
  const double tol = 1e-3;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto& ref = kTable2[i];
    const std::string id = "2 table2 p=" + format_number(ref.p);
    auto value = [&](const std::string& name, double got, double want) {
      report(id + " " + name, std::abs(got - want) <= tol + 1e-9,
             num(got) + " (ref " + format_number(want) + ", tol 0.001)");
    };
    auto partition = [&](const std::string& name, const Partition& got, const char* want) {
      const std::string text = format_group_counts(got.sizes);
      report(id + " OP_" + name, text == want, text + " (ref " + want + ")");
    };
    partition("D", row.d, ref.opD);
    value("H_D", row.d.total_expected_tests, ref.hD);
    partition("Dprime", row.d_prime, ref.opDp);
    value("H_Dprime", row.d_prime.total_expected_tests, ref.hDp);
    partition("S", row.s, ref.opS);
    value("H_S", row.s.total_expected_tests, ref.hS);
    value("E1", row.nested, ref.e1);
    value("H(p)", row.entropy, ref.entropy);
  }
  report("2 runtime", elapsed < 5.0, num(elapsed) + " s (limit 5 s)");
}

void criterion3() {
  const auto start = std::chrono::steady_clock::now();
  const double tol = 5e-3;
  for (const auto& ref : kTable3) {
    const std::vector<double> ps(ref.p, ref.p + 4);
    const auto t = robustness_table(ref.U, ps, 100, 1e-4);
    const std::string id = "3 table3 U=" + format_number(ref.U);
    auto k = [&](const std::string& name, int got, int want) {
      report(id + " k**_" + name, got == want, std::to_string(got) + " (ref " + std::to_string(want) + ")");
    };
    k("D", t.k_D, ref.kD);
    k("Dprime", t.k_DPrime, ref.kDp);
    k("S", t.k_S, ref.kS);
    for (int j = 0; j < 4; ++j) {
      const auto& row = t.rows[j];
      const std::string at = id + " p=" + format_number(ref.p[j]);
      auto value = [&](const std::string& name, double got, double want) {
        report(at + " " + name, std::abs(got - want) <= tol + 1e-9,
               num(got) + " (ref " + format_number(want) + ", tol 0.005)");
      };
      value("100E_D", 100.0 * row.e_D, ref.eD[j]);
      value("100E_Dprime", 100.0 * row.e_DPrime, ref.eDp[j]);
      value("100E_S", 100.0 * row.e_S, ref.eS[j]);
      value("H1(U)", row.h1_design_U, ref.h1[j]);
      value("H1(U/2)", row.h1_design_half_U, ref.h1_half[j]);
    }
  }
  const double elapsed = seconds_since(start);
  report("3 runtime", elapsed < 30.0, num(elapsed) + " s at grid step 1e-4 (limit 30 s)");
}

void criterion4() {
  const Prevalence p(0.05);
  auto partition = [&](const std::string& name, ProcedureKind kind, const std::vector<int>& sizes, double want) {
    const auto got = optimal_partition_dp(kind, 13, p);
    const bool ok = got.sizes == sizes && std::abs(got.total_expected_tests - want) <= 5e-4;
    report("4 H_" + name + "(13)", ok,
           format_sizes(got.sizes) + " " + num(got.total_expected_tests) + " (ref " + format_sizes(sizes) + " " +
               format_number(want) + ", tol 5e-4)");
  };
  partition("D", ProcedureKind::D, {5, 4, 4}, 5.615);
  partition("Dprime", ProcedureKind::DPrime, {5, 4, 4}, 5.489);
  partition("S", ProcedureKind::Sterrett, {7, 6}, 4.685);

  const auto policy = solve_nested(13, p);
  report("4 H1(13)", std::abs(policy.H1[13] - 3.878) <= 5e-4, num(policy.H1[13]) + " (ref 3.878, tol 5e-4)");

  bool xh_ok = true;
  std::string xh;
  for (int n = 2; n <= 13; ++n) {
    xh_ok = xh_ok && policy.x_H[n] == n;
    xh += (n > 2 ? "," : "") + std::to_string(policy.x_H[n]);
  }
  report("4 x_H(n)=n for n=2..13", xh_ok, xh);

  const std::vector<int> ref{1, 2, 2, 2, 2, 2, 3, 4, 4, 4, 4, 5};
  bool xg_ok = true;
  std::string xg;
  std::string expected;
  for (int m = 2; m <= 13; ++m) {
    xg_ok = xg_ok && policy.x_G[m] == ref[m - 2];
    xg += (m > 2 ? "," : "") + std::to_string(policy.x_G[m]);
    expected += (m > 2 ? "," : "") + std::to_string(ref[m - 2]);
  }
  report("4 x_G(m) for m=2..13", xg_ok, xg + " (ref " + expected + ")");
}

void criterion5() {
  const auto start = std::chrono::steady_clock::now();
  const ProcedureKind kinds[] = {ProcedureKind::D, ProcedureKind::DPrime, ProcedureKind::Sterrett,
                                 ProcedureKind::NestedR1};
  for (auto kind : kinds) {
    for (double p : {0.01, 0.05, 0.2, 0.35}) {
      const Prevalence prev(p);
      double worst_rel = 0.0;
      double worst_z = 0.0;
      for (int N = 1; N <= 12; ++N) {
        Design design;
        double analytic;
        if (kind == ProcedureKind::NestedR1) {
          auto policy = solve_nested(N, prev);
          analytic = policy.H1[N];
          design = std::move(policy);
        } else {
          auto part = optimal_partition_dp(kind, N, prev);
          analytic = part.total_expected_tests;
          design = std::move(part);
        }
        const double exact = exact_expected_tests(kind, design, prev).expected_tests;
        worst_rel = std::max(worst_rel, std::abs(exact - analytic) / analytic);
        const auto mc = monte_carlo_expected_tests(kind, design, prev, 100000, 20240000 + N);
        const double z = mc.std_error > 0 ? std::abs(mc.expected_tests - analytic) / mc.std_error
                                          : (mc.expected_tests == analytic ? 0.0 : INFINITY);
        worst_z = std::max(worst_z, z);
      }
      const std::string id = std::string("5 ") + std::string(to_string(kind)) + " p=" + format_number(p);
      report(id + " exact", worst_rel <= 1e-10, "max rel err " + num(worst_rel) + " over N=1..12 (tol 1e-10)");
      report(id + " monte carlo", worst_z <= 4.0, "max |z| " + num(worst_z) + " over N=1..12 at 1e5 reps (tol 4)");
    }
  }
  const double elapsed = seconds_since(start);
  report("5 runtime", elapsed < 60.0, num(elapsed) + " s (limit 60 s)");
}

void criterion6() {
  bool sandwich = true;
  bool below_h1 = true;
  double worst = 0.0;
  for (double p = 0.01; p < 0.99; p += 0.02) {
    const Prevalence prev(p);
    for (int N = 1; N <= 12; ++N) {
      const double e = entropy_bound(N, prev);
      const double h = huffman_lower_bound(N, prev);
      sandwich = sandwich && e <= h + 1e-12 && h <= e + 1.0 + 1e-12;
      const double h1 = expected_tests_nested(N, prev);
      below_h1 = below_h1 && h <= h1 + 1e-10;
      worst = std::max(worst, h - h1);
    }
  }
  report("6 entropy <= Huffman <= entropy+1", sandwich, "N=1..12, p=0.01..0.97 step 0.02");
  report("6 Huffman <= H1(N)", below_h1, "max(Huffman - H1) = " + num(worst));
  double err = 0.0;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (double q = golden; q < 1.0; q += 0.001) {
    err = std::max(err, std::abs(huffman_lower_bound(2, Prevalence(1.0 - q)) - (3.0 - q - q * q)));
  }
  report("6 Huffman(2,p) = 3-q-q^2", err <= 1e-12, "max abs err " + num(err) + " (tol 1e-12)");
  const double e = entropy_bound(100, Prevalence(0.05));
  report("6 entropy(100,0.05)", std::abs(e - 28.640) <= 1e-3, num(e) + " (ref 28.640, tol 0.001)");
}

void criterion7() {
  const auto& c = cutoffs();
  double worst = 0.0;
  bool pairs = true;
  for (double p = c.pairwise_lower + 0.002; p < c.p_U; p += 0.004) {
    const Prevalence prev(p);
    const auto policy = solve_nested(64, prev);
    const double q = prev.q();
    for (int N = 2; N <= 64; N += 2) {
      worst = std::max(worst, std::abs(policy.H1[N] - 0.5 * N * (3.0 - q - q * q)));
      pairs = pairs && policy.x_H[N] == 2;
    }
  }
  report("7 pairwise H1(N) = (N/2)(3-q-q^2)", worst <= 1e-9, "max abs err " + num(worst) + " over even N<=64");
  report("7 pairwise x_H = 2", pairs, "even N<=64 on the pairwise p-range");

  bool monotone = true;
  for (int N : {10, 50, 100}) {
    double previous = 0.0;
    for (double p = 0.001; p < c.p_U; p += 0.001) {
      const double h = expected_tests_nested(N, Prevalence(p));
      monotone = monotone && h >= previous - 1e-12;
      previous = h;
    }
  }
  report("7 H1 nondecreasing in p", monotone, "N in {10,50,100}, p step 0.001 below p_U");

  bool chain = true;
  for (double p : {0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.38}) {
    for (int N : {2, 5, 13, 50, 100}) {
      const Prevalence prev(p);
      const double h1 = expected_tests_nested(N, prev);
      const double s = optimal_partition_dp(ProcedureKind::Sterrett, N, prev).total_expected_tests;
      const double dp = optimal_partition_dp(ProcedureKind::DPrime, N, prev).total_expected_tests;
      const double d = optimal_partition_dp(ProcedureKind::D, N, prev).total_expected_tests;
      chain = chain && h1 <= s + 1e-10 && s <= dp + 1e-10 && dp <= d + 1e-10;
    }
  }
  report("7 H1 <= H_S <= H_Dprime <= H_D", chain, "7 prevalences x 5 population sizes");

  bool convex = true;
  for (double p : {0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.38}) {
    const Prevalence prev(p);
    for (int k = 2; k < 200; ++k) {
      const double second = expected_per_person_S(k + 1, prev).total - 2.0 * expected_per_person_S(k, prev).total +
                            expected_per_person_S(k - 1, prev).total;
      convex = convex && second >= -1e-10;
    }
  }
  report("7 h_S discretely convex", convex, "k=2..199");

  double identity = 0.0;
  for (double p : {1e-5, 0.001, 0.05, 0.2, 0.38}) {
    for (int k = 1; k <= 200; ++k) {
      const Prevalence prev(p);
      identity = std::max(identity, std::abs(expected_per_person_S(k, prev).per_person -
                                             expected_per_person_S_recursive(k, prev).per_person));
    }
  }
  report("7 E_S closed form = recurrence", identity <= 1e-10, "max abs diff " + num(identity));

  double halving = 0.0;
  for (double p : {0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.38}) {
    const auto a = solve_nested(64, Prevalence(p));
    const auto b = solve_nested(64, Prevalence(p), NestedOptions{false});
    for (int m = 1; m <= 64; ++m) {
      halving = std::max(halving, std::abs(a.F1star[m] - b.F1star[m]) / std::max(1.0, b.F1star[m]));
    }
  }
  report("7 halving bound leaves F1* unchanged", halving <= 1e-12, "max rel diff " + num(halving) + " for N<=64");
}

void criterion8() {
  for (int N : {13, 100, 200}) {
    for (double p : {0.001, 0.05, 0.2}) {
      const auto policy = solve_nested(N, Prevalence(p));
      const double got = evaluate_policy_mismatch(policy, Prevalence(p));
      const double rel = std::abs(got - policy.H1[N]) / policy.H1[N];
      report("8 mismatch self-consistency N=" + std::to_string(N) + " p=" + format_number(p), rel <= 1e-10,
             "rel err " + num(rel) + " (tol 1e-10)");
    }
  }
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
