// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pim/harness.hpp"
#include "pim/interpolant.hpp"
#include "pim/manifolds.hpp"
#include "pim/operator.hpp"
#include "pim/rng.hpp"
#include "pim/solver.hpp"

using pim::DiscreteOperator;
using pim::KernelProfile;
using pim::KernelSpec;
using pim::PimSolution;
using pim::PointCloud;
using pim::RunConfig;
using pim::SampleMode;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct TestCloud {
  std::string name;
  PointCloud cloud;
  KernelSpec spec;
};

// The four standing test clouds (n <= 500) used by AC1-AC3.
std::vector<TestCloud> standing_clouds() {
  std::vector<TestCloud> out;
  const struct {
    const char* name;
    std::size_t n;
    double t;
  } configs[] = {{"interval", 300, 2.0 / 299.0},
                 {"circle", 400, 2.0 * 2.0 * M_PI / 400.0},
                 {"sphere", 500, 0.05},
                 {"disk", 500, 0.08}};
  for (const auto& cfg : configs) {
    const auto c = pim::make_case(cfg.name);
    auto sampled = c->sample(cfg.n, SampleMode::grid, 0);
    out.push_back({cfg.name, std::move(sampled.cloud),
                   KernelSpec::make(KernelProfile::wendland_c2, cfg.t, c->intrinsic_dim())});
  }
  return out;
}

// Dense kernel matrix cache so the double-sum oracle is O(n^2) once per cloud.
std::vector<double> dense_rt(const PointCloud& cloud, const KernelSpec& spec) {
  const std::size_t n = cloud.size();
  std::vector<double> rt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rt[i * n + j] = pim::pair_kernel(spec, cloud.point(i), cloud.point(j)).r_t;
  return rt;
}

std::vector<double> random_mean_zero(std::size_t n, std::span<const double> V,
                                     std::uint64_t seed) {
  pim::SplitMix64 rng(seed);
  std::vector<double> u(n);
  for (double& v : u) v = rng.uniform(-1.0, 1.0);
  return pim::project_v_mean_zero(u, V);
}

// End-to-end grid solve at the empirical coupling, used by AC5 and AC10.
PimSolution solve_grid_case(const char* name, std::size_t n, double tol = 1e-10) {
  const auto c = pim::make_case(name);
  auto sampled = c->sample(n, SampleMode::grid, 0);
  const double t = pim::Coupling::empirical().bandwidth(sampled.h);
  const auto spec = KernelSpec::make(KernelProfile::wendland_c2, t, c->intrinsic_dim());
  const auto op = assemble_laplacian(sampled.cloud, spec);
  auto fields = eval_exact(*c, sampled.cloud);
  const auto rhs = assemble_rhs(sampled.cloud, spec, fields.f, fields.b);
  pim::SolveOptions options;
  options.tol = tol;
  auto solved = solve(op, rhs, sampled.cloud.volume_weights, options);
  if (!solved.report.converged) throw std::runtime_error("acceptance solve did not converge");
  return PimSolution(std::move(sampled.cloud), spec, std::move(solved.u), std::move(fields.f),
                     std::move(fields.b));
}

Check ac1_quadratic_form_identity() {
  Check check;
  for (const auto& tc : standing_clouds()) {
    const auto op = assemble_laplacian(tc.cloud, tc.spec);
    const auto rt = dense_rt(tc.cloud, tc.spec);
    const std::size_t n = tc.cloud.size();
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
      pim::SplitMix64 rng(1000 + trial);
      std::vector<double> u(n);
      for (double& v : u) v = rng.uniform(-1.0, 1.0);
      const double via_apply = quadratic_form(op, tc.cloud, u);
      double via_double_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double diff = u[i] - u[j];
          via_double_sum +=
              rt[i * n + j] * diff * diff * tc.cloud.volume_weights[i] * tc.cloud.volume_weights[j];
        }
      via_double_sum /= 2.0 * tc.spec.t;
      const double scale = std::max(std::abs(via_apply), std::abs(via_double_sum));
      check.expect(std::abs(via_apply - via_double_sum) <= 1e-10 * scale,
                   tc.name + " identity off by " +
                       num(std::abs(via_apply - via_double_sum) / scale));
    }
  }
  return check;
}

Check ac2_weighted_symmetry_and_psd() {
  Check check;
  for (const auto& tc : standing_clouds()) {
    const auto op = assemble_laplacian(tc.cloud, tc.spec);
    const std::size_t n = tc.cloud.size();
    // Pair stored entries through a dense table.
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t e = op.row_offsets[i]; e < op.row_offsets[i + 1]; ++e)
        w[i * n + op.cols[e]] = op.weights[e];
    double max_pair = 0.0, max_diff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double a = tc.cloud.volume_weights[i] * w[i * n + j];
        const double b = tc.cloud.volume_weights[j] * w[j * n + i];
        max_pair = std::max(max_pair, std::abs(a));
        max_diff = std::max(max_diff, std::abs(a - b));
      }
    check.expect(max_diff <= 1e-13 * max_pair,
                 tc.name + " symmetry defect " + num(max_diff / max_pair));
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
      pim::SplitMix64 rng(2000 + trial);
      std::vector<double> u(n);
      for (double& v : u) v = rng.uniform(-1.0, 1.0);
      const double q = quadratic_form(op, tc.cloud, u);
      check.expect(q >= -1e-12, tc.name + " negative form " + num(q));
    }
  }
  return check;
}

Check ac3_null_space() {
  Check check;
  for (const auto& tc : standing_clouds()) {
    const auto op = assemble_laplacian(tc.cloud, tc.spec);
    const auto lu = op.apply(std::vector<double>(tc.cloud.size(), 1.0));
    double linf = 0.0, max_row = 0.0;
    for (std::size_t i = 0; i < op.n; ++i) {
      linf = std::max(linf, std::abs(lu[i]));
      max_row = std::max(max_row, op.row_sums[i]);
    }
    check.expect(linf <= 1e-12 * max_row, tc.name + " null defect " + num(linf));
  }
  return check;
}

Check ac4_discrete_coercivity() {
  Check check;
  const struct {
    const char* name;
    double t;
  } configs[] = {{"circle", 0.02}, {"sphere", 0.05}};
  for (const auto& cfg : configs) {
    const auto c = pim::make_case(cfg.name);
    double min_ratio[2] = {0.0, 0.0};
    for (int level = 0; level < 2; ++level) {
      const std::size_t n = level == 0 ? 500 : 1000;
      auto sampled = c->sample(n, SampleMode::grid, 0);
      const auto spec = KernelSpec::make(KernelProfile::wendland_c2, cfg.t, c->intrinsic_dim());
      const auto op = assemble_laplacian(sampled.cloud, spec);
      double lowest = std::numeric_limits<double>::infinity();
      for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const auto u = random_mean_zero(sampled.cloud.size(), sampled.cloud.volume_weights,
                                        3000 + trial);
        double uu = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
          uu += u[i] * u[i] * sampled.cloud.volume_weights[i];
        lowest = std::min(lowest, quadratic_form(op, sampled.cloud, u) / uu);
      }
      min_ratio[level] = lowest;
    }
    check.expect(min_ratio[0] > 0.0 && min_ratio[1] > 0.0,
                 std::string(cfg.name) + " nonpositive ratio");
    const double change = std::max(min_ratio[0], min_ratio[1]) /
                          std::min(min_ratio[0], min_ratio[1]);
    check.expect(change < 2.0, std::string(cfg.name) + " ratio changed by " + num(change) +
                                   " (" + num(min_ratio[0]) + " vs " + num(min_ratio[1]) + ")");
  }
  return check;
}

Check ac5_interpolation_reproduction() {
  Check check;
  const struct {
    const char* name;
    std::size_t n;
  } configs[] = {{"interval", 200}, {"circle", 200}, {"sphere", 1000}, {"disk", 500}};
  for (const auto& cfg : configs) {
    const auto sol = solve_grid_case(cfg.name, cfg.n);
    double max_u = 0.0;
    for (double v : sol.u()) max_u = std::max(max_u, std::abs(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.cloud().size(); ++i)
      worst = std::max(worst, std::abs(interpolate(sol, sol.cloud().point(i)) - sol.u()[i]));
    check.expect(worst <= 1e-8 * (1.0 + max_u),
                 std::string(cfg.name) + " reproduction defect " + num(worst));
  }
  return check;
}

bool strictly_decreasing(const std::vector<pim::ResultRow>& rows,
                         double pim::ResultRow::*field) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].*field < rows[i - 1].*field)) return false;
  return true;
}

Check ac6_interval_convergence() {
  Check check;
  RunConfig config;
  config.case_name = "interval";
  config.n_values = {100, 200, 400, 800};

  const auto empirical = pim::sweep(config);
  for (const auto& row : empirical.rows) check.expect(row.converged, "empirical row unconverged");
  check.expect(strictly_decreasing(empirical.rows, &pim::ResultRow::l2),
               "empirical L2 not strictly decreasing");
  check.expect(empirical.slope_l2 >= 0.7,
               "empirical L2 slope " + num(empirical.slope_l2) + " < 0.7");

  config.coupling_preset = "theory";
  const auto theory = pim::sweep(config);
  for (const auto& row : theory.rows) check.expect(row.converged, "theory row unconverged");
  for (std::size_t i = 1; i < theory.rows.size(); ++i)
    check.expect(theory.rows[i].l2 <= theory.rows[i - 1].l2, "theory L2 increased");
  check.expect(theory.slope_l2 >= 0.2, "theory L2 slope " + num(theory.slope_l2) + " < 0.2");
  return check;
}

Check ac7_closed_manifold_convergence() {
  Check check;
  RunConfig config;
  config.case_name = "circle";
  config.n_values = {100, 200, 400, 800};
  const auto circle = pim::sweep(config);
  for (const auto& row : circle.rows) check.expect(row.converged, "circle row unconverged");
  check.expect(strictly_decreasing(circle.rows, &pim::ResultRow::l2),
               "circle L2 not strictly decreasing");
  check.expect(circle.slope_l2 >= 0.7, "circle L2 slope " + num(circle.slope_l2) + " < 0.7");

  config.case_name = "sphere";
  config.n_values = {1000, 2000, 4000};
  const auto sphere = pim::sweep(config);
  for (const auto& row : sphere.rows) check.expect(row.converged, "sphere row unconverged");
  check.expect(strictly_decreasing(sphere.rows, &pim::ResultRow::l2),
               "sphere L2 not strictly decreasing (" + num(sphere.rows[0].l2) + ", " +
                   num(sphere.rows[1].l2) + ", " + num(sphere.rows[2].l2) + ")");
  return check;
}

Check ac8_disk_boundary_convergence() {
  Check check;
  RunConfig config;
  config.case_name = "disk";
  config.n_values = {500, 1000, 2000};
  const auto result = pim::sweep(config);
  for (const auto& row : result.rows) check.expect(row.converged, "disk row unconverged");
  check.expect(strictly_decreasing(result.rows, &pim::ResultRow::l2),
               "disk L2 not strictly decreasing (" + num(result.rows[0].l2) + ", " +
                   num(result.rows[1].l2) + ", " + num(result.rows[2].l2) + ")");
  const double u_l2 = std::sqrt(M_PI / 6.0);  // ||x^2 - y^2|| over the unit disk
  check.expect(result.rows.back().l2 < 0.2 * u_l2,
               "disk final L2 " + num(result.rows.back().l2) + " >= " + num(0.2 * u_l2));
  return check;
}

Check ac9_consistency_residual() {
  Check check;
  const auto c = pim::make_case("circle");
  auto sampled = c->sample(4000, SampleMode::grid, 0);
  const auto fields = eval_exact(*c, sampled.cloud);
  std::vector<double> residuals;
  for (const double t : {0.02, 0.01, 0.005}) {
    const auto spec = KernelSpec::make(KernelProfile::wendland_c2, t, 1);
    const auto op = assemble_laplacian(sampled.cloud, spec);
    const auto rhs = assemble_rhs(sampled.cloud, spec, fields.f, fields.b);
    const auto lu = op.apply(fields.u);
    double linf = 0.0;
    for (std::size_t i = 0; i < lu.size(); ++i)
      linf = std::max(linf, std::abs(lu[i] - rhs[i]));
    residuals.push_back(linf);
  }
  for (std::size_t i = 1; i < residuals.size(); ++i)
    check.expect(residuals[i - 1] / residuals[i] >= 1.5,
                 "residual ratio " + num(residuals[i - 1] / residuals[i]) + " < 1.5 (" +
                     num(residuals[i - 1]) + " -> " + num(residuals[i]) + ")");
  return check;
}

Check ac10_gradient_correctness() {
  Check check;
  const struct {
    const char* name;
    std::size_t n;
  } configs[] = {{"interval", 150}, {"circle", 200}, {"sphere", 900}, {"disk", 450}};
  for (const auto& cfg : configs) {
    const auto c = pim::make_case(cfg.name);
    const auto sol = solve_grid_case(cfg.name, cfg.n);
    const double step = 1e-6 * std::sqrt(sol.spec().t);
    pim::SplitMix64 rng(4000);
    const auto eval_cloud = c->sample(cfg.n, SampleMode::random, 17).cloud;
    std::size_t tested = 0;
    for (std::size_t trial = 0; tested < 50 && trial < eval_cloud.size(); ++trial) {
      const auto base = eval_cloud.point(rng.next() % eval_cloud.size());
      std::vector<double> x(base.begin(), base.end());
      std::vector<double> grad;
      try {
        grad = interpolate_gradient(sol, x);
      } catch (const pim::OutOfReach&) {
        continue;
      }
      ++tested;
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      norm = std::sqrt(norm);
      for (std::size_t a = 0; a < x.size(); ++a) {
        auto xp = x, xm = x;
        xp[a] += step;
        xm[a] -= step;
        const double fd = (interpolate(sol, xp) - interpolate(sol, xm)) / (2.0 * step);
        check.expect(std::abs(grad[a] - fd) <= 1e-5 * (1.0 + norm),
                     std::string(cfg.name) + " gradient defect " + num(std::abs(grad[a] - fd)));
      }
    }
    check.expect(tested == 50, std::string(cfg.name) + " only reached " +
                                   std::to_string(tested) + " test points");
  }
  return check;
}

Check ac11_solver_contract() {
  Check check;
  const auto c = pim::make_case("circle");
  auto sampled = c->sample(300, SampleMode::grid, 0);
  const auto spec = KernelSpec::make(KernelProfile::wendland_c2, 0.04, 1);
  const auto op = assemble_laplacian(sampled.cloud, spec);
  const auto& V = sampled.cloud.volume_weights;

  pim::SplitMix64 rng(5000);
  std::vector<double> w(sampled.cloud.size());
  for (double& v : w) v = rng.uniform(-1.0, 1.0);
  w = pim::project_v_mean_zero(w, V);

  const auto rhs = op.apply(w);
  pim::SolveOptions options;
  options.tol = 1e-10;
  const auto round_trip = solve(op, rhs, V, options);
  check.expect(round_trip.report.converged, "round trip unconverged");
  double num_acc = 0.0, den_acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num_acc += (round_trip.u[i] - w[i]) * (round_trip.u[i] - w[i]);
    den_acc += w[i] * w[i];
  }
  const double rel = std::sqrt(num_acc / den_acc);
  check.expect(rel <= 10.0 * options.tol, "round trip error " + num(rel));

  auto shifted = rhs;
  for (double& v : shifted) v += 3.25;
  const auto shifted_solve = solve(op, shifted, V, options);
  check.expect(shifted_solve.report.converged, "shifted solve unconverged");
  double max_diff = 0.0, max_u = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(shifted_solve.u[i] - round_trip.u[i]));
    max_u = std::max(max_u, std::abs(round_trip.u[i]));
  }
  check.expect(max_diff <= 100.0 * options.tol * (1.0 + max_u),
               "shift changed the solution by " + num(max_diff));
  return check;
}

}  // namespace

int main() {
  const struct {
    const char* name;
    const char* what;
    std::function<Check()> run;
  } criteria[] = {
      {"AC1", "quadratic-form identity, apply route vs double sum, 1e-10", ac1_quadratic_form_identity},
      {"AC2", "weighted symmetry 1e-13 and positive semidefiniteness", ac2_weighted_symmetry_and_psd},
      {"AC3", "constant null vector, 1e-12 of max row sum", ac3_null_space},
      {"AC4", "discrete coercivity stable under doubling (circle, sphere)", ac4_discrete_coercivity},
      {"AC5", "sample reproduction after converged solves, 1e-8", ac5_interpolation_reproduction},
      {"AC6", "interval convergence: empirical slope >= 0.7, theory slope >= 0.2", ac6_interval_convergence},
      {"AC7", "closed manifolds: circle slope >= 0.7, sphere decreasing", ac7_closed_manifold_convergence},
      {"AC8", "disk nonzero-Neumann convergence, final L2 < 0.2 ||u||", ac8_disk_boundary_convergence},
      {"AC9", "consistency residual shrinks by >= 1.5x per t halving", ac9_consistency_residual},
      {"AC10", "reconstruction gradient matches finite differences, 1e-5", ac10_gradient_correctness},
      {"AC11", "solver contract: round trip and shift invariance", ac11_solver_contract},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1fs)%s%s\n", check.ok ? "PASS" : "FAIL", criterion.name,
                criterion.what, seconds, check.detail.empty() ? "" : " -- ",
                check.detail.c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
  std::printf("%d/11 acceptance criteria passed\n", 11 - failures);
  return failures;
}
