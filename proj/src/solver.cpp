#include "pim/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pim {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double weighted_mean(std::span<const double> x, std::span<const double> V, double v_total) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * V[i];
  return s / v_total;
}

// Rounding-noise ceiling for the recomputed mean of an already-projected
// vector. Means at or below this level are treated as zero, which makes the
// projection an exact fixed point of itself.
double mean_noise_floor(std::span<const double> x, std::span<const double> V, double v_total) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i]) * V[i];
  return 32.0 * static_cast<double>(x.size() + 2) * std::numeric_limits<double>::epsilon() * s /
         v_total;
}

// In-place single subtraction pass; returns whether anything changed.
bool subtract_mean_once(std::vector<double>& x, std::span<const double> V, double v_total) {
  const double m = weighted_mean(x, V, v_total);
  if (m == 0.0) return false;
  bool changed = false;
  for (double& xi : x) {
    const double next = xi - m;
    if (next != xi) {
      xi = next;
      changed = true;
    }
  }
  return changed;
}

void project_in_place(std::vector<double>& x, std::span<const double> V, double v_total) {
  // One subtraction lands the mean at the rounding floor, where the loop
  // stops; near-constant inputs collapse geometrically to exact zeros first.
  for (int pass = 0; pass < 64; ++pass) {
    const double m = weighted_mean(x, V, v_total);
    if (std::abs(m) <= mean_noise_floor(x, V, v_total)) return;
    if (!subtract_mean_once(x, V, v_total)) return;
  }
  throw std::runtime_error("project_v_mean_zero: subtraction did not reach a fixed point");
}

void check_finite(std::span<const double> x, const char* where) {
  for (double v : x)
    if (!std::isfinite(v)) throw std::runtime_error(std::string("solve: non-finite value in ") + where);
}

}  // namespace

std::vector<double> project_v_mean_zero(std::span<const double> x, std::span<const double> V) {
  if (x.size() != V.size()) throw std::invalid_argument("project_v_mean_zero: length mismatch");
  double v_total = 0.0;
  for (double v : V) v_total += v;
  if (!(v_total > 0.0)) throw std::invalid_argument("project_v_mean_zero: weights must be positive");
  std::vector<double> out(x.begin(), x.end());
  project_in_place(out, V, v_total);
  return out;
}

SolveResult solve(const DiscreteOperator& op, std::span<const double> rhs,
                  std::span<const double> V, const SolveOptions& options) {
  const std::size_t n = op.n;
  if (rhs.size() != n || V.size() != n) throw std::invalid_argument("solve: length mismatch");
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve: tolerance must be positive");
  check_finite(rhs, "rhs");

  double v_total = 0.0;
  for (double v : V) v_total += v;

  SolveResult result;
  result.u.assign(n, 0.0);
  SolveReport& report = result.report;

  // Compatibility projection: D_V rhs must be orthogonal to the constant
  // nullspace, i.e. sum V_i rhs_i = 0. The removed mean is reported; a large
  // value flags an inconsistent problem.
  report.rhs_mean_removed = std::abs(weighted_mean(rhs, V, v_total));
  std::vector<double> b(rhs.begin(), rhs.end());
  project_in_place(b, V, v_total);
  for (std::size_t i = 0; i < n; ++i) b[i] *= V[i];  // b = D_V rhs_projected

  double b_norm = norm2(b);
  // A projected rhs at the rounding floor of the projection (e.g. a constant
  // rhs) counts as zero.
  double rhs_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) rhs_scale += rhs[i] * rhs[i] * V[i] * V[i];
  rhs_scale = std::sqrt(rhs_scale);
  if (b_norm <= 32.0 * static_cast<double>(n + 2) * std::numeric_limits<double>::epsilon() *
                    rhs_scale)
    b_norm = 0.0;
  const auto true_residual = [&](std::span<const double> u) {
    const auto lu = op.apply(u);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = V[i] * lu[i] - b[i];
      s += r * r;
    }
    return std::sqrt(s);
  };

  if (b_norm == 0.0) {
    report.converged = true;
    return result;  // u = 0, zero iterations
  }

  const std::size_t max_iter = options.max_iter > 0 ? options.max_iter : 10 * n;
  const double target = options.tol * b_norm;

  std::vector<double> x(n, 0.0);
  std::vector<double> r = b;  // r = b - A x with x = 0
  std::vector<double> z(n), p(n), ap(n);

  std::vector<double> diag;
  if (options.jacobi_preconditioner) {
    diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = V[i] * op.row_sums[i];
  }
  const auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
    if (diag.empty()) {
      out = in;
    } else {
      for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / diag[i];
      project_in_place(out, V, v_total);
    }
  };

  precondition(r, z);
  p = z;
  double rz = dot(r, z);

  std::vector<double> best_x = x;
  double best_res = norm2(r);
  std::size_t iterations = 0;

  while (iterations < max_iter && norm2(r) > target) {
    const auto lp = op.apply(p);
    for (std::size_t i = 0; i < n; ++i) ap[i] = V[i] * lp[i];
    const double pap = dot(p, ap);
    if (!std::isfinite(pap) || pap <= 0.0) break;  // p in the nullspace, or breakdown
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
    check_finite(r, "residual");
    subtract_mean_once(x, V, v_total);  // keep the iterate on the constraint
    precondition(r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    ++iterations;

    const double res = norm2(r);
    if (res < best_res) {
      best_res = res;
      best_x = x;
    }
  }

  if (norm2(r) > best_res) x = best_x;
  project_in_place(x, V, v_total);

  const double final_res = true_residual(x);
  report.iterations = iterations;
  report.final_relative_residual = final_res / b_norm;
  report.converged = final_res <= target;
  report.constraint_residual = std::abs(weighted_mean(x, V, v_total));
  result.u = std::move(x);
  return result;
}

}  // namespace pim
