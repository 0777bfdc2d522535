#include "pim/interpolant.hpp"

#include <cmath>
#include <string>

namespace pim {
namespace {

struct Accumulated {
  double num = 0.0;        // R u V + t Rbar f V + 2t Rbar b A
  double den = 0.0;        // R V
  double ru_sum = 0.0;     // R u V alone, for the intermediate operator
};

Accumulated accumulate(const PimSolution& sol, std::span<const double> x,
                       const std::vector<std::size_t>& nb) {
  const KernelSpec& spec = sol.spec();
  const PointCloud& cloud = sol.cloud();
  const double ct = spec.normalization();
  const double t = spec.t;

  Accumulated acc;
  for (std::size_t j : nb) {
    const auto pj = cloud.point(j);
    double d2 = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) {
      const double d = x[a] - pj[a];
      d2 += d * d;
    }
    const double q = d2 / (4.0 * t);
    if (q > 1.0) continue;
    const double rt = ct * eval_profile(spec, q);
    const double rbar = ct * eval_bar(spec, q);
    const double vj = cloud.volume_weights[j];
    acc.ru_sum += rt * sol.u()[j] * vj;
    acc.den += rt * vj;
    acc.num += rt * sol.u()[j] * vj + t * rbar * sol.f_vals()[j] * vj;
    const std::size_t bp = sol.boundary_position(j);
    if (bp != PimSolution::npos)
      acc.num += 2.0 * t * rbar * sol.b_vals()[bp] * cloud.area_weights[bp];
  }
  return acc;
}

[[noreturn]] void out_of_reach(std::span<const double> x) {
  std::string where = "interpolate: no sample within kernel reach of (";
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (a) where += ", ";
    where += std::to_string(x[a]);
  }
  where += ")";
  throw OutOfReach(where);
}

}  // namespace

PimSolution::PimSolution(PointCloud cloud, KernelSpec spec, std::vector<double> u,
                         std::vector<double> f_vals, std::vector<double> b_vals)
    : cloud_(std::move(cloud)),
      spec_(spec),
      u_(std::move(u)),
      f_vals_(std::move(f_vals)),
      b_vals_(std::move(b_vals)),
      grid_(cloud_, spec.support_radius()) {
  cloud_.validate();
  if (u_.size() != cloud_.size() || f_vals_.size() != cloud_.size() ||
      b_vals_.size() != cloud_.boundary_size())
    throw std::invalid_argument("PimSolution: vector lengths do not match the cloud");
  boundary_pos_.assign(cloud_.size(), npos);
  for (std::size_t j = 0; j < cloud_.boundary_size(); ++j)
    boundary_pos_[cloud_.boundary_indices[j]] = j;
}

double interpolate(const PimSolution& sol, std::span<const double> x) {
  const auto nb = sol.grid().neighbors(x, sol.spec().support_radius());
  const auto acc = accumulate(sol, x, nb);
  if (!(acc.den > 0.0)) out_of_reach(x);
  return acc.num / acc.den;
}

std::vector<double> interpolate_gradient(const PimSolution& sol, std::span<const double> x) {
  const KernelSpec& spec = sol.spec();
  const PointCloud& cloud = sol.cloud();
  const double ct = spec.normalization();
  const double t = spec.t;
  const std::size_t d = x.size();

  const auto nb = sol.grid().neighbors(x, spec.support_radius());
  const auto acc = accumulate(sol, x, nb);
  if (!(acc.den > 0.0)) out_of_reach(x);
  const double value = acc.num / acc.den;

  // d/dx R_t = C_t R'(q) (x - p_j) / 2t and d/dx Rbar_t = -R_t (x - p_j) / 2t.
  std::vector<double> grad_num(d, 0.0);
  std::vector<double> grad_den(d, 0.0);
  for (std::size_t j : nb) {
    const auto pj = cloud.point(j);
    double d2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double diff = x[a] - pj[a];
      d2 += diff * diff;
    }
    const double q = d2 / (4.0 * t);
    if (q > 1.0) continue;
    const double rt = ct * eval_profile(spec, q);
    const double rprime = ct * eval_profile_derivative(spec, q);
    const double vj = cloud.volume_weights[j];

    double boundary_term = 0.0;
    const std::size_t bp = sol.boundary_position(j);
    if (bp != PimSolution::npos) boundary_term = sol.b_vals()[bp] * cloud.area_weights[bp];

    for (std::size_t a = 0; a < d; ++a) {
      const double diff = (x[a] - pj[a]) / (2.0 * t);
      grad_den[a] += rprime * diff * vj;
      grad_num[a] += rprime * diff * sol.u()[j] * vj;
      grad_num[a] -= t * rt * diff * sol.f_vals()[j] * vj;
      grad_num[a] -= 2.0 * t * rt * diff * boundary_term;
    }
  }

  std::vector<double> grad(d, 0.0);
  for (std::size_t a = 0; a < d; ++a) grad[a] = (grad_num[a] - value * grad_den[a]) / acc.den;
  return grad;
}

double apply_intermediate(const PimSolution& sol, std::span<const double> x) {
  const auto nb = sol.grid().neighbors(x, sol.spec().support_radius());
  const auto acc = accumulate(sol, x, nb);
  if (!(acc.den > 0.0)) out_of_reach(x);
  const double value = acc.num / acc.den;
  return (value * acc.den - acc.ru_sum) / sol.spec().t;
}

}  // namespace pim
