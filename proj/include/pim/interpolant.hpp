#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pim/kernel.hpp"
#include "pim/neighbor_grid.hpp"
#include "pim/pointcloud.hpp"

namespace pim {

/// Raised when an evaluation point has no sample within the kernel support;
/// the reconstruction does not extrapolate.
struct OutOfReach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A solved nodal vector together with everything needed to evaluate the
/// continuous reconstruction off the samples:
///   I(x) = [ sum_j R_t(x,p_j) u_j V_j + t sum_j Rbar_t(x,p_j) f_j V_j
///            + 2t sum_{s_j} Rbar_t(x,s_j) b_j A_j ] / sum_j R_t(x,p_j) V_j.
/// When (u, f, b) satisfy the discrete system, I interpolates u at the
/// samples. Evaluation is read-only and reusable from any context.
class PimSolution {
 public:
  PimSolution(PointCloud cloud, KernelSpec spec, std::vector<double> u,
              std::vector<double> f_vals, std::vector<double> b_vals);

  const PointCloud& cloud() const { return cloud_; }
  const KernelSpec& spec() const { return spec_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& f_vals() const { return f_vals_; }
  const std::vector<double>& b_vals() const { return b_vals_; }
  const NeighborGrid& grid() const { return grid_; }

  /// Boundary position of point j, or npos when interior.
  std::size_t boundary_position(std::size_t j) const { return boundary_pos_[j]; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  PointCloud cloud_;
  KernelSpec spec_;
  std::vector<double> u_, f_vals_, b_vals_;
  std::vector<std::size_t> boundary_pos_;
  NeighborGrid grid_;
};

/// Evaluates the reconstruction at an ambient point. Throws OutOfReach when
/// no sample lies within 2 sqrt(t) of x.
double interpolate(const PimSolution& sol, std::span<const double> x);

/// Exact ambient gradient of the reconstruction, by differentiating the
/// kernels through the chain rule and the quotient rule.
std::vector<double> interpolate_gradient(const PimSolution& sol, std::span<const double> x);

/// The intermediate operator applied to the reconstruction at x:
///   (1/t) sum_j R_t(x, p_j) (I(x) - u_j) V_j.
/// Algebraically this equals the right-hand-side sums
///   sum_j Rbar_t(x,p_j) f_j V_j + 2 sum_{s_j} Rbar_t(x,s_j) b_j A_j
/// at every reachable x, whatever the nodal vector is.
double apply_intermediate(const PimSolution& sol, std::span<const double> x);

}  // namespace pim
