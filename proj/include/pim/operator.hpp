#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "pim/kernel.hpp"
#include "pim/neighbor_grid.hpp"
#include "pim/pointcloud.hpp"

namespace pim {

/// The discrete integral Laplacian, stored row-wise in CSR form:
///   w_ij = R_t(p_i, p_j) V_j / t  for |p_i - p_j| <= 2 sqrt(t), self included,
///   (L u)_i = sum_j w_ij (u_i - u_j) = d_i u_i - sum_j w_ij u_j.
/// The raw operator is not symmetric (V_j sits on the right); V_i w_ij is.
struct DiscreteOperator {
  std::size_t n = 0;
  double t = 0.0;
  std::vector<std::size_t> row_offsets;  ///< n + 1
  std::vector<std::size_t> cols;         ///< ascending within each row
  std::vector<double> weights;           ///< w_ij >= 0
  std::vector<double> row_sums;          ///< d_i = sum_j w_ij

  std::size_t stored_entries() const { return cols.size(); }

  /// (L u)_i, summed over ascending j. A constant u maps to exactly zero.
  std::vector<double> apply(std::span<const double> u) const;
};

/// Assembles the operator using the given grid (cell size must cover the
/// kernel support radius 2 sqrt(t)).
DiscreteOperator assemble_laplacian(const PointCloud& cloud, const KernelSpec& spec,
                                    const NeighborGrid& grid);

/// Convenience overload that builds its own support-radius grid.
DiscreteOperator assemble_laplacian(const PointCloud& cloud, const KernelSpec& spec);

/// Right-hand side of the discrete system L u = rhs:
///   rhs_i = sum_j Rbar_t(p_i, p_j) f_j V_j + 2 sum_{s_j in S} Rbar_t(p_i, s_j) b_j A_j.
/// f_vals has length n, b_vals length m (boundary order).
std::vector<double> assemble_rhs(const PointCloud& cloud, const KernelSpec& spec,
                                 std::span<const double> f_vals,
                                 std::span<const double> b_vals,
                                 const NeighborGrid* grid = nullptr);

/// <u, L u>_V = sum_i u_i (L u)_i V_i. Equals the graph Dirichlet energy
/// (1/2t) sum_ij R_t(p_i, p_j) (u_i - u_j)^2 V_i V_j, hence nonnegative.
double quadratic_form(const DiscreteOperator& op, const PointCloud& cloud,
                      std::span<const double> u);

/// Kernel smoothing v_i = sum_j R_t(p_i, p_j) u_j V_j / sum_j R_t(p_i, p_j) V_j.
/// The self pair keeps the denominator positive; each v_i is a convex
/// combination of nearby u values.
std::vector<double> smooth(const PointCloud& cloud, const KernelSpec& spec,
                           std::span<const double> u, const NeighborGrid* grid = nullptr);

/// Kernel mass w_i = sum_j R_t(p_i, p_j) V_j (the smoothing denominators).
std::vector<double> kernel_mass(const PointCloud& cloud, const KernelSpec& spec,
                                const NeighborGrid* grid = nullptr);

/// Coordinate-text dump, one `i j w_ij` line per stored entry, 0-based,
/// ascending (i, j).
void dump_coordinate_text(const DiscreteOperator& op, std::ostream& out);

}  // namespace pim
