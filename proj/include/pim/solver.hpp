#pragma once

#include <span>
#include <vector>

#include "pim/operator.hpp"

namespace pim {

struct SolveOptions {
  double tol = 1e-10;          ///< relative residual target
  std::size_t max_iter = 0;    ///< 0 means 10 * n
  bool jacobi_preconditioner = false;
};

struct SolveReport {
  std::size_t iterations = 0;
  double final_relative_residual = 0.0;
  double constraint_residual = 0.0;  ///< |sum u_i V_i| / sum V_i
  double rhs_mean_removed = 0.0;     ///< magnitude of the dropped V-mean of rhs
  bool converged = false;
};

struct SolveResult {
  std::vector<double> u;
  SolveReport report;
};

/// Removes the V-weighted mean, repeating the subtraction until it is an
/// exact fixed point, so projecting twice equals projecting once bitwise.
std::vector<double> project_v_mean_zero(std::span<const double> x, std::span<const double> V);

/// Solves the singular system L u = rhs under the zero-mean normalization
/// sum u_i V_i = 0. The V-weighted mean of rhs (the incompatible component)
/// is removed first and its magnitude reported. Conjugate gradient runs on
/// the symmetric positive-semidefinite form D_V L u = D_V rhs_projected,
/// re-projecting the iterate onto the mean-zero subspace each iteration.
/// converged is set iff the recomputed true residual satisfies
/// ||D_V (L u - rhs_projected)||_2 <= tol ||D_V rhs_projected||_2;
/// on max_iter exhaustion the best iterate seen is returned. NaN or Inf in
/// the iteration is a hard failure.
SolveResult solve(const DiscreteOperator& op, std::span<const double> rhs,
                  std::span<const double> V, const SolveOptions& options = {});

}  // namespace pim
