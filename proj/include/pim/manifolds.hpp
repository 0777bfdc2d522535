#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "pim/interpolant.hpp"
#include "pim/pointcloud.hpp"

namespace pim {

enum class SampleMode { grid, random };

SampleMode sample_mode_from_string(std::string_view name);

/// A sampled cloud plus the spacing scales the harness reports: h is the max
/// adjacent spacing for grid mode and the |M|^(1/k) n^(-1/k) proxy for random
/// mode; mc_scale is the Monte Carlo scale n^(-1/2) (random mode only, else 0).
struct Sampled {
  PointCloud cloud;
  double h = 0.0;
  double mc_scale = 0.0;
};

struct ExactFields {
  std::vector<double> u;  ///< length n
  std::vector<double> f;  ///< length n
  std::vector<double> b;  ///< length m, boundary order
};

struct ErrorNorms {
  double linf = 0.0;
  double l2 = 0.0;
  double h1_seminorm = 0.0;
  std::size_t skipped = 0;  ///< evaluation points out of kernel reach
};

/// An analytic test manifold: deterministic samplers with exact quadrature
/// weights, a closed-form solution triple (u, f, b) of the Neumann problem
/// with zero-mean u, tangent frames, and an evaluation quadrature for error
/// norms. Everything is immutable and deterministic in (n, mode, seed).
class ManifoldCase {
 public:
  virtual ~ManifoldCase() = default;

  virtual std::string_view name() const = 0;
  virtual int ambient_dim() const = 0;
  virtual int intrinsic_dim() const = 0;
  virtual double volume() const = 0;            ///< |M|
  virtual double boundary_measure() const = 0;  ///< |dM|, 0 when closed

  /// Structured grids adjust n to the nearest supported layout; the returned
  /// cloud's size is the adjusted value.
  virtual Sampled sample(std::size_t n, SampleMode mode, std::uint64_t seed) const = 0;

  virtual double exact_u(std::span<const double> x) const = 0;
  virtual double exact_f(std::span<const double> x) const = 0;
  virtual double exact_b(std::span<const double> x) const = 0;

  /// k orthonormal ambient tangent vectors at a manifold point, row-major k x d.
  virtual std::vector<double> tangent_basis(std::span<const double> x) const = 0;

  /// Tangential part of the ambient gradient of exact_u.
  virtual std::vector<double> exact_u_gradient(std::span<const double> x) const = 0;
};

std::unique_ptr<ManifoldCase> make_case(std::string_view name);
std::vector<std::string_view> case_names();

/// Closed-form (u, f, b) at the cloud's samples.
ExactFields eval_exact(const ManifoldCase& c, const PointCloud& cloud);

/// Error norms of the reconstruction against the exact solution, measured on
/// an independent structured evaluation grid of about n_eval points with
/// exact quadrature measures. The H1 seminorm uses the gradient difference
/// projected onto the analytic tangent frame. Out-of-reach evaluation points
/// are skipped and counted.
ErrorNorms error_norms(const ManifoldCase& c, const PimSolution& sol, std::size_t n_eval);

}  // namespace pim
