#include "pim/operator.hpp"

#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace pim {
namespace {

void check_grid(const KernelSpec& spec, const NeighborGrid& grid) {
  if (grid.cell_size() < spec.support_radius())
    throw std::invalid_argument("operator: grid cell size is below the kernel support radius");
}

double pair_rt(const KernelSpec& spec, double ct, std::span<const double> x,
               std::span<const double> y) {
  double d2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double d = x[a] - y[a];
    d2 += d * d;
  }
  const double q = d2 / (4.0 * spec.t);
  return q > 1.0 ? 0.0 : ct * eval_profile(spec, q);
}

double pair_rbar(const KernelSpec& spec, double ct, std::span<const double> x,
                 std::span<const double> y) {
  double d2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double d = x[a] - y[a];
    d2 += d * d;
  }
  const double q = d2 / (4.0 * spec.t);
  return q > 1.0 ? 0.0 : ct * eval_bar(spec, q);
}

}  // namespace

DiscreteOperator assemble_laplacian(const PointCloud& cloud, const KernelSpec& spec,
                                    const NeighborGrid& grid) {
  if (cloud.size() == 0) throw std::invalid_argument("assemble_laplacian: empty cloud");
  check_grid(spec, grid);

  const std::size_t n = cloud.size();
  const double ct = spec.normalization();
  const double radius = spec.support_radius();

  DiscreteOperator op;
  op.n = n;
  op.t = spec.t;
  op.row_offsets.assign(n + 1, 0);
  op.row_sums.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = cloud.point(i);
    const auto nb = grid.neighbors(pi, radius);
    double row_sum = 0.0;
    for (std::size_t j : nb) {
      const double w = pair_rt(spec, ct, pi, cloud.point(j)) * cloud.volume_weights[j] / spec.t;
      op.cols.push_back(j);
      op.weights.push_back(w);
      row_sum += w;
    }
    op.row_sums[i] = row_sum;
    op.row_offsets[i + 1] = op.cols.size();
  }
  return op;
}

DiscreteOperator assemble_laplacian(const PointCloud& cloud, const KernelSpec& spec) {
  const NeighborGrid grid(cloud, spec.support_radius());
  return assemble_laplacian(cloud, spec, grid);
}

std::vector<double> DiscreteOperator::apply(std::span<const double> u) const {
  if (u.size() != n) throw std::invalid_argument("apply: vector length mismatch");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    double acc = 0.0;
    for (std::size_t e = row_offsets[i]; e < row_offsets[i + 1]; ++e)
      acc += weights[e] * (ui - u[cols[e]]);
    out[i] = acc;
  }
  return out;
}

std::vector<double> assemble_rhs(const PointCloud& cloud, const KernelSpec& spec,
                                 std::span<const double> f_vals,
                                 std::span<const double> b_vals, const NeighborGrid* grid) {
  const std::size_t n = cloud.size();
  const std::size_t m = cloud.boundary_size();
  if (f_vals.size() != n) throw std::invalid_argument("assemble_rhs: f length mismatch");
  if (b_vals.size() != m) throw std::invalid_argument("assemble_rhs: b length mismatch");

  std::optional<NeighborGrid> own;
  if (grid == nullptr) {
    own.emplace(cloud, spec.support_radius());
    grid = &*own;
  }
  check_grid(spec, *grid);

  // Boundary position of each point, or npos when interior.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> boundary_pos(n, npos);
  for (std::size_t j = 0; j < m; ++j) boundary_pos[cloud.boundary_indices[j]] = j;

  const double ct = spec.normalization();
  const double radius = spec.support_radius();
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = cloud.point(i);
    const auto nb = grid->neighbors(pi, radius);
    double interior = 0.0;
    double boundary = 0.0;
    for (std::size_t j : nb) {
      const double rbar = pair_rbar(spec, ct, pi, cloud.point(j));
      interior += rbar * f_vals[j] * cloud.volume_weights[j];
      const std::size_t bp = boundary_pos[j];
      if (bp != npos) boundary += rbar * b_vals[bp] * cloud.area_weights[bp];
    }
    rhs[i] = interior + 2.0 * boundary;
  }
  return rhs;
}

double quadratic_form(const DiscreteOperator& op, const PointCloud& cloud,
                      std::span<const double> u) {
  if (u.size() != op.n || cloud.size() != op.n)
    throw std::invalid_argument("quadratic_form: length mismatch");
  const auto lu = op.apply(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < op.n; ++i) acc += u[i] * lu[i] * cloud.volume_weights[i];
  return acc;
}

std::vector<double> kernel_mass(const PointCloud& cloud, const KernelSpec& spec,
                                const NeighborGrid* grid) {
  std::optional<NeighborGrid> own;
  if (grid == nullptr) {
    own.emplace(cloud, spec.support_radius());
    grid = &*own;
  }
  check_grid(spec, *grid);

  const std::size_t n = cloud.size();
  const double ct = spec.normalization();
  const double radius = spec.support_radius();
  std::vector<double> mass(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = cloud.point(i);
    double acc = 0.0;
    for (std::size_t j : grid->neighbors(pi, radius))
      acc += pair_rt(spec, ct, pi, cloud.point(j)) * cloud.volume_weights[j];
    mass[i] = acc;
  }
  return mass;
}

std::vector<double> smooth(const PointCloud& cloud, const KernelSpec& spec,
                           std::span<const double> u, const NeighborGrid* grid) {
  const std::size_t n = cloud.size();
  if (u.size() != n) throw std::invalid_argument("smooth: vector length mismatch");

  std::optional<NeighborGrid> own;
  if (grid == nullptr) {
    own.emplace(cloud, spec.support_radius());
    grid = &*own;
  }
  check_grid(spec, *grid);

  const double ct = spec.normalization();
  const double radius = spec.support_radius();
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = cloud.point(i);
    // Deviation form of the weighted average: exact for constants and for
    // points whose support holds only themselves. den > 0 since the self
    // pair contributes C_t R(0) V_i.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j : grid->neighbors(pi, radius)) {
      const double rt = pair_rt(spec, ct, pi, cloud.point(j));
      num += rt * cloud.volume_weights[j] * (u[j] - u[i]);
      den += rt * cloud.volume_weights[j];
    }
    v[i] = u[i] + num / den;
  }
  return v;
}

void dump_coordinate_text(const DiscreteOperator& op, std::ostream& out) {
  char buf[96];
  for (std::size_t i = 0; i < op.n; ++i) {
    for (std::size_t e = op.row_offsets[i]; e < op.row_offsets[i + 1]; ++e) {
      std::snprintf(buf, sizeof(buf), "%zu %zu %.17g\n", i, op.cols[e], op.weights[e]);
      out << buf;
    }
  }
}

}  // namespace pim
