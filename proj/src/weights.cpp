#include "pim/weights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pim {
namespace {

// 1-d cell: distance between the clipped bisectors on either side of the
// origin. Neighbors are signed tangent coordinates.
double cell_measure_1d(std::span<const double> proj, double clip) {
  double left = -clip;
  double right = clip;
  for (double y : proj) {
    if (y > 0.0) right = std::min(right, 0.5 * y);
    else if (y < 0.0) left = std::max(left, 0.5 * y);
  }
  return right - left;
}

// 2-d cell: Sutherland-Hodgman clip of a regular polygon (standing in for the
// clipping disk) against every bisector half-plane {x : x . q <= |q|^2 / 2}.
// The origin lies strictly inside every half-plane, so the cell is never
// empty and its area is positive.
double cell_measure_2d(std::span<const double> proj_xy, double clip, int sides) {
  std::vector<double> poly;
  poly.reserve(static_cast<std::size_t>(2 * sides));
  for (int i = 0; i < sides; ++i) {
    const double a = 2.0 * M_PI * (i + 0.5) / sides;
    poly.push_back(clip * std::cos(a));
    poly.push_back(clip * std::sin(a));
  }

  std::vector<double> next;
  for (std::size_t j = 0; j + 1 < proj_xy.size(); j += 2) {
    const double qx = proj_xy[j];
    const double qy = proj_xy[j + 1];
    const double q2 = qx * qx + qy * qy;
    if (q2 < 1e-24 * clip * clip) continue;  // coincident sample, no bisector
    const double half = 0.5 * q2;
    next.clear();
    const std::size_t nv = poly.size() / 2;
    for (std::size_t v = 0; v < nv; ++v) {
      const double ax = poly[2 * v], ay = poly[2 * v + 1];
      const std::size_t w = (v + 1) % nv;
      const double bx = poly[2 * w], by = poly[2 * w + 1];
      const double da = ax * qx + ay * qy - half;
      const double db = bx * qx + by * qy - half;
      if (da <= 0.0) {
        next.push_back(ax);
        next.push_back(ay);
      }
      if ((da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0)) {
        const double s = da / (da - db);
        next.push_back(ax + s * (bx - ax));
        next.push_back(ay + s * (by - ay));
      }
    }
    poly.swap(next);
    if (poly.size() < 6) return 0.0;
  }

  double area2 = 0.0;
  const std::size_t nv = poly.size() / 2;
  for (std::size_t v = 0; v < nv; ++v) {
    const std::size_t w = (v + 1) % nv;
    area2 += poly[2 * v] * poly[2 * w + 1] - poly[2 * w] * poly[2 * v + 1];
  }
  return 0.5 * std::abs(area2);
}

}  // namespace

std::vector<double> estimate_weights_uniform(std::size_t n, double total_volume) {
  if (n < 1) throw std::invalid_argument("estimate_weights_uniform: n must be >= 1");
  if (!(total_volume > 0.0))
    throw std::invalid_argument("estimate_weights_uniform: total volume must be positive");
  return std::vector<double>(n, total_volume / static_cast<double>(n));
}

TangentVoronoiResult estimate_weights_tangent_voronoi(std::span<const double> coords,
                                                      int ambient_dim, int intrinsic_dim,
                                                      const TangentVoronoiConfig& config) {
  const int d = ambient_dim;
  const int k = intrinsic_dim;
  if (d < 1 || k < 1 || k > d)
    throw std::invalid_argument("tangent_voronoi: bad dimensions");
  if (k > 2) throw std::invalid_argument("tangent_voronoi: only k = 1 and k = 2 are supported");
  if (config.k_nn < k + 2)
    throw std::invalid_argument("tangent_voronoi: k_nn must be at least k + 2");
  const std::size_t n = coords.size() / static_cast<std::size_t>(d);
  if (n < static_cast<std::size_t>(config.k_nn) + 1)
    throw std::invalid_argument("tangent_voronoi: needs at least k_nn + 1 points");

  const std::size_t knn = static_cast<std::size_t>(config.k_nn);
  TangentVoronoiResult result;
  result.weights.assign(n, std::numeric_limits<double>::quiet_NaN());

  std::vector<std::size_t> order(n);
  std::vector<double> dist2(n);
  std::vector<double> proj;

  for (std::size_t i = 0; i < n; ++i) {
    const double* p = coords.data() + i * static_cast<std::size_t>(d);
    for (std::size_t j = 0; j < n; ++j) {
      const double* q = coords.data() + j * static_cast<std::size_t>(d);
      double s = 0.0;
      for (int a = 0; a < d; ++a) {
        const double df = q[a] - p[a];
        s += df * df;
      }
      dist2[j] = s;
    }
    std::iota(order.begin(), order.end(), 0);
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(knn),
                     order.end(), [&](std::size_t a, std::size_t b) {
                       return dist2[a] != dist2[b] ? dist2[a] < dist2[b] : a < b;
                     });
    // order[0..knn] holds p itself plus its knn nearest neighbors.
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(knn + 1),
              [&](std::size_t a, std::size_t b) {
                return dist2[a] != dist2[b] ? dist2[a] < dist2[b] : a < b;
              });

    const double rho = std::sqrt(dist2[order[knn]]);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t r = 1; r <= knn; ++r) {
      const double* q = coords.data() + order[r] * static_cast<std::size_t>(d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) cov(a, b) += (q[a] - p[a]) * (q[b] - p[b]);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    // Eigenvalues come back ascending; the tangent plane spans the top k.
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double top = ev(d - 1);
    if (!(top > 0.0) || ev(d - k) < config.rank_tolerance * top || !(rho > 0.0)) {
      result.failed.push_back(i);
      continue;
    }

    proj.assign(knn * static_cast<std::size_t>(k), 0.0);
    for (std::size_t r = 1; r <= knn; ++r) {
      const double* q = coords.data() + order[r] * static_cast<std::size_t>(d);
      for (int a = 0; a < k; ++a) {
        double s = 0.0;
        for (int b = 0; b < d; ++b) s += eig.eigenvectors()(b, d - 1 - a) * (q[b] - p[b]);
        proj[(r - 1) * static_cast<std::size_t>(k) + static_cast<std::size_t>(a)] = s;
      }
    }

    const double clip = 0.5 * rho;
    const double w = k == 1 ? cell_measure_1d(proj, clip)
                            : cell_measure_2d(proj, clip, config.clip_polygon_sides);
    if (w > 0.0) result.weights[i] = w;
    else result.failed.push_back(i);
  }

  return result;
}

}  // namespace pim
