#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pim {

/// Constant quadrature weights for uniformly distributed samples: every entry
/// is total_volume / n.
std::vector<double> estimate_weights_uniform(std::size_t n, double total_volume);

/// Tuning knobs for the tangent-plane Voronoi estimator. The neighbor count
/// and the clipping rule are choices, not part of the method, so they are
/// surfaced here.
struct TangentVoronoiConfig {
  int k_nn = 12;                 ///< neighbors per point (>= k + 2)
  int clip_polygon_sides = 128;  ///< polygonal stand-in for the clipping disk (k = 2)
  double rank_tolerance = 1e-8;  ///< covariance eigenvalue floor, relative to the largest
};

struct TangentVoronoiResult {
  std::vector<double> weights;      ///< estimated cell measures; NaN where failed
  std::vector<std::size_t> failed;  ///< points whose neighborhood was rank-deficient
};

/// Per-point quadrature weights from local tangent fits: the k_nn nearest
/// neighbors of p are centered at p, a tangent k-plane is fit by principal
/// components, everything is projected into the plane, and the weight is the
/// measure of p's Voronoi cell there, clipped to the disk of radius half the
/// k_nn-th neighbor distance. Supports k = 1 and k = 2.
TangentVoronoiResult estimate_weights_tangent_voronoi(std::span<const double> coords,
                                                      int ambient_dim, int intrinsic_dim,
                                                      const TangentVoronoiConfig& config = {});

}  // namespace pim
