#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "pim/pointcloud.hpp"

namespace pim {

/// Uniform spatial hash over the cloud's points with cell size equal to the
/// query radius. Queries are exact: they return precisely the indices j with
/// |x - p_j| <= radius, in ascending order, provided radius <= cell_size.
/// The grid owns a copy of the coordinates, so it stays valid independently
/// of the source cloud's lifetime.
class NeighborGrid {
 public:
  NeighborGrid(const PointCloud& cloud, double radius);

  double cell_size() const { return cell_size_; }
  std::size_t point_count() const { return count_; }

  /// Exact fixed-radius query. Throws if radius exceeds cell_size (the grid
  /// must be rebuilt with a larger cell in that case).
  std::vector<std::size_t> neighbors(std::span<const double> x, double radius) const;

 private:
  std::uint64_t cell_key(std::span<const long long> cell) const;

  int dim_ = 0;
  std::size_t count_ = 0;
  double cell_size_ = 0.0;
  std::vector<double> coords_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

/// Builds a grid whose cell size equals the given radius.
NeighborGrid build_grid(const PointCloud& cloud, double radius);

}  // namespace pim
