#include "pim/neighbor_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pim {
namespace {

long long cell_of(double x, double cell_size) {
  return static_cast<long long>(std::floor(x / cell_size));
}

}  // namespace

NeighborGrid::NeighborGrid(const PointCloud& cloud, double radius)
    : dim_(cloud.ambient_dim), count_(cloud.size()), cell_size_(radius), coords_(cloud.coords) {
  if (count_ == 0) throw std::invalid_argument("build_grid: empty cloud");
  if (!(radius > 0.0)) throw std::invalid_argument("build_grid: radius must be positive");

  std::vector<long long> cell(static_cast<std::size_t>(dim_));
  for (std::size_t i = 0; i < count_; ++i) {
    const double* p = coords_.data() + i * static_cast<std::size_t>(dim_);
    for (int a = 0; a < dim_; ++a) cell[static_cast<std::size_t>(a)] = cell_of(p[a], cell_size_);
    buckets_[cell_key(cell)].push_back(i);
  }
}

std::uint64_t NeighborGrid::cell_key(std::span<const long long> cell) const {
  std::uint64_t h = 1469598103934665603ull;
  for (long long c : cell) {
    h ^= static_cast<std::uint64_t>(c) * 0x9E3779B97F4A7C15ull;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::size_t> NeighborGrid::neighbors(std::span<const double> x,
                                                 double radius) const {
  if (x.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("neighbors: query dimension mismatch");
  if (!(radius > 0.0) && radius != 0.0)
    throw std::invalid_argument("neighbors: radius must be nonnegative");
  if (radius > cell_size_)
    throw std::invalid_argument("neighbors: radius exceeds grid cell size; rebuild the grid");

  std::vector<long long> lo(static_cast<std::size_t>(dim_));
  std::vector<long long> hi(static_cast<std::size_t>(dim_));
  for (int a = 0; a < dim_; ++a) {
    lo[static_cast<std::size_t>(a)] = cell_of(x[static_cast<std::size_t>(a)] - radius, cell_size_);
    hi[static_cast<std::size_t>(a)] = cell_of(x[static_cast<std::size_t>(a)] + radius, cell_size_);
  }

  const double r2 = radius * radius;
  std::vector<std::size_t> result;
  std::vector<long long> cell = lo;
  // Odometer over the (at most 3^d) candidate cells. Distinct cells can share
  // a bucket through hash collisions, so candidates are distance-tested here
  // and de-duplicated after the sort below.
  while (true) {
    const auto it = buckets_.find(cell_key(cell));
    if (it != buckets_.end()) {
      for (std::size_t j : it->second) {
        const double* p = coords_.data() + j * static_cast<std::size_t>(dim_);
        double d2 = 0.0;
        for (int a = 0; a < dim_; ++a) {
          const double d = x[static_cast<std::size_t>(a)] - p[a];
          d2 += d * d;
        }
        if (d2 <= r2) result.push_back(j);
      }
    }
    int axis = 0;
    while (axis < dim_) {
      auto& c = cell[static_cast<std::size_t>(axis)];
      if (++c <= hi[static_cast<std::size_t>(axis)]) break;
      c = lo[static_cast<std::size_t>(axis)];
      ++axis;
    }
    if (axis == dim_) break;
  }

  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

NeighborGrid build_grid(const PointCloud& cloud, double radius) {
  return NeighborGrid(cloud, radius);
}

}  // namespace pim
