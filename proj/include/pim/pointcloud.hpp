#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace pim {

/// The sample data (P, S, V, A): n points in R^d with positive volume weights,
/// and m boundary samples (indices into the points) with positive area
/// weights. Immutable after construction by convention; all queries are
/// read-only.
struct PointCloud {
  int ambient_dim = 0;    ///< d
  int intrinsic_dim = 0;  ///< k <= d
  std::vector<double> coords;                 ///< n * d, row-major
  std::vector<double> volume_weights;         ///< V, length n
  std::vector<std::size_t> boundary_indices;  ///< S, length m, indices into points
  std::vector<double> area_weights;           ///< A, length m

  std::size_t size() const { return volume_weights.size(); }
  std::size_t boundary_size() const { return boundary_indices.size(); }

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(ambient_dim),
            static_cast<std::size_t>(ambient_dim)};
  }

  /// Checks the structural invariants (n >= 1, positive weights, distinct
  /// in-range boundary indices, coordinate count). Throws on violation.
  void validate() const;
};

/// Reads a point cloud from the CSV schema:
///   # d=<d> k=<k> n=<n> m=<m>
///   x1,...,xd,V          (n rows)
///   index,A              (m rows, 0-based indices)
/// Errors name the offending row.
PointCloud load_cloud(const std::filesystem::path& path);

/// Writes the same schema with 17 significant digits, so that save followed
/// by load reproduces every finite field bit-exactly.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace pim
