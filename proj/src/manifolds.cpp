#include "pim/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pim/rng.hpp"

namespace pim {
namespace {

constexpr double kPi = M_PI;

void require_min_points(std::size_t n) {
  if (n < 4) throw std::invalid_argument("sample: cases need at least 4 points");
}

// M = [0, 1] in R^1. u = cos(pi x), f = pi^2 cos(pi x), b = 0 at both ends
// (u' vanishes there). Grid sampling uses composite trapezoid weights.
class IntervalCase final : public ManifoldCase {
 public:
  std::string_view name() const override { return "interval"; }
  int ambient_dim() const override { return 1; }
  int intrinsic_dim() const override { return 1; }
  double volume() const override { return 1.0; }
  double boundary_measure() const override { return 2.0; }

  Sampled sample(std::size_t n, SampleMode mode, std::uint64_t seed) const override {
    require_min_points(n);
    Sampled out;
    PointCloud& cloud = out.cloud;
    cloud.ambient_dim = 1;
    cloud.intrinsic_dim = 1;
    if (mode == SampleMode::grid) {
      const double h = 1.0 / static_cast<double>(n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        cloud.coords.push_back(static_cast<double>(i) * h);
        cloud.volume_weights.push_back(i == 0 || i == n - 1 ? 0.5 * h : h);
      }
      out.h = h;
    } else {
      SplitMix64 rng(seed);
      cloud.coords.push_back(0.0);
      cloud.coords.push_back(1.0);
      for (std::size_t i = 2; i < n; ++i) cloud.coords.push_back(rng.unit());
      cloud.volume_weights.assign(n, 1.0 / static_cast<double>(n));
      out.h = 1.0 / static_cast<double>(n);
      out.mc_scale = 1.0 / std::sqrt(static_cast<double>(n));
    }
    cloud.boundary_indices = {0, mode == SampleMode::grid ? n - 1 : 1};
    cloud.area_weights = {1.0, 1.0};
    return out;
  }

  double exact_u(std::span<const double> x) const override { return std::cos(kPi * x[0]); }
  double exact_f(std::span<const double> x) const override {
    return kPi * kPi * std::cos(kPi * x[0]);
  }
  double exact_b(std::span<const double>) const override { return 0.0; }

  std::vector<double> tangent_basis(std::span<const double>) const override { return {1.0}; }

  std::vector<double> exact_u_gradient(std::span<const double> x) const override {
    return {-kPi * std::sin(kPi * x[0])};
  }
};

// Unit circle in R^2, closed. u = cos(theta) = x, f = cos(theta): the
// arc-length Laplacian eigenfunction with eigenvalue 1.
class CircleCase final : public ManifoldCase {
 public:
  std::string_view name() const override { return "circle"; }
  int ambient_dim() const override { return 2; }
  int intrinsic_dim() const override { return 1; }
  double volume() const override { return 2.0 * kPi; }
  double boundary_measure() const override { return 0.0; }

  Sampled sample(std::size_t n, SampleMode mode, std::uint64_t seed) const override {
    require_min_points(n);
    Sampled out;
    PointCloud& cloud = out.cloud;
    cloud.ambient_dim = 2;
    cloud.intrinsic_dim = 1;
    const double w = 2.0 * kPi / static_cast<double>(n);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = mode == SampleMode::grid
                               ? 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)
                               : rng.uniform(0.0, 2.0 * kPi);
      cloud.coords.push_back(std::cos(theta));
      cloud.coords.push_back(std::sin(theta));
      cloud.volume_weights.push_back(w);
    }
    out.h = w;
    if (mode == SampleMode::random) out.mc_scale = 1.0 / std::sqrt(static_cast<double>(n));
    return out;
  }

  double exact_u(std::span<const double> x) const override { return x[0]; }
  double exact_f(std::span<const double> x) const override { return x[0]; }
  double exact_b(std::span<const double>) const override { return 0.0; }

  std::vector<double> tangent_basis(std::span<const double> x) const override {
    const double r = std::hypot(x[0], x[1]);
    return {-x[1] / r, x[0] / r};
  }

  std::vector<double> exact_u_gradient(std::span<const double> x) const override {
    // Tangential part of grad(x) = (1, 0).
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return {x[1] * x[1] / r2, -x[0] * x[1] / r2};
  }
};

// Unit sphere in R^3, closed. u = z, f = 2z (degree-1 spherical harmonic).
// The grid sampler tiles latitude bands of uniform angular height with
// near-square equal-area cells; the southern half mirrors the northern half
// exactly, so grid quadratures of odd functions of z cancel.
class SphereCase final : public ManifoldCase {
 public:
  std::string_view name() const override { return "sphere"; }
  int ambient_dim() const override { return 3; }
  int intrinsic_dim() const override { return 2; }
  double volume() const override { return 4.0 * kPi; }
  double boundary_measure() const override { return 0.0; }

  Sampled sample(std::size_t n, SampleMode mode, std::uint64_t seed) const override {
    require_min_points(n);
    Sampled out;
    PointCloud& cloud = out.cloud;
    cloud.ambient_dim = 3;
    cloud.intrinsic_dim = 2;

    if (mode == SampleMode::random) {
      SplitMix64 rng(seed);
      for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        cloud.coords.push_back(rho * std::cos(phi));
        cloud.coords.push_back(rho * std::sin(phi));
        cloud.coords.push_back(z);
      }
      cloud.volume_weights.assign(n, 4.0 * kPi / static_cast<double>(n));
      out.h = std::sqrt(4.0 * kPi / static_cast<double>(n));
      out.mc_scale = 1.0 / std::sqrt(static_cast<double>(n));
      return out;
    }

    const std::size_t n_theta = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(0.5 * std::sqrt(kPi * static_cast<double>(n)))));
    const double dtheta = kPi / static_cast<double>(n_theta);

    struct Band {
      double z = 0.0, rho = 0.0, weight = 0.0;
      std::size_t count = 0;
    };
    std::vector<Band> bands(n_theta);
    for (std::size_t j = 0; j < n_theta / 2; ++j) {
      const double c0 = std::cos(static_cast<double>(j) * dtheta);
      const double c1 = std::cos(static_cast<double>(j + 1) * dtheta);
      const double area = 2.0 * kPi * (c0 - c1);
      const std::size_t count =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(area / (dtheta * dtheta))));
      Band band;
      band.z = 0.5 * (c0 + c1);
      band.rho = std::sqrt(std::max(0.0, 1.0 - band.z * band.z));
      band.weight = area / static_cast<double>(count);
      band.count = count;
      bands[j] = band;
      band.z = -band.z;  // exact mirror image
      bands[n_theta - 1 - j] = band;
    }
    if (n_theta % 2 == 1) {
      const std::size_t j = n_theta / 2;
      const double c0 = std::cos(static_cast<double>(j) * dtheta);
      const double area = 4.0 * kPi * c0;
      const std::size_t count =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(area / (dtheta * dtheta))));
      bands[j] = {0.0, 1.0, area / static_cast<double>(count), count};
    }

    double h = dtheta;
    for (const Band& band : bands) {
      for (std::size_t i = 0; i < band.count; ++i) {
        const double phi = 2.0 * kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(band.count);
        cloud.coords.push_back(band.rho * std::cos(phi));
        cloud.coords.push_back(band.rho * std::sin(phi));
        cloud.coords.push_back(band.z);
        cloud.volume_weights.push_back(band.weight);
      }
      h = std::max(h, 2.0 * kPi * band.rho / static_cast<double>(band.count));
    }
    out.h = h;
    return out;
  }

  double exact_u(std::span<const double> x) const override { return x[2]; }
  double exact_f(std::span<const double> x) const override { return 2.0 * x[2]; }
  double exact_b(std::span<const double>) const override { return 0.0; }

  std::vector<double> tangent_basis(std::span<const double> x) const override {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    if (rho2 < 1e-24) return {1.0, 0.0, 0.0, 0.0, 1.0, 0.0};
    const double rho = std::sqrt(rho2);
    const double t1x = -x[1] / rho, t1y = x[0] / rho;
    // t2 = p x t1, unit for |p| = 1.
    const double t2x = x[1] * 0.0 - x[2] * t1y;
    const double t2y = x[2] * t1x - x[0] * 0.0;
    const double t2z = x[0] * t1y - x[1] * t1x;
    const double norm = std::sqrt(t2x * t2x + t2y * t2y + t2z * t2z);
    return {t1x, t1y, 0.0, t2x / norm, t2y / norm, t2z / norm};
  }

  std::vector<double> exact_u_gradient(std::span<const double> x) const override {
    // Tangential part of grad(z) = (0, 0, 1) on |p| = 1.
    return {-x[2] * x[0], -x[2] * x[1], 1.0 - x[2] * x[2]};
  }
};

// Unit disk in R^2. u = x^2 - y^2 (harmonic, zero mean), f = 0, and the
// nonhomogeneous Neumann datum b = 2(x^2 - y^2) on the unit circle. The grid
// sampler uses polar rings with exact annulus areas: a single near-center
// point carries the innermost disk, interior rings carry their annuli with
// near-square cells, and the outermost ring sits exactly on the boundary so
// the boundary samples are a subset of the point set.
class DiskCase final : public ManifoldCase {
 public:
  std::string_view name() const override { return "disk"; }
  int ambient_dim() const override { return 2; }
  int intrinsic_dim() const override { return 2; }
  double volume() const override { return kPi; }
  double boundary_measure() const override { return 2.0 * kPi; }

  Sampled sample(std::size_t n, SampleMode mode, std::uint64_t seed) const override {
    require_min_points(n);
    Sampled out;
    PointCloud& cloud = out.cloud;
    cloud.ambient_dim = 2;
    cloud.intrinsic_dim = 2;

    if (mode == SampleMode::random) {
      const std::size_t n_boundary = std::min(
          n / 2, std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(
                                              2.0 * std::sqrt(kPi * static_cast<double>(n))))));
      const std::size_t n_interior = n - n_boundary;
      SplitMix64 rng(seed);
      for (std::size_t i = 0; i < n_interior; ++i) {
        const double r = std::sqrt(rng.unit());
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        cloud.coords.push_back(r * std::cos(phi));
        cloud.coords.push_back(r * std::sin(phi));
      }
      for (std::size_t i = 0; i < n_boundary; ++i) {
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        cloud.coords.push_back(std::cos(phi));
        cloud.coords.push_back(std::sin(phi));
        cloud.boundary_indices.push_back(n_interior + i);
        cloud.area_weights.push_back(2.0 * kPi / static_cast<double>(n_boundary));
      }
      cloud.volume_weights.assign(n, kPi / static_cast<double>(n));
      out.h = std::sqrt(kPi / static_cast<double>(n));
      out.mc_scale = 1.0 / std::sqrt(static_cast<double>(n));
      return out;
    }

    const std::size_t n_r = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n) / kPi))));
    const double dr = 1.0 / static_cast<double>(n_r);

    // Near-center point owning the innermost disk [0, dr/2]; placed off the
    // origin, on the diagonal where x^2 - y^2 vanishes.
    cloud.coords.push_back(0.5 * dr * std::cos(0.25 * kPi));
    cloud.coords.push_back(0.5 * dr * std::sin(0.25 * kPi));
    cloud.volume_weights.push_back(kPi * 0.25 * dr * dr);
    double h = dr;

    for (std::size_t j = 1; j < n_r; ++j) {
      const double r = static_cast<double>(j) * dr;
      const double r_lo = r - 0.5 * dr;
      const double r_hi = r + 0.5 * dr;
      const double area = kPi * (r_hi * r_hi - r_lo * r_lo);
      const std::size_t count = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(2.0 * kPi * static_cast<double>(j))));
      for (std::size_t i = 0; i < count; ++i) {
        const double phi = 2.0 * kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        cloud.coords.push_back(r * std::cos(phi));
        cloud.coords.push_back(r * std::sin(phi));
        cloud.volume_weights.push_back(area / static_cast<double>(count));
      }
      h = std::max(h, 2.0 * kPi * r / static_cast<double>(count));
    }

    // Boundary ring at r = 1 owning the outer annulus [1 - dr/2, 1].
    const double r_lo = 1.0 - 0.5 * dr;
    const double area = kPi * (1.0 - r_lo * r_lo);
    const std::size_t m = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::llround(2.0 * kPi * static_cast<double>(n_r))));
    for (std::size_t i = 0; i < m; ++i) {
      const double phi = 2.0 * kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
      cloud.boundary_indices.push_back(cloud.size());
      cloud.coords.push_back(std::cos(phi));
      cloud.coords.push_back(std::sin(phi));
      cloud.volume_weights.push_back(area / static_cast<double>(m));
      cloud.area_weights.push_back(2.0 * kPi / static_cast<double>(m));
    }
    h = std::max(h, 2.0 * kPi / static_cast<double>(m));
    out.h = h;
    return out;
  }

  double exact_u(std::span<const double> x) const override {
    return x[0] * x[0] - x[1] * x[1];
  }
  double exact_f(std::span<const double>) const override { return 0.0; }
  double exact_b(std::span<const double> x) const override {
    return 2.0 * (x[0] * x[0] - x[1] * x[1]);
  }

  std::vector<double> tangent_basis(std::span<const double>) const override {
    return {1.0, 0.0, 0.0, 1.0};
  }

  std::vector<double> exact_u_gradient(std::span<const double> x) const override {
    return {2.0 * x[0], -2.0 * x[1]};
  }
};

}  // namespace

SampleMode sample_mode_from_string(std::string_view name) {
  if (name == "grid") return SampleMode::grid;
  if (name == "random") return SampleMode::random;
  throw std::invalid_argument("unknown sample mode: " + std::string(name));
}

std::unique_ptr<ManifoldCase> make_case(std::string_view name) {
  if (name == "interval") return std::make_unique<IntervalCase>();
  if (name == "circle") return std::make_unique<CircleCase>();
  if (name == "sphere") return std::make_unique<SphereCase>();
  if (name == "disk") return std::make_unique<DiskCase>();
  throw std::invalid_argument("unknown case: " + std::string(name));
}

std::vector<std::string_view> case_names() { return {"interval", "circle", "sphere", "disk"}; }

ExactFields eval_exact(const ManifoldCase& c, const PointCloud& cloud) {
  ExactFields fields;
  fields.u.reserve(cloud.size());
  fields.f.reserve(cloud.size());
  fields.b.reserve(cloud.boundary_size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    fields.u.push_back(c.exact_u(p));
    fields.f.push_back(c.exact_f(p));
  }
  for (std::size_t j : cloud.boundary_indices) fields.b.push_back(c.exact_b(cloud.point(j)));
  return fields;
}

ErrorNorms error_norms(const ManifoldCase& c, const PimSolution& sol, std::size_t n_eval) {
  const Sampled eval = c.sample(n_eval, SampleMode::grid, 0);
  const PointCloud& grid = eval.cloud;
  const int k = c.intrinsic_dim();
  const int d = c.ambient_dim();

  ErrorNorms norms;
  double l2_acc = 0.0;
  double h1_acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    double value = 0.0;
    std::vector<double> grad;
    try {
      value = interpolate(sol, x);
      grad = interpolate_gradient(sol, x);
    } catch (const OutOfReach&) {
      ++norms.skipped;
      continue;
    }
    const double w = grid.volume_weights[i];
    const double e = c.exact_u(x) - value;
    norms.linf = std::max(norms.linf, std::abs(e));
    l2_acc += e * e * w;

    const auto exact_grad = c.exact_u_gradient(x);
    const auto basis = c.tangent_basis(x);
    double tangential2 = 0.0;
    for (int a = 0; a < k; ++a) {
      double comp = 0.0;
      for (int b = 0; b < d; ++b)
        comp += basis[static_cast<std::size_t>(a * d + b)] *
                (grad[static_cast<std::size_t>(b)] - exact_grad[static_cast<std::size_t>(b)]);
      tangential2 += comp * comp;
    }
    h1_acc += tangential2 * w;
  }
  norms.l2 = std::sqrt(l2_acc);
  norms.h1_seminorm = std::sqrt(h1_acc);
  return norms;
}

}  // namespace pim
