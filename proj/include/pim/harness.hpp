#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pim/kernel.hpp"
#include "pim/manifolds.hpp"
#include "pim/solver.hpp"

namespace pim {

enum class WeightSource { exact, uniform, voronoi };

WeightSource weight_source_from_string(std::string_view name);

/// Bandwidth rule t = c * h^alpha (t is in squared-length units). Presets:
/// `empirical` ties the kernel length scale to the spacing, sqrt(t) = 3h,
/// i.e. t = 9h^2, the regime where the observed rate is about linear;
/// `theory` is t = sqrt(h * L) with L = |M|^(1/k), the scale-aware version
/// of the t ~ h^(1/2) balance of the worst-case error bound, whose expected
/// rate is h^(1/4).
struct Coupling {
  double c = 9.0;
  double alpha = 2.0;

  static Coupling empirical() { return {9.0, 2.0}; }
  static Coupling theory_for(double length_scale) { return {std::sqrt(length_scale), 0.5}; }
  static Coupling custom(double c, double alpha);

  double bandwidth(double h) const;
};

struct RunConfig {
  std::string case_name = "interval";
  std::vector<std::size_t> n_values = {100};
  std::optional<double> explicit_t;        ///< fixed bandwidth; overrides coupling
  std::optional<Coupling> coupling;        ///< t from h; empirical preset when unset
  std::string coupling_preset = "empirical";  ///< empirical | theory | custom
  KernelProfile kernel = KernelProfile::wendland_c2;
  SampleMode mode = SampleMode::grid;
  std::uint64_t seed = 0;
  WeightSource weights = WeightSource::exact;
  double tol = 1e-10;
  std::size_t max_iter = 0;  ///< 0 means solver default
  std::size_t n_eval = 0;    ///< 0 means 16 * n
};

struct ResultRow {
  std::string case_name;
  std::size_t n = 0;  ///< actual sample count (grids adjust the request)
  double h = 0.0;
  double t = 0.0;
  double linf = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  std::size_t iters = 0;
  double residual = 0.0;
  bool converged = false;
  std::size_t skipped = 0;
  double wall_ms = 0.0;
};

/// One end-to-end run at the given sample count: sample, weights, assemble,
/// solve, reconstruct, error norms. Deterministic given the seed.
ResultRow run_case(const RunConfig& config, std::size_t n);

/// Convenience: runs the first entry of n_values.
ResultRow run_case(const RunConfig& config);

struct SweepResult {
  std::vector<ResultRow> rows;
  double slope_linf = 0.0;
  double slope_l2 = 0.0;
  double slope_h1 = 0.0;
};

/// Runs every n in the config (at least 3) and fits log-log slopes of each
/// error norm against h over the converged rows.
SweepResult sweep(const RunConfig& config);

/// Least-squares slope of log(error) against log(h). All inputs must be
/// positive; at least 2 pairs.
double fit_slope(std::span<const double> h, std::span<const double> error);

/// CSV header: case,n,h,t,linf,l2,h1,iters,residual,converged,skipped,wall_ms
std::string csv_header();
std::string csv_row(const ResultRow& row);
void write_csv(std::span<const ResultRow> rows, std::ostream& out);

}  // namespace pim
