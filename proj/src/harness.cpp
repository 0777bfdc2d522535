#include "pim/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "pim/weights.hpp"

namespace pim {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Replaces the sampler's exact weights according to the configured source.
void apply_weight_source(PointCloud& cloud, const ManifoldCase& c, WeightSource source) {
  switch (source) {
    case WeightSource::exact:
      return;
    case WeightSource::uniform: {
      cloud.volume_weights = estimate_weights_uniform(cloud.size(), c.volume());
      if (cloud.boundary_size() > 0 && c.boundary_measure() > 0.0)
        cloud.area_weights =
            estimate_weights_uniform(cloud.boundary_size(), c.boundary_measure());
      return;
    }
    case WeightSource::voronoi: {
      const auto est = estimate_weights_tangent_voronoi(cloud.coords, cloud.ambient_dim,
                                                        cloud.intrinsic_dim);
      if (!est.failed.empty())
        throw std::runtime_error("voronoi weights: " + std::to_string(est.failed.size()) +
                                 " degenerate neighborhoods");
      cloud.volume_weights = est.weights;
      // Boundary measures: 1-d boundaries get the same estimator along the
      // boundary submanifold; 0-d boundaries keep the counting measure.
      if (cloud.boundary_size() > 0 && cloud.intrinsic_dim >= 2) {
        std::vector<double> bcoords;
        for (std::size_t j : cloud.boundary_indices) {
          const auto p = cloud.point(j);
          bcoords.insert(bcoords.end(), p.begin(), p.end());
        }
        const auto best =
            estimate_weights_tangent_voronoi(bcoords, cloud.ambient_dim, cloud.intrinsic_dim - 1);
        if (!best.failed.empty())
          throw std::runtime_error("voronoi boundary weights: " +
                                   std::to_string(best.failed.size()) +
                                   " degenerate neighborhoods");
        cloud.area_weights = best.weights;
      }
      return;
    }
  }
  throw std::logic_error("apply_weight_source: unhandled source");
}

}  // namespace

WeightSource weight_source_from_string(std::string_view name) {
  if (name == "exact") return WeightSource::exact;
  if (name == "uniform") return WeightSource::uniform;
  if (name == "voronoi") return WeightSource::voronoi;
  throw std::invalid_argument("unknown weight source: " + std::string(name));
}

Coupling Coupling::custom(double c, double alpha) {
  if (!(c > 0.0)) throw std::invalid_argument("coupling: c must be positive");
  if (!(alpha > 0.0) || alpha > 2.0)
    throw std::invalid_argument("coupling: alpha must lie in (0, 2]");
  return {c, alpha};
}

double Coupling::bandwidth(double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("coupling: h must be positive");
  return c * std::pow(h, alpha);
}

ResultRow run_case(const RunConfig& config, std::size_t n) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto c = make_case(config.case_name);

  Sampled sampled = c->sample(n, config.mode, config.seed);
  PointCloud& cloud = sampled.cloud;
  apply_weight_source(cloud, *c, config.weights);
  cloud.validate();

  double t = 0.0;
  if (config.explicit_t) {
    t = *config.explicit_t;
  } else {
    Coupling coupling = config.coupling ? *config.coupling : Coupling::empirical();
    if (!config.coupling && config.coupling_preset == "theory")
      coupling = Coupling::theory_for(
          std::pow(c->volume(), 1.0 / static_cast<double>(c->intrinsic_dim())));
    t = coupling.bandwidth(sampled.h);
  }

  const KernelSpec spec = KernelSpec::make(config.kernel, t, c->intrinsic_dim());
  const NeighborGrid grid(cloud, spec.support_radius());
  const DiscreteOperator op = assemble_laplacian(cloud, spec, grid);
  ExactFields fields = eval_exact(*c, cloud);
  const std::vector<double> rhs = assemble_rhs(cloud, spec, fields.f, fields.b, &grid);

  SolveOptions options;
  options.tol = config.tol;
  options.max_iter = config.max_iter;
  SolveResult solved = solve(op, rhs, cloud.volume_weights, options);

  ResultRow row;
  row.case_name = config.case_name;
  row.n = cloud.size();
  row.h = sampled.h;
  row.t = t;
  row.iters = solved.report.iterations;
  row.residual = solved.report.final_relative_residual;
  row.converged = solved.report.converged;

  const PimSolution sol(std::move(sampled.cloud), spec, std::move(solved.u),
                        std::move(fields.f), std::move(fields.b));
  const std::size_t n_eval = config.n_eval > 0 ? config.n_eval : 16 * row.n;
  const ErrorNorms norms = error_norms(*c, sol, n_eval);
  row.linf = norms.linf;
  row.l2 = norms.l2;
  row.h1 = norms.h1_seminorm;
  row.skipped = norms.skipped;

  const auto t_end = std::chrono::steady_clock::now();
  row.wall_ms = std::chrono::duration<double, std::milli>(t_end - t_start).count();
  return row;
}

ResultRow run_case(const RunConfig& config) {
  if (config.n_values.empty()) throw std::invalid_argument("run_case: no sample count");
  return run_case(config, config.n_values.front());
}

SweepResult sweep(const RunConfig& config) {
  if (config.n_values.size() < 3)
    throw std::invalid_argument("sweep: needs at least 3 sample counts");
  SweepResult result;
  for (std::size_t n : config.n_values) result.rows.push_back(run_case(config, n));

  std::vector<double> hs, linf, l2, h1;
  for (const ResultRow& row : result.rows) {
    if (!row.converged) continue;
    hs.push_back(row.h);
    linf.push_back(row.linf);
    l2.push_back(row.l2);
    h1.push_back(row.h1);
  }
  if (hs.size() >= 2) {
    result.slope_linf = fit_slope(hs, linf);
    result.slope_l2 = fit_slope(hs, l2);
    result.slope_h1 = fit_slope(hs, h1);
  }
  return result;
}

double fit_slope(std::span<const double> h, std::span<const double> error) {
  if (h.size() != error.size() || h.size() < 2)
    throw std::invalid_argument("fit_slope: needs at least 2 pairs");
  std::vector<double> x(h.size()), y(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(error[i] > 0.0))
      throw std::invalid_argument("fit_slope: inputs must be positive");
    x[i] = std::log(h[i]);
    y[i] = std::log(error[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: spacings are all equal");
  return sxy / sxx;
}

std::string csv_header() { return "case,n,h,t,linf,l2,h1,iters,residual,converged,skipped,wall_ms"; }

std::string csv_row(const ResultRow& row) {
  std::string out = row.case_name;
  out += ',' + std::to_string(row.n);
  out += ',' + fmt(row.h);
  out += ',' + fmt(row.t);
  out += ',' + fmt(row.linf);
  out += ',' + fmt(row.l2);
  out += ',' + fmt(row.h1);
  out += ',' + std::to_string(row.iters);
  out += ',' + fmt(row.residual);
  out += row.converged ? ",1" : ",0";
  out += ',' + std::to_string(row.skipped);
  out += ',' + fmt(row.wall_ms);
  return out;
}

void write_csv(std::span<const ResultRow> rows, std::ostream& out) {
  out << csv_header() << "\n";
  for (const ResultRow& row : rows) out << csv_row(row) << "\n";
}

}  // namespace pim
