#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pim/harness.hpp"

namespace {

struct CommonOptions {
  std::string case_name = "interval";
  std::string kernel = "wendland_c2";
  std::string weights = "exact";
  std::string mode = "grid";
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::size_t max_iter = 0;
  std::size_t n_eval = 0;
  std::string out = "-";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--case", opts.case_name, "interval|circle|sphere|disk")
      ->default_str(opts.case_name);
  cmd->add_option("--kernel", opts.kernel, "wendland_c2|truncated_gaussian")
      ->default_str(opts.kernel);
  cmd->add_option("--weights", opts.weights, "exact|uniform|voronoi")->default_str(opts.weights);
  cmd->add_option("--mode", opts.mode, "grid|random")->default_str(opts.mode);
  cmd->add_option("--seed", opts.seed, "sampler seed");
  cmd->add_option("--tol", opts.tol, "solver relative residual")->default_str("1e-10");
  cmd->add_option("--max-iter", opts.max_iter, "solver iteration cap (0 = 10n)");
  cmd->add_option("--n-eval", opts.n_eval, "error-norm evaluation points (0 = 16n)");
  cmd->add_option("--out", opts.out, "output CSV path, '-' for stdout")->default_str("-");
}

pim::RunConfig to_config(const CommonOptions& opts) {
  pim::RunConfig config;
  config.case_name = opts.case_name;
  config.kernel = pim::kernel_profile_from_string(opts.kernel);
  config.weights = pim::weight_source_from_string(opts.weights);
  config.mode = pim::sample_mode_from_string(opts.mode);
  config.seed = opts.seed;
  config.tol = opts.tol;
  config.max_iter = opts.max_iter;
  config.n_eval = opts.n_eval;
  return config;
}

// Accepts a preset name or "c,alpha".
void parse_coupling(const std::string& text, pim::RunConfig& config) {
  if (text == "empirical" || text == "theory") {
    config.coupling_preset = text;
    return;
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--coupling", "expected empirical, theory, or c,alpha");
  const double c = std::stod(text.substr(0, comma));
  const double alpha = std::stod(text.substr(comma + 1));
  config.coupling = pim::Coupling::custom(c, alpha);
  config.coupling_preset = "custom";
}

// Accepts a number or a coupling preset name.
void parse_bandwidth(const std::string& text, pim::RunConfig& config) {
  if (text == "empirical" || text == "theory") {
    config.coupling_preset = text;
    return;
  }
  std::size_t used = 0;
  const double t = std::stod(text, &used);
  if (used != text.size())
    throw CLI::ValidationError("--t", "expected a number, 'empirical', or 'theory'");
  config.explicit_t = t;
}

int write_rows(const std::vector<pim::ResultRow>& rows, const std::string& out) {
  std::ostringstream csv;
  pim::write_csv(rows, csv);
  if (out == "-") {
    std::cout << csv.str();
    return 0;
  }
  std::ofstream file(out);
  if (!file) {
    std::cerr << "cannot open " << out << "\n";
    return 1;
  }
  file << csv.str();
  return file ? 0 : 1;
}

void log_random_scale(const pim::RunConfig& config, const std::vector<pim::ResultRow>& rows) {
  if (config.mode != pim::SampleMode::random) return;
  for (const auto& row : rows)
    std::cerr << "# random mode: n=" << row.n
              << " mc_scale=" << 1.0 / std::sqrt(static_cast<double>(row.n)) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meshless Poisson solver on point-cloud manifolds"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  std::size_t solve_n = 100;
  std::string solve_t = "empirical";
  CLI::App* solve_cmd = app.add_subcommand("solve", "one solve at a fixed sample count");
  solve_cmd->add_option("--n", solve_n, "sample count")->required();
  solve_cmd->add_option("--t", solve_t, "bandwidth value or preset (empirical|theory)")
      ->default_str(solve_t);
  add_common(solve_cmd, solve_opts);

  CommonOptions sweep_opts;
  std::vector<std::size_t> sweep_n;
  std::string sweep_coupling = "empirical";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "convergence sweep over sample counts");
  sweep_cmd->add_option("--n", sweep_n, "sample counts, e.g. 100,200,400,800")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--coupling", sweep_coupling, "empirical|theory|c,alpha")
      ->default_str(sweep_coupling);
  add_common(sweep_cmd, sweep_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      pim::RunConfig config = to_config(solve_opts);
      config.n_values = {solve_n};
      parse_bandwidth(solve_t, config);
      const pim::ResultRow row = pim::run_case(config);
      std::vector<pim::ResultRow> rows{row};
      log_random_scale(config, rows);
      return write_rows(rows, solve_opts.out);
    }
    if (sweep_cmd->parsed()) {
      pim::RunConfig config = to_config(sweep_opts);
      config.n_values = sweep_n;
      parse_coupling(sweep_coupling, config);
      const pim::SweepResult result = pim::sweep(config);
      std::cerr << "# slopes: linf=" << result.slope_linf << " l2=" << result.slope_l2
                << " h1=" << result.slope_h1 << "\n";
      log_random_scale(config, result.rows);
      return write_rows(result.rows, sweep_opts.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
