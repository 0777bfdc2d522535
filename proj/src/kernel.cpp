#include "pim/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace pim {
namespace {

// Wendland C2 profile, R(r) = (1 - r)^4 (4r + 1) on [0, 1].
// R(0) = 1, R(1/2) = 3/16, R and its first two derivatives vanish at r = 1.
double wendland(double r) {
  if (r >= 1.0) return 0.0;
  const double q = 1.0 - r;
  const double q2 = q * q;
  return q2 * q2 * (4.0 * r + 1.0);
}

double wendland_deriv(double r) {
  if (r >= 1.0) return 0.0;
  const double q = 1.0 - r;
  return -20.0 * r * q * q * q;
}

// int_r^1 (1-s)^4 (4s+1) ds = (1-r)^5 (2r+1) / 3.
double wendland_bar(double r) {
  if (r >= 1.0) return 0.0;
  const double q = 1.0 - r;
  const double q2 = q * q;
  return q2 * q2 * q * (2.0 * r + 1.0) / 3.0;
}

// Truncated Gaussian profile, R(r) = exp(-r) sigma(r) with sigma a quintic
// smoothstep cutoff: 1 on [0, 0.8], 0 beyond 1, C^2 at both knots.
constexpr double kCutLo = 0.8;
constexpr double kCutHi = 1.0;

// The cutoff is evaluated in w = 5(1 - r), which is exact on the window, via
// the smoothstep symmetry 1 - S(1 - w) = S(w). The direct 1 - S(s) form
// cancels to rounding noise at the support edge.
double tg_sigma(double r) {
  if (r <= kCutLo) return 1.0;
  if (r >= kCutHi) return 0.0;
  const double w = 5.0 * (1.0 - r);
  return w * w * w * (10.0 - 15.0 * w + 6.0 * w * w);
}

double tg_sigma_deriv(double r) {
  if (r <= kCutLo || r >= kCutHi) return 0.0;
  const double w = 5.0 * (1.0 - r);
  const double q = 1.0 - w;
  return -150.0 * w * w * q * q;
}

double tg_profile(double r) {
  if (r >= kCutHi) return 0.0;
  return std::exp(-r) * tg_sigma(r);
}

double tg_deriv(double r) {
  if (r >= kCutHi) return 0.0;
  return std::exp(-r) * (tg_sigma_deriv(r) - tg_sigma(r));
}

// Tail antiderivative on the cutoff window. With Q the exact polynomial
// antiderivative factor of exp(-r) sigma(r), the closed form
//   Rbar(r) = exp(-r) Q(r) - exp(-1) Q(1)
// cancels catastrophically near r = 1 (Q ~ 2.5e6, Rbar ~ w^4). Rewriting in
// w = 1 - r gives Rbar(r) = exp(-1) sum_{j>=1} c_j w^j with
// c_j = sum_m q_m / (j - m)!, where Q(1 - w) = sum_m q_m w^m. The leading
// coefficients c_1..c_3 vanish identically and the series is stable.
constexpr std::array<double, 6> kTgQ = {-2482500.0, 2482500.0, -1241250.0,
                                        413750.0,   -103125.0, 18750.0};
constexpr int kTgSeriesLen = 48;

const std::array<double, kTgSeriesLen>& tg_series_coeffs() {
  static const std::array<double, kTgSeriesLen> coeffs = [] {
    std::array<double, kTgSeriesLen + 8> inv_fact{};
    inv_fact[0] = 1.0;
    for (int i = 1; i < kTgSeriesLen + 8; ++i) inv_fact[i] = inv_fact[i - 1] / i;
    std::array<double, kTgSeriesLen> c{};
    for (int j = 1; j < kTgSeriesLen; ++j) {
      double acc = 0.0;
      for (int m = 0; m < 6 && m <= j; ++m) acc += kTgQ[static_cast<std::size_t>(m)] * inv_fact[j - m];
      c[static_cast<std::size_t>(j)] = acc;
    }
    return c;
  }();
  return coeffs;
}

// Rbar on [0.8, 1], as a function of w = 1 - r in [0, 0.2].
double tg_bar_tail(double w) {
  const auto& c = tg_series_coeffs();
  double acc = 0.0;
  double wj = w;
  for (int j = 1; j < kTgSeriesLen; ++j) {
    acc += c[static_cast<std::size_t>(j)] * wj;
    wj *= w;
  }
  return std::exp(-1.0) * acc;
}

double tg_bar(double r) {
  if (r >= kCutHi) return 0.0;
  if (r >= kCutLo) return tg_bar_tail(1.0 - r);
  // Plain exponential below the cutoff: Rbar(r) = (e^-r - e^-0.8) + Rbar(0.8).
  static const double bar_at_cut = tg_bar_tail(1.0 - kCutLo);
  return std::exp(-kCutLo) * std::expm1(kCutLo - r) + bar_at_cut;
}

double tg_delta0() { return std::exp(-0.5); }

}  // namespace

std::string_view to_string(KernelProfile profile) {
  switch (profile) {
    case KernelProfile::wendland_c2: return "wendland_c2";
    case KernelProfile::truncated_gaussian: return "truncated_gaussian";
  }
  return "unknown";
}

KernelProfile kernel_profile_from_string(std::string_view name) {
  if (name == "wendland_c2") return KernelProfile::wendland_c2;
  if (name == "truncated_gaussian") return KernelProfile::truncated_gaussian;
  throw std::invalid_argument("unknown kernel profile: " + std::string(name));
}

KernelSpec KernelSpec::make(KernelProfile profile, double t, int k) {
  if (!(t > 0.0)) throw std::invalid_argument("KernelSpec: bandwidth t must be positive");
  if (k < 1) throw std::invalid_argument("KernelSpec: intrinsic dimension k must be >= 1");
  KernelSpec spec;
  spec.profile = profile;
  spec.t = t;
  spec.k = k;
  spec.delta0 = profile == KernelProfile::wendland_c2 ? 0.1875 : tg_delta0();
  return spec;
}

double KernelSpec::normalization() const {
  return std::pow(4.0 * M_PI * t, -0.5 * static_cast<double>(k));
}

double KernelSpec::support_radius() const { return 2.0 * std::sqrt(t); }

double eval_profile(const KernelSpec& spec, double r) {
  return spec.profile == KernelProfile::wendland_c2 ? wendland(r) : tg_profile(r);
}

double eval_profile_derivative(const KernelSpec& spec, double r) {
  return spec.profile == KernelProfile::wendland_c2 ? wendland_deriv(r) : tg_deriv(r);
}

double eval_bar(const KernelSpec& spec, double r) {
  return spec.profile == KernelProfile::wendland_c2 ? wendland_bar(r) : tg_bar(r);
}

PairKernel pair_kernel(const KernelSpec& spec, std::span<const double> x,
                       std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pair_kernel: points have different ambient dimensions");
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    dist2 += d * d;
  }
  const double q = dist2 / (4.0 * spec.t);
  if (q > 1.0) return {0.0, 0.0};
  const double ct = spec.normalization();
  return {ct * eval_profile(spec, q), ct * eval_bar(spec, q)};
}

}  // namespace pim
