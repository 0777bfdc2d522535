#pragma once

#include <span>
#include <string_view>

namespace pim {

enum class KernelProfile { wendland_c2, truncated_gaussian };

std::string_view to_string(KernelProfile profile);
KernelProfile kernel_profile_from_string(std::string_view name);

/// A radial kernel profile R together with the bandwidth t and the intrinsic
/// dimension k of the sampled manifold. The pairwise kernel is
///   R_t(x, y) = C_t R(|x - y|^2 / 4t),  C_t = (4 pi t)^(-k/2),
/// and Rbar is the tail antiderivative Rbar(r) = int_r^inf R(s) ds, so that
/// d(Rbar)/dr = -R. Profiles are C^2, nonnegative, supported on [0, 1] and
/// bounded below by delta0 on [0, 1/2].
struct KernelSpec {
  KernelProfile profile = KernelProfile::wendland_c2;
  double t = 0.0;       ///< bandwidth, squared-length units
  int k = 0;            ///< intrinsic manifold dimension
  double delta0 = 0.0;  ///< lower bound of R on [0, 1/2]

  /// Validates t > 0, k >= 1 and fills delta0 for the profile.
  static KernelSpec make(KernelProfile profile, double t, int k);

  /// C_t = (4 pi t)^(-k/2).
  double normalization() const;

  /// Pairwise support radius: 2 sqrt(t).
  double support_radius() const;
};

/// R(r). Zero for r > 1.
double eval_profile(const KernelSpec& spec, double r);

/// R'(r), exact closed form.
double eval_profile_derivative(const KernelSpec& spec, double r);

/// Rbar(r) = int_r^inf R(s) ds, exact closed form. Zero for r >= 1,
/// nonincreasing.
double eval_bar(const KernelSpec& spec, double r);

struct PairKernel {
  double r_t = 0.0;     ///< C_t R(|x-y|^2 / 4t)
  double rbar_t = 0.0;  ///< C_t Rbar(|x-y|^2 / 4t)
};

/// Evaluates (R_t, Rbar_t) for a pair of ambient points. Both components are
/// exactly zero when |x - y|^2 > 4t. Throws on dimension mismatch.
PairKernel pair_kernel(const KernelSpec& spec, std::span<const double> x,
                       std::span<const double> y);

}  // namespace pim
