#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tschwarz/core_model.hpp"

namespace tschwarz {

/// Scalar data shared by every per-eigenvalue convergence factor.
struct SpectralParams {
  double nu = 0.1;
  double gamma = 10.0;
  double horizon = 1.0;
  double alpha = 0.4;

  /// Throws std::invalid_argument unless nu > 0, gamma >= 0, 0 < alpha < horizon.
  void validate() const;
};

/// Parameter set of the reference heat-control experiment.
inline constexpr SpectralParams kReferenceParams{0.1, 10.0, 1.0, 0.4};

/// sqrt(d^2 + 1/nu)
double sigma(double d, double nu);

/// coth/tanh that return exactly 1 once the argument exceeds 350.
double clamped_coth(double x);
double clamped_tanh(double x);

/// Signed SD1 fraction
///   (1 + g(s coth b - d)) / (nu (s coth a + d)(s coth b + d + g/nu)),
/// with s = sigma(d), a = s alpha, b = s (T - alpha).
double rho_core_sd1(double d, const SpectralParams& p);
/// The SN1 analogue with tanh in place of coth.
double rho_core_sn1(double d, const SpectralParams& p);

/// Per-eigenvalue convergence factor of a variant.
double rho(Variant v, double d, const SpectralParams& p);

/// max over the spectrum. Throws on an empty spectrum.
double rho_max(Variant v, std::span<const double> eigenvalues, const SpectralParams& p);

/// Relaxation form of the SN1 factor.
enum class RelaxationForm {
  Standard,  ///< |1 - theta (1 + F)|, the equioscillation-consistent form
  Literal,   ///< |1 - theta F|, kept for comparison only
};

/// |(1 - theta) - theta F| for SD1/SN1; equals rho at theta = 1 bit for bit.
/// Literal form applies to SN1 only.
double rho_relaxed(Variant v, double d, double theta, const SpectralParams& p,
                   RelaxationForm form = RelaxationForm::Standard);
double rho_relaxed_max(Variant v, std::span<const double> eigenvalues, double theta,
                       const SpectralParams& p);

/// Closed forms at d = 0 for SD1, SD2 and SN1.
double rho_at_zero(Variant v, const SpectralParams& p);

/// 2 / (2 + rho_at_zero(v)), balancing d = 0 against d -> infinity.
double optimal_theta(Variant v, const SpectralParams& p);

struct RhoBound {
  double bound;
  std::optional<double> looser;  ///< 1/(nu (sigma_min + d_min)^2), SD1 only
};

/// Upper bound on rho over d >= d_min for gamma = 0.
RhoBound rho_bound(Variant v, double d_min, const SpectralParams& p);

/// Denominator minus numerator of the SD1 fraction, evaluated through
/// coth - 1 = 2/expm1(2x) so the sign stays reliable when rho rounds to 1.
/// Positive exactly when rho(SD1, d) < 1.
double sd1_contraction_gap(double d, const SpectralParams& p);

struct RhoRow {
  double d;
  double rho;
};

struct RhoTable {
  Variant variant;
  std::optional<double> theta;
  SpectralParams params;
  std::vector<RhoRow> rows;
};

/// rho (or rho_relaxed when theta is set) on an ascending grid.
RhoTable sweep(Variant v, std::span<const double> d_grid, const SpectralParams& p,
               std::optional<double> theta = std::nullopt);

/// Header `d,rho`, 17 significant digits.
std::string to_csv(const RhoTable& table);

}  // namespace tschwarz
