#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tschwarz/schwarz.hpp"
#include "tschwarz/spectral.hpp"

namespace tschwarz {

inline constexpr double kFixedTheta = 0.975;
inline constexpr const char* kVersion = "tschwarz 1.0.0";

enum class ThetaPolicy {
  None,     ///< unrelaxed runs only
  Fixed,    ///< add SD1/SN1 runs at theta = 0.975
  Optimal,  ///< add SD1/SN1 runs at their optimal theta
};

/// Parameters of one canned experiment. Defaults are the reference heat
/// control setup: nu = 0.1, gamma = 10, T = 1, alpha = 0.4, h_t = h_x = 1/32.
struct ExperimentSpec {
  std::string name = "reference";
  SpectralParams params = kReferenceParams;
  double length = 1.0;
  std::size_t nx = 32;
  std::size_t nt = 32;
  std::vector<Variant> variants{kAllVariants.begin(), kAllVariants.end()};
  ThetaPolicy theta_policy = ThetaPolicy::Fixed;
  /// Empty: nothing is written.
  std::filesystem::path output_dir;
  std::uint64_t seed = kDefaultSeed;
  /// Schwarz iterations per heat run; runs stop early only on divergence.
  std::size_t iterations = 16;
  /// Iteration counts are reported against this relative error.
  double threshold = 1e-6;
  /// Zero initial payloads; otherwise seeded random payloads of scale 1.
  bool zero_init = true;

  void validate() const;
};

/// The time grid's node nearest to params.alpha; the heat runs use it when
/// alpha is not a node (alpha = 0.4 with h_t = 1/32 becomes 13/32).
double effective_alpha(const ExperimentSpec& spec);

struct NamedTable {
  std::string curve;
  RhoTable table;
};

/// d = 0 followed by `points` log-spaced values on [1e-2, 1e4].
std::vector<double> fig_left_grid(std::size_t points = 400);

/// All eight variants plus relaxed SD1/SN1 at their optimal theta. Curves are
/// named after the variant, relaxed ones get a `_relaxed` suffix.
std::vector<NamedTable> fig_left(const ExperimentSpec& spec);

struct NamedReport {
  std::string curve;
  SchwarzReport report;
};

struct FigRightResult {
  std::vector<double> spectrum;
  double alpha = 0.0;  ///< interface actually used
  Trajectory reference;
  std::vector<NamedReport> runs;
  /// Power of ten closest to putting unrelaxed SD1 at 10 iterations.
  std::optional<double> calibrated_threshold;

  const NamedReport& run(std::string_view curve) const;
};

/// First iteration whose error is at most threshold * initial error.
std::optional<std::size_t> iterations_to_reach(const SchwarzReport& report, double threshold);

/// Builds the heat problem, solves the monolithic reference and runs every
/// variant in the spec, plus relaxed SD1/SN1 runs per the theta policy.
FigRightResult fig_right(const ExperimentSpec& spec);

struct PropertyCheck {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Outside the hypotheses of any result; violations are reported only.
  bool informational = false;
  std::vector<std::string> violating;

  bool passed() const { return informational || violations == 0; }
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  bool passed() const;
  std::string to_text() const;
};

/// Randomized checks of the convergence and bound results: `count` samples
/// for each convergence condition, count/4 for the gamma = 0 bounds, plus an
/// informational group with alpha > T/2 and large gamma.
PropertyReport theorem_sweeps(std::uint64_t seed, std::size_t count);

/// Closed-form solution of the scalar optimality system (A = [d]) with a
/// constant target, evaluated at t.
struct ScalarExact {
  double y;
  double lambda;
};
ScalarExact scalar_exact(double d, double nu, double gamma, double horizon, double y0,
                         double target, double t);

/// Max-norm Crank-Nicolson errors of the scalar problem for nt, 2 nt, 4 nt, ...
std::vector<double> cn_refinement_errors(std::size_t nt0, std::size_t levels);

/// The full property suite behind `validate`.
PropertyReport validate_all(std::uint64_t seed = kDefaultSeed);

/// Writes a plain key/value JSON manifest.
void write_manifest(const std::filesystem::path& dir, const ExperimentSpec& spec,
                    const std::string& experiment, std::optional<double> threshold);

}  // namespace tschwarz
