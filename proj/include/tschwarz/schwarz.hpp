#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tschwarz/core_model.hpp"
#include "tschwarz/discretize.hpp"
#include "tschwarz/spectral.hpp"

namespace tschwarz {

enum class SweepOrder {
  Sequential,  ///< I2 uses the payload I1 produced in the same iteration
  Parallel,    ///< both subdomains use payloads from the previous iteration
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct ZeroInit {};
struct RandomInit {
  double scale = 1.0;
  std::uint64_t seed = kDefaultSeed;
};
/// Start from given payloads, e.g. data extracted from a reference solution.
struct ExplicitInit {
  Vector to_I1;
  Vector to_I2;
};
using InitPolicy = std::variant<ZeroInit, RandomInit, ExplicitInit>;

struct SchwarzConfig {
  Variant variant = Variant::SD1;
  double theta = 1.0;
  std::size_t max_iter = 50;
  /// Stop once the error falls to tol times the first iterate's error.
  double tol = 1e-6;
  SweepOrder order = SweepOrder::Sequential;
  InitPolicy init = RandomInit{};
  /// Relax the I2 payload as well (exploration only).
  bool relax_both = false;
  /// Error growth beyond this factor of the first iterate's error stops the run.
  double divergence_factor = 1e12;

  void validate() const;
};

/// Interface data handed to each subdomain, kinds per transmission_table.
/// The I1 payload doubles as the relaxation memory f_alpha.
struct SchwarzState {
  TransmissionSpec spec;
  Vector to_I1;
  Vector to_I2;
};

SchwarzState initial_payload(const SchwarzConfig& cfg, const ControlProblem& prob);

struct IterationRecord {
  std::size_t iter;  ///< 1-based
  double error;      ///< max-norm deviation from the reference
  Vector payload_I1; ///< data I1 was solved with
  Vector payload_I2; ///< data I2 was solved with
};

struct SchwarzReport {
  Variant variant;
  double theta;
  SweepOrder order;
  double alpha;
  std::vector<IterationRecord> iterations;
  bool converged = false;
  bool diverged = false;
  /// Error of the first iterate; the stopping threshold is tol times this.
  double initial_error = 0.0;
  double tol = 0.0;

  std::size_t iterations_used() const { return iterations.size(); }
  /// error_k / initial_error
  double relative_error(std::size_t k) const;
};

/// Two-subdomain Schwarz iteration measured against `reference`, a solution on
/// decomp.global().
SchwarzReport run_schwarz(const ControlProblem& prob, const Decomposition& decomp,
                          const SchwarzConfig& cfg, const Trajectory& reference);

/// Geometric mean of e_{k+1}/e_k over k >= 2. Needs at least four iterations
/// and positive errors.
double measured_contraction(const SchwarzReport& report);

/// Header `iter,error,payload_norm_I1,payload_norm_I2` (Euclidean norms).
std::string to_csv(const SchwarzReport& report);

struct OracleOptions {
  double theta = 1.0;
  SweepOrder order = SweepOrder::Sequential;
  std::size_t iterations = 8;
  std::uint64_t seed = kDefaultSeed;
};

/// Per-iteration log-magnitudes of the interface payloads of a scalar
/// error iteration. Payloads are renormalized every step so divergent
/// variants never overflow; the logs carry the true growth.
struct ScalarTrace {
  std::vector<double> log_I1;
  std::vector<double> log_I2;
};

/// Scalar error iteration (A = [d], zero data) with a random interface seed.
/// Subdomain (0, alpha) gets round(nt alpha / T) intervals, (alpha, T) the rest.
ScalarTrace scalar_trace(double d, const SpectralParams& p, Variant v, std::size_t nt,
                         const OracleOptions& opt = {});

struct OracleResult {
  double measured;
  double analytic;
};

/// Measured I1 payload contraction (iterations 3 onward) against the analytic
/// factor; analytic is rho_relaxed when theta < 1. Variants SD1, SD2, SN1, SN2.
OracleResult scalar_contraction_oracle(double d, const SpectralParams& p, Variant v,
                                       std::size_t nt, const OracleOptions& opt = {});

}  // namespace tschwarz
