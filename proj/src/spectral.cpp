#include "tschwarz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace tschwarz {

namespace {

constexpr double kHyperbolicClamp = 350.0;

enum class Hyperbolic { Coth, Tanh };

double hyp(Hyperbolic f, double x) {
  return f == Hyperbolic::Coth ? clamped_coth(x) : clamped_tanh(x);
}

// Shared shape of the SD1/SN1 fractions; only the hyperbolic function differs.
double core_fraction(Hyperbolic f, double d, const SpectralParams& p) {
  p.validate();
  const double s = sigma(d, p.nu);
  const double ha = hyp(f, s * p.alpha);
  const double hb = hyp(f, s * (p.horizon - p.alpha));
  const double num = 1.0 + p.gamma * (s * hb - d);
  const double den = p.nu * (s * ha + d) * (s * hb + d + p.gamma / p.nu);
  return num / den;
}

void require_relaxable(Variant v, const char* what) {
  if (v != Variant::SD1 && v != Variant::SN1) {
    throw std::invalid_argument(
        fmt::format("{}: only SD1 and SN1 are defined, got {}", what, to_string(v)));
  }
}

}  // namespace

void SpectralParams::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(alpha > 0.0 && alpha < horizon)) {
    throw std::invalid_argument(
        fmt::format("alpha={} must lie strictly inside (0, {})", alpha, horizon));
  }
}

double sigma(double d, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  return std::sqrt(d * d + 1.0 / nu);
}

double clamped_coth(double x) {
  if (x > kHyperbolicClamp) return 1.0;
  return 1.0 / std::tanh(x);
}

double clamped_tanh(double x) {
  if (x > kHyperbolicClamp) return 1.0;
  return std::tanh(x);
}

double rho_core_sd1(double d, const SpectralParams& p) {
  return core_fraction(Hyperbolic::Coth, d, p);
}

double rho_core_sn1(double d, const SpectralParams& p) {
  return core_fraction(Hyperbolic::Tanh, d, p);
}

double rho(Variant v, double d, const SpectralParams& p) {
  switch (v) {
    case Variant::SD1: return std::abs(rho_core_sd1(d, p));
    case Variant::SD2: return 1.0 / std::abs(rho_core_sd1(d, p));
    case Variant::SN1: return std::abs(rho_core_sn1(d, p));
    case Variant::SN2: return std::abs(1.0 / rho_core_sn1(d, p));
    case Variant::SD3:
    case Variant::SD4:
    case Variant::SN3:
    case Variant::SN4:
      p.validate();
      return 1.0;
  }
  throw std::logic_error("rho: invalid variant");
}

double rho_max(Variant v, std::span<const double> eigenvalues, const SpectralParams& p) {
  if (eigenvalues.empty()) throw std::invalid_argument("rho_max: empty spectrum");
  double m = 0.0;
  for (double d : eigenvalues) m = std::max(m, rho(v, d, p));
  return m;
}

double rho_relaxed(Variant v, double d, double theta, const SpectralParams& p,
                   RelaxationForm form) {
  require_relaxable(v, "rho_relaxed");
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument(fmt::format("theta={} must lie in (0, 1]", theta));
  }
  const double f = v == Variant::SD1 ? rho_core_sd1(d, p) : rho_core_sn1(d, p);
  if (form == RelaxationForm::Literal) {
    if (v != Variant::SN1) throw std::invalid_argument("literal relaxation form is SN1 only");
    return std::abs(1.0 - theta * f);
  }
  // (1 - theta) - theta F rather than 1 - theta (1 + F): exact at theta = 1.
  return std::abs((1.0 - theta) - theta * f);
}

double rho_relaxed_max(Variant v, std::span<const double> eigenvalues, double theta,
                       const SpectralParams& p) {
  if (eigenvalues.empty()) throw std::invalid_argument("rho_relaxed_max: empty spectrum");
  double m = 0.0;
  for (double d : eigenvalues) m = std::max(m, rho_relaxed(v, d, theta, p));
  return m;
}

double rho_at_zero(Variant v, const SpectralParams& p) {
  p.validate();
  const double s = std::sqrt(1.0 / p.nu);
  const double a = s * p.alpha;
  const double b = s * (p.horizon - p.alpha);
  const double gs = p.gamma * s;
  switch (v) {
    case Variant::SD1: {
      const double cb = clamped_coth(b);
      return clamped_tanh(a) * (gs * cb + 1.0) / (cb + gs);
    }
    case Variant::SD2: {
      const double cb = clamped_coth(b);
      return clamped_coth(a) * (cb + gs) / (gs * cb + 1.0);
    }
    case Variant::SN1: {
      const double tb = clamped_tanh(b);
      return clamped_coth(a) * (gs * tb + 1.0) / (tb + gs);
    }
    default:
      throw std::invalid_argument(
          fmt::format("rho_at_zero: no closed form for {}", to_string(v)));
  }
}

double optimal_theta(Variant v, const SpectralParams& p) {
  require_relaxable(v, "optimal_theta");
  return 2.0 / (2.0 + rho_at_zero(v, p));
}

RhoBound rho_bound(Variant v, double d_min, const SpectralParams& p) {
  require_relaxable(v, "rho_bound");
  p.validate();
  if (p.gamma != 0.0) throw std::invalid_argument("rho_bound requires gamma = 0");
  if (!(d_min >= 0.0)) throw std::invalid_argument("rho_bound requires d_min >= 0");
  const double s = sigma(d_min, p.nu);
  const double a = s * p.alpha;
  const double b = s * (p.horizon - p.alpha);
  if (v == Variant::SD1) {
    const double bound =
        1.0 / (p.nu * (s * clamped_coth(a) + d_min) * (s * clamped_coth(b) + d_min));
    return {bound, 1.0 / (p.nu * (s + d_min) * (s + d_min))};
  }
  const double bound =
      1.0 / (p.nu * (s * clamped_tanh(a) + d_min) * (s * clamped_tanh(b) + d_min));
  return {bound, std::nullopt};
}

double sd1_contraction_gap(double d, const SpectralParams& p) {
  p.validate();
  const double s = sigma(d, p.nu);
  const double a = s * p.alpha;
  const double b = s * (p.horizon - p.alpha);
  // coth(x) - 1 = 2 / (exp(2x) - 1)
  const double ea = 2.0 / std::expm1(2.0 * a);
  const double eb = 2.0 / std::expm1(2.0 * b);
  const double ca = 1.0 + ea;
  const double cb = 1.0 + eb;
  const double cacb_minus_one = ea * eb + ea + eb;
  return p.nu * d * d * (ca * cb + 1.0) + cacb_minus_one + 2.0 * p.gamma * d +
         p.nu * s * d * (ca + cb) - p.gamma * s * (eb - ea);
}

RhoTable sweep(Variant v, std::span<const double> d_grid, const SpectralParams& p,
               std::optional<double> theta) {
  if (!std::is_sorted(d_grid.begin(), d_grid.end())) {
    throw std::invalid_argument("sweep: eigenvalue grid must be ascending");
  }
  if (theta) require_relaxable(v, "sweep with relaxation");
  RhoTable table{v, theta, p, {}};
  table.rows.reserve(d_grid.size());
  for (double d : d_grid) {
    const double r = theta ? rho_relaxed(v, d, *theta, p) : rho(v, d, p);
    table.rows.push_back({d, r});
  }
  return table;
}

std::string to_csv(const RhoTable& table) {
  std::string out = "d,rho\n";
  for (const RhoRow& row : table.rows) out += fmt::format("{:.17g},{:.17g}\n", row.d, row.rho);
  return out;
}

}  // namespace tschwarz
