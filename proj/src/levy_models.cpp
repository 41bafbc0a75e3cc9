#include "levy/levy_models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "levy/errors.hpp"
#include "levy/special_fn.hpp"

namespace levy {

namespace {

void require_positive_time(double t, const char* where) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(where) + ": t must be > 0");
}

}  // namespace

void NigParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("NigParams: alpha must be > 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("NigParams: delta must be > 0");
  if (!std::isfinite(mu) || !std::isfinite(beta)) throw DomainError("NigParams: beta and mu must be finite");
  if (!(std::abs(beta) < alpha)) throw DomainError("NigParams: |beta| must be < alpha");
}

double NigParams::gamma() const { return std::sqrt((alpha - beta) * (alpha + beta)); }

void VgParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("VgParams: lambda must be > 0");
  if (!(gamma_rate > 0.0) || !std::isfinite(gamma_rate)) throw DomainError("VgParams: gamma_rate must be > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("VgParams: sigma must be > 0");
  if (!std::isfinite(x0) || !std::isfinite(beta)) throw DomainError("VgParams: x0 and beta must be finite");
}

void VgMeanVarianceParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("VgMeanVarianceParams: sigma must be > 0");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("VgMeanVarianceParams: nu must be > 0");
  if (!std::isfinite(beta)) throw DomainError("VgMeanVarianceParams: beta must be finite");
}

void GammaParams::validate() const {
  if (!(lambda > 0.0) || !(gamma_rate > 0.0)) throw DomainError("GammaParams: lambda and gamma_rate must be > 0");
}

// NIG ----------------------------------------------------------------------

double nig_log_density(const NigParams& p, double x, double t) {
  p.validate();
  require_positive_time(t, "nig_density");
  const double m = p.mu * t;
  const double d = p.delta * t;
  const double q = std::hypot(d, x - m);
  const double z = p.alpha * q;
  return std::log(p.alpha * d / std::numbers::pi) - std::log(q) + std::log(bessel_k_scaled(1.0, z)) - z +
         d * p.gamma() + p.beta * (x - m);
}

double nig_density(const NigParams& p, double x, double t) { return std::exp(nig_log_density(p, x, t)); }

double nig_cumulant(const NigParams& p, double theta) {
  p.validate();
  const double shifted = p.beta + theta;
  if (!(std::abs(shifted) <= p.alpha))
    throw DomainError("nig_cumulant: |beta + theta| > alpha, exponential moment is infinite");
  return p.mu * theta + p.delta * (p.gamma() - std::sqrt((p.alpha - shifted) * (p.alpha + shifted)));
}

double nig_levy_density(const NigParams& p, double x) {
  p.validate();
  if (x == 0.0) throw DomainError("nig_levy_density: undefined at x = 0");
  const double ax = std::abs(x);
  const double z = p.alpha * ax;
  return p.delta * p.alpha / (std::numbers::pi * ax) * bessel_k_scaled(1.0, z) * std::exp(p.beta * x - z);
}

double nig_mean(const NigParams& p, double t) {
  p.validate();
  return t * (p.mu + p.delta * p.beta / p.gamma());
}

double nig_variance(const NigParams& p, double t) {
  p.validate();
  const double g = p.gamma();
  return t * p.delta * p.alpha * p.alpha / (g * g * g);
}

// Gamma --------------------------------------------------------------------

double gamma_density(const GammaParams& g, double x, double t) {
  g.validate();
  require_positive_time(t, "gamma_density");
  if (!(x > 0.0)) throw DomainError("gamma_density: x must be > 0");
  const double shape = g.lambda * t;
  return std::exp(shape * std::log(g.gamma_rate) + (shape - 1.0) * std::log(x) - g.gamma_rate * x -
                  log_gamma(shape));
}

// VG -----------------------------------------------------------------------

double vg_cumulant(const VgParams& p, double theta) {
  p.validate();
  const double u = (p.beta * theta + 0.5 * p.sigma * p.sigma * theta * theta) / p.gamma_rate;
  if (!(u < 1.0)) throw DomainError("vg_cumulant: exponential moment does not exist at this theta");
  return p.x0 * theta - p.lambda * std::log1p(-u);
}

std::complex<double> vg_char_function(const VgMeanVarianceParams& mv, double u, double t) {
  mv.validate();
  const std::complex<double> base(1.0 + 0.5 * mv.sigma * mv.sigma * mv.nu * u * u, -u * mv.beta * mv.nu);
  return std::exp(-(t / mv.nu) * std::log(base));
}

double vg_density(const VgParams& p, double x, double t) {
  p.validate();
  require_positive_time(t, "vg_density");
  const double shape = p.lambda * t;
  const double order = shape - 0.5;
  const double s2 = p.sigma * p.sigma;
  const double root = std::sqrt(p.beta * p.beta / s2 + 2.0 * p.gamma_rate);
  const double y = x - p.x0 * t;
  const double log_front = 0.5 * std::log(2.0 / (std::numbers::pi * s2)) + shape * std::log(p.gamma_rate) -
                           log_gamma(shape) + p.beta * y / s2;
  if (y == 0.0) {
    if (order <= 0.0) return std::numeric_limits<double>::infinity();
    // (|y|/sigma)^v K_v(|y| root / sigma) -> 2^{v-1} Gamma(v) / root^v as y -> 0.
    return std::exp(log_front + (order - 1.0) * std::numbers::ln2 + log_gamma(order) - 2.0 * order * std::log(root));
  }
  const double ay = std::abs(y) / p.sigma;
  const double z = ay * root;
  return std::exp(log_front + order * (std::log(ay) - std::log(root)) + std::log(bessel_k_scaled(order, z)) - z);
}

double vg_mean(const VgParams& p, double t) {
  p.validate();
  return t * (p.x0 + p.beta * p.lambda / p.gamma_rate);
}

VgParams vg_from_mean_variance(const VgMeanVarianceParams& mv) {
  mv.validate();
  return {.x0 = 0.0, .lambda = 1.0 / mv.nu, .gamma_rate = 1.0 / mv.nu, .beta = mv.beta, .sigma = mv.sigma};
}

VgMeanVarianceParams vg_to_mean_variance(const VgParams& p) {
  p.validate();
  if (p.x0 != 0.0) throw DomainError("vg_to_mean_variance: requires x0 = 0");
  const double rel = std::abs(p.lambda - p.gamma_rate) / p.lambda;
  if (rel > 1e-14) throw DomainError("vg_to_mean_variance: requires a unit-mean clock (lambda = gamma_rate)");
  return {.beta = p.beta, .sigma = p.sigma, .nu = 1.0 / p.lambda};
}

DifferenceOfGammas vg_difference_of_gammas(const VgParams& p) {
  p.validate();
  // Scales s+, s- solve s+ - s- = beta / gamma, s+ s- = sigma^2 / (2 gamma).
  const double b = p.beta / p.gamma_rate;
  const double prod = 0.5 * p.sigma * p.sigma / p.gamma_rate;
  const double big = 0.5 * (std::abs(b) + std::sqrt(b * b + 4.0 * prod));
  const double small = prod / big;
  DifferenceOfGammas dg{.shape = p.lambda, .scale_plus = big, .scale_minus = small};
  if (b < 0.0) std::swap(dg.scale_plus, dg.scale_minus);
  return dg;
}

GammaMeanVarianceRates vg_gamma_rates(const VgMeanVarianceParams& mv) {
  mv.validate();
  const double root = std::sqrt(mv.beta * mv.beta + 2.0 * mv.sigma * mv.sigma / mv.nu);
  GammaMeanVarianceRates r;
  r.mean_plus = 0.5 * (root + mv.beta);
  r.mean_minus = 0.5 * (root - mv.beta);
  r.var_plus = r.mean_plus * r.mean_plus * mv.nu;
  r.var_minus = r.mean_minus * r.mean_minus * mv.nu;
  return r;
}

}  // namespace levy
