#pragma once

#include <complex>

namespace levy {

/// Normal inverse Gaussian Levy process: X_t ~ NIG(alpha, beta, mu t, delta t).
struct NigParams {
  double alpha = 1.0;  ///< tail heaviness
  double beta = 0.0;   ///< asymmetry, |beta| < alpha
  double mu = 0.0;     ///< location drift per unit time
  double delta = 1.0;  ///< scale per unit time

  /// Throws DomainError unless alpha > 0, delta > 0 and |beta| < alpha.
  void validate() const;
  bool operator==(const NigParams&) const = default;
  /// sqrt(alpha^2 - beta^2)
  double gamma() const;
};

/// Variance gamma process Y_t = x0 t + beta Z_t + sigma W(Z_t), with a gamma
/// clock Z_t ~ Gamma(shape lambda t, rate gamma_rate). x0 is a drift rate so
/// that Y keeps stationary increments.
struct VgParams {
  double x0 = 0.0;
  double lambda = 1.0;
  double gamma_rate = 1.0;
  double beta = 0.0;
  double sigma = 1.0;

  void validate() const;
  bool operator==(const VgParams&) const = default;
};

/// VG with a unit-mean gamma clock of variance rate nu (x0 = 0).
struct VgMeanVarianceParams {
  double beta = 0.0;
  double sigma = 1.0;
  double nu = 1.0;

  void validate() const;
  bool operator==(const VgMeanVarianceParams&) const = default;
};

/// Gamma subordinator: X_t ~ Gamma(shape lambda t, rate gamma_rate).
struct GammaParams {
  double lambda = 1.0;
  double gamma_rate = 1.0;

  void validate() const;
  bool operator==(const GammaParams&) const = default;
};

// NIG ----------------------------------------------------------------------

/// Density of X_t at x (standard alpha delta / pi normalization).
double nig_density(const NigParams& p, double x, double t);
double nig_log_density(const NigParams& p, double x, double t);

/// kappa(theta) with E[exp(theta X_t)] = exp(t kappa(theta)).
/// Throws DomainError when |beta + theta| > alpha.
double nig_cumulant(const NigParams& p, double theta);

/// Levy density delta alpha / (pi |x|) e^{beta x} K_1(alpha |x|). Throws at x = 0.
double nig_levy_density(const NigParams& p, double x);

/// E[X_t] = t (mu + delta beta / sqrt(alpha^2 - beta^2)).
double nig_mean(const NigParams& p, double t);
/// Var[X_t] = t delta alpha^2 / (alpha^2 - beta^2)^{3/2}.
double nig_variance(const NigParams& p, double t);

// Gamma --------------------------------------------------------------------

double gamma_density(const GammaParams& g, double x, double t);

// VG -----------------------------------------------------------------------

/// kappa(theta) = x0 theta - lambda ln(1 - (beta theta + sigma^2 theta^2 / 2) / gamma_rate).
/// Throws DomainError when the exponential moment is infinite.
double vg_cumulant(const VgParams& p, double theta);

/// Characteristic function E[exp(i u Y_t)] of the unit-mean-clock VG.
std::complex<double> vg_char_function(const VgMeanVarianceParams& mv, double u, double t);

/// Density of Y_t at x. Returns +infinity at x = x0 t when lambda t <= 1/2,
/// where the density has an integrable singularity.
double vg_density(const VgParams& p, double x, double t);

/// E[Y_t] = t (x0 + beta lambda / gamma_rate).
double vg_mean(const VgParams& p, double t);

VgParams vg_from_mean_variance(const VgMeanVarianceParams& mv);
/// Inverse of vg_from_mean_variance. Throws DomainError unless x0 = 0 and lambda = gamma_rate.
VgMeanVarianceParams vg_to_mean_variance(const VgParams& p);

/// Rates of the difference-of-gammas representation Y_t - x0 t = G+(t) - G-(t):
/// G+ and G- are independent gamma processes with common shape rate `shape`
/// and scales `scale_plus`, `scale_minus`.
struct DifferenceOfGammas {
  double shape = 0.0;
  double scale_plus = 0.0;
  double scale_minus = 0.0;
};
DifferenceOfGammas vg_difference_of_gammas(const VgParams& p);

/// The mean/variance rates (mu+, mu-, nu+, nu-) of G+ and G- for a unit-mean clock.
struct GammaMeanVarianceRates {
  double mean_plus = 0.0;
  double mean_minus = 0.0;
  double var_plus = 0.0;
  double var_minus = 0.0;
};
GammaMeanVarianceRates vg_gamma_rates(const VgMeanVarianceParams& mv);

}  // namespace levy
