#pragma once

#include <functional>
#include <limits>
#include <span>

namespace levy {

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind
// ---------------------------------------------------------------------------

struct BesselKResult {
  double value = 0.0;
  bool underflow = false;  ///< e^{-x} factor underflowed; value is 0
};

/// K_nu(x) for real nu >= 0 (negative orders are reflected, K_{-nu} = K_nu)
/// and x > 0. Throws DomainError for x <= 0.
BesselKResult bessel_k_checked(double order, double x);

/// K_nu(x); 0 when the result underflows.
double bessel_k(double order, double x);

/// e^x K_nu(x). Never underflows for finite x, so densities built on K can be
/// evaluated in log space far into their tails.
double bessel_k_scaled(double order, double x);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_subdivisions = 4000;
  /// Semi-infinite ranges stop growing once the last chunk contributes less
  /// than this fraction of the running total. Must lie in (0, rel_tol].
  double tail_truncation_mass = 1e-12;
  /// Width of the first chunk on a semi-infinite range; chunks double from there.
  double initial_tail_width = 1.0;

  /// Throws DomainError when the invariants above are violated.
  void validate() const;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) integration of f over [lower, upper]. Either
/// bound may be infinite. Throws NumericalError when the tolerance cannot be
/// met within spec.max_subdivisions.
double integrate(const Integrand& f, double lower, double upper, const QuadratureSpec& spec = {});

/// Same as integrate() but splits the range at the given interior points
/// first. Use this for integrands with narrow peaks or integrable singularities
/// whose location is known.
double integrate(const Integrand& f, double lower, double upper, std::span<const double> breakpoints,
                 const QuadratureSpec& spec = {});

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

inline constexpr double kDefaultRootTol = 1e-12;

/// Brent's method on [lo, hi]. Requires f(lo) * f(hi) <= 0; throws DomainError
/// otherwise. The result always lies inside the initial bracket and satisfies
/// |f(x)| <= tol or the final bracket width is <= tol.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol = kDefaultRootTol);

}  // namespace levy
