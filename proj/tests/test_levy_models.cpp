#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <doctest.h>

#include "levy/errors.hpp"
#include "levy/levy_models.hpp"
#include "levy/measures.hpp"
#include "levy/special_fn.hpp"

using namespace levy;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const NigParams kNig{.alpha = 81.6, .beta = 3.69, .mu = -0.000123, .delta = 0.0103};
const VgMeanVarianceParams kLecuyer{.beta = -0.1436, .sigma = 0.12136, .nu = 0.3};

QuadratureSpec tight(double width) {
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.abs_tol = 1e-14;
  spec.tail_truncation_mass = 1e-13;
  spec.max_subdivisions = 20000;
  spec.initial_tail_width = width;
  return spec;
}

// int g(x) f(x) dx over the line for the NIG law of X_t.
double nig_expectation(const NigParams& p, double t, const std::function<double(double)>& g) {
  const double cut[] = {p.mu * t};
  return integrate([&](double x) { return g(x) * nig_density(p, x, t); }, -kInf, kInf, cut,
                   tight(p.delta * t + 1.0 / p.alpha));
}

double vg_expectation(const VgParams& p, double t, const std::function<double(double)>& g) {
  const double cut[] = {p.x0 * t};
  return integrate([&](double x) { return g(x) * vg_density(p, x, t); }, -kInf, kInf, cut, tight(0.5));
}

}  // namespace

TEST_SUITE("levy_models") {
  TEST_CASE("parameter invariants") {
    CHECK_NOTHROW(kNig.validate());
    CHECK_THROWS_AS((NigParams{.alpha = 1.0, .beta = 1.0, .mu = 0.0, .delta = 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((NigParams{.alpha = 1.0, .beta = -2.0, .mu = 0.0, .delta = 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((NigParams{.alpha = 1.0, .beta = 0.0, .mu = 0.0, .delta = 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((VgParams{.x0 = 0, .lambda = 0, .gamma_rate = 1, .beta = 0, .sigma = 1}.validate()), DomainError);
    CHECK_THROWS_AS((VgParams{.x0 = 0, .lambda = 1, .gamma_rate = 1, .beta = 0, .sigma = 0}.validate()), DomainError);
    CHECK_THROWS_AS((VgMeanVarianceParams{.beta = 0, .sigma = 1, .nu = 0}.validate()), DomainError);
    CHECK_THROWS_AS((GammaParams{.lambda = 1, .gamma_rate = -1}.validate()), DomainError);
  }

  TEST_CASE("nig_density normalizes for the table parameters") {
    for (double t : {1.0 / 12.0, 2.0 / 12.0, 1.0}) {
      CAPTURE(t);
      CHECK(std::abs(nig_expectation(kNig, t, [](double) { return 1.0; }) - 1.0) < 1e-8);
    }
  }

  TEST_CASE("nig_density mean and variance") {
    const double t = 1.0 / 12.0;
    const double mean = nig_expectation(kNig, t, [](double x) { return x; });
    const double expected = t * (kNig.mu + kNig.delta * kNig.beta / kNig.gamma());
    CHECK(std::abs(mean - expected) < 1e-8);
    CHECK(std::abs(nig_mean(kNig, t) - expected) < 1e-15);
    const double second = nig_expectation(kNig, t, [mean](double x) { return (x - mean) * (x - mean); });
    CHECK(second == doctest::Approx(nig_variance(kNig, t)).epsilon(1e-7));
  }

  TEST_CASE("nig_density symmetry, positivity and log form") {
    const NigParams sym{.alpha = 3.0, .beta = 0.0, .mu = 0.0, .delta = 0.7};
    for (double x : {0.01, 0.3, 1.0, 4.0}) CHECK(nig_density(sym, x, 2.0) == doctest::Approx(nig_density(sym, -x, 2.0)));
    for (double x : {-0.5, -0.05, 0.0, 0.003, 0.2, 1.0}) {
      const double f = nig_density(kNig, x, 1.0 / 12.0);
      CHECK(f >= 0.0);
      if (f > 0.0) CHECK(std::log(f) == doctest::Approx(nig_log_density(kNig, x, 1.0 / 12.0)).epsilon(1e-12));
    }
    // Far tail stays finite in log space.
    CHECK(std::isfinite(nig_log_density(kNig, 30.0, 1.0 / 12.0)));
    CHECK_THROWS_AS(nig_density(kNig, 0.0, 0.0), DomainError);
  }

  TEST_CASE("nig_cumulant identities") {
    CHECK(nig_cumulant(kNig, 0.0) == 0.0);
    const NigParams sym{.alpha = 2.0, .beta = 0.0, .mu = 0.0, .delta = 0.5};
    for (double xi : {-1.5, 0.3, 1.9}) CHECK(nig_cumulant(sym, xi) == doctest::Approx(0.5 * (2.0 - std::sqrt(4.0 - xi * xi))));
    CHECK_THROWS_AS(nig_cumulant(kNig, 80.0), DomainError);
    CHECK_THROWS_AS(nig_cumulant(kNig, -86.0), DomainError);
  }

  TEST_CASE("nig_cumulant matches the moment generating function by quadrature") {
    for (double theta : {1.0, -20.0, -3.0, 10.0, 60.0}) {
      CAPTURE(theta);
      const double mgf = nig_expectation(kNig, 1.0, [theta](double x) { return std::exp(theta * x); });
      CHECK(mgf == doctest::Approx(std::exp(nig_cumulant(kNig, theta))).epsilon(1e-5));
    }
  }

  TEST_CASE("nig_levy_density symmetry, tilt and small-x asymptote") {
    const NigParams sym{.alpha = 5.0, .beta = 0.0, .mu = 0.1, .delta = 0.4};
    for (double x : {0.01, 0.5, 3.0}) CHECK(nig_levy_density(sym, x) == doctest::Approx(nig_levy_density(sym, -x)));
    for (double theta : {-40.0, -1.0, 0.5, 70.0}) {
      NigParams tilted = kNig;
      tilted.beta += theta;
      for (double x : {-0.2, -0.01, 1e-4, 0.03, 0.15}) {
        const double ratio = nig_levy_density(tilted, x) / nig_levy_density(kNig, x);
        CHECK(ratio == doctest::Approx(std::exp(theta * x)).epsilon(1e-12));
      }
    }
    for (double x : {1e-7, -1e-7}) CHECK(x * x * nig_levy_density(kNig, x) == doctest::Approx(kNig.delta / std::numbers::pi).epsilon(1e-4));
    CHECK_THROWS_AS(nig_levy_density(kNig, 0.0), DomainError);
  }

  TEST_CASE("gamma_density") {
    CHECK(gamma_density({1.0, 1.0}, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    const GammaParams g{.lambda = 1.0 / 0.3, .gamma_rate = 1.0 / 0.3};
    const auto spec = tight(1.0);
    const double mass = integrate([&](double x) { return gamma_density(g, x, 1.0); }, 0.0, kInf, spec);
    CHECK(std::abs(mass - 1.0) < 1e-10);
    const GammaParams h{.lambda = 2.5, .gamma_rate = 3.0};
    const double mean = integrate([&](double x) { return x * gamma_density(h, x, 0.8); }, 0.0, kInf, spec);
    CHECK(mean == doctest::Approx(2.5 * 0.8 / 3.0).epsilon(1e-9));
    CHECK_THROWS_AS(gamma_density(h, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(gamma_density(h, -1.0, 1.0), DomainError);
  }

  TEST_CASE("vg_cumulant identities") {
    const VgParams p{.x0 = 0.02, .lambda = 1.3, .gamma_rate = 0.9, .beta = -0.2, .sigma = 0.8};
    CHECK(vg_cumulant(p, 0.0) == 0.0);
    const VgParams no_vol{.x0 = 0.0, .lambda = 2.0, .gamma_rate = 3.0, .beta = 0.5, .sigma = 1e-9};
    for (double th : {-2.0, 1.0, 4.0})
      CHECK(vg_cumulant(no_vol, th) == doctest::Approx(-2.0 * std::log(1.0 - 0.5 * th / 3.0)).epsilon(1e-12));
    const VgParams lec = vg_from_mean_variance(kLecuyer);
    CHECK(std::abs(vg_cumulant(lec, 1.0) + mean_correct_omega_vg(kLecuyer)) < 1e-12);
    CHECK_THROWS_AS(vg_cumulant(p, 10.0), DomainError);
  }

  TEST_CASE("vg_cumulant matches the moment generating function by quadrature") {
    const VgParams p{.x0 = 0.02, .lambda = 1.0, .gamma_rate = 1.0, .beta = -0.1436, .sigma = 1.0};
    for (double theta : {-0.8, 0.4, 0.9}) {
      CAPTURE(theta);
      const double mgf = vg_expectation(p, 1.0, [theta](double x) { return std::exp(theta * x); });
      CHECK(mgf == doctest::Approx(std::exp(vg_cumulant(p, theta))).epsilon(1e-5));
    }
  }

  TEST_CASE("vg_density normalization, mean and symmetry") {
    const VgParams table{.x0 = 1e-8, .lambda = 1.0, .gamma_rate = 1.0, .beta = -0.1436, .sigma = 1.0};
    CHECK(std::abs(vg_expectation(table, 1.0, [](double) { return 1.0; }) - 1.0) < 1e-6);
    const VgParams unit{.x0 = 0.0, .lambda = 1.0, .gamma_rate = 1.0, .beta = 0.0, .sigma = 1.0};
    CHECK(std::abs(vg_expectation(unit, 1.0, [](double) { return 1.0; }) - 1.0) < 1e-6);
    for (double x : {0.05, 0.7, 3.0}) CHECK(vg_density(unit, x, 1.0) == doctest::Approx(vg_density(unit, -x, 1.0)));

    const VgParams drifted{.x0 = 0.05, .lambda = 2.0, .gamma_rate = 1.5, .beta = 0.3, .sigma = 0.6};
    const double mean = vg_expectation(drifted, 0.7, [](double x) { return x; });
    CHECK(mean == doctest::Approx(vg_mean(drifted, 0.7)).epsilon(1e-8));
    CHECK(vg_mean(drifted, 0.7) == doctest::Approx(0.7 * (0.05 + 0.3 * 2.0 / 1.5)));
  }

  TEST_CASE("vg_density singular point") {
    const VgParams p{.x0 = 0.1, .lambda = 1.0, .gamma_rate = 2.0, .beta = 0.2, .sigma = 0.5};
    const double t = 0.4;  // lambda t = 0.4 <= 1/2: integrable divergence at x0 t
    CHECK(vg_density(p, p.x0 * t, t) == kInf);
    CHECK(std::isfinite(vg_density(p, p.x0 * t + 1e-9, t)));
    // Near x0 t the argument resolves only to ulp(x0 t), which caps the attainable accuracy.
    auto spec = tight(0.5);
    spec.rel_tol = 1e-8;
    spec.tail_truncation_mass = 1e-9;
    const double cut[] = {p.x0 * t};
    const double mass = integrate([&](double x) { return vg_density(p, x, t); }, -kInf, kInf, cut, spec);
    CHECK(std::abs(mass - 1.0) < 1e-6);
    // Above the threshold the density is finite at x0 t and continuous.
    const double t2 = 1.0;
    const double at = vg_density(p, p.x0 * t2, t2);
    CHECK(std::isfinite(at));
    CHECK(vg_density(p, p.x0 * t2 + 1e-7, t2) == doctest::Approx(at).epsilon(1e-3));
    CHECK(vg_density(p, -1.0, t2) >= 0.0);
  }

  TEST_CASE("vg_char_function properties") {
    CHECK(vg_char_function(kLecuyer, 0.0, 1.0) == std::complex<double>(1.0, 0.0));
    for (double t : {0.1, 1.0, 3.0}) {
      for (double u = -20.0; u <= 20.0; u += 0.7) {
        const auto phi = vg_char_function(kLecuyer, u, t);
        CHECK(std::abs(phi) <= 1.0 + 1e-15);
        const auto mirrored = vg_char_function(kLecuyer, -u, t);
        CHECK(std::abs(mirrored - std::conj(phi)) < 1e-14);
      }
    }
  }

  TEST_CASE("vg_char_function matches the Fourier transform of vg_density") {
    const VgParams p = vg_from_mean_variance(kLecuyer);
    for (double t : {1.0, 0.5}) {
      for (double u : {0.5, 2.0, 5.0, 12.0}) {
        CAPTURE(t);
        CAPTURE(u);
        const double re = vg_expectation(p, t, [u](double x) { return std::cos(u * x); });
        const double im = vg_expectation(p, t, [u](double x) { return std::sin(u * x); });
        const auto phi = vg_char_function(kLecuyer, u, t);
        CHECK(std::abs(re - phi.real()) < 1e-4);
        CHECK(std::abs(im - phi.imag()) < 1e-4);
      }
    }
  }

  TEST_CASE("mean-variance conversion") {
    const auto one = vg_from_mean_variance({.beta = 0.1, .sigma = 0.2, .nu = 1.0});
    CHECK(one.lambda == 1.0);
    CHECK(one.gamma_rate == 1.0);
    CHECK(one.x0 == 0.0);
    const auto p = vg_from_mean_variance(kLecuyer);
    CHECK(p.lambda == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(p.gamma_rate == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
    for (double nu : {0.01, 0.3, 1.0, 4.0}) {
      const auto q = vg_from_mean_variance({.beta = 0.0, .sigma = 1.0, .nu = nu});
      CHECK(q.lambda / q.gamma_rate == doctest::Approx(1.0));
      CHECK(q.lambda / (q.gamma_rate * q.gamma_rate) == doctest::Approx(nu));
    }
    const auto back = vg_to_mean_variance(p);
    CHECK(back.beta == kLecuyer.beta);
    CHECK(back.sigma == kLecuyer.sigma);
    CHECK(back.nu == doctest::Approx(kLecuyer.nu).epsilon(1e-15));
    CHECK_THROWS_AS(vg_to_mean_variance({.x0 = 0.1, .lambda = 1, .gamma_rate = 1, .beta = 0, .sigma = 1}), DomainError);
  }

  TEST_CASE("difference-of-gammas rates") {
    const auto sym = vg_gamma_rates({.beta = 0.0, .sigma = 0.3, .nu = 0.5});
    CHECK(sym.mean_plus == doctest::Approx(0.3 / std::sqrt(1.0)));
    CHECK(sym.mean_plus == sym.mean_minus);
    for (const auto& mv : {kLecuyer, VgMeanVarianceParams{.beta = 0.7, .sigma = 2.0, .nu = 0.1}}) {
      const auto r = vg_gamma_rates(mv);
      CHECK(r.mean_plus * r.mean_minus == doctest::Approx(mv.sigma * mv.sigma / (2.0 * mv.nu)).epsilon(1e-14));
      CHECK(r.mean_plus - r.mean_minus == doctest::Approx(mv.beta).epsilon(1e-13));
      CHECK(r.var_plus == doctest::Approx(r.mean_plus * r.mean_plus * mv.nu));
      // Same law as the scale representation: shape (mu+)^2 / nu+ = 1/nu, scale nu+ / mu+.
      const auto dg = vg_difference_of_gammas(vg_from_mean_variance(mv));
      CHECK(dg.shape == doctest::Approx(r.mean_plus * r.mean_plus / r.var_plus));
      CHECK(dg.scale_plus == doctest::Approx(r.var_plus / r.mean_plus).epsilon(1e-13));
      CHECK(dg.scale_minus == doctest::Approx(r.var_minus / r.mean_minus).epsilon(1e-13));
    }
    const VgParams general{.x0 = 0.0, .lambda = 1.7, .gamma_rate = 2.5, .beta = -0.4, .sigma = 0.9};
    const auto dg = vg_difference_of_gammas(general);
    CHECK(dg.scale_plus - dg.scale_minus == doctest::Approx(-0.4 / 2.5).epsilon(1e-14));
    CHECK(dg.scale_plus * dg.scale_minus == doctest::Approx(0.81 / 5.0).epsilon(1e-14));
  }
}
