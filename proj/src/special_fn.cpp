#include "levy/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "levy/errors.hpp"

namespace levy {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxBesselIter = 10000;

// Taylor coefficients of 1/Gamma(z) about 0: 1/Gamma(z) = sum_k c[k] z^k.
constexpr std::array<double, 31> kRecipGammaTaylor = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
    -2.2987456844353702066e-19,
    1.7144063219273374334e-20,
};

// Temme's auxiliary gammas for |mu| <= 1/2:
//   gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu),  gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2.
// Summed from the even/odd halves of the 1/Gamma series, so no cancellation at mu -> 0.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  const double mu2 = mu * mu;
  double gam1 = 0.0;
  double gam2 = 0.0;
  double pw = 1.0;
  for (std::size_t j = 0; 2 * j + 2 < kRecipGammaTaylor.size(); ++j) {
    gam2 += kRecipGammaTaylor[2 * j + 1] * pw;
    gam1 -= kRecipGammaTaylor[2 * j + 2] * pw;
    pw *= mu2;
  }
  return {gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1};
}

// K_mu(x) and K_{mu+1}(x), both multiplied by e^x, for |mu| <= 1/2.
std::pair<double, double> bessel_k_pair_scaled(double mu, double x) {
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  if (x <= 2.0) {
    // Temme series.
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const auto g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxBesselIter; ++i) {
      const double di = i;
      ff = (di * ff + p + q) / (di * di - mu2);
      c *= d / di;
      p /= di - mu;
      q /= di + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - di * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxBesselIter) throw NumericalError("bessel_k: series failed to converge");
    const double scale = std::exp(x);
    return {sum * scale, sum1 * 2.0 * xi * scale};
  }

  // Steed's continued fraction (CF2) with Temme's normalization.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxBesselIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxBesselIter) throw NumericalError("bessel_k: continued fraction failed to converge");
  h *= a1;
  const double kmu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  return {kmu, kmu * (mu + x + 0.5 - h) * xi};
}

}  // namespace

double bessel_k_scaled(double order, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k: x must be > 0, got " + std::to_string(x));
  if (!std::isfinite(order)) throw DomainError("bessel_k: order must be finite");
  const double nu = std::abs(order);
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  auto [kmu, k1] = bessel_k_pair_scaled(mu, x);
  const double xi2 = 2.0 / x;
  // Upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v is stable for K.
  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * xi2 * k1 + kmu;
    kmu = k1;
    k1 = next;
  }
  return kmu;
}

BesselKResult bessel_k_checked(double order, double x) {
  const double scaled = bessel_k_scaled(order, x);
  const double value = scaled * std::exp(-x);
  if (value == 0.0 && scaled != 0.0) return {0.0, true};
  return {value, false};
}

double bessel_k(double order, double x) { return bessel_k_checked(order, x).value; }

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: x must be > 0, got " + std::to_string(x));
  return boost::math::lgamma(x);
}

// ---------------------------------------------------------------------------

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  if (!(tail_truncation_mass > 0.0) || tail_truncation_mass > rel_tol)
    throw DomainError("QuadratureSpec: tail_truncation_mass must lie in (0, rel_tol]");
  if (!(initial_tail_width > 0.0)) throw DomainError("QuadratureSpec: initial_tail_width must be > 0");
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// QUADPACK qk15.
Segment gauss_kronrod_15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double ah = std::abs(half);
  const double result = resk * half;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double kUflow = std::numeric_limits<double>::min();
  constexpr double kEpmach = std::numeric_limits<double>::epsilon();
  if (resabs > kUflow / (50.0 * kEpmach)) err = std::max(kEpmach * 50.0 * resabs, err);
  if (!std::isfinite(result)) throw NumericalError("integrate: integrand produced a non-finite value");
  return {a, b, result, err};
}

constexpr double kNodeResolution = 2048.0 * std::numeric_limits<double>::epsilon();

double integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  if (a == b) return 0.0;
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod_15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  // Segments too narrow to split further keep their error in this bucket.
  double frozen_err = 0.0;
  double frozen_value = 0.0;
  int subdivisions = 0;
  while (total_err + frozen_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (heap.empty()) break;
    if (subdivisions >= spec.max_subdivisions)
      throw NumericalError("integrate: no convergence after " + std::to_string(spec.max_subdivisions) +
                           " subdivisions on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    // Children narrower than this would place Kronrod nodes on their endpoints
    // after rounding, where integrable singularities evaluate to infinity.
    const double resolution = kNodeResolution * std::max(std::abs(worst.a), std::abs(worst.b));
    if (!(mid > worst.a && mid < worst.b) || worst.b - worst.a <= resolution) {
      total_err -= worst.error;
      frozen_err += worst.error;
      frozen_value += worst.value;
      continue;
    }
    Segment left = gauss_kronrod_15(f, worst.a, mid);
    Segment right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  if (frozen_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
    throw NumericalError("integrate: tolerance not reachable at machine resolution");
  // Re-sum to shed accumulated rounding from the incremental updates.
  double resum = frozen_value;
  while (!heap.empty()) {
    resum += heap.top().value;
    heap.pop();
  }
  return resum;
}

// Integral over [a, +inf) by chunks of doubling width.
double integrate_upper_tail(const Integrand& f, double a, const QuadratureSpec& spec) {
  constexpr int kMaxChunks = 400;
  double width = spec.initial_tail_width;
  double lo = a;
  double total = 0.0;
  for (int chunk = 0; chunk < kMaxChunks; ++chunk) {
    const double hi = lo + width;
    if (!std::isfinite(hi)) break;
    const double part = integrate_finite(f, lo, hi, spec);
    total += part;
    const bool negligible = std::abs(part) <= spec.tail_truncation_mass * std::abs(total) ||
                            std::abs(part) <= spec.abs_tol * spec.tail_truncation_mass;
    if (chunk >= 2 && negligible) return total;
    lo = hi;
    width *= 2.0;
  }
  throw NumericalError("integrate: semi-infinite tail did not become negligible");
}

double integrate_piece(const Integrand& f, double lower, double upper, const QuadratureSpec& spec) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (std::isnan(lower) || std::isnan(upper)) throw DomainError("integrate: NaN bound");
  if (lower == upper) return 0.0;
  if (lower > upper) return -integrate_piece(f, upper, lower, spec);
  const bool lo_inf = lower == -inf;
  const bool hi_inf = upper == inf;
  if (lo_inf && hi_inf) {
    return integrate_piece(f, -inf, 0.0, spec) + integrate_piece(f, 0.0, inf, spec);
  }
  if (hi_inf) return integrate_upper_tail(f, lower, spec);
  if (lo_inf) {
    Integrand reflected = [&f](double x) { return f(-x); };
    return integrate_upper_tail(reflected, -upper, spec);
  }
  return integrate_finite(f, lower, upper, spec);
}

}  // namespace

double integrate(const Integrand& f, double lower, double upper, const QuadratureSpec& spec) {
  return integrate(f, lower, upper, std::span<const double>{}, spec);
}

double integrate(const Integrand& f, double lower, double upper, std::span<const double> breakpoints,
                 const QuadratureSpec& spec) {
  spec.validate();
  if (lower > upper) return -integrate(f, upper, lower, breakpoints, spec);
  std::vector<double> cuts;
  cuts.push_back(lower);
  for (double p : breakpoints)
    if (p > lower && p < upper) cuts.push_back(p);
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(upper);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate_piece(f, cuts[i], cuts[i + 1], spec);
  return total;
}

// ---------------------------------------------------------------------------

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_root: tol must be > 0");
  if (lo > hi) std::swap(lo, hi);
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw DomainError("find_root: function is NaN at a bracket endpoint");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw DomainError("find_root: invalid bracket, f has the same sign at both endpoints");

  constexpr int kMaxIter = 500;
  constexpr double kMachEps = std::numeric_limits<double>::epsilon();
  double c = b, fc = fb, d = b - a, e = d;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kMachEps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || std::abs(fb) <= tol || fb == 0.0) return std::clamp(b, lo, hi);
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points are distinct.
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (std::isnan(fb)) throw NumericalError("find_root: function returned NaN inside the bracket");
  }
  throw NumericalError("find_root: maximum iterations exceeded");
}

}  // namespace levy
