#include "levy/measures.hpp"

#include <cmath>
#include <string>

#include "levy/errors.hpp"
#include "levy/special_fn.hpp"

namespace levy {

void MarketData::validate() const {
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw DomainError("MarketData: s0 must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("MarketData: T must be > 0");
  if (!std::isfinite(r)) throw DomainError("MarketData: r must be finite");
}

std::string_view to_string(MeasureTag tag) {
  switch (tag) {
    case MeasureTag::esscher:
      return "esscher";
    case MeasureTag::mean_correct:
      return "mean_correct";
  }
  return "unknown";
}

double esscher_theta(const std::function<double(double)>& cumulant, double target, Bracket bracket) {
  if (!(bracket.lo < bracket.hi)) throw DomainError("esscher_theta: empty bracket");
  auto excess = [&](double theta) { return cumulant(theta + 1.0) - cumulant(theta) - target; };
  const double f_lo = excess(bracket.lo);
  const double f_hi = excess(bracket.hi);
  if ((f_lo > 0.0 && f_hi > 0.0) || (f_lo < 0.0 && f_hi < 0.0))
    throw MeasureNotFound("Esscher measure does not exist for this bracket: kappa(theta+1) - kappa(theta) - " +
                          std::to_string(target) + " has no sign change on [" + std::to_string(bracket.lo) + ", " +
                          std::to_string(bracket.hi) + "]");
  const double theta = find_root(excess, bracket.lo, bracket.hi, 1e-15);
  if (!(std::abs(excess(theta)) <= kEsscherResidualTol))
    throw NumericalError("esscher_theta: root residual above tolerance");
  return theta;
}

namespace {
constexpr double kDomainShrink = 1e-9;
}

Bracket nig_esscher_domain(const NigParams& p) {
  p.validate();
  // |beta + theta| <= alpha and |beta + theta + 1| <= alpha.
  const double lo = -p.alpha - p.beta + kDomainShrink;
  const double hi = p.alpha - p.beta - 1.0 - kDomainShrink;
  if (!(lo < hi)) throw MeasureNotFound("NIG: alpha <= 1/2 leaves no theta with finite kappa(theta + 1)");
  return {lo, hi};
}

Bracket vg_esscher_domain(const VgParams& p) {
  p.validate();
  // beta theta + sigma^2 theta^2 / 2 < gamma  <=>  theta in (r-, r+).
  const double s2 = p.sigma * p.sigma;
  const double disc = std::sqrt(p.beta * p.beta + 2.0 * s2 * p.gamma_rate);
  const double root_lo = (-p.beta - disc) / s2;
  const double root_hi = (-p.beta + disc) / s2;
  const double lo = root_lo + kDomainShrink;
  const double hi = root_hi - 1.0 - kDomainShrink;
  if (!(lo < hi)) throw MeasureNotFound("VG: exponential moments too narrow for an Esscher tilt");
  return {lo, hi};
}

EsscherSolution<NigParams> nig_esscher(const NigParams& p, const MarketData& market) {
  p.validate();
  market.validate();
  const double gap = p.mu - market.r;
  const double a2 = gap * gap / (p.delta * p.delta);
  // A solution needs |r - mu| < delta sqrt(2 alpha - 1); at the boundary the
  // tilted parameters hit |beta*| = alpha or |beta* + 1| = alpha.
  if (!(a2 < 2.0 * p.alpha - 1.0))
    throw MeasureNotFound("NIG Esscher measure does not exist: |r - mu| >= delta sqrt(2 alpha - 1)");
  const double inner =
      p.alpha * p.alpha * gap * gap / (p.delta * p.delta + gap * gap) - gap * gap / (4.0 * p.delta * p.delta);
  if (inner < 0.0) throw MeasureNotFound("NIG Esscher measure does not exist: complex square root");
  const double shift = gap <= 0.0 ? std::sqrt(inner) : -std::sqrt(inner);
  const double beta_star = -0.5 + shift;

  EsscherSolution<NigParams> sol;
  sol.theta_star = beta_star - p.beta;
  sol.risk_neutral_params = {.alpha = p.alpha, .beta = beta_star, .mu = p.mu, .delta = p.delta};
  sol.target = market.r;
  sol.residual = nig_cumulant(p, sol.theta_star + 1.0) - nig_cumulant(p, sol.theta_star) - sol.target;
  if (!(std::abs(beta_star + 1.0) < p.alpha) || !(std::abs(beta_star) < p.alpha))
    throw MeasureNotFound("NIG Esscher measure does not exist: tilted beta outside (-alpha, alpha - 1)");
  if (!(std::abs(sol.residual) <= kEsscherResidualTol))
    throw NumericalError("nig_esscher: closed-form residual above tolerance");
  return sol;
}

EsscherSolution<VgParams> vg_esscher(const VgParams& p) {
  p.validate();
  if (p.sigma != 1.0) throw DomainError("vg_esscher: closed form requires sigma = 1");
  if (p.x0 == 0.0) throw DomainError("vg_esscher: closed form requires x0 != 0 (epsilon = 0 is degenerate)");
  if (!(p.beta * p.beta + 2.0 * p.gamma_rate > 0.25))
    throw MeasureNotFound("VG Esscher martingale measure does not exist: beta^2 + 2 gamma <= 1/4");

  const double eps = -std::expm1(p.x0 / p.lambda);
  const double spread = 2.0 * p.gamma_rate + p.beta * p.beta;
  const double disc = 1.0 - eps + eps * eps * spread;
  if (disc < 0.0) throw MeasureNotFound("VG Esscher measure does not exist: negative discriminant");
  // (-1 + sqrt(disc)) / eps rewritten without the cancellation at eps -> 0.
  const double beta_star = (-1.0 + eps * spread) / (1.0 + std::sqrt(disc));
  const double theta = beta_star - p.beta;

  EsscherSolution<VgParams> sol;
  sol.theta_star = theta;
  sol.target = 0.0;
  sol.risk_neutral_params = p;
  sol.risk_neutral_params.beta = beta_star;
  sol.risk_neutral_params.gamma_rate = p.gamma_rate - p.beta * theta - 0.5 * theta * theta;
  if (!(sol.risk_neutral_params.gamma_rate > 0.0))
    throw MeasureNotFound("VG Esscher measure does not exist: tilted gamma rate is not positive");
  try {
    sol.residual = vg_cumulant(p, theta + 1.0) - vg_cumulant(p, theta) - sol.target;
  } catch (const DomainError&) {
    throw MeasureNotFound("VG Esscher measure does not exist: E[exp((theta*+1) Y)] is infinite");
  }
  if (!(std::abs(sol.residual) <= kEsscherResidualTol))
    throw NumericalError("vg_esscher: closed-form residual above tolerance");
  return sol;
}

double mean_correct_omega_vg(const VgMeanVarianceParams& mv) {
  mv.validate();
  const double shift = -mv.beta * mv.nu - 0.5 * mv.sigma * mv.sigma * mv.nu;
  if (!(shift > -1.0)) throw MeasureNotFound("mean-correcting VG: E[exp(Y_1)] is infinite");
  return std::log1p(shift) / mv.nu;
}

double mean_correct_omega_nig(const NigParams& p) {
  p.validate();
  const double b1 = 1.0 + p.beta;
  if (!(std::abs(b1) <= p.alpha)) throw MeasureNotFound("mean-correcting NIG: E[exp(X_1)] is infinite");
  return -p.mu - p.delta * p.gamma() + p.delta * std::sqrt((p.alpha - b1) * (p.alpha + b1));
}

RiskNeutralModel risk_neutralize(const NigParams& p, const MarketData& market, MeasureTag tag) {
  market.validate();
  RiskNeutralModel rnm;
  rnm.measure = tag;
  rnm.market = market;
  if (tag == MeasureTag::esscher) {
    const auto sol = nig_esscher(p, market);
    rnm.model = sol.risk_neutral_params;
    rnm.theta_star = sol.theta_star;
    rnm.target = sol.target;
    rnm.drift_rate = market.r - sol.target;
  } else {
    rnm.model = p;
    rnm.omega = mean_correct_omega_nig(p);
    rnm.drift_rate = market.r + rnm.omega;
  }
  return rnm;
}

RiskNeutralModel risk_neutralize(const VgParams& p, const MarketData& market, MeasureTag tag) {
  market.validate();
  RiskNeutralModel rnm;
  rnm.measure = tag;
  rnm.market = market;
  if (tag == MeasureTag::esscher) {
    const auto sol = vg_esscher(p);
    rnm.model = sol.risk_neutral_params;
    rnm.theta_star = sol.theta_star;
    rnm.target = sol.target;
    rnm.drift_rate = market.r - sol.target;
  } else {
    rnm.model = p;
    try {
      rnm.omega = -vg_cumulant(p, 1.0);
    } catch (const DomainError&) {
      throw MeasureNotFound("mean-correcting VG: E[exp(Y_1)] is infinite");
    }
    rnm.drift_rate = market.r + rnm.omega;
  }
  return rnm;
}

RiskNeutralModel risk_neutralize(const VgMeanVarianceParams& mv, const MarketData& market, MeasureTag tag) {
  if (tag == MeasureTag::esscher) return risk_neutralize(vg_from_mean_variance(mv), market, tag);
  market.validate();
  RiskNeutralModel rnm;
  rnm.model = vg_from_mean_variance(mv);
  rnm.measure = tag;
  rnm.market = market;
  rnm.omega = mean_correct_omega_vg(mv);
  rnm.drift_rate = market.r + rnm.omega;
  return rnm;
}

RiskNeutralModel risk_neutralize(const Model& model, const MarketData& market, MeasureTag tag) {
  return std::visit([&](const auto& p) { return risk_neutralize(p, market, tag); }, model);
}

double model_cumulant(const Model& model, double theta) {
  return std::visit(
      [theta](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, NigParams>)
          return nig_cumulant(p, theta);
        else
          return vg_cumulant(p, theta);
      },
      model);
}

double log_price_cumulant(const RiskNeutralModel& rnm, double u) {
  return rnm.drift_rate * u + model_cumulant(rnm.model, u);
}

}  // namespace levy
