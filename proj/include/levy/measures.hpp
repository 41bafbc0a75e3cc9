#pragma once

#include <functional>
#include <string_view>
#include <variant>

#include "levy/levy_models.hpp"

namespace levy {

struct MarketData {
  double s0 = 100.0;  ///< spot at t = 0
  double r = 0.0;     ///< continuously compounded annual rate
  double T = 1.0;     ///< maturity in years

  void validate() const;
  bool operator==(const MarketData&) const = default;
};

enum class MeasureTag { esscher, mean_correct };

std::string_view to_string(MeasureTag tag);

/// Solution of the Esscher equation kappa(theta + 1) - kappa(theta) = target.
template <class Params>
struct EsscherSolution {
  double theta_star = 0.0;
  Params risk_neutral_params{};
  double target = 0.0;
  /// kappa(theta* + 1) - kappa(theta*) - target, evaluated with the original cumulant.
  double residual = 0.0;
};

using Model = std::variant<NigParams, VgParams>;

/// A model under a pricing measure, ready for path simulation.
///
/// Log-price dynamics: ln S_t = ln S_0 + drift_rate * t + X_t, where X is the
/// Levy process described by `model` (already carrying the Esscher tilt when
/// measure == esscher). Every constructed instance satisfies
/// drift_rate + kappa_model(1) = market.r, i.e. e^{-rt} S_t is a martingale.
struct RiskNeutralModel {
  Model model;
  MeasureTag measure = MeasureTag::mean_correct;
  double drift_rate = 0.0;
  double omega = 0.0;       ///< mean-correcting compensator, 0 under Esscher
  double theta_star = 0.0;  ///< Esscher parameter, 0 under mean-correction
  double target = 0.0;      ///< right-hand side of the Esscher equation that was solved
  MarketData market;

  bool operator==(const RiskNeutralModel&) const = default;
};

inline constexpr double kEsscherResidualTol = 1e-10;
inline constexpr double kDefaultEsscherBracket = 50.0;

struct Bracket {
  double lo = -kDefaultEsscherBracket;
  double hi = kDefaultEsscherBracket;
};

/// Solves kappa(theta + 1) - kappa(theta) = target on the bracket. The
/// cumulant must be defined on [lo, hi + 1]. Throws MeasureNotFound when the
/// left-hand side has no sign change over the bracket.
double esscher_theta(const std::function<double(double)>& cumulant, double target, Bracket bracket);

/// Open interval of theta on which both kappa(theta) and kappa(theta + 1) are
/// finite, shrunk by 1e-9 at each end.
Bracket nig_esscher_domain(const NigParams& p);
Bracket vg_esscher_domain(const VgParams& p);

/// Closed-form Esscher tilt for NIG with target r, so that under the tilted
/// parameters the price S_t = S_0 exp(X_t) grows at rate r. Throws
/// MeasureNotFound when no admissible tilt exists.
EsscherSolution<NigParams> nig_esscher(const NigParams& p, const MarketData& market);

/// Closed-form Esscher tilt for VG with sigma = 1 and x0 != 0, target 0
/// (dynamics S_t = S_0 exp(r t + Y_t)). Risk-neutral parameters are
/// (x0, lambda, gamma*, beta*, 1). Throws DomainError for sigma != 1 or
/// x0 = 0, MeasureNotFound when beta^2 + 2 gamma <= 1/4.
EsscherSolution<VgParams> vg_esscher(const VgParams& p);

/// omega = ln(1 - beta nu - sigma^2 nu / 2) / nu, so e^{-omega} = E[e^{Y_1}].
double mean_correct_omega_vg(const VgMeanVarianceParams& mv);

/// omega = -mu - delta sqrt(alpha^2 - beta^2) + delta sqrt(alpha^2 - (1 + beta)^2).
double mean_correct_omega_nig(const NigParams& p);

RiskNeutralModel risk_neutralize(const NigParams& p, const MarketData& market, MeasureTag tag);
RiskNeutralModel risk_neutralize(const VgParams& p, const MarketData& market, MeasureTag tag);
RiskNeutralModel risk_neutralize(const VgMeanVarianceParams& mv, const MarketData& market, MeasureTag tag);
RiskNeutralModel risk_neutralize(const Model& model, const MarketData& market, MeasureTag tag);

/// Cumulant of the model's Levy part, dispatched on the variant.
double model_cumulant(const Model& model, double theta);

/// drift_rate + kappa(u): the cumulant of the full log-price per unit time.
double log_price_cumulant(const RiskNeutralModel& rnm, double u);

}  // namespace levy
