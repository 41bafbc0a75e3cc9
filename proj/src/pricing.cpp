#include "levy/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levy/errors.hpp"
#include "levy/special_fn.hpp"

namespace levy {

std::string_view to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::european_call:
      return "european_call";
    case PayoffKind::asian_arithmetic_call:
      return "asian_arithmetic_call";
  }
  return "unknown";
}

double payoff_european_call(std::span<const double> path, double strike) {
  if (path.empty()) throw DomainError("payoff_european_call: empty path");
  return std::max(path.back() - strike, 0.0);
}

double payoff_asian_call(std::span<const double> path, double strike) {
  if (path.empty()) throw DomainError("payoff_asian_call: empty path");
  double sum = 0.0;
  for (double s : path) sum += s;
  return std::max(sum / static_cast<double>(path.size()) - strike, 0.0);
}

void Payoff::validate() const {
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw DomainError("Payoff: strike must be >= 0");
}

double Payoff::operator()(std::span<const double> path) const {
  return kind == PayoffKind::european_call ? payoff_european_call(path, strike) : payoff_asian_call(path, strike);
}

McResult summarize(std::span<const double> samples, std::uint64_t seed) {
  if (samples.empty()) throw DomainError("summarize: no samples");
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double x : samples) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  McResult r;
  r.estimate = mean;
  r.n_paths = samples.size();
  r.seed = seed;
  const double n = static_cast<double>(samples.size());
  r.std_error = samples.size() > 1 ? std::sqrt(m2 / (n - 1.0) / n) : std::numeric_limits<double>::infinity();
  r.ci95_lo = r.estimate - kZ95 * r.std_error;
  r.ci95_hi = r.estimate + kZ95 * r.std_error;
  return r;
}

std::vector<double> discounted_payoff_samples(const RiskNeutralModel& rnm, const PathFunctional& payoff,
                                              const PathGrid& grid, const McOptions& options) {
  grid.validate();
  rnm.market.validate();
  if (options.n_paths < 1) throw DomainError("price_mc: n_paths must be >= 1");
  if (std::abs(grid.maturity - rnm.market.T) > 1e-12 * rnm.market.T)
    throw DomainError("price_mc: grid maturity differs from market maturity");
  const Scheme scheme = options.scheme.value_or(default_scheme(rnm.model));
  if (!scheme_compatible(scheme, rnm.model))
    throw DomainError("price_mc: scheme " + std::string(to_string(scheme)) + " does not fit the model");

  const double discount = std::exp(-rnm.market.r * rnm.market.T);
  const auto steps = static_cast<std::size_t>(grid.n_steps);
  std::vector<double> samples(options.n_paths);
  parallel_for_index(options.n_paths, options.workers, [&](std::size_t i) {
    thread_local std::vector<double> path;
    path.resize(steps);
    RngStream rng(options.seed, i);
    simulate_path(rnm, scheme, grid, rng, path);
    samples[i] = discount * payoff(path);
  });
  return samples;
}

McResult price_mc(const RiskNeutralModel& rnm, const PathFunctional& payoff, const PathGrid& grid,
                  const McOptions& options) {
  const auto samples = discounted_payoff_samples(rnm, payoff, grid, options);
  return summarize(samples, options.seed);
}

McResult price_mc(const RiskNeutralModel& rnm, const Payoff& payoff, const PathGrid& grid, const McOptions& options) {
  payoff.validate();
  return price_mc(rnm, PathFunctional([payoff](std::span<const double> path) { return payoff(path); }), grid,
                  options);
}

// ---------------------------------------------------------------------------

double nig_tail_probability(const NigParams& p, double t, double x) {
  p.validate();
  if (!(t > 0.0)) throw DomainError("nig_tail_probability: t must be > 0");
  if (std::isnan(x)) throw DomainError("nig_tail_probability: x is NaN");
  if (x == -std::numeric_limits<double>::infinity()) return 1.0;
  if (x == std::numeric_limits<double>::infinity()) return 0.0;

  const double center = p.mu * t;
  QuadratureSpec spec;
  spec.rel_tol = 1e-11;
  spec.abs_tol = 1e-13;
  spec.tail_truncation_mass = 1e-12;
  spec.max_subdivisions = 20000;
  // The core of the density has width ~ delta t; tails decay at rates alpha -/+ beta.
  spec.initial_tail_width = std::max(p.delta * t, 1e-3 / p.alpha);
  const Integrand density = [&p, t](double u) { return nig_density(p, u, t); };
  const double cut[] = {center};

  double tail;
  if (p.beta >= 0.0) {
    // Left tail decays at alpha + beta >= alpha - beta: integrate the left side.
    tail = 1.0 - integrate(density, -std::numeric_limits<double>::infinity(), x, cut, spec);
  } else {
    tail = integrate(density, x, std::numeric_limits<double>::infinity(), cut, spec);
  }
  return std::clamp(tail, 0.0, 1.0);
}

double european_call_nig_closed(const NigParams& p, const MarketData& market, double strike) {
  market.validate();
  if (!(strike >= 0.0)) throw DomainError("european_call_nig_closed: strike must be >= 0");
  const auto sol = nig_esscher(p, market);
  if (strike == 0.0) return market.s0;
  const double k = std::log(strike / market.s0);
  NigParams share = sol.risk_neutral_params;
  share.beta += 1.0;
  const double p1 = nig_tail_probability(share, market.T, k);
  const double p2 = nig_tail_probability(sol.risk_neutral_params, market.T, k);
  return market.s0 * p1 - std::exp(-market.r * market.T) * strike * p2;
}

}  // namespace levy
