#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "levy/measures.hpp"
#include "levy/sampling.hpp"

namespace levy {

enum class PayoffKind { european_call, asian_arithmetic_call };

std::string_view to_string(PayoffKind kind);

/// (S_T - K)^+ where S_T is the last entry of the path.
double payoff_european_call(std::span<const double> path, double strike);

/// ((1/s) sum_{i=1..s} S_{t_i} - K)^+ over the monitoring dates t_1..t_s;
/// S_0 is not part of the average.
double payoff_asian_call(std::span<const double> path, double strike);

struct Payoff {
  PayoffKind kind = PayoffKind::european_call;
  double strike = 0.0;

  void validate() const;
  double operator()(std::span<const double> path) const;
};

/// Monte Carlo estimate with its sampling error. ci95 = estimate -/+ 1.96 std_error.
struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci95_lo = 0.0;
  double ci95_hi = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kZ95 = 1.96;

/// Mean and standard error of `samples` (Welford, fixed order). With a single
/// sample the spread is unknown and std_error is +infinity.
McResult summarize(std::span<const double> samples, std::uint64_t seed = 0);

struct McOptions {
  std::size_t n_paths = 10000;
  std::uint64_t seed = 42;
  /// Defaults to ig_subordination for NIG and bgss for VG.
  std::optional<Scheme> scheme;
  /// 0 = hardware concurrency. Results do not depend on this value.
  unsigned workers = 0;
};

using PathFunctional = std::function<double(std::span<const double>)>;

/// e^{-rT} payoff(path_i) for i = 0..n_paths-1, path i driven by RngStream(seed, i).
std::vector<double> discounted_payoff_samples(const RiskNeutralModel& rnm, const PathFunctional& payoff,
                                              const PathGrid& grid, const McOptions& options);

McResult price_mc(const RiskNeutralModel& rnm, const PathFunctional& payoff, const PathGrid& grid,
                  const McOptions& options);
McResult price_mc(const RiskNeutralModel& rnm, const Payoff& payoff, const PathGrid& grid, const McOptions& options);

/// P(X_t > x) for X_t ~ NIG(alpha, beta, mu t, delta t), by quadrature of the
/// density on the lighter-tailed side. Absolute error <= 1e-8.
double nig_tail_probability(const NigParams& p, double t, double x);

/// European call under the NIG Esscher measure:
///   C_0 = S_0 P(X_T > k; beta* + 1) - e^{-rT} K P(X_T > k; beta*),  k = ln(K / S_0).
double european_call_nig_closed(const NigParams& p, const MarketData& market, double strike);

}  // namespace levy
