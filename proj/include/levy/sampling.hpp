#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "levy/levy_models.hpp"
#include "levy/measures.hpp"
#include "levy/rng.hpp"

namespace levy {

/// Standard normal by inversion of the CDF; one uniform per variate.
double sample_standard_normal(RngStream& rng);

/// Gamma(shape, rate) by Marsaglia-Tsang, with the U^{1/shape} boost for shape < 1.
double sample_gamma(RngStream& rng, double shape, double rate);

/// Inverse Gaussian IG(mean, shape) by the Michael-Schucany-Haas transformation.
double sample_inverse_gaussian(RngStream& rng, double mean, double shape);

/// Equally spaced monitoring dates t_i = i T / s, i = 1..s.
struct PathGrid {
  double maturity = 1.0;
  int n_steps = 1;

  void validate() const;
  double dt() const { return maturity / n_steps; }
  /// t_i for i in [1, n_steps]; t_{n_steps} == maturity exactly.
  double date(int i) const;
};

enum class Scheme { ig_subordination, bgss, dg };

std::string_view to_string(Scheme scheme);

/// ig_subordination <-> NIG; bgss, dg <-> VG.
bool scheme_compatible(Scheme scheme, const Model& model);
Scheme default_scheme(const Model& model);

// Each simulator writes S_{t_1}..S_{t_s} into `spots` (size grid.n_steps) for
// ln S_t = ln s0 + drift_rate t + X_t.

/// Per step: z ~ IG(delta dt / gamma, (delta dt)^2), dX = mu dt + beta z + sqrt(z) N.
void simulate_nig_path(const NigParams& p, double drift_rate, double s0, const PathGrid& grid, RngStream& rng,
                       std::span<double> spots);

/// Brownian-gamma sequential sampling. Per step: z ~ Gamma(lambda dt, gamma),
/// dY = x0 dt + beta z + sigma sqrt(z) N.
void simulate_vg_path_bgss(const VgParams& p, double drift_rate, double s0, const PathGrid& grid, RngStream& rng,
                           std::span<double> spots);

/// Difference-of-gammas sampling. Per step: dY = x0 dt + G+ - G-, with
/// independent gamma increments of shape lambda dt and the scales of
/// vg_difference_of_gammas().
void simulate_vg_path_dg(const VgParams& p, double drift_rate, double s0, const PathGrid& grid, RngStream& rng,
                         std::span<double> spots);
void simulate_vg_path_dg(const VgMeanVarianceParams& mv, double drift_rate, double s0, const PathGrid& grid,
                         RngStream& rng, std::span<double> spots);

/// Dispatch on the risk-neutral model. Throws DomainError for an incompatible scheme.
void simulate_path(const RiskNeutralModel& rnm, Scheme scheme, const PathGrid& grid, RngStream& rng,
                   std::span<double> spots);

/// n_paths x n_steps matrix of spots, row-major.
struct PathSet {
  PathGrid grid;
  std::size_t n_paths = 0;
  std::vector<double> spots;

  std::span<const double> path(std::size_t i) const {
    const auto s = static_cast<std::size_t>(grid.n_steps);
    return {spots.data() + i * s, s};
  }
};

/// Path i is driven by RngStream(seed, i), so the set is identical for any worker count.
PathSet simulate_paths(const RiskNeutralModel& rnm, Scheme scheme, const PathGrid& grid, std::size_t n_paths,
                       std::uint64_t seed, unsigned workers = 0);

/// Runs body(i) for i in [0, n) split into contiguous blocks over `workers`
/// threads (0 = hardware concurrency).
void parallel_for_index(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace levy
