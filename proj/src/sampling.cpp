#include "levy/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/erf.hpp>

#include "levy/errors.hpp"

namespace levy {

double sample_standard_normal(RngStream& rng) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * rng.uniform());
}

namespace {

// Gamma(shape, 1) for shape >= 1.
double marsaglia_tsang(RngStream& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = sample_standard_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(RngStream& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("sample_gamma: shape and rate must be > 0");
  if (shape >= 1.0) return marsaglia_tsang(rng, shape) / rate;
  // X U^{1/a} ~ Gamma(a) for X ~ Gamma(a + 1); combined in log space since
  // U^{1/a} underflows routinely for the small shapes of fine time grids.
  const double g = marsaglia_tsang(rng, shape + 1.0);
  const double u = rng.uniform();
  return std::exp(std::log(g) + std::log(u) / shape) / rate;
}

double sample_inverse_gaussian(RngStream& rng, double mean, double shape) {
  if (!(mean > 0.0) || !(shape > 0.0)) throw DomainError("sample_inverse_gaussian: mean and shape must be > 0");
  const double n = sample_standard_normal(rng);
  const double y = n * n;
  const double my = mean * y;
  // Larger root of the quadratic; the smaller one is mean^2 / larger, which
  // avoids the cancellation of the textbook form when mean * y >> shape.
  const double big = mean + mean / (2.0 * shape) * (my + std::sqrt(4.0 * mean * shape * y + my * my));
  const double small = mean * mean / big;
  const double u = rng.uniform();
  return u <= mean / (mean + small) ? small : big;
}

// ---------------------------------------------------------------------------

void PathGrid::validate() const {
  if (!(maturity > 0.0) || !std::isfinite(maturity)) throw DomainError("PathGrid: maturity must be > 0");
  if (n_steps < 1) throw DomainError("PathGrid: n_steps must be >= 1");
}

double PathGrid::date(int i) const {
  if (i == n_steps) return maturity;
  return maturity * static_cast<double>(i) / n_steps;
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::ig_subordination:
      return "ig_subordination";
    case Scheme::bgss:
      return "bgss";
    case Scheme::dg:
      return "dg";
  }
  return "unknown";
}

bool scheme_compatible(Scheme scheme, const Model& model) {
  const bool nig = std::holds_alternative<NigParams>(model);
  return nig ? scheme == Scheme::ig_subordination : scheme != Scheme::ig_subordination;
}

Scheme default_scheme(const Model& model) {
  return std::holds_alternative<NigParams>(model) ? Scheme::ig_subordination : Scheme::bgss;
}

namespace {

void check_output(const PathGrid& grid, std::span<double> spots, double s0) {
  grid.validate();
  if (spots.size() != static_cast<std::size_t>(grid.n_steps))
    throw DomainError("simulate: output span must have one slot per monitoring date");
  if (!(s0 > 0.0)) throw DomainError("simulate: s0 must be > 0");
}

}  // namespace

void simulate_nig_path(const NigParams& p, double drift_rate, double s0, const PathGrid& grid, RngStream& rng,
                       std::span<double> spots) {
  p.validate();
  check_output(grid, spots, s0);
  const double dt = grid.dt();
  const double scale = p.delta * dt;
  const double ig_mean = scale / p.gamma();
  const double ig_shape = scale * scale;
  const double step_drift = (p.mu + drift_rate) * dt;
  double log_s = std::log(s0);
  for (auto& s : spots) {
    const double z = sample_inverse_gaussian(rng, ig_mean, ig_shape);
    log_s += step_drift + p.beta * z + std::sqrt(z) * sample_standard_normal(rng);
    s = std::exp(log_s);
  }
}

void simulate_vg_path_bgss(const VgParams& p, double drift_rate, double s0, const PathGrid& grid, RngStream& rng,
                           std::span<double> spots) {
  p.validate();
  check_output(grid, spots, s0);
  const double dt = grid.dt();
  const double shape = p.lambda * dt;
  const double step_drift = (p.x0 + drift_rate) * dt;
  double log_s = std::log(s0);
  for (auto& s : spots) {
    const double z = sample_gamma(rng, shape, p.gamma_rate);
    log_s += step_drift + p.beta * z + p.sigma * std::sqrt(z) * sample_standard_normal(rng);
    s = std::exp(log_s);
  }
}

void simulate_vg_path_dg(const VgParams& p, double drift_rate, double s0, const PathGrid& grid, RngStream& rng,
                         std::span<double> spots) {
  check_output(grid, spots, s0);
  const auto dg = vg_difference_of_gammas(p);
  const double dt = grid.dt();
  const double shape = dg.shape * dt;
  const double step_drift = (p.x0 + drift_rate) * dt;
  double log_s = std::log(s0);
  for (auto& s : spots) {
    const double up = sample_gamma(rng, shape, 1.0) * dg.scale_plus;
    const double down = sample_gamma(rng, shape, 1.0) * dg.scale_minus;
    log_s += step_drift + up - down;
    s = std::exp(log_s);
  }
}

void simulate_vg_path_dg(const VgMeanVarianceParams& mv, double drift_rate, double s0, const PathGrid& grid,
                         RngStream& rng, std::span<double> spots) {
  simulate_vg_path_dg(vg_from_mean_variance(mv), drift_rate, s0, grid, rng, spots);
}

void simulate_path(const RiskNeutralModel& rnm, Scheme scheme, const PathGrid& grid, RngStream& rng,
                   std::span<double> spots) {
  if (!scheme_compatible(scheme, rnm.model))
    throw DomainError("simulate_path: scheme " + std::string(to_string(scheme)) + " does not fit the model");
  const double s0 = rnm.market.s0;
  if (const auto* nig = std::get_if<NigParams>(&rnm.model)) {
    simulate_nig_path(*nig, rnm.drift_rate, s0, grid, rng, spots);
    return;
  }
  const auto& vg = std::get<VgParams>(rnm.model);
  if (scheme == Scheme::bgss)
    simulate_vg_path_bgss(vg, rnm.drift_rate, s0, grid, rng, spots);
  else
    simulate_vg_path_dg(vg, rnm.drift_rate, s0, grid, rng, spots);
}

void parallel_for_index(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

PathSet simulate_paths(const RiskNeutralModel& rnm, Scheme scheme, const PathGrid& grid, std::size_t n_paths,
                       std::uint64_t seed, unsigned workers) {
  grid.validate();
  PathSet set{grid, n_paths, std::vector<double>(n_paths * static_cast<std::size_t>(grid.n_steps))};
  const auto steps = static_cast<std::size_t>(grid.n_steps);
  parallel_for_index(n_paths, workers, [&](std::size_t i) {
    RngStream rng(seed, i);
    simulate_path(rnm, scheme, grid, rng, std::span<double>(set.spots.data() + i * steps, steps));
  });
  return set;
}

}  // namespace levy
