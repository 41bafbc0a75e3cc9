#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include "levy/errors.hpp"
#include "levy/pricing.hpp"
#include "stats.hpp"

using namespace levy;

namespace {

const NigParams kNig{.alpha = 81.6, .beta = 3.69, .mu = -0.000123, .delta = 0.0103};
const MarketData kMarket{.s0 = 36.0, .r = 0.1, .T = 1.0 / 12.0};
const PathGrid kGrid{.maturity = 1.0 / 12.0, .n_steps = 16};

// P(X_t > x) by double-exponential quadrature from an independent library,
// split at the location mu t so the narrow peak sits at an endpoint.
double tail_oracle(const NigParams& p, double t, double x) {
  const double c = p.mu * t;
  const auto f = [&](double u) { return nig_density(p, u, t); };
  double core = 0.0;
  if (x < c) core = boost::math::quadrature::tanh_sinh<double>().integrate(f, x, c, 1e-13);
  const double start = std::max(x, c);
  boost::math::quadrature::exp_sinh<double> tail;
  return core + tail.integrate([&](double u) { return f(start + u); }, 1e-13);
}

std::vector<double> samples(const RiskNeutralModel& rnm, const Payoff& payoff, std::size_t n, std::uint64_t seed) {
  return discounted_payoff_samples(rnm, [payoff](std::span<const double> path) { return payoff(path); }, kGrid,
                                   {.n_paths = n, .seed = seed, .scheme = std::nullopt, .workers = 0});
}

}  // namespace

TEST_SUITE("pricing") {
  TEST_CASE("payoff examples") {
    const std::vector<double> up{40.0}, down{30.0};
    CHECK(payoff_european_call(up, 34.0) == 6.0);
    CHECK(payoff_european_call(down, 34.0) == 0.0);
    CHECK(payoff_european_call(up, 0.0) == 40.0);
    const std::vector<double> flat(16, 36.0);
    CHECK(payoff_asian_call(flat, 34.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(payoff_asian_call(flat, 40.0) == 0.0);
    const std::vector<double> two{30.0, 42.0};
    CHECK(payoff_asian_call(two, 34.0) == 2.0);
    CHECK(Payoff{PayoffKind::asian_arithmetic_call, 34.0}(two) == 2.0);
    CHECK(Payoff{PayoffKind::european_call, 34.0}(two) == 8.0);
    CHECK_THROWS_AS(payoff_european_call({}, 1.0), DomainError);
    CHECK_THROWS_AS((Payoff{PayoffKind::european_call, -1.0}.validate()), DomainError);
  }

  TEST_CASE("summarize") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const auto r = summarize(xs, 9);
    CHECK(r.estimate == 2.5);
    CHECK(r.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-15));
    CHECK(r.ci95_lo == r.estimate - 1.96 * r.std_error);
    CHECK(r.ci95_hi == r.estimate + 1.96 * r.std_error);
    CHECK(r.seed == 9);
    CHECK(r.n_paths == 4);
    const std::vector<double> single{3.0};
    CHECK(summarize(single).std_error == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(summarize({}), DomainError);
  }

  TEST_CASE("constant payoff prices the discount factor exactly") {
    const auto rnm = risk_neutralize(kNig, kMarket, MeasureTag::mean_correct);
    const auto r = price_mc(rnm, PathFunctional([](std::span<const double>) { return 1.0; }), kGrid,
                            {.n_paths = 1000, .seed = 1, .scheme = std::nullopt, .workers = 0});
    CHECK(r.estimate == doctest::Approx(std::exp(-0.1 / 12.0)).epsilon(1e-15));
    CHECK(r.std_error == doctest::Approx(0.0));
  }

  TEST_CASE("zero-strike call is the discounted forward") {
    const auto nig = risk_neutralize(kNig, kMarket, MeasureTag::mean_correct);
    const auto a = price_mc(nig, Payoff{PayoffKind::european_call, 0.0}, kGrid, {.n_paths = 100000});
    CHECK(std::abs(a.estimate - 36.0) < 3.0 * a.std_error);
    const VgMeanVarianceParams mv{.beta = -0.1436, .sigma = 0.12136, .nu = 0.3};
    const MarketData m{.s0 = 100.0, .r = 0.1, .T = 1.0};
    const auto vg = risk_neutralize(mv, m, MeasureTag::mean_correct);
    const auto b = price_mc(vg, Payoff{PayoffKind::european_call, 0.0}, {.maturity = 1.0, .n_steps = 16},
                            {.n_paths = 100000});
    CHECK(std::abs(b.estimate - 100.0) < 3.0 * b.std_error);
  }

  TEST_CASE("European call under the Esscher measure is consistent with the table's Monte Carlo value") {
    const auto rnm = risk_neutralize(kNig, kMarket, MeasureTag::esscher);
    const auto r = price_mc(rnm, Payoff{PayoffKind::european_call, 34.0}, kGrid, {.n_paths = 10000});
    // The table quotes 2.227 +- 0.07.
    CHECK(r.ci95_hi >= 2.227 - 0.07);
    CHECK(r.ci95_lo <= 2.227 + 0.07);
  }

  TEST_CASE("Monte Carlo prices are deterministic and worker-independent") {
    const auto rnm = risk_neutralize(kNig, kMarket, MeasureTag::esscher);
    const Payoff asian{PayoffKind::asian_arithmetic_call, 35.0};
    const auto a = price_mc(rnm, asian, kGrid, {.n_paths = 5000, .seed = 3, .scheme = std::nullopt, .workers = 1});
    const auto b = price_mc(rnm, asian, kGrid, {.n_paths = 5000, .seed = 3, .scheme = std::nullopt, .workers = 6});
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    const auto c = price_mc(rnm, asian, kGrid, {.n_paths = 5000, .seed = 4, .scheme = std::nullopt, .workers = 1});
    CHECK(a.estimate != c.estimate);
  }

  TEST_CASE("price is non-increasing in strike under common random numbers") {
    for (auto tag : {MeasureTag::esscher, MeasureTag::mean_correct}) {
      const auto rnm = risk_neutralize(kNig, kMarket, tag);
      for (auto kind : {PayoffKind::european_call, PayoffKind::asian_arithmetic_call}) {
        double previous = std::numeric_limits<double>::infinity();
        for (double k : {30.0, 34.0, 35.0, 36.0, 37.0, 40.0}) {
          const double p = price_mc(rnm, Payoff{kind, k}, kGrid, {.n_paths = 20000, .seed = 5}).estimate;
          CHECK(p <= previous);
          previous = p;
        }
      }
    }
  }

  TEST_CASE("European call respects the forward lower bound") {
    for (auto tag : {MeasureTag::esscher, MeasureTag::mean_correct}) {
      const auto rnm = risk_neutralize(kNig, kMarket, tag);
      for (double k : {30.0, 34.0, 36.0, 38.0}) {
        const auto r = price_mc(rnm, Payoff{PayoffKind::european_call, k}, kGrid, {.n_paths = 20000, .seed = 6});
        CHECK(r.estimate >= std::max(36.0 - k * std::exp(-0.1 / 12.0), 0.0) - 3.0 * r.std_error);
      }
    }
  }

  TEST_CASE("Asian call does not exceed the European call") {
    const auto rnm = risk_neutralize(kNig, kMarket, MeasureTag::mean_correct);
    for (double k : {34.0, 36.0}) {
      const auto eu = samples(rnm, {PayoffKind::european_call, k}, 50000, 7);
      const auto as = samples(rnm, {PayoffKind::asian_arithmetic_call, k}, 50000, 7);
      std::vector<double> diff(eu.size());
      for (std::size_t i = 0; i < eu.size(); ++i) diff[i] = as[i] - eu[i];
      const auto m = levy::test::moments(diff);
      CHECK(m.mean <= 3.0 * m.se);
    }
  }

  TEST_CASE("n and 2n path estimates agree") {
    const auto rnm = risk_neutralize(kNig, kMarket, MeasureTag::mean_correct);
    const Payoff asian{PayoffKind::asian_arithmetic_call, 35.0};
    const auto a = price_mc(rnm, asian, kGrid, {.n_paths = 20000, .seed = 8});
    const auto b = price_mc(rnm, asian, kGrid, {.n_paths = 40000, .seed = 9});
    CHECK(std::abs(a.estimate - b.estimate) < 3.0 * std::hypot(a.std_error, b.std_error));
  }

  TEST_CASE("price_mc rejects inconsistent inputs") {
    const auto rnm = risk_neutralize(kNig, kMarket, MeasureTag::mean_correct);
    const Payoff call{PayoffKind::european_call, 35.0};
    CHECK_THROWS_AS(price_mc(rnm, call, {.maturity = 1.0, .n_steps = 16}, {}), DomainError);
    CHECK_THROWS_AS(price_mc(rnm, call, kGrid, {.n_paths = 0}), DomainError);
    CHECK_THROWS_AS(price_mc(rnm, call, kGrid, {.n_paths = 10, .seed = 1, .scheme = Scheme::bgss, .workers = 0}),
                    DomainError);
  }

  TEST_CASE("nig_tail_probability") {
    const NigParams sym{.alpha = 30.0, .beta = 0.0, .mu = 0.0, .delta = 0.2};
    CHECK(nig_tail_probability(sym, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(nig_tail_probability(kNig, 1.0, -std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(nig_tail_probability(kNig, 1.0, -5.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nig_tail_probability(kNig, 1.0, 5.0) < 1e-12);
    for (double x : {-0.03, 0.0, 0.01}) {
      CHECK(nig_tail_probability(sym, 0.5, x) + nig_tail_probability(sym, 0.5, -x) ==
            doctest::Approx(1.0).epsilon(1e-10));
    }
    const auto sol = nig_esscher(kNig, kMarket);
    for (double beta_shift : {0.0, 1.0}) {
      NigParams p = sol.risk_neutral_params;
      p.beta += beta_shift;
      for (double x : {std::log(34.0 / 36.0), std::log(35.0 / 36.0), 0.0, std::log(37.0 / 36.0), 0.2}) {
        CAPTURE(beta_shift);
        CAPTURE(x);
        CHECK(std::abs(nig_tail_probability(p, 1.0 / 12.0, x) - tail_oracle(p, 1.0 / 12.0, x)) < 1e-8);
      }
    }
    for (double x : {-0.02, 0.0, 0.004, 0.03}) {
      CHECK(std::abs(nig_tail_probability(kNig, 1.0 / 12.0, x) - tail_oracle(kNig, 1.0 / 12.0, x)) < 1e-8);
    }
    const NigParams left{.alpha = 40.0, .beta = -25.0, .mu = 0.01, .delta = 0.3};
    for (double x : {-0.5, 0.0, 0.2}) CHECK(std::abs(nig_tail_probability(left, 1.0, x) - tail_oracle(left, 1.0, x)) < 1e-8);
  }

  TEST_CASE("closed-form European call") {
    CHECK(european_call_nig_closed(kNig, kMarket, 34.0) == doctest::Approx(2.2822).epsilon(0.02 / 2.2822));
    CHECK(european_call_nig_closed(kNig, kMarket, 35.0) == doctest::Approx(1.2918).epsilon(0.02 / 1.2918));
    CHECK(european_call_nig_closed(kNig, kMarket, 0.0) == 36.0);
    double previous = std::numeric_limits<double>::infinity();
    for (double k = 30.0; k <= 42.0; k += 0.5) {
      const double c = european_call_nig_closed(kNig, kMarket, k);
      CHECK(c < previous);
      CHECK(c >= std::max(36.0 - k * std::exp(-0.1 / 12.0), 0.0) - 1e-8);
      previous = c;
    }
    CHECK_THROWS_AS(european_call_nig_closed(kNig, {.s0 = 36.0, .r = 0.3, .T = 1.0}, 34.0), MeasureNotFound);
  }
}
