#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levy/measures.hpp"
#include "levy/pricing.hpp"
#include "levy/sampling.hpp"

namespace levy {

/// One priced column of a table: which measure, sampler and payoff to use.
struct Job {
  MeasureTag measure = MeasureTag::esscher;
  Scheme scheme = Scheme::ig_subordination;
  PayoffKind payoff = PayoffKind::european_call;

  bool operator==(const Job&) const = default;
};

/// A fully validated experiment. Rows are produced for every
/// (maturity, rate, strike, job) combination in that nesting order.
struct RunConfig {
  Model model;
  double s0 = 100.0;
  std::vector<double> maturities;
  std::vector<double> rates;
  std::vector<double> strikes;
  std::vector<Job> jobs;
  int steps = 16;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 42;
  unsigned workers = 0;
  std::optional<std::string> output;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

std::string_view model_name(const Model& model);

/// Parses a JSON run configuration. Throws ConfigError with the line number
/// for malformed documents and the field path for invalid values.
///
///   {
///     "model": "nig" | "vg",
///     "params": {"alpha", "beta", "mu", "delta"}              (nig)
///             | {"x0", "lambda", "gamma", "beta", "sigma"}     (vg)
///             | {"beta", "sigma", "nu"[, "x0"]}                (vg, unit-mean clock)
///     "market": {"s0": number, "r": number | [..], "T": number | [..]},
///     "strikes": number | [..],
///     "measure": "esscher" | "mean_correct" | [..],      default "esscher"
///     "scheme": "ig_subordination" | "bgss" | "dg" | [..], default per model
///     "payoff": "european" | "asian" | [..],             default "european"
///     "jobs": [{"measure", "scheme", "payoff"}, ..],      replaces the three above
///     "s": 16, "n_paths": 10000, "seed": 42, "workers": 0, "output": "file.csv"
///   }
RunConfig parse_config(std::string_view text);

/// Built-in experiments: "nig-table", "vg-table", "vg-lecuyer".
RunConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// Replaces the measure (or scheme) of every job, then drops duplicate jobs.
void override_measure(RunConfig& cfg, MeasureTag measure);
void override_scheme(RunConfig& cfg, Scheme scheme);

MeasureTag parse_measure(std::string_view text);
Scheme parse_scheme(std::string_view text);
PayoffKind parse_payoff(std::string_view text);

inline constexpr std::string_view kStatusOk = "ok";

struct ResultRow {
  std::string model;
  std::string measure;
  std::string scheme;
  std::string payoff;
  double s0 = 0.0;
  double strike = 0.0;
  double r = 0.0;
  double T = 0.0;
  int steps = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::optional<double> price;
  std::optional<double> std_error;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::optional<double> closed_form;
  std::string status = std::string(kStatusOk);

  bool operator==(const ResultRow&) const = default;
};

using Logger = std::function<void(std::string_view)>;

/// Prices every row of the config. Rows whose measure does not exist are kept
/// with a non-ok status.
std::vector<ResultRow> run_experiment(const RunConfig& cfg, const Logger& log = {});

inline constexpr std::string_view kCsvHeader =
    "model,measure,scheme,payoff,S0,K,r,T,s,n_paths,seed,price,std_error,ci_lo,ci_hi,closed_form,status";

/// CSV text with kCsvHeader; doubles in shortest round-trip form, missing values empty.
std::string format_csv(const std::vector<ResultRow>& rows);
/// Throws DomainError for empty rows (no file is created) and std::runtime_error on I/O failure.
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(std::string_view text);

}  // namespace levy
