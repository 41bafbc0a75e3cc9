#include "levy/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "levy/errors.hpp"

namespace levy {

using nlohmann::json;

namespace {

const NigParams kTableNig{.alpha = 81.6, .beta = 3.69, .mu = -0.000123, .delta = 0.0103};

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

}  // namespace

MeasureTag parse_measure(std::string_view text) {
  const auto s = lowercase(text);
  if (s == "esscher") return MeasureTag::esscher;
  if (s == "mean_correct" || s == "mean_correcting") return MeasureTag::mean_correct;
  throw ConfigError("measure", "unknown measure '" + std::string(text) + "' (esscher | mean_correct)");
}

Scheme parse_scheme(std::string_view text) {
  const auto s = lowercase(text);
  if (s == "ig" || s == "ig_subordination") return Scheme::ig_subordination;
  if (s == "bgss") return Scheme::bgss;
  if (s == "dg") return Scheme::dg;
  throw ConfigError("scheme", "unknown scheme '" + std::string(text) + "' (ig_subordination | bgss | dg)");
}

PayoffKind parse_payoff(std::string_view text) {
  const auto s = lowercase(text);
  if (s == "european" || s == "european_call") return PayoffKind::european_call;
  if (s == "asian" || s == "asian_call" || s == "asian_arithmetic_call") return PayoffKind::asian_arithmetic_call;
  throw ConfigError("payoff", "unknown payoff '" + std::string(text) + "' (european | asian)");
}

std::string_view model_name(const Model& model) {
  return std::holds_alternative<NigParams>(model) ? "nig" : "vg";
}

void RunConfig::validate() const {
  try {
    std::visit([](const auto& p) { p.validate(); }, model);
  } catch (const DomainError& e) {
    throw ConfigError("params", e.what());
  }
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw ConfigError("market.s0", "must be > 0");
  if (maturities.empty()) throw ConfigError("market.T", "at least one maturity required");
  for (double t : maturities)
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("market.T", "maturities must be > 0");
  if (rates.empty()) throw ConfigError("market.r", "at least one rate required");
  for (double r : rates)
    if (!std::isfinite(r)) throw ConfigError("market.r", "rates must be finite");
  if (strikes.empty()) throw ConfigError("strikes", "at least one strike required");
  for (double k : strikes)
    if (!(k >= 0.0) || !std::isfinite(k)) throw ConfigError("strikes", "strikes must be >= 0");
  if (jobs.empty()) throw ConfigError("jobs", "at least one job required");
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!scheme_compatible(jobs[i].scheme, model))
      throw ConfigError("jobs[" + std::to_string(i) + "].scheme",
                        "scheme " + std::string(to_string(jobs[i].scheme)) + " is incompatible with model " +
                            std::string(model_name(model)));
  }
  if (steps < 1) throw ConfigError("s", "must be >= 1");
  if (n_paths < 1) throw ConfigError("n_paths", "must be >= 1");
}

namespace {

double get_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + key, "missing required number");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + key, "expected a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  return obj.contains(key) ? get_number(obj, key, path) : fallback;
}

std::vector<double> get_numbers(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + key, "missing required value");
  const auto& v = obj.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(path + key, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path + key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<std::string> get_strings(const json& obj, const std::string& key) {
  const auto& v = obj.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw ConfigError(key, "expected a string or an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ConfigError(key + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

Model parse_model(const json& doc) {
  if (!doc.contains("model") || !doc.at("model").is_string()) throw ConfigError("model", "expected \"nig\" or \"vg\"");
  const auto name = lowercase(doc.at("model").get<std::string>());
  if (!doc.contains("params") || !doc.at("params").is_object()) throw ConfigError("params", "expected an object");
  const auto& p = doc.at("params");
  if (name == "nig") {
    return NigParams{.alpha = get_number(p, "alpha", "params."),
                     .beta = get_number(p, "beta", "params."),
                     .mu = get_number(p, "mu", "params."),
                     .delta = get_number(p, "delta", "params.")};
  }
  if (name == "vg") {
    if (p.contains("nu")) {
      VgMeanVarianceParams mv{.beta = get_number(p, "beta", "params."),
                              .sigma = get_number(p, "sigma", "params."),
                              .nu = get_number(p, "nu", "params.")};
      try {
        mv.validate();
      } catch (const DomainError& e) {
        throw ConfigError("params", e.what());
      }
      VgParams vg = vg_from_mean_variance(mv);
      vg.x0 = get_number_or(p, "x0", "params.", 0.0);
      return vg;
    }
    return VgParams{.x0 = get_number_or(p, "x0", "params.", 0.0),
                    .lambda = get_number(p, "lambda", "params."),
                    .gamma_rate = get_number(p, "gamma", "params."),
                    .beta = get_number(p, "beta", "params."),
                    .sigma = get_number(p, "sigma", "params.")};
  }
  throw ConfigError("model", "unknown model '" + name + "' (nig | vg)");
}

std::vector<Job> parse_jobs(const json& doc, const Model& model) {
  std::vector<Job> jobs;
  if (doc.contains("jobs")) {
    const auto& arr = doc.at("jobs");
    if (!arr.is_array() || arr.empty()) throw ConfigError("jobs", "expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "jobs[" + std::to_string(i) + "]";
      const auto& j = arr[i];
      if (!j.is_object()) throw ConfigError(path, "expected an object");
      Job job{.measure = MeasureTag::esscher, .scheme = default_scheme(model), .payoff = PayoffKind::european_call};
      try {
        if (j.contains("measure")) job.measure = parse_measure(j.at("measure").get<std::string>());
        if (j.contains("scheme")) job.scheme = parse_scheme(j.at("scheme").get<std::string>());
        if (j.contains("payoff")) job.payoff = parse_payoff(j.at("payoff").get<std::string>());
      } catch (const ConfigError& e) {
        throw ConfigError(path + "." + e.field(), e.message());
      } catch (const json::exception&) {
        throw ConfigError(path, "job fields must be strings");
      }
      jobs.push_back(job);
    }
    return jobs;
  }
  std::vector<MeasureTag> measures{MeasureTag::esscher};
  std::vector<Scheme> schemes{default_scheme(model)};
  std::vector<PayoffKind> payoffs{PayoffKind::european_call};
  if (doc.contains("measure")) {
    measures.clear();
    for (const auto& s : get_strings(doc, "measure")) measures.push_back(parse_measure(s));
  }
  if (doc.contains("scheme")) {
    schemes.clear();
    for (const auto& s : get_strings(doc, "scheme")) schemes.push_back(parse_scheme(s));
  }
  if (doc.contains("payoff")) {
    payoffs.clear();
    for (const auto& s : get_strings(doc, "payoff")) payoffs.push_back(parse_payoff(s));
  }
  for (auto payoff : payoffs)
    for (auto scheme : schemes)
      for (auto measure : measures) jobs.push_back({measure, scheme, payoff});
  return jobs;
}

std::uint64_t get_count(const json& doc, const std::string& key, std::uint64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "expected a non-negative integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto signed_value = v.get<std::int64_t>();
  if (signed_value < 0) throw ConfigError(key, "expected a non-negative integer");
  return static_cast<std::uint64_t>(signed_value);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n');
    throw ConfigError("", "parse error at line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "top-level document must be an object");

  RunConfig cfg;
  cfg.model = parse_model(doc);
  if (!doc.contains("market") || !doc.at("market").is_object()) throw ConfigError("market", "expected an object");
  const auto& market = doc.at("market");
  cfg.s0 = get_number(market, "s0", "market.");
  cfg.rates = get_numbers(market, "r", "market.");
  cfg.maturities = get_numbers(market, "T", "market.");
  cfg.strikes = get_numbers(doc, "strikes", "");
  cfg.jobs = parse_jobs(doc, cfg.model);
  const auto steps = get_count(doc, "s", 16);
  if (steps > 1000000) throw ConfigError("s", "too many monitoring dates");
  cfg.steps = static_cast<int>(steps);
  cfg.n_paths = get_count(doc, "n_paths", 10000);
  cfg.seed = get_count(doc, "seed", 42);
  cfg.workers = static_cast<unsigned>(get_count(doc, "workers", 0));
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw ConfigError("output", "expected a path string");
    cfg.output = doc.at("output").get<std::string>();
  }
  cfg.validate();
  return cfg;
}

std::vector<std::string> preset_names() { return {"nig-table", "vg-table", "vg-lecuyer"}; }

RunConfig preset_config(std::string_view name) {
  RunConfig cfg;
  if (name == "nig-table") {
    cfg.model = kTableNig;
    cfg.s0 = 36.0;
    cfg.maturities = {1.0 / 12.0, 2.0 / 12.0};
    cfg.rates = {0.1, 0.05};
    cfg.strikes = {34.0, 35.0, 36.0, 37.0};
    cfg.jobs = {{MeasureTag::esscher, Scheme::ig_subordination, PayoffKind::european_call},
                {MeasureTag::esscher, Scheme::ig_subordination, PayoffKind::asian_arithmetic_call},
                {MeasureTag::mean_correct, Scheme::ig_subordination, PayoffKind::asian_arithmetic_call}};
  } else if (name == "vg-table") {
    cfg.model = VgParams{.x0 = 1e-8, .lambda = 1.0, .gamma_rate = 1.0, .beta = -0.1436, .sigma = 1.0};
    cfg.s0 = 100.0;
    cfg.maturities = {1.0};
    cfg.rates = {0.1, 0.05};
    cfg.strikes = {95.0, 101.0, 105.0};
    cfg.jobs = {{MeasureTag::esscher, Scheme::bgss, PayoffKind::asian_arithmetic_call},
                {MeasureTag::mean_correct, Scheme::bgss, PayoffKind::asian_arithmetic_call},
                {MeasureTag::esscher, Scheme::dg, PayoffKind::asian_arithmetic_call},
                {MeasureTag::mean_correct, Scheme::dg, PayoffKind::asian_arithmetic_call}};
  } else if (name == "vg-lecuyer") {
    cfg.model = vg_from_mean_variance({.beta = -0.1436, .sigma = 0.12136, .nu = 0.3});
    cfg.s0 = 100.0;
    cfg.maturities = {1.0};
    cfg.rates = {0.1};
    cfg.strikes = {101.0};
    cfg.jobs = {{MeasureTag::mean_correct, Scheme::bgss, PayoffKind::asian_arithmetic_call}};
  } else {
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
  }
  cfg.validate();
  return cfg;
}

namespace {

void dedupe_jobs(std::vector<Job>& jobs) {
  std::vector<Job> unique;
  for (const auto& j : jobs)
    if (std::find(unique.begin(), unique.end(), j) == unique.end()) unique.push_back(j);
  jobs = std::move(unique);
}

}  // namespace

void override_measure(RunConfig& cfg, MeasureTag measure) {
  for (auto& j : cfg.jobs) j.measure = measure;
  dedupe_jobs(cfg.jobs);
}

void override_scheme(RunConfig& cfg, Scheme scheme) {
  for (auto& j : cfg.jobs) j.scheme = scheme;
  dedupe_jobs(cfg.jobs);
  cfg.validate();
}

// ---------------------------------------------------------------------------

std::vector<ResultRow> run_experiment(const RunConfig& cfg, const Logger& log) {
  cfg.validate();
  auto note = [&log](const std::string& msg) {
    if (log) log(msg);
  };
  if (std::any_of(cfg.jobs.begin(), cfg.jobs.end(),
                  [](const Job& j) { return j.payoff == PayoffKind::asian_arithmetic_call; }))
    note("asian payoff: fixed-strike arithmetic average over t_1..t_s, t_0 excluded, t_s = T");

  std::vector<ResultRow> rows;
  for (double T : cfg.maturities) {
    for (double r : cfg.rates) {
      const MarketData market{.s0 = cfg.s0, .r = r, .T = T};
      const PathGrid grid{.maturity = T, .n_steps = cfg.steps};
      for (double K : cfg.strikes) {
        for (const auto& job : cfg.jobs) {
          ResultRow row;
          row.model = std::string(model_name(cfg.model));
          row.measure = std::string(to_string(job.measure));
          row.scheme = std::string(to_string(job.scheme));
          row.payoff = std::string(to_string(job.payoff));
          row.s0 = cfg.s0;
          row.strike = K;
          row.r = r;
          row.T = T;
          row.steps = cfg.steps;
          row.n_paths = cfg.n_paths;
          row.seed = cfg.seed;
          try {
            const auto rnm = risk_neutralize(cfg.model, market, job.measure);
            const McOptions options{.n_paths = cfg.n_paths, .seed = cfg.seed, .scheme = job.scheme,
                                    .workers = cfg.workers};
            const auto mc = price_mc(rnm, Payoff{job.payoff, K}, grid, options);
            row.price = mc.estimate;
            row.std_error = mc.std_error;
            row.ci_lo = mc.ci95_lo;
            row.ci_hi = mc.ci95_hi;
            if (const auto* nig = std::get_if<NigParams>(&cfg.model);
                nig && job.measure == MeasureTag::esscher && job.payoff == PayoffKind::european_call) {
              row.closed_form = european_call_nig_closed(*nig, market, K);
            }
          } catch (const MeasureNotFound& e) {
            row.status = "no_martingale_measure";
            note(row.measure + " T=" + std::to_string(T) + " r=" + std::to_string(r) + ": " + e.what());
          } catch (const NumericalError& e) {
            row.status = "numerical_error";
            note(std::string("numerical failure: ") + e.what());
          } catch (const DomainError& e) {
            row.status = "domain_error";
            note(std::string("domain error: ") + e.what());
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw DomainError("parse_csv: bad number '" + s + "'");
  return v;
}

std::optional<double> to_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return to_double(s);
}

template <class Int>
Int to_integer(const std::string& s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw DomainError("parse_csv: bad integer '" + s + "'");
  return v;
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += row.model + ',' + row.measure + ',' + row.scheme + ',' + row.payoff + ',' + fmt(row.s0) + ',' +
           fmt(row.strike) + ',' + fmt(row.r) + ',' + fmt(row.T) + ',' + std::to_string(row.steps) + ',' +
           std::to_string(row.n_paths) + ',' + std::to_string(row.seed) + ',' + fmt(row.price) + ',' +
           fmt(row.std_error) + ',' + fmt(row.ci_lo) + ',' + fmt(row.ci_hi) + ',' + fmt(row.closed_form) + ',' +
           row.status + '\n';
  }
  return out;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw DomainError("write_csv: no rows to write");
  const auto text = format_csv(rows);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw std::runtime_error("write_csv: failed writing '" + path + "'");
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw DomainError("parse_csv: unexpected header");
      header = false;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 17) throw DomainError("parse_csv: expected 17 fields");
    ResultRow row;
    row.model = f[0];
    row.measure = f[1];
    row.scheme = f[2];
    row.payoff = f[3];
    row.s0 = to_double(f[4]);
    row.strike = to_double(f[5]);
    row.r = to_double(f[6]);
    row.T = to_double(f[7]);
    row.steps = to_integer<int>(f[8]);
    row.n_paths = to_integer<std::size_t>(f[9]);
    row.seed = to_integer<std::uint64_t>(f[10]);
    row.price = to_optional(f[11]);
    row.std_error = to_optional(f[12]);
    row.ci_lo = to_optional(f[13]);
    row.ci_hi = to_optional(f[14]);
    row.closed_form = to_optional(f[15]);
    row.status = f[16];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace levy
