#include "pdrich/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdrich/asymptotics.hpp"
#include "pdrich/conditional.hpp"
#include "pdrich/errors.hpp"
#include "pdrich/ingest.hpp"
#include "pdrich/json_writer.hpp"
#include "pdrich/oracle.hpp"
#include "pdrich/pd_prior.hpp"
#include "pdrich/simulate.hpp"
#include "pdrich/stats.hpp"

namespace pdrich {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::optional<double> alpha;
  std::optional<double> theta;
  std::optional<long> n;
  std::optional<long> k;
  std::optional<long> m;
  std::vector<int> r;
  double level = 0.95;
  std::string method = "auto";
  std::uint64_t seed = 20240601;
  long runs = 10000;
  long samples = 200000;
  long exact_cap = 10000;
  unsigned threads = 1;
  std::string format = "json";
  bool no_timestamp = false;
  std::string input;
  std::string input_format = "csv";
  std::string of = "km";
  std::string decomposition = "product";
  int grid_points = 41;
  std::optional<double> z_max;
  double significance = 0.001;
  bool wrong_null = false;
};

// Shared report skeleton; subcommands fill summary and results.
struct Report {
  Json inputs = Json::object();
  std::string method = "exact";
  Json tolerances = Json::object();
  Json summary = Json::object();
  Json results = Json::array();
  Json warnings = Json::array();
  bool uses_seed = false;
};

struct Context {
  const RunConfig& cfg;
  std::optional<AbundanceDataset> data;
  Report rep;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

long resolve_n(const Context& ctx) {
  if (ctx.data) return ctx.data->partition().n();
  require(ctx.cfg.n.has_value(), "--n or --input is required");
  return *ctx.cfg.n;
}

// (n, k) of the pilot sample, from the dataset or from flags.
std::pair<long, long> resolve_pilot(const Context& ctx) {
  if (ctx.data) {
    const auto p = ctx.data->partition();
    return {p.n(), p.k()};
  }
  require(ctx.cfg.n.has_value() && ctx.cfg.k.has_value(), "--n and --k, or --input, are required");
  require(*ctx.cfg.k >= 1 && *ctx.cfg.k <= *ctx.cfg.n, "need 1 <= k <= n");
  return {*ctx.cfg.n, *ctx.cfg.k};
}

// Block sizes for a pilot; with flags only, any partition with the same
// (n, k) gives the same continuation law.
std::vector<long> pilot_counts(const Context& ctx) {
  if (ctx.data) return ctx.data->partition().counts();
  const auto [n, k] = resolve_pilot(ctx);
  std::vector<long> counts(static_cast<std::size_t>(k), 1);
  counts[0] = n - k + 1;
  return counts;
}

long require_m(const Context& ctx) {
  require(ctx.cfg.m.has_value(), "--m is required");
  require(*ctx.cfg.m >= 0, "--m must be non-negative");
  return *ctx.cfg.m;
}

// Flags win; missing parameters are filled by maximum likelihood on --input.
PDParams resolve_params(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::string source = "flags";
  double alpha = cfg.alpha.value_or(0.0);
  double theta = cfg.theta.value_or(0.0);
  if (!cfg.alpha || !cfg.theta) {
    require(ctx.data.has_value(), "--alpha and --theta are required without --input");
    const FitResult fit = fit_params(ctx.data->partition());
    if (!cfg.alpha) alpha = fit.params.alpha();
    if (!cfg.theta) theta = fit.params.theta();
    source = (cfg.alpha || cfg.theta) ? "flags+fit" : "fit";
    if (fit.on_boundary) ctx.rep.warnings.push_back("fitted parameters lie on the search boundary");
  }
  PDParams params(alpha, theta);
  ctx.rep.inputs["alpha"] = alpha;
  ctx.rep.inputs["theta"] = theta;
  ctx.rep.inputs["params_source"] = source;
  return params;
}

Json pmf_rows(const Pmf& pmf, const char* key) {
  Json rows = Json::array();
  for (long x = pmf.support_min(); x <= pmf.support_max(); ++x) {
    const LogValue lp = pmf.log_prob(x);
    Json row = Json::object();
    row[key] = x;
    row["prob"] = lp.value();
    row["log_prob"] = lp.log();
    rows.push_back(row);
  }
  return rows;
}

void guard_cap(const RunConfig& cfg, long m) {
  if (m > cfg.exact_cap)
    throw CapExceeded("m = " + std::to_string(m) + " exceeds the exact cap " +
                      std::to_string(cfg.exact_cap) + "; raise --exact-cap");
}

std::vector<int> r_list(const RunConfig& cfg, std::vector<int> fallback) {
  std::vector<int> r = cfg.r.empty() ? std::move(fallback) : cfg.r;
  for (int v : r) require(v >= 0, "--r values must be non-negative");
  return r;
}

void cmd_fit(Context& ctx) {
  require(ctx.data.has_value(), "fit needs --input");
  const auto part = ctx.data->partition();
  const FitResult fit = fit_params(part);
  auto& s = ctx.rep.summary;
  s["alpha"] = fit.params.alpha();
  s["theta"] = fit.params.theta();
  s["log_likelihood"] = fit.log_likelihood;
  s["on_boundary"] = fit.on_boundary;
  s["boundary_edges"] = fit.boundary_edges;
  s["evaluations"] = fit.evaluations;
  ctx.rep.method = "mle";
  ctx.rep.tolerances["step"] = 1e-8;
  ctx.rep.results.push_back(Json{{"alpha", fit.params.alpha()},
                                 {"theta", fit.params.theta()},
                                 {"log_likelihood", fit.log_likelihood},
                                 {"n", part.n()},
                                 {"k", part.k()}});
  if (fit.on_boundary) ctx.rep.warnings.push_back("fitted parameters lie on the search boundary");
}

void cmd_kn(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const long n = resolve_n(ctx);
  ctx.rep.inputs["n"] = n;
  const Pmf pmf = kn_pmf(params, n);
  ctx.rep.results = pmf_rows(pmf, "k");
  ctx.rep.summary["total"] = pmf.total();
  ctx.rep.summary["mean"] = kn_mean(params, n);
  Json moments = Json::array();
  for (int r : r_list(ctx.cfg, {1, 2}))
    moments.push_back(Json{{"r", r}, {"moment", kn_moment(params, n, r)}});
  ctx.rep.summary["moments"] = moments;
  ctx.rep.tolerances["total"] = 1e-12;
}

IntervalMethod pick_method(Context& ctx, long m) {
  const auto& method = ctx.cfg.method;
  if (method == "exact") return IntervalMethod::Exact;
  if (method == "asymptotic") return IntervalMethod::Asymptotic;
  if (m <= ctx.cfg.exact_cap) return IntervalMethod::Exact;
  ctx.rep.warnings.push_back("m exceeds the exact cap " + std::to_string(ctx.cfg.exact_cap) +
                             "; switched to the asymptotic method");
  return IntervalMethod::Asymptotic;
}

void cmd_predict(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const auto [n, k] = resolve_pilot(ctx);
  const long m = require_m(ctx);
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  ctx.rep.inputs["m"] = m;
  ctx.rep.inputs["level"] = ctx.cfg.level;
  ctx.rep.inputs["method_requested"] = ctx.cfg.method;
  ctx.rep.inputs["exact_cap"] = ctx.cfg.exact_cap;
  const PredictionQuery q(params, n, k, m);
  const IntervalMethod method = pick_method(ctx, m);
  IntervalOptions opts;
  opts.exact_cap = ctx.cfg.exact_cap;
  opts.samples = ctx.cfg.samples;
  opts.seed = ctx.cfg.seed;
  opts.threads = ctx.cfg.threads;
  const CredibleInterval ci = credible_interval(q, ctx.cfg.level, method, opts);
  const double mean = km_mean(q);
  ctx.rep.method = ci.method == IntervalMethod::Exact ? "exact" : "asymptotic";
  if (ci.method == IntervalMethod::Asymptotic) {
    ctx.rep.uses_seed = true;
    ctx.rep.inputs["samples"] = ctx.cfg.samples;
  }
  if (!ci.unimodal) ctx.rep.warnings.push_back("pmf is not unimodal; interval is the hull of the highest-mass set");
  auto& s = ctx.rep.summary;
  s["mean"] = mean;
  s["interval"] = Json::array({ci.lo, ci.hi});
  s["coverage"] = ci.coverage;
  s["unimodal"] = ci.unimodal;
  if (m == 1) s["new_species_prob"] = new_species_prob(q);
  ctx.rep.tolerances["coverage"] = ci.method == IntervalMethod::Exact ? 1e-12 : 0.0;
  ctx.rep.results.push_back(Json{{"m", m},
                                 {"mean", mean},
                                 {"lo", ci.lo},
                                 {"hi", ci.hi},
                                 {"coverage", ci.coverage},
                                 {"level", ctx.cfg.level}});
}

void cmd_pmf(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const auto [n, k] = resolve_pilot(ctx);
  const long m = require_m(ctx);
  require(ctx.cfg.of == "km" || ctx.cfg.of == "sm", "--of must be km or sm");
  guard_cap(ctx.cfg, m);
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  ctx.rep.inputs["m"] = m;
  ctx.rep.inputs["of"] = ctx.cfg.of;
  const PredictionQuery q(params, n, k, m);
  const Pmf pmf = ctx.cfg.of == "km" ? km_pmf(q) : sm_pmf(q);
  ctx.rep.results = pmf_rows(pmf, "x");
  ctx.rep.summary["total"] = pmf.total();
  ctx.rep.summary["mean"] = pmf.mean();
  ctx.rep.tolerances["total"] = 1e-12;
}

void cmd_moments(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const auto [n, k] = resolve_pilot(ctx);
  const long m = require_m(ctx);
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  ctx.rep.inputs["m"] = m;
  const PredictionQuery q(params, n, k, m);
  for (int r : r_list(ctx.cfg, {1, 2, 3, 4}))
    ctx.rep.results.push_back(Json{{"r", r}, {"moment", km_moment(q, r)}});
  ctx.rep.summary["mean"] = km_mean(q);
  ctx.rep.tolerances["relative"] = 1e-9;
}

void cmd_asym(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const auto [n, k] = resolve_pilot(ctx);
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  const LimitLaw law(params, n, k);
  std::optional<long> m = ctx.cfg.m;
  if (m) {
    require(*m >= 1, "--m must be positive for asymptotic moments");
    ctx.rep.inputs["m"] = *m;
  }
  Json moments = Json::array();
  for (int r : r_list(ctx.cfg, {1, 2})) {
    Json row{{"r", r}, {"limit_moment", limit_moment(law, r)}};
    if (m) {
      row["km_moment_asymptotic"] = km_moment_asymptotic(law, r, *m);
      row["km_moment"] = km_moment(PredictionQuery(params, n, k, *m), r);
    }
    moments.push_back(row);
  }
  ctx.rep.summary["moments"] = moments;

  require(ctx.cfg.grid_points >= 1, "--grid-points must be positive");
  double z_max = 0.0;
  if (ctx.cfg.z_max) {
    z_max = *ctx.cfg.z_max;
  } else {
    const double mu = limit_moment(law, 1);
    const double sd = std::sqrt(std::max(0.0, limit_moment(law, 2) - mu * mu));
    z_max = mu + 6.0 * sd;
  }
  require(z_max > 0.0, "--z-max must be positive");
  ctx.rep.inputs["grid_points"] = ctx.cfg.grid_points;
  ctx.rep.inputs["z_max"] = z_max;
  for (int i = 1; i <= ctx.cfg.grid_points; ++i) {
    const double z = z_max * i / ctx.cfg.grid_points;
    ctx.rep.results.push_back(Json{{"z", z}, {"density", limit_density(law, z)}});
  }
  ctx.rep.method = "asymptotic";
  ctx.rep.tolerances["quadrature_relative"] = 1e-7;
}

void cmd_limit_sample(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const auto [n, k] = resolve_pilot(ctx);
  const auto& dec = ctx.cfg.decomposition;
  require(dec == "product" || dec == "alternative", "--decomposition must be product or alternative");
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  ctx.rep.inputs["runs"] = ctx.cfg.runs;
  ctx.rep.inputs["decomposition"] = dec;
  const LimitLaw law(params, n, k);
  SamplerOptions opts;
  opts.decomposition = dec == "product" ? Decomposition::Product : Decomposition::Alternative;
  opts.threads = ctx.cfg.threads;
  const auto draws = sample_limit(law, ctx.cfg.runs, ctx.cfg.seed, opts);
  long double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    sum += draws[i];
    sum2 += static_cast<long double>(draws[i]) * draws[i];
    ctx.rep.results.push_back(Json{{"index", static_cast<long>(i)}, {"z", draws[i]}});
  }
  const double count = static_cast<double>(draws.size());
  ctx.rep.summary["mean"] = static_cast<double>(sum / count);
  ctx.rep.summary["second_moment"] = static_cast<double>(sum2 / count);
  ctx.rep.summary["limit_moment_1"] = limit_moment(law, 1);
  ctx.rep.summary["limit_moment_2"] = limit_moment(law, 2);
  ctx.rep.method = "monte_carlo";
  ctx.rep.uses_seed = true;
}

Json histogram_rows(const std::vector<long>& values, const char* key, const Pmf* exact) {
  std::map<long, long> hist;
  for (long v : values) ++hist[v];
  const double total = static_cast<double>(values.size());
  Json rows = Json::array();
  for (const auto& [v, c] : hist) {
    Json row{{key, v}, {"count", c}, {"freq", c / total}};
    if (exact) row["exact_prob"] = exact->prob(v);
    rows.push_back(row);
  }
  return rows;
}

void cmd_simulate(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  ctx.rep.inputs["runs"] = ctx.cfg.runs;
  ctx.rep.method = "monte_carlo";
  ctx.rep.uses_seed = true;
  auto& s = ctx.rep.summary;
  if (!ctx.cfg.m) {
    const long n = resolve_n(ctx);
    ctx.rep.inputs["n"] = n;
    const auto draws = kn_draws(params, n, ctx.cfg.runs, ctx.cfg.seed, ctx.cfg.threads);
    const Pmf exact = kn_pmf(params, n);
    ctx.rep.results = histogram_rows(draws, "k", &exact);
    s["mean"] = std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(draws.size());
    s["standard_error"] = standard_error(draws);
    s["exact_mean"] = kn_mean(params, n);
    return;
  }
  const auto [n, k] = resolve_pilot(ctx);
  const long m = require_m(ctx);
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  ctx.rep.inputs["m"] = m;
  const SeatState pilot(pilot_counts(ctx));
  const auto draws = continuation_draws(pilot, params, m, ctx.cfg.runs, ctx.cfg.seed, ctx.cfg.threads);
  const PredictionQuery q(params, n, k, m);
  std::optional<Pmf> exact;
  if (m <= ctx.cfg.exact_cap) exact = km_pmf(q);
  ctx.rep.results = histogram_rows(draws.k_new, "k_new", exact ? &*exact : nullptr);
  const double runs = static_cast<double>(draws.k_new.size());
  s["mean_k_new"] = std::accumulate(draws.k_new.begin(), draws.k_new.end(), 0.0) / runs;
  s["standard_error_k_new"] = standard_error(draws.k_new);
  s["exact_mean_k_new"] = km_mean(q);
  s["mean_s_new"] = std::accumulate(draws.s_new.begin(), draws.s_new.end(), 0.0) / runs;
  s["exact_mean_s_new"] = sm_pmf(q).mean();
}

void cmd_deletion_check(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const auto [n, k] = resolve_pilot(ctx);
  const long m = require_m(ctx);
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  ctx.rep.inputs["m"] = m;
  ctx.rep.inputs["runs"] = ctx.cfg.runs;
  ctx.rep.inputs["wrong_null"] = ctx.cfg.wrong_null;
  DeletionOptions opts;
  opts.significance = ctx.cfg.significance;
  opts.wrong_null = ctx.cfg.wrong_null;
  opts.threads = ctx.cfg.threads;
  const DeletionReport dr = deletion_check(params, n, k, m, ctx.cfg.runs, ctx.cfg.seed, opts);
  for (const auto& st : dr.strata)
    ctx.rep.results.push_back(Json{{"s", st.s},
                                   {"count", st.count},
                                   {"tested", st.tested},
                                   {"statistic", st.statistic},
                                   {"dof", st.dof},
                                   {"p_value", st.p_value},
                                   {"rejected", st.rejected}});
  auto& s = ctx.rep.summary;
  s["any_rejected"] = dr.any_rejected;
  s["conditioned_runs"] = dr.conditioned_runs;
  s["attempts"] = dr.attempts;
  s["null_theta"] = dr.null_theta;
  ctx.rep.tolerances["significance"] = dr.significance;
  ctx.rep.method = "monte_carlo";
  ctx.rep.uses_seed = true;
}

// Best rational approximation with a bounded denominator (continued fractions).
oracle::Rational to_rational(double x, long max_den = 1000) {
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(v);
    const long ai = static_cast<long>(a);
    const long q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    const long p2 = ai * p1 + p0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::fabs(v - a) < 1e-12) break;
    v = 1.0 / (v - a);
  }
  oracle::Rational r(p1, q1);
  r.canonicalize();
  return r;
}

void cmd_oracle(Context& ctx) {
  const PDParams params = resolve_params(ctx);
  const oracle::RationalParams rp(to_rational(params.alpha()), to_rational(params.theta()));
  ctx.rep.inputs["alpha_exact"] = rp.alpha().get_str();
  ctx.rep.inputs["theta_exact"] = rp.theta().get_str();
  if (std::fabs(rp.alpha_value() - params.alpha()) > 1e-12 ||
      std::fabs(rp.theta_value() - params.theta()) > 1e-12)
    ctx.rep.warnings.push_back("parameters were rounded to nearby rationals");
  ctx.rep.method = "exact_rational";
  if (!ctx.cfg.m) {
    const long n = resolve_n(ctx);
    require(n >= 1 && n <= oracle::kMaxSize, "oracle needs 1 <= n <= 12");
    ctx.rep.inputs["n"] = n;
    const auto pmf = oracle::exact_kn_pmf(rp, static_cast<int>(n));
    for (std::size_t kk = 1; kk < pmf.size(); ++kk)
      ctx.rep.results.push_back(
          Json{{"k", static_cast<long>(kk)}, {"exact", pmf[kk].get_str()}, {"prob", pmf[kk].get_d()}});
    return;
  }
  const auto counts = pilot_counts(ctx);
  const auto [n, k] = resolve_pilot(ctx);
  const long m = require_m(ctx);
  require(n + m <= oracle::kMaxSize, "oracle needs n + m <= 12");
  ctx.rep.inputs["n"] = n;
  ctx.rep.inputs["k"] = k;
  ctx.rep.inputs["m"] = m;
  const auto ex = oracle::exact_km_pmf(rp, counts, static_cast<int>(m));
  for (long x = 0; x <= m; ++x)
    ctx.rep.results.push_back(Json{{"x", x},
                                   {"km_exact", ex.km[x].get_str()},
                                   {"km", ex.km[x].get_d()},
                                   {"sm_exact", ex.sm[x].get_str()},
                                   {"sm", ex.sm[x].get_d()}});
}

std::string format_cell(const Json& v) {
  switch (v.type()) {
    case Json::value_t::string:
      return v.get<std::string>();
    case Json::value_t::null:
      return "";
    case Json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      return buf;
    }
    default:
      return v.dump();
  }
}

void write_tsv(std::ostream& out, const Json& rows) {
  if (rows.empty()) return;
  std::vector<std::string> cols;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it) cols.push_back(it.key());
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      out << (i ? "\t" : "") << (row.contains(cols[i]) ? format_cell(row[cols[i]]) : "");
    out << "\n";
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-parameter Poisson-Dirichlet species sampling toolkit", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  if (const char* env = std::getenv("PDRICH_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << kToolName << ": error: PDRICH_SEED is not an unsigned integer\n";
      return 2;
    }
  }

  app.add_option("--alpha", cfg.alpha, "discount parameter in (0,1)");
  app.add_option("--theta", cfg.theta, "concentration parameter, > -alpha");
  app.add_option("--n", cfg.n, "pilot sample size (without --input)");
  app.add_option("--k", cfg.k, "distinct species in the pilot (without --input)");
  app.add_option("--m", cfg.m, "additional sample size");
  app.add_option("--r", cfg.r, "moment orders")->delimiter(',');
  app.add_option("--level", cfg.level, "credible level")->check(CLI::Range(0.0, 1.0));
  app.add_option("--method", cfg.method)->check(CLI::IsMember({"exact", "asymptotic", "auto"}));
  app.add_option("--seed", cfg.seed, "RNG seed (default from PDRICH_SEED)");
  app.add_option("--runs", cfg.runs, "Monte Carlo runs or draws")->check(CLI::PositiveNumber);
  app.add_option("--samples", cfg.samples, "limit-law draws for asymptotic intervals")
      ->check(CLI::PositiveNumber);
  app.add_option("--exact-cap", cfg.exact_cap, "largest m handled exactly")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format)->check(CLI::IsMember({"json", "tsv"}));
  app.add_flag("--no-timestamp", cfg.no_timestamp, "omit the timestamp field");
  app.add_option("--input", cfg.input, "abundance data file");
  app.add_option("--input-format", cfg.input_format)->check(CLI::IsMember({"csv", "counts"}));
  app.add_option("--of", cfg.of, "pmf target: km or sm")->check(CLI::IsMember({"km", "sm"}));
  app.add_option("--decomposition", cfg.decomposition)
      ->check(CLI::IsMember({"product", "alternative"}));
  app.add_option("--grid-points", cfg.grid_points, "density grid size");
  app.add_option("--z-max", cfg.z_max, "density grid upper end");
  app.add_option("--significance", cfg.significance)->check(CLI::Range(0.0, 1.0));
  app.add_flag("--wrong-null", cfg.wrong_null, "test against the unshifted theta");

  const std::vector<std::pair<std::string, void (*)(Context&)>> commands = {
      {"fit", cmd_fit},
      {"kn", cmd_kn},
      {"predict", cmd_predict},
      {"pmf", cmd_pmf},
      {"moments", cmd_moments},
      {"asym", cmd_asym},
      {"limit-sample", cmd_limit_sample},
      {"simulate", cmd_simulate},
      {"deletion-check", cmd_deletion_check},
      {"oracle", cmd_oracle},
  };
  const std::map<std::string, std::string> help = {
      {"fit", "maximum-likelihood (alpha, theta) from abundance data"},
      {"kn", "prior law of the number of species in n draws"},
      {"predict", "expected new species in m more draws with a credible interval"},
      {"pmf", "exact law of new species (km) or of draws landing in them (sm)"},
      {"moments", "moments of the number of new species"},
      {"asym", "large-m moments and the limit density grid"},
      {"limit-sample", "draws from the limit law"},
      {"simulate", "Chinese restaurant simulations against exact laws"},
      {"deletion-check", "stratified chi-square check of the conditional structure"},
      {"oracle", "exact rational laws for small samples"},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::string command;
  void (*handler)(Context&) = nullptr;
  for (const auto& [name, fn] : commands)
    if (app.got_subcommand(name)) {
      command = name;
      handler = fn;
    }

  try {
    Context ctx{cfg, std::nullopt, {}};
    if (!cfg.input.empty()) {
      ctx.data = ingest(cfg.input, cfg.input_format == "csv" ? InputFormat::Csv : InputFormat::Counts);
      ctx.rep.inputs["input"] = cfg.input;
      ctx.rep.inputs["input_format"] = cfg.input_format;
      ctx.rep.inputs["records"] = static_cast<long>(ctx.data->records().size());
    }
    handler(ctx);

    if (cfg.format == "tsv") {
      write_tsv(out, ctx.rep.results);
      for (const auto& w : ctx.rep.warnings) err << kToolName << ": warning: " << w.get<std::string>() << "\n";
      return 0;
    }
    Json doc = Json::object();
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["inputs"] = ctx.rep.inputs;
    doc["method"] = ctx.rep.method;
    doc["tolerances"] = ctx.rep.tolerances;
    doc["seed"] = ctx.rep.uses_seed ? Json(cfg.seed) : Json(nullptr);
    doc["summary"] = ctx.rep.summary;
    doc["results"] = ctx.rep.results;
    doc["warnings"] = ctx.rep.warnings;
    if (!cfg.no_timestamp) doc["timestamp"] = utc_timestamp();
    write_json(out, doc);
    return 0;
  } catch (const std::exception& e) {
    err << kToolName << ": error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pdrich
