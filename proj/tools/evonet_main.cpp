// evonet: command-line front end.
//
// Every subcommand resolves its options into a flat key->value configuration
// (JSON), runs a library operation from that configuration alone, and — when
// an output directory is given — drops its data files plus exactly one
// manifest.json there.  `evonet --from-manifest <file> --out <dir>` replays
// the recorded configuration through the very same dispatch path, which is
// what makes replays byte-identical.
//
// Exit codes: 0 success, 1 usage error, 2 numeric or statistical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evonet/engine.hpp"
#include "evonet/experiments.hpp"
#include "evonet/io.hpp"
#include "evonet/params.hpp"
#include "evonet/quadrature.hpp"
#include "evonet/rng.hpp"
#include "evonet/theory.hpp"

using nlohmann::json;
using namespace evonet;

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/*============================================================================
 * resolved-configuration helpers
 *==========================================================================*/

double jgetd(const json& cfg, const char* key) {
  if (!cfg.contains(key))
    throw usage_error(std::string("missing required option \"") + key + "\"");
  return cfg.at(key).get<double>();
}

std::uint64_t jgetu(const json& cfg, const char* key) {
  if (!cfg.contains(key))
    throw usage_error(std::string("missing required option \"") + key + "\"");
  return cfg.at(key).get<std::uint64_t>();
}

std::string jgets(const json& cfg, const char* key) {
  if (!cfg.contains(key))
    throw usage_error(std::string("missing required option \"") + key + "\"");
  return cfg.at(key).get<std::string>();
}

kernel_kind parse_kernel(const std::string& name) {
  if (name == "factor") return kernel_kind::factor;
  if (name == "pa" || name == "pref_attach" || name == "pref-attach")
    return kernel_kind::pref_attach;
  throw usage_error("unknown kernel \"" + name + "\" (expected factor or pa)");
}

/* model parameters shared by the simulation subcommands */
model_params params_from(const json& cfg) {
  model_params p;
  p.kernel.kind = parse_kernel(jgets(cfg, "kernel"));
  p.kernel.beta = cfg.value("beta", 1.0);
  p.kernel.gamma = jgetd(cfg, "gamma");
  p.eta = cfg.value("eta", 0.0);
  p.kappa0 = cfg.value("kappa0", 1.0);
  p.lambda = cfg.value("lambda", 0.0);
  p.n = cfg.value("n", std::uint64_t{2});
  return p;
}

json fit_to_json(const stats::fit_result& f) {
  json j;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["slope_stderr"] = f.slope_stderr;
  j["points"] = f.points;
  return j;
}

json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json strategy_table_json(kernel_kind kind, double tau, double eta) {
  json table = json::array();
  for (const strategy_row& row : strategy_table(kind, tau, eta)) {
    json r;
    r["strategy"] = to_string(row.strat);
    r["feasible"] = row.feasible;
    r["exponent"] = finite_or_null(row.exponent);
    r["a_exponent"] = finite_or_null(row.a_exponent);
    r["region"] = row.region;
    table.push_back(r);
  }
  return table;
}

/*============================================================================
 * subcommand handlers.  each reads only the resolved configuration, writes
 * data files into out_dir (when nonempty) and appends their names to
 * outputs.  return value is the process exit code.
 *==========================================================================*/

int run_theory(const json& cfg, const std::string& out_dir,
               std::vector<std::string>& outputs) {
  const kernel_kind kind = parse_kernel(jgets(cfg, "kernel"));
  const double tau = jgetd(cfg, "tau");
  const double eta = jgetd(cfg, "eta");

  const regime reg = classify_regime(kind, tau, eta);

  json out;
  out["kernel"] = to_string(kind);
  out["tau"] = tau;
  out["eta"] = eta;
  out["regime"] = to_string(reg.kind);
  if (!reg.description.empty()) out["boundary"] = reg.description;
  out["strategy_table"] = strategy_table_json(kind, tau, eta);

  if (reg.kind == regime_kind::slow_metastable) {
    const theory_report rep = analyze(kind, tau, eta);
    out["xi"] = rep.xi;
    out["dominating_strategy"] = to_string(rep.dominating);
    out["a_exponent"] = rep.a_exponent;
    out["xi_branch"] = rep.xi_branch;
    if (cfg.contains("lambda")) {
      const double lambda = cfg.at("lambda").get<double>();
      const optimal_a_result oa = optimal_a(rep.dominating, kind,
                                            gamma_from_tau(tau), eta, lambda);
      json joa;
      joa["a"] = oa.a;
      joa["exponent"] = oa.exponent;
      joa["binding"] = oa.binding;
      joa["cond_i"] = oa.cond_i;
      joa["cond_ii"] = oa.cond_ii;
      out["optimal_a"] = joa;
    }
  } else {
    out["xi"] = nullptr;
    out["dominating_strategy"] = nullptr;
    out["a_exponent"] = nullptr;
  }

  std::cout << out.dump(2) << "\n";
  if (!out_dir.empty()) {
    std::ofstream f(out_dir + "/theory.json", std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + out_dir + "/theory.json");
    f << out.dump(2) << "\n";
    outputs.push_back("theory.json");
  }
  return 0;
}

/* "lo:hi:step" -> inclusive arithmetic grid */
std::vector<double> parse_range(const std::string& text, const char* key) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !(step > 0.0) || hi < lo)
    throw usage_error(std::string(key) + ": expected lo:hi:step with step > 0, got \"" +
                      text + "\"");
  std::vector<double> out;
  for (std::uint64_t k = 0;; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    if (v > hi + 0.5 * step) break;
    out.push_back(std::min(v, hi));
  }
  return out;
}

int run_phase_grid(const json& cfg, const std::string& out_dir,
                   std::vector<std::string>& outputs) {
  const kernel_kind kind = parse_kernel(jgets(cfg, "kernel"));
  const std::vector<double> taus = parse_range(jgets(cfg, "tau-range"), "tau-range");
  const std::vector<double> etas = parse_range(jgets(cfg, "eta-range"), "eta-range");

  io::csv_writer csv(out_dir + "/grid.csv");
  csv.line("tau,eta,regime,xi,strategy");
  std::uint64_t rows = 0, skipped = 0;
  for (double tau : taus) {
    if (!(tau > 2.0)) {  // the model needs finite mean degree
      skipped += etas.size();
      continue;
    }
    for (double eta : etas) {
      const regime reg = classify_regime(kind, tau, eta);
      std::string xi = "nan";
      std::string strat = "-";
      if (reg.kind == regime_kind::slow_metastable) {
        const dominating_result dom = exponent_via_strategies(kind, tau, eta);
        xi = io::fmt_g17(dom.xi);
        strat = to_string(dom.strat);
      }
      csv.line(io::fmt_g17(tau) + "," + io::fmt_g17(eta) + "," +
               to_string(reg.kind) + "," + xi + "," + strat);
      ++rows;
    }
  }
  csv.close();
  outputs.push_back("grid.csv");
  std::cout << "phase-grid: wrote " << rows << " rows to " << csv.path();
  if (skipped > 0) std::cout << " (skipped " << skipped << " points with tau <= 2)";
  std::cout << "\n";
  return 0;
}

int run_simulate(const json& cfg, const std::string& out_dir,
                 std::vector<std::string>& outputs) {
  if (!cfg.contains("lambda")) throw usage_error("missing required option \"lambda\"");
  if (!cfg.contains("n")) throw usage_error("missing required option \"n\"");
  const model_params params = params_from(cfg);

  sim_config sc;
  sc.t_max = cfg.value("t-max", 10.0);
  sc.record_dt = cfg.value("record-dt", 0.1);
  sc.stop_on_extinction = !cfg.value("run-past-extinction", false);
  const std::string start = cfg.value("start", std::string("all"));
  if (start == "all") {
    sc.start = start_mode::all_infected;
  } else if (start == "seed") {
    sc.start = start_mode::single_seed;
    sc.seed_vertex = static_cast<std::uint32_t>(cfg.value("seed-vertex", std::uint64_t{1}));
  } else {
    throw usage_error("start must be \"all\" or \"seed\", got \"" + start + "\"");
  }

  rng_stream rng(cfg.value("seed", std::uint64_t{1}), 0);
  sis_engine engine(params, rng);
  const trajectory traj = engine.run(sc);

  io::csv_writer csv(out_dir + "/trajectory.csv");
  csv.line("t,infected_count");
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    csv.line(io::fmt_g17(traj.t[i]) + "," + std::to_string(traj.infected[i]));
  csv.close();
  outputs.push_back("trajectory.csv");

  json summary;
  summary["n"] = traj.n;
  summary["events"] = traj.events;
  summary["extinct"] = traj.extinct;
  summary["extinction_time"] = traj.extinct ? json(traj.extinction_time) : json(nullptr);
  summary["final_infected"] = traj.final_infected;
  std::ofstream f(out_dir + "/summary.json", std::ios::binary | std::ios::trunc);
  f << summary.dump(2) << "\n";
  outputs.push_back("summary.json");

  std::cout << "simulate: " << traj.events << " events, "
            << (traj.extinct ? "extinct" : "alive") << " at t_max, final infected "
            << traj.final_infected << "\n";
  return 0;
}

int run_sweep(const json& cfg, const std::string& out_dir,
              std::vector<std::string>& outputs) {
  if (!cfg.contains("lambdas")) throw usage_error("missing required option \"lambdas\"");
  if (!cfg.contains("n")) throw usage_error("missing required option \"n\"");

  sweep_config sw;
  sw.params = params_from(cfg);
  sw.lambda_list = cfg.at("lambdas").get<std::vector<double>>();
  sw.n = jgetu(cfg, "n");
  sw.replicas = cfg.value("replicas", std::uint64_t{20});
  sw.burn_in = cfg.value("burn-in", 0.3);
  sw.window = cfg.value("window", 0.5);
  sw.t_max = cfg.value("t-max", 30.0);
  sw.record_dt = cfg.value("record-dt", 0.1);
  sw.master_seed = cfg.value("seed", std::uint64_t{1});
  sw.threads = cfg.value("threads", 0u);

  const sweep_result res = sweep_lambda(sw);

  io::csv_writer csv(out_dir + "/sweep.csv");
  csv.line("lambda,rho_hat,stderr,stable");
  for (const sweep_row& r : res.rows)
    csv.line(io::fmt_g17(r.lambda) + "," + io::fmt_g17(r.rho_hat) + "," +
             io::fmt_g17(r.se) + "," + (r.stable ? "1" : "0"));
  csv.close();
  outputs.push_back("sweep.csv");

  json summary;
  summary["rows"] = json::array();
  for (const sweep_row& r : res.rows) {
    json jr;
    jr["lambda"] = r.lambda;
    jr["rho_hat"] = r.rho_hat;
    jr["stderr"] = r.se;
    jr["stable"] = r.stable;
    summary["rows"].push_back(jr);
  }
  summary["sufficient"] = res.sufficient;
  summary["fit"] = res.sufficient ? fit_to_json(res.fit) : json(nullptr);

  // theory side-by-side: what the closed form predicts at these parameters
  const double tau = tau_from_gamma(sw.params.kernel.gamma);
  const regime reg = classify_regime(sw.params.kernel.kind, tau, sw.params.eta);
  json th;
  th["tau"] = tau;
  th["eta"] = sw.params.eta;
  th["regime"] = to_string(reg.kind);
  if (reg.kind == regime_kind::slow_metastable) {
    const theory_report rep = analyze(sw.params.kernel.kind, tau, sw.params.eta);
    th["xi"] = rep.xi;
    th["dominating_strategy"] = to_string(rep.dominating);
  } else {
    th["xi"] = nullptr;
    th["dominating_strategy"] = nullptr;
  }
  summary["theory"] = th;

  std::ofstream f(out_dir + "/summary.json", std::ios::binary | std::ios::trunc);
  f << summary.dump(2) << "\n";
  outputs.push_back("summary.json");

  if (res.sufficient) {
    std::cout << "sweep: fitted slope " << res.fit.slope << " +/- "
              << res.fit.slope_stderr << " over " << res.fit.points
              << " stable rows\n";
    return 0;
  }
  std::cout << "sweep: insufficient data (fewer than 3 stable rows)\n";
  return 2;
}

int run_extinction(const json& cfg, const std::string& out_dir,
                   std::vector<std::string>& outputs) {
  if (!cfg.contains("n-list")) throw usage_error("missing required option \"n-list\"");
  model_params tmpl = params_from(cfg);
  const auto n_list = cfg.at("n-list").get<std::vector<std::uint64_t>>();
  const std::uint64_t replicas = cfg.value("replicas", std::uint64_t{100});
  const double t_cap = cfg.value("t-cap", 500.0);
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  const unsigned threads = cfg.value("threads", 0u);

  const extinction_scaling_result res =
      extinction_scaling(tmpl, n_list, replicas, t_cap, seed, threads);

  io::csv_writer csv(out_dir + "/extinction.csv");
  csv.line("n,median_text,censored_frac");
  for (const extinction_point& p : res.points)
    csv.line(std::to_string(p.n) + "," + io::fmt_g17(p.median_t) + "," +
             io::fmt_g17(p.censored_frac));
  csv.close();
  outputs.push_back("extinction.csv");

  json summary;
  summary["points"] = json::array();
  for (const extinction_point& p : res.points) {
    json jp;
    jp["n"] = p.n;
    jp["median_t"] = p.median_t;
    jp["stderr"] = p.se;
    jp["censored_frac"] = p.censored_frac;
    jp["usable"] = p.usable;
    summary["points"].push_back(jp);
  }
  summary["sufficient"] = res.sufficient;
  summary["fit"] = res.sufficient ? fit_to_json(res.fit) : json(nullptr);
  std::ofstream f(out_dir + "/summary.json", std::ios::binary | std::ios::trunc);
  f << summary.dump(2) << "\n";
  outputs.push_back("summary.json");

  if (res.sufficient) {
    std::cout << "extinction: fitted exponent " << res.fit.slope << " +/- "
              << res.fit.slope_stderr << " over " << res.fit.points << " sizes\n";
    return 0;
  }
  std::cout << "extinction: insufficient usable sizes (heavy censoring)\n";
  return 2;
}

int run_star(const json& cfg, const std::string& out_dir,
             std::vector<std::string>& outputs) {
  if (!cfg.contains("k-list")) throw usage_error("missing required option \"k-list\"");
  if (!cfg.contains("lambda")) throw usage_error("missing required option \"lambda\"");
  const auto k_list = cfg.at("k-list").get<std::vector<std::uint64_t>>();
  const double eta = cfg.value("eta", 0.0);
  const double lambda = jgetd(cfg, "lambda");
  const double kappa0 = cfg.value("kappa0", 1.0);
  const std::uint64_t pool_factor = cfg.value("pool-factor", std::uint64_t{10});
  const std::uint64_t replicas = cfg.value("replicas", std::uint64_t{2000});
  const double t_cap = cfg.value("t-cap", 300.0);
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  const unsigned threads = cfg.value("threads", 0u);

  const star_result res = star_survival(k_list, eta, lambda, kappa0, pool_factor,
                                        replicas, t_cap, seed, threads);

  io::csv_writer csv(out_dir + "/star.csv");
  csv.line("k,mean_time,stderr");
  for (const star_point& p : res.points)
    csv.line(std::to_string(p.k) + "," + io::fmt_g17(p.mean_time) + "," +
             io::fmt_g17(p.se));
  csv.close();
  outputs.push_back("star.csv");

  json summary;
  summary["points"] = json::array();
  for (const star_point& p : res.points) {
    json jp;
    jp["k"] = p.k;
    jp["mean_time"] = p.mean_time;
    jp["stderr"] = p.se;
    jp["censored_frac"] = p.censored_frac;
    summary["points"].push_back(jp);
  }
  summary["sufficient"] = res.sufficient;
  summary["fit"] = res.sufficient ? fit_to_json(res.fit) : json(nullptr);
  summary["warning"] = res.warning.empty() ? json(nullptr) : json(res.warning);
  std::ofstream f(out_dir + "/summary.json", std::ios::binary | std::ios::trunc);
  f << summary.dump(2) << "\n";
  outputs.push_back("summary.json");

  if (!res.warning.empty()) std::cout << "star: warning: " << res.warning << "\n";
  if (res.sufficient) {
    std::cout << "star: fitted slope " << res.fit.slope << " +/- "
              << res.fit.slope_stderr << "\n";
    return 0;
  }
  std::cout << "star: insufficient data for a fit\n";
  return 2;
}

int run_duality(const json& cfg, const std::string& out_dir,
                std::vector<std::string>& outputs) {
  if (!cfg.contains("lambda")) throw usage_error("missing required option \"lambda\"");
  if (!cfg.contains("n")) throw usage_error("missing required option \"n\"");
  const model_params params = params_from(cfg);
  const double t = cfg.value("t", 1.0);
  const std::uint64_t replicas = cfg.value("replicas", std::uint64_t{10000});
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});

  const duality_result res = duality_check(params, t, replicas, seed);

  std::cout << "duality: z = " << res.z << "  (all-infected I_N = " << res.i_n
            << " +/- " << res.i_n_se << ", averaged single-seed survival = "
            << res.dual << " +/- " << res.dual_se << ")\n";

  if (!out_dir.empty()) {
    json summary;
    summary["i_n"] = res.i_n;
    summary["i_n_stderr"] = res.i_n_se;
    summary["dual"] = res.dual;
    summary["dual_stderr"] = res.dual_se;
    summary["z"] = res.z;
    summary["pass"] = res.z < 4.0;
    std::ofstream f(out_dir + "/summary.json", std::ios::binary | std::ios::trunc);
    f << summary.dump(2) << "\n";
    outputs.push_back("summary.json");
  }
  return res.z < 4.0 ? 0 : 2;
}

/* two-column CSV "x,s" -> score_table */
quad::score_table read_score_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("score-file: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw usage_error("score-file: empty file " + path);
  std::vector<double> xs, ss;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw usage_error("score-file: malformed row \"" + line + "\"");
    xs.push_back(std::stod(line.substr(0, comma)));
    ss.push_back(std::stod(line.substr(comma + 1)));
  }
  return quad::score_table(xs, ss);
}

int run_check_inequality(const json& cfg, const std::string& out_dir,
                         std::vector<std::string>& outputs) {
  if (!cfg.contains("variant")) throw usage_error("missing required option \"variant\"");
  if (!cfg.contains("lambda")) throw usage_error("missing required option \"lambda\"");
  const mi_variant variant = mi_variant_from_string(jgets(cfg, "variant"));
  const model_params params = params_from(cfg);
  const double a = cfg.value("a", 0.0);
  const double constant = cfg.value("constant", 1.0);

  quad::score_table score;
  if (cfg.contains("score-file")) {
    score = read_score_csv(jgets(cfg, "score-file"));
  } else {
    const double lo = cfg.value("score-lo", 1e-4);
    const std::size_t pts = cfg.value("score-points", std::uint64_t{400});
    score = tloc_power_score(params, lo, pts);
  }

  const mi_report rep = check_master_inequality(variant, params, a, score, constant);

  json out;
  out["variant"] = to_string(variant);
  out["a"] = a;
  out["constant"] = constant;
  out["lhs_max_ratio"] = rep.lhs_max_ratio;
  out["satisfied"] = rep.satisfied;
  out["worst_x"] = rep.worst_x;
  if (a > 0.0 && a <= 1.0)
    out["density_upper_bound"] = upper_density_bound(params, a, score);
  std::cout << out.dump(2) << "\n";

  if (!out_dir.empty()) {
    std::ofstream f(out_dir + "/inequality.json", std::ios::binary | std::ios::trunc);
    f << out.dump(2) << "\n";
    outputs.push_back("inequality.json");
  }
  return rep.satisfied ? 0 : 2;
}

/*============================================================================
 * dispatch + manifest plumbing
 *==========================================================================*/

using handler_fn = int (*)(const json&, const std::string&, std::vector<std::string>&);

handler_fn find_handler(const std::string& name) {
  if (name == "theory") return run_theory;
  if (name == "phase-grid") return run_phase_grid;
  if (name == "simulate") return run_simulate;
  if (name == "sweep") return run_sweep;
  if (name == "extinction") return run_extinction;
  if (name == "star") return run_star;
  if (name == "duality") return run_duality;
  if (name == "check-inequality") return run_check_inequality;
  throw usage_error("unknown subcommand \"" + name + "\"");
}

/* subcommands that only make sense with somewhere to put their files */
bool requires_out(const std::string& name) {
  return name == "phase-grid" || name == "simulate" || name == "sweep" ||
         name == "extinction" || name == "star";
}

int dispatch(const std::string& name, const json& cfg, const std::string& out_dir) {
  if (out_dir.empty() && requires_out(name))
    throw usage_error(name + " requires --out <dir>");
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  io::run_manifest manifest;
  manifest.subcommand = name;
  manifest.resolved = cfg;
  manifest.master_seed = cfg.value("seed", std::uint64_t{0});
  manifest.started_at = io::iso8601_utc_now();

  std::vector<std::string> outputs;
  const int code = find_handler(name)(cfg, out_dir, outputs);

  manifest.finished_at = io::iso8601_utc_now();
  manifest.outputs = outputs;
  if (!out_dir.empty()) manifest.write(out_dir + "/manifest.json");
  return code;
}

/*============================================================================
 * option parsing: CLI11 flags (plus an optional INI config file, flags
 * winning) are folded into the flat resolved configuration
 *==========================================================================*/

struct raw_opts {
  std::string kernel = "factor";
  double beta = 1.0;
  double gamma = 0.0;
  double tau = 0.0;
  double eta = 0.0;
  double kappa0 = 1.0;
  double lambda = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;

  double t_max = 10.0;
  double record_dt = 0.1;
  std::string start = "all";
  std::uint64_t seed_vertex = 1;
  bool run_past_extinction = false;

  std::vector<double> lambdas;
  std::uint64_t replicas = 0;
  double burn_in = 0.3;
  double window = 0.5;

  std::vector<std::uint64_t> n_list;
  double t_cap = 0.0;

  std::vector<std::uint64_t> k_list;
  std::uint64_t pool_factor = 10;

  double t = 1.0;

  std::string variant;
  double a = 0.0;
  double constant = 1.0;
  double score_lo = 1e-4;
  std::uint64_t score_points = 400;
  std::string score_file;

  std::string tau_range;
  std::string eta_range;
};

struct model_opt_refs {
  CLI::Option* gamma = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* n = nullptr;
};

model_opt_refs add_model_options(CLI::App* sub, raw_opts& o, bool with_n) {
  model_opt_refs refs;
  sub->add_option("--kernel", o.kernel, "connection kernel: factor | pa")
      ->capture_default_str();
  sub->add_option("--beta", o.beta, "kernel strength beta > 0")->capture_default_str();
  refs.gamma = sub->add_option("--gamma", o.gamma, "power exponent gamma in (0,1)");
  refs.tau = sub->add_option("--tau", o.tau, "degree tail exponent tau > 2 (gamma = 1/(tau-1))");
  sub->add_option("--eta", o.eta, "update-speed exponent")->capture_default_str();
  sub->add_option("--kappa0", o.kappa0, "base update rate >= 0")->capture_default_str();
  refs.lambda = sub->add_option("--lambda", o.lambda, "infection rate");
  if (with_n) refs.n = sub->add_option("--n", o.n, "number of vertices");
  return refs;
}

void add_run_options(CLI::App* sub, raw_opts& o) {
  sub->add_option("--seed", o.seed, "64-bit master seed")->capture_default_str();
  sub->add_option("--out", o.out, "output directory (holds data files + manifest.json)");
}

/* exactly-one-of resolution; fills cfg["gamma"] and cfg["tau"] */
void resolve_power(const model_opt_refs& refs, const raw_opts& o, json& cfg) {
  const bool has_gamma = refs.gamma->count() > 0;
  const bool has_tau = refs.tau->count() > 0;
  if (has_gamma && has_tau)
    throw usage_error("options \"gamma\" and \"tau\" are mutually exclusive");
  if (!has_gamma && !has_tau)
    throw usage_error("exactly one of \"gamma\" or \"tau\" is required");
  const double gamma = has_gamma ? o.gamma : gamma_from_tau(o.tau);
  cfg["gamma"] = gamma;
  cfg["tau"] = tau_from_gamma(gamma);
}

void put_model(const model_opt_refs& refs, const raw_opts& o, json& cfg) {
  cfg["kernel"] = o.kernel;
  cfg["beta"] = o.beta;
  resolve_power(refs, o, cfg);
  cfg["eta"] = o.eta;
  cfg["kappa0"] = o.kappa0;
  if (refs.lambda->count() > 0) cfg["lambda"] = o.lambda;
  if (refs.n && refs.n->count() > 0) cfg["n"] = o.n;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIS contact process on stationary vertex-updating scale-free networks"};
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "INI config file (key=value); command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  raw_opts o;
  std::string from_manifest;
  std::string replay_out;
  unsigned replay_threads = 0;
  app.add_option("--from-manifest", from_manifest,
                 "replay a recorded run from its manifest.json");
  auto* replay_out_opt =
      app.add_option("--out", replay_out, "output directory for the replayed run");
  auto* replay_threads_opt = app.add_option(
      "--threads", replay_threads, "worker threads for the replayed run (0 = hardware)");

  // ---- theory ---------------------------------------------------------
  auto* sub_theory = app.add_subcommand(
      "theory", "regime, metastable exponent, and strategy table at (tau, eta)");
  auto refs_theory = add_model_options(sub_theory, o, /*with_n=*/false);
  add_run_options(sub_theory, o);

  // ---- phase-grid -----------------------------------------------------
  auto* sub_grid = app.add_subcommand(
      "phase-grid", "regime/exponent partition over a (tau, eta) grid, as CSV");
  sub_grid->add_option("--kernel", o.kernel, "connection kernel: factor | pa")
      ->capture_default_str();
  sub_grid->add_option("--tau-range", o.tau_range, "tau grid as lo:hi:step")->required();
  sub_grid->add_option("--eta-range", o.eta_range, "eta grid as lo:hi:step")->required();
  add_run_options(sub_grid, o);

  // ---- simulate -------------------------------------------------------
  auto* sub_sim = app.add_subcommand(
      "simulate", "one trajectory of the joint graph + infection process");
  auto refs_sim = add_model_options(sub_sim, o, /*with_n=*/true);
  sub_sim->add_option("--t-max", o.t_max, "time horizon")->capture_default_str();
  sub_sim->add_option("--record-dt", o.record_dt, "recording grid step")
      ->capture_default_str();
  sub_sim->add_option("--start", o.start, "initial condition: all | seed")
      ->capture_default_str();
  sub_sim->add_option("--seed-vertex", o.seed_vertex, "seed vertex (1-based, with --start seed)")
      ->capture_default_str();
  sub_sim->add_flag("--run-past-extinction", o.run_past_extinction,
                    "keep simulating the graph after the infection dies");
  add_run_options(sub_sim, o);

  // ---- sweep ----------------------------------------------------------
  auto* sub_sweep = app.add_subcommand(
      "sweep", "metastable plateau density across a decreasing lambda list");
  auto refs_sweep = add_model_options(sub_sweep, o, /*with_n=*/true);
  sub_sweep->add_option("--lambdas", o.lambdas, "strictly decreasing lambda list")
      ->delimiter(',');
  sub_sweep->add_option("--replicas", o.replicas, "replicas per lambda (default 20)");
  sub_sweep->add_option("--burn-in", o.burn_in, "burn-in fraction of the horizon")
      ->capture_default_str();
  sub_sweep->add_option("--window", o.window, "averaging window fraction")
      ->capture_default_str();
  sub_sweep->add_option("--t-max", o.t_max, "time horizon per run")->capture_default_str();
  sub_sweep->add_option("--record-dt", o.record_dt, "recording grid step")
      ->capture_default_str();
  sub_sweep->add_option("--threads", o.threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  add_run_options(sub_sweep, o);

  // ---- extinction -----------------------------------------------------
  auto* sub_ext = app.add_subcommand(
      "extinction", "extinction-time medians across network sizes (fast regimes)");
  auto refs_ext = add_model_options(sub_ext, o, /*with_n=*/false);
  sub_ext->add_option("--n-list", o.n_list, "increasing network sizes (>= 4, span >= 8x)")
      ->delimiter(',');
  sub_ext->add_option("--replicas", o.replicas, "replicas per size (default 100)");
  sub_ext->add_option("--t-cap", o.t_cap, "censoring horizon (default 500)");
  sub_ext->add_option("--threads", o.threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  add_run_options(sub_ext, o);

  // ---- star -----------------------------------------------------------
  auto* sub_star = app.add_subcommand(
      "star", "survival time of an isolated updating star across hub degrees");
  sub_star->add_option("--k-list", o.k_list, "increasing hub degrees")->delimiter(',');
  sub_star->add_option("--eta", o.eta, "update-speed exponent (<= 1/2)")
      ->capture_default_str();
  auto* star_lambda = sub_star->add_option("--lambda", o.lambda, "infection rate");
  sub_star->add_option("--kappa0", o.kappa0, "base update rate")->capture_default_str();
  sub_star->add_option("--pool-factor", o.pool_factor,
                       "leaf pool size per unit degree (default 10)");
  sub_star->add_option("--replicas", o.replicas, "replicas per degree (default 2000)");
  sub_star->add_option("--t-cap", o.t_cap, "censoring horizon (default 300)");
  sub_star->add_option("--threads", o.threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  add_run_options(sub_star, o);

  // ---- duality --------------------------------------------------------
  auto* sub_dual = app.add_subcommand(
      "duality", "all-infected density vs averaged single-seed survival (n <= 32)");
  auto refs_dual = add_model_options(sub_dual, o, /*with_n=*/true);
  sub_dual->add_option("--t", o.t, "comparison time")->capture_default_str();
  sub_dual->add_option("--replicas", o.replicas, "replicas per side (default 10000)");
  add_run_options(sub_dual, o);

  // ---- check-inequality ------------------------------------------------
  auto* sub_mi = app.add_subcommand(
      "check-inequality", "evaluate a master inequality for a tabulated score function");
  auto refs_mi = add_model_options(sub_mi, o, /*with_n=*/false);
  sub_mi->add_option("--variant", o.variant,
                     "IMI_quick | IMI_slow | OMI_weak | OMI_strong_quick | "
                     "OMI_strong_slow | Da_factor");
  sub_mi->add_option("--a", o.a, "star threshold a in [0,1)")->capture_default_str();
  sub_mi->add_option("--constant", o.constant, "multiplicative constant on the left side")
      ->capture_default_str();
  sub_mi->add_option("--score-lo", o.score_lo, "lower tabulation endpoint for the default score")
      ->capture_default_str();
  sub_mi->add_option("--score-points", o.score_points, "tabulation points for the default score")
      ->capture_default_str();
  sub_mi->add_option("--score-file", o.score_file, "CSV \"x,s\" with a custom score table");
  add_run_options(sub_mi, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    // ---- replay path --------------------------------------------------
    if (!from_manifest.empty()) {
      if (app.get_subcommands().size() > 0)
        throw usage_error("--from-manifest cannot be combined with a subcommand");
      const io::run_manifest m = io::run_manifest::read(from_manifest);
      json cfg = m.resolved;
      if (replay_threads_opt->count() > 0) cfg["threads"] = replay_threads;
      std::string out_dir = replay_out;
      if (out_dir.empty() && requires_out(m.subcommand))
        throw usage_error("replay of \"" + m.subcommand + "\" requires --out <dir>");
      return dispatch(m.subcommand, cfg, out_dir);
    }
    if (replay_out_opt->count() > 0 || replay_threads_opt->count() > 0)
      throw usage_error("--out/--threads before a subcommand only apply to --from-manifest");

    if (app.get_subcommands().empty())
      throw usage_error("a subcommand is required (see --help)");
    CLI::App* active = app.get_subcommands().front();
    const std::string name = active->get_name();

    json cfg;
    cfg["seed"] = o.seed;

    if (active == sub_theory) {
      put_model(refs_theory, o, cfg);
    } else if (active == sub_grid) {
      cfg["kernel"] = o.kernel;
      cfg["tau-range"] = o.tau_range;
      cfg["eta-range"] = o.eta_range;
    } else if (active == sub_sim) {
      if (refs_sim.lambda->count() == 0)
        throw usage_error("missing required option \"lambda\"");
      if (refs_sim.n->count() == 0)
        throw usage_error("missing required option \"n\"");
      put_model(refs_sim, o, cfg);
      cfg["t-max"] = o.t_max;
      cfg["record-dt"] = o.record_dt;
      cfg["start"] = o.start;
      cfg["seed-vertex"] = o.seed_vertex;
      cfg["run-past-extinction"] = o.run_past_extinction;
    } else if (active == sub_sweep) {
      if (o.lambdas.empty()) throw usage_error("missing required option \"lambdas\"");
      if (refs_sweep.n->count() == 0)
        throw usage_error("missing required option \"n\"");
      put_model(refs_sweep, o, cfg);
      cfg.erase("lambda");
      cfg["lambdas"] = o.lambdas;
      cfg["replicas"] = o.replicas > 0 ? o.replicas : 20;
      cfg["burn-in"] = o.burn_in;
      cfg["window"] = o.window;
      cfg["t-max"] = o.t_max;
      cfg["record-dt"] = o.record_dt;
      cfg["threads"] = o.threads;
    } else if (active == sub_ext) {
      if (o.n_list.empty()) throw usage_error("missing required option \"n-list\"");
      put_model(refs_ext, o, cfg);
      cfg["n-list"] = o.n_list;
      cfg["replicas"] = o.replicas > 0 ? o.replicas : 100;
      cfg["t-cap"] = o.t_cap > 0.0 ? o.t_cap : 500.0;
      cfg["threads"] = o.threads;
    } else if (active == sub_star) {
      if (o.k_list.empty()) throw usage_error("missing required option \"k-list\"");
      if (star_lambda->count() == 0)
        throw usage_error("missing required option \"lambda\"");
      cfg["k-list"] = o.k_list;
      cfg["eta"] = o.eta;
      cfg["lambda"] = o.lambda;
      cfg["kappa0"] = o.kappa0;
      cfg["pool-factor"] = o.pool_factor;
      cfg["replicas"] = o.replicas > 0 ? o.replicas : 2000;
      cfg["t-cap"] = o.t_cap > 0.0 ? o.t_cap : 300.0;
      cfg["threads"] = o.threads;
    } else if (active == sub_dual) {
      if (refs_dual.lambda->count() == 0)
        throw usage_error("missing required option \"lambda\"");
      if (refs_dual.n->count() == 0)
        throw usage_error("missing required option \"n\"");
      put_model(refs_dual, o, cfg);
      cfg["t"] = o.t;
      cfg["replicas"] = o.replicas > 0 ? o.replicas : 10000;
    } else if (active == sub_mi) {
      if (o.variant.empty()) throw usage_error("missing required option \"variant\"");
      if (refs_mi.lambda->count() == 0)
        throw usage_error("missing required option \"lambda\"");
      put_model(refs_mi, o, cfg);
      cfg["variant"] = o.variant;
      cfg["a"] = o.a;
      cfg["constant"] = o.constant;
      cfg["score-lo"] = o.score_lo;
      cfg["score-points"] = o.score_points;
      if (!o.score_file.empty()) cfg["score-file"] = o.score_file;
    }

    return dispatch(name, cfg, o.out);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
