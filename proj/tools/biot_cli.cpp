// biot: command-line driver for the convergence, cantilever and
// preconditioner experiments.
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "biot/experiments.hpp"
#include "biot/report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace biot;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kSolverFailure = 1, kBadConfig = 2 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physical parameter overrides shared by several subcommands.
struct ParamFlags {
  std::optional<double> E, nu, lambda, mu, alpha, M, K, tau;

  void add_to(CLI::App* app, bool with_K = true, bool with_tau = true) {
    app->add_option("--E", E, "Young's modulus");
    app->add_option("--nu", nu, "Poisson ratio, in [0, 0.5)");
    app->add_option("--lambda", lambda, "first Lame parameter");
    app->add_option("--mu", mu, "shear modulus");
    app->add_option("--alpha", alpha, "Biot-Willis coefficient");
    app->add_option("--M", M, "Biot modulus");
    if (with_K) app->add_option("--K", K, "permeability");
    if (with_tau) app->add_option("--tau", tau, "time step");
  }

  PhysicalParams resolve(PhysicalParams p) const {
    if ((E || nu) && (lambda || mu)) throw ConfigError("give either (E, nu) or (lambda, mu), not both");
    if (nu && !(*nu >= 0.0 && *nu < 0.5)) throw ConfigError("nu must lie in [0, 0.5)");
    if (alpha) p.alpha = *alpha;
    if (M) p.biot_modulus = *M;
    if (K) p.permeability = *K;
    if (tau) p.tau = *tau;
    if (E || nu) {
      const std::optional<double> e = E ? E : p.young, v = nu ? nu : p.poisson;
      if (!e || !v) throw ConfigError("--E and --nu must be given together for this subcommand");
      p = PhysicalParams::from_young_poisson(*e, *v, p.alpha, p.biot_modulus, p.permeability, p.tau);
    }
    if (lambda || mu) {
      p.young.reset();
      p.poisson.reset();
      if (lambda) p.lambda = *lambda;
      if (mu) p.mu = *mu;
    }
    try {
      p.validate();
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
    return p;
  }
};

struct Common {
  std::string config_file;
  std::string outdir = "results";
  std::uint64_t seed = 2024;
};

// Plain key=value lines; '#' starts a comment. Keys are long option names
// of the active subcommand without the leading dashes.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Fills options that were not given on the command line from the config file.
void apply_config_file(CLI::App* sub, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      try {
        opt = sub->get_parent()->get_option("--" + key);
      } catch (const CLI::OptionNotFound&) {
        throw ConfigError("unknown key '" + key + "' in config file");
      }
    }
    if (key == "config") throw ConfigError("config files cannot include other config files");
    if (opt->count() > 0) continue;  // command line wins
    if (opt->get_type_size() == 0) {
      // flag
      if (value == "true" || value == "1")
        opt->add_result("true");
      else if (value != "false" && value != "0")
        throw ConfigError("key '" + key + "' expects true or false");
      else
        continue;
    } else {
      opt->add_result(value);
    }
    opt->run_callback();
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void add_params(ConfigEntries& cfg, const PhysicalParams& p, bool with_K = true) {
  if (p.young) cfg.emplace_back("E", format_double(*p.young));
  if (p.poisson) cfg.emplace_back("nu", format_double(*p.poisson));
  cfg.emplace_back("lambda", format_double(p.lambda));
  cfg.emplace_back("mu", format_double(p.mu));
  cfg.emplace_back("alpha", format_double(p.alpha));
  cfg.emplace_back("M", format_double(p.biot_modulus));
  if (with_K) cfg.emplace_back("K", format_double(p.permeability));
  cfg.emplace_back("tau", format_double(p.tau));
}

// Writes <stem>.csv, <stem>.md and <stem>.json.
class Outputs {
 public:
  Outputs(const Common& common, const std::string& subcommand)
      : dir_(common.outdir), stem_(subcommand + "-" + utc_timestamp()), subcommand_(subcommand) {
    fs::create_directories(dir_);
  }

  fs::path path(const std::string& suffix) const { return dir_ / (stem_ + suffix); }

  std::ofstream open(const std::string& suffix) {
    const fs::path p = path(suffix);
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    files_.push_back(p.string());
    return out;
  }

  void write_json(const ConfigEntries& cfg, const json& results, int status, double seconds) {
    json meta;
    meta["subcommand"] = subcommand_;
    meta["timestamp"] = stem_.substr(subcommand_.size() + 1);
    json c = json::object();
    for (const auto& [k, v] : cfg) c[k] = v;
    meta["config"] = c;
    meta["versions"] = {{"biot", kVersion},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                      "." + std::to_string(EIGEN_MINOR_VERSION)},
                        {"cli11", CLI11_VERSION},
                        {"compiler", __VERSION__},
                        {"cxx", __cplusplus}};
    meta["results"] = results;
    meta["status"] = status;
    meta["wall_seconds"] = seconds;
    files_.push_back(path(".json").string());
    meta["files"] = files_;
    std::ofstream out(path(".json"));
    out << meta.dump(2) << '\n';
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::string stem_;
  std::string subcommand_;
  std::vector<std::string> files_;
};

void print_files(const Outputs& out) {
  for (const auto& f : out.files()) std::cerr << "wrote " << f << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

struct ConvergenceArgs {
  std::string scheme = "stabilized";
  std::vector<double> Ks{1e-4, 1e-6, 1e-8, 1e-10};
  std::vector<int> Ns{4, 8, 16, 32, 64};
  ParamFlags params;
};

int run_convergence_cmd(const Common& common, const ConvergenceArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scheme scheme = parse_scheme(a.scheme);
  if (a.Ks.empty() || a.Ns.empty()) throw ConfigError("need at least one K and one N");
  for (double K : a.Ks)
    if (!(K > 0.0)) throw ConfigError("K must be positive");
  for (int n : a.Ns)
    if (n < 1) throw ConfigError("N must be positive");
  // validate the remaining parameters once, K is swept
  PhysicalParams base = a.params.resolve(manufactured::params(a.Ks.front()));

  ConfigEntries cfg{{"subcommand", "convergence"}, {"scheme", std::string(to_string(scheme))},
                    {"K", join_doubles(a.Ks)}, {"N", join_ints(a.Ns)}};
  add_params(cfg, base, false);
  cfg.emplace_back("energy_norm", "a(u - u_h, u - u_h) with the bubble part of u_h, degree-10 quadrature");
  cfg.emplace_back("initial_state", "u=0, p=1");
  cfg.emplace_back("solver", "direct");

  std::vector<ConvergenceCell> cells;
  for (double K : a.Ks)
    for (int n : a.Ns) {
      PhysicalParams p = base;
      p.permeability = K;
      ConvergenceCell c;
      c.K = K;
      c.n = n;
      try {
        const ManufacturedRun run = run_manufactured(scheme, n, p);
        c.e_energy = run.errors.energy;
        c.e_p = run.errors.pressure;
      } catch (const std::exception& ex) {
        c.ok = false;
        c.message = ex.what();
      }
      if (!cells.empty() && cells.back().K == K && cells.back().ok && c.ok) {
        const ConvergenceCell& prev = cells.back();
        const double r = std::log(double(n) / prev.n);
        c.rate_energy = std::log(prev.e_energy / c.e_energy) / r;
        c.rate_p = std::log(prev.e_p / c.e_p) / r;
      }
      cells.push_back(c);
    }

  int status = kOk;
  json results = json::array();
  for (const auto& c : cells) {
    if (!c.ok) status = kSolverFailure;
    json j{{"K", c.K}, {"N", c.n}, {"ok", c.ok}};
    if (c.ok) {
      j["e_energy"] = c.e_energy;
      j["e_p"] = c.e_p;
    } else {
      j["message"] = c.message;
    }
    results.push_back(j);
  }

  Outputs out(common, "convergence");
  {
    auto csv = out.open(".csv");
    write_config_comment(cfg, csv);
    write_convergence_csv(cells, csv);
  }
  {
    auto md = out.open(".md");
    md << "# convergence (" << to_string(scheme) << ")\n\n";
    write_config_markdown(cfg, md);
    write_convergence_markdown(cells, md);
  }
  write_convergence_markdown(cells, std::cout);
  out.write_json(cfg, results, status, seconds_since(t0));
  print_files(out);
  return status;
}

// ---------------------------------------------------------------------------

struct CantileverArgs {
  std::vector<std::string> schemes{"stabilized", "unstabilized"};
  int n = 32;
  int steps = cantilever::kSteps;
  ParamFlags params;
  std::string solver = "direct";
  std::string precond = "U";
  bool inexact = false;
  double tol = 1e-8;
  int max_iter = 500;
};

SolverConfig solver_config(const std::string& solver, const std::string& precond, bool inexact, double tol,
                           int max_iter) {
  SolverConfig cfg;
  if (solver == "direct")
    cfg.method = SolveMethod::direct;
  else if (solver == "fgmres")
    cfg.method = SolveMethod::fgmres;
  else
    throw ConfigError("unknown solver '" + solver + "'");
  cfg.kind = parse_precond_kind(precond);
  cfg.inexact = inexact;
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("tol must lie in (0, 1)");
  if (max_iter < 1) throw ConfigError("max-iter must be positive");
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  return cfg;
}

int run_cantilever_cmd(const Common& common, const CantileverArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.n < 1) throw ConfigError("N must be positive");
  if (a.steps < 1) throw ConfigError("steps must be positive");
  std::vector<Scheme> schemes;
  for (const auto& s : a.schemes) schemes.push_back(parse_scheme(s));
  const PhysicalParams p = a.params.resolve(cantilever::params());
  const SolverConfig scfg = solver_config(a.solver, a.precond, a.inexact, a.tol, a.max_iter);

  ConfigEntries cfg{{"subcommand", "cantilever"}, {"N", std::to_string(a.n)}, {"steps", std::to_string(a.steps)}};
  std::string sl;
  for (Scheme s : schemes) sl += (sl.empty() ? "" : ",") + std::string(to_string(s));
  cfg.emplace_back("scheme", sl);
  add_params(cfg, p);
  cfg.emplace_back("traction_top", "0,-1");
  cfg.emplace_back("solver", a.solver);
  if (scfg.method == SolveMethod::fgmres) {
    cfg.emplace_back("precond", std::string(to_string(scfg.kind)) + (a.inexact ? "-inexact" : ""));
    cfg.emplace_back("tol", format_double(a.tol));
    cfg.emplace_back("max_iter", std::to_string(a.max_iter));
  }

  Outputs out(common, "cantilever");
  const Mesh mesh = build_uniform_grid(a.n);
  std::vector<std::pair<Scheme, CantileverRun>> runs;
  int status = kOk;
  json results = json::array();
  for (Scheme s : schemes) {
    try {
      runs.emplace_back(s, run_cantilever(s, a.n, p, a.steps, scfg));
    } catch (const std::exception& ex) {
      status = kSolverFailure;
      results.push_back({{"scheme", to_string(s)}, {"ok", false}, {"message", ex.what()}});
      continue;
    }
    const CantileverRun& r = runs.back().second;
    json j{{"scheme", to_string(s)},       {"ok", true},
           {"final_time", r.final_time},   {"oscillation_index", r.oscillation},
           {"p_min", r.state.p.minCoeff()}, {"p_max", r.state.p.maxCoeff()}};
    json its = json::array();
    for (const auto& rep : r.reports) its.push_back(rep.iterations);
    j["iterations"] = its;
    results.push_back(j);
    auto pcsv = out.open("-pressure-" + std::string(to_string(s)) + ".csv");
    write_config_comment(cfg, pcsv);
    write_pressure_csv(mesh, r.state.p, pcsv);
  }

  {
    auto csv = out.open(".csv");
    write_config_comment(cfg, csv);
    csv << "scheme,N,steps,final_time,oscillation_index,p_min,p_max\n";
    for (const auto& [s, r] : runs)
      csv << to_string(s) << ',' << a.n << ',' << r.steps << ',' << format_double(r.final_time) << ','
          << format_double(r.oscillation) << ',' << format_double(r.state.p.minCoeff()) << ','
          << format_double(r.state.p.maxCoeff()) << '\n';
  }
  std::ostringstream table;
  table << "| scheme | oscillation index | min p | max p |\n|---|---|---|---|\n";
  for (const auto& [s, r] : runs)
    table << "| " << to_string(s) << " | " << format_double(r.oscillation) << " | "
          << format_double(r.state.p.minCoeff()) << " | " << format_double(r.state.p.maxCoeff()) << " |\n";
  {
    auto md = out.open(".md");
    md << "# cantilever, t = " << format_double(a.steps * p.tau) << "\n\n";
    write_config_markdown(cfg, md);
    md << table.str();
  }
  std::cout << table.str();
  out.write_json(cfg, results, status, seconds_since(t0));
  print_files(out);
  return status;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string table = "3";
  std::vector<std::string> preconds;
  BenchOptions opts;
};

std::string resolve_table(const std::string& t) {
  // numeric aliases follow the order of the published iteration tables
  static const std::map<std::string, std::string> alias{
      {"3", "manufactured-k-nu"}, {"4", "cantilever-k-nu"}, {"5", "cantilever-h-tau"}};
  if (const auto it = alias.find(t); it != alias.end()) return it->second;
  for (const auto& n : bench_table_names())
    if (n == t) return t;
  throw ConfigError("unknown table '" + t + "'");
}

BenchPrecond parse_bench_precond(std::string s) {
  BenchPrecond bp;
  const std::string suffix = "-inexact";
  if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
    bp.inexact = true;
    s.resize(s.size() - suffix.size());
  }
  try {
    bp.kind = parse_precond_kind(s);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  return bp;
}

int run_bench_cmd(const Common& common, BenchArgs a) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string table = resolve_table(a.table);
  std::vector<BenchPrecond> preconds;
  if (a.preconds.empty())
    preconds = all_bench_preconds();
  else
    for (const auto& s : a.preconds) preconds.push_back(parse_bench_precond(s));
  a.opts.seed = common.seed;
  if (a.opts.repetitions < 1) throw ConfigError("reps must be positive");
  if (!(a.opts.tol > 0.0 && a.opts.tol < 1.0)) throw ConfigError("tol must lie in (0, 1)");
  if (!(a.opts.inner_tol > 0.0 && a.opts.inner_tol < 1.0)) throw ConfigError("inner-tol must lie in (0, 1)");

  ConfigEntries cfg{{"subcommand", "precond-bench"},
                    {"table", table},
                    {"reps", std::to_string(a.opts.repetitions)},
                    {"seed", std::to_string(a.opts.seed)},
                    {"tol", format_double(a.opts.tol)},
                    {"max_iter", std::to_string(a.opts.max_iter)},
                    {"inner_tol", format_double(a.opts.inner_tol)},
                    {"inner_max_iter", std::to_string(a.opts.inner_max_iter)},
                    {"rhs", "zero"},
                    {"initial_guess", "uniform [0,1), mt19937_64(seed + rep)"},
                    {"count", "rounded mean over reps"}};
  std::string pl;
  for (const auto& bp : preconds) pl += (pl.empty() ? "" : ",") + bp.name();
  cfg.emplace_back("precond", pl);

  const std::vector<BenchCell> cells = run_precond_bench(bench_table(table), preconds, a.opts);

  int status = kOk;
  json results = json::array();
  for (const auto& c : cells) {
    if (!c.converged) status = kSolverFailure;
    results.push_back({{"sweep", c.point.sweep},
                       {"point", c.point.label},
                       {"precond", c.precond.name()},
                       {"mean_iterations", c.mean_iterations},
                       {"iterations", c.iterations},
                       {"converged", c.converged},
                       {"inner_failures", c.inner_failures},
                       {"seconds", c.seconds}});
  }

  Outputs out(common, "precond-bench");
  {
    auto csv = out.open(".csv");
    write_config_comment(cfg, csv);
    write_bench_csv(cells, csv);
  }
  {
    auto md = out.open(".md");
    md << "# " << table << "\n\n";
    write_config_markdown(cfg, md);
    write_bench_markdown(cells, md);
  }
  write_bench_markdown(cells, std::cout);
  out.write_json(cfg, results, status, seconds_since(t0));
  print_files(out);
  return status;
}

// ---------------------------------------------------------------------------

struct SingleArgs {
  std::string problem = "manufactured";
  std::string scheme = "stabilized";
  int n = 8;
  ParamFlags params;
  std::string solver = "direct";
  std::string precond = "U";
  bool inexact = false;
  double tol = 1e-8;
  int max_iter = 500;
  bool check_schur = false;
  bool random_rhs = false;
};

double rel_diff(const Vec& a, const Vec& b) {
  const double nb = b.norm();
  return nb > 0.0 ? (a - b).norm() / nb : (a - b).norm();
}

int run_single_cmd(const Common& common, const SingleArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.n < 1) throw ConfigError("N must be positive");
  const Scheme scheme = parse_scheme(a.scheme);
  const bool manuf = a.problem == "manufactured";
  if (!manuf && a.problem != "cantilever") throw ConfigError("unknown problem '" + a.problem + "'");
  if (scheme == Scheme::enriched && a.check_schur)
    throw ConfigError("--check-schur needs a scheme with a condensable bubble block");
  const PhysicalParams p = a.params.resolve(manuf ? manufactured::params(1e-6) : cantilever::params());
  const SolverConfig scfg = solver_config(a.solver, a.precond, a.inexact, a.tol, a.max_iter);

  ConfigEntries cfg{{"subcommand", "single-solve"},
                    {"problem", a.problem},
                    {"scheme", std::string(to_string(scheme))},
                    {"N", std::to_string(a.n)}};
  add_params(cfg, p);
  cfg.emplace_back("solver", a.solver);
  if (scfg.method == SolveMethod::fgmres) {
    cfg.emplace_back("precond", std::string(to_string(scfg.kind)) + (a.inexact ? "-inexact" : ""));
    cfg.emplace_back("tol", format_double(a.tol));
    cfg.emplace_back("max_iter", std::to_string(a.max_iter));
  }
  cfg.emplace_back("check_schur", a.check_schur ? "true" : "false");
  if (a.random_rhs) {
    cfg.emplace_back("rhs", "uniform [-1,1)");
    cfg.emplace_back("seed", std::to_string(common.seed));
  }

  const Mesh mesh = build_uniform_grid(a.n);
  const BoundarySpec bc = manuf ? BoundarySpec::clamped_no_flow() : BoundarySpec::cantilever(cantilever::kTopTraction);
  const DofMap dm = build_dof_map(mesh, bc, scheme != Scheme::unstabilized);
  State prev = State::zero(dm);
  Loads loads;
  if (manuf) {
    prev.p.setOnes();
    const double mu = p.mu;
    loads.f = [mu](const Point& x) { return manufactured::body_force(x, mu); };
  }
  BlockSystem sys = assemble_full(mesh, dm, p, bc, loads, prev, scheme);
  if (a.random_rhs) {
    std::mt19937_64 rng(common.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (Vec* v : {&sys.b_b, &sys.b_l, &sys.b_p, &sys.b_beta, &sys.b_w})
      for (Eigen::Index i = 0; i < v->size(); ++i) (*v)(i) = unif(rng);
  }

  json results;
  results["dofs"] = {{"bubble", dm.n_bub},
                     {"linear", dm.n_ulin},
                     {"pressure", dm.n_p},
                     {"multiplier", dm.n_beta},
                     {"velocity", dm.n_w},
                     {"condensed", dm.condensed_size()}};
  State x;
  int status = kOk;
  std::ostringstream report;
  if (scheme == Scheme::enriched) {
    x = solve_monolithic(sys);
  } else {
    const CondensedSystem cond = condense(sys);
    const SparseMat ae = cond.matrix();
    Vec sol = Vec::Zero(cond.size());
    if (scfg.method == SolveMethod::direct) {
      sol = solve_direct(cond);
    } else {
      PrecondConfig pc;
      pc.kind = scfg.kind;
      pc.inexact = scfg.inexact;
      const BlockPreconditioner prec(cond, p, pc);
      KrylovOptions ko;
      ko.tol = scfg.tol;
      ko.max_iter = scfg.max_iter;
      const SolverReport rep =
          fgmres([&ae](const Vec& v, Vec& y) { y = ae * v; }, prec.op(), cond.rhs(), sol, ko);
      results["iterations"] = rep.iterations;
      results["converged"] = rep.converged;
      report << "fgmres: " << rep.iterations << " iterations, relative residual "
             << format_double(rep.final_residual()) << '\n';
      if (!rep.converged) status = kSolverFailure;
    }
    x = back_substitute(sys, cond, sol);
  }
  const Vec b_full = sys.full_rhs();
  const double res = (sys.full_matrix() * sys.join(x) - b_full).norm() / std::max(b_full.norm(), 1e-300);
  results["full_residual"] = res;
  report << "relative residual of the full system: " << format_double(res) << '\n';

  std::vector<std::pair<std::string, double>> schur;
  if (a.check_schur) {
    const State d = solve_monolithic(sys);
    schur = {{"bubble", rel_diff(x.u_bub, d.u_bub)},
             {"linear", rel_diff(x.u_lin, d.u_lin)},
             {"pressure", rel_diff(x.p, d.p)},
             {"multiplier", rel_diff(x.beta, d.beta)},
             {"velocity", rel_diff(x.w, d.w)}};
    double worst = 0.0;
    json js;
    for (const auto& [name, v] : schur) {
      js[name] = v;
      worst = std::max(worst, v);
    }
    results["schur_check"] = js;
    results["schur_check_pass"] = worst <= 1e-9;
    report << "condensed vs monolithic, worst relative difference: " << format_double(worst)
           << (worst <= 1e-9 ? " (agree)" : " (DISAGREE)") << '\n';
    if (worst > 1e-9) status = kSolverFailure;
  }
  if (manuf && !a.random_rhs) {
    const ErrorNorms e = manufactured_errors(mesh, dm, x, p);
    results["e_energy"] = e.energy;
    results["e_p"] = e.pressure;
    report << "energy error " << format_double(e.energy) << ", pressure error " << format_double(e.pressure) << '\n';
  }

  Outputs out(common, "single-solve");
  {
    auto csv = out.open(".csv");
    write_config_comment(cfg, csv);
    csv << "quantity,value\n";
    csv << "full_residual," << format_double(res) << '\n';
    for (const auto& [name, v] : schur) csv << "schur_" << name << ',' << format_double(v) << '\n';
    if (results.contains("e_energy"))
      csv << "e_energy," << format_double(results["e_energy"].get<double>()) << "\ne_p,"
          << format_double(results["e_p"].get<double>()) << '\n';
  }
  {
    auto md = out.open(".md");
    md << "# single solve\n\n";
    write_config_markdown(cfg, md);
    md << "```\n" << report.str() << "```\n";
  }
  std::cout << report.str();
  out.write_json(cfg, results, status, seconds_since(t0));
  print_files(out);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biot consolidation: error tables, cantilever runs and preconditioner benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common common;
  app.add_option("--config", common.config_file, "key=value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  app.add_option("--outdir", common.outdir, "output directory")->capture_default_str();
  app.add_option("--seed", common.seed, "random seed")->capture_default_str();

  ConvergenceArgs conv;
  CLI::App* c = app.add_subcommand("convergence", "error tables on the manufactured solution");
  c->add_option("--scheme", conv.scheme, "stabilized | unstabilized | enriched")->capture_default_str();
  c->add_option("--K", conv.Ks, "permeabilities")->delimiter(',');
  c->add_option("--N", conv.Ns, "subdivisions per side")->delimiter(',');
  conv.params.add_to(c, false);

  CantileverArgs cant;
  CLI::App* b = app.add_subcommand("cantilever", "cantilever pressure field and oscillation index");
  b->add_option("--scheme", cant.schemes, "schemes to run")->delimiter(',');
  b->add_option("--N", cant.n, "subdivisions per side")->capture_default_str();
  b->add_option("--steps", cant.steps, "backward Euler steps")->capture_default_str();
  cant.params.add_to(b);
  b->add_option("--solver", cant.solver, "direct | fgmres")->capture_default_str();
  b->add_option("--precond", cant.precond, "D | L | U")->capture_default_str();
  b->add_flag("--inexact", cant.inexact, "AMG-preconditioned CG for the diagonal blocks");
  b->add_option("--tol", cant.tol, "FGMRES relative tolerance")->capture_default_str();
  b->add_option("--max-iter", cant.max_iter, "FGMRES iteration cap")->capture_default_str();

  BenchArgs bench;
  CLI::App* pb = app.add_subcommand("precond-bench", "iteration counts of the block preconditioners");
  pb->add_option("--table", bench.table, "3 | 4 | 5 or a table name")->capture_default_str();
  pb->add_option("--precond", bench.preconds, "subset of D,U,L,D-inexact,U-inexact,L-inexact")->delimiter(',');
  pb->add_option("--reps", bench.opts.repetitions, "random initial guesses per point")->capture_default_str();
  pb->add_option("--tol", bench.opts.tol, "FGMRES relative tolerance")->capture_default_str();
  pb->add_option("--max-iter", bench.opts.max_iter, "FGMRES iteration cap")->capture_default_str();
  pb->add_option("--inner-tol", bench.opts.inner_tol, "inner CG tolerance (inexact)")->capture_default_str();
  pb->add_option("--inner-max-iter", bench.opts.inner_max_iter, "inner CG cap (inexact)")->capture_default_str();

  SingleArgs single;
  CLI::App* s = app.add_subcommand("single-solve", "one time step, with optional consistency checks");
  s->add_option("--problem", single.problem, "manufactured | cantilever")->capture_default_str();
  s->add_option("--scheme", single.scheme, "stabilized | unstabilized | enriched")->capture_default_str();
  s->add_option("--N", single.n, "subdivisions per side")->capture_default_str();
  single.params.add_to(s);
  s->add_option("--solver", single.solver, "direct | fgmres")->capture_default_str();
  s->add_option("--precond", single.precond, "D | L | U")->capture_default_str();
  s->add_flag("--inexact", single.inexact, "AMG-preconditioned CG for the diagonal blocks");
  s->add_option("--tol", single.tol, "FGMRES relative tolerance")->capture_default_str();
  s->add_option("--max-iter", single.max_iter, "FGMRES iteration cap")->capture_default_str();
  s->add_flag("--check-schur", single.check_schur, "compare with a direct solve of the full system");
  s->add_flag("--random-rhs", single.random_rhs, "replace the load vectors by seeded random ones");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!common.config_file.empty()) apply_config_file(active, read_config_file(common.config_file));
    if (active == c) return run_convergence_cmd(common, conv);
    if (active == b) return run_cantilever_cmd(common, cant);
    if (active == pb) return run_bench_cmd(common, bench);
    return run_single_cmd(common, single);
  } catch (const ConfigError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kBadConfig;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& ex) {
    std::cerr << "failure: " << ex.what() << '\n';
    return kSolverFailure;
  }
}
