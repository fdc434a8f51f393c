#include "qdioph_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qdioph/asymptotics.hpp"
#include "qdioph/errors.hpp"
#include "qdioph/heights.hpp"
#include "qdioph/parallel.hpp"
#include "qdioph/regions.hpp"
#include "qdioph/siegel.hpp"
#include "qdioph_cli/config.hpp"

namespace qdioph::cli {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

unsigned resolve_threads(int flag) { return flag > 0 ? static_cast<unsigned>(flag) : default_threads(); }

/// Accepts "zero" or 2mn reals (re, im per entry, row-major); values may be
/// split across arguments or separated by commas.
Theta parse_theta(const std::vector<std::string>& raw, int m, int n) {
  std::vector<std::string> tokens;
  for (const std::string& arg : raw) {
    std::string cur;
    for (char c : arg + ",") {
      if (c == ',' || c == ' ') {
        if (!cur.empty()) tokens.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  if (tokens.empty() || (tokens.size() == 1 && tokens[0] == "zero")) return Theta::zero(m, n);
  const std::size_t want = static_cast<std::size_t>(2 * m * n);
  if (tokens.size() != want) {
    throw ConfigError("--theta: expected 'zero' or " + std::to_string(want) + " real values, got " +
                      std::to_string(tokens.size()));
  }
  std::vector<std::complex<double>> entries;
  for (std::size_t i = 0; i < want; i += 2) {
    double parts[2];
    for (std::size_t k = 0; k < 2; ++k) {
      const std::string& t = tokens[i + k];
      char* end = nullptr;
      parts[k] = std::strtod(t.c_str(), &end);
      if (end == t.c_str() || *end != '\0' || !std::isfinite(parts[k])) {
        throw ConfigError("--theta: cannot parse '" + t + "'");
      }
    }
    entries.emplace_back(parts[0], parts[1]);
  }
  return Theta(m, n, std::move(entries));
}

double pick_T(const std::optional<double>& flag, const ExperimentConfig& cfg) {
  if (flag) return *flag;
  if (cfg.plan && !cfg.plan->T_grid.empty()) return cfg.plan->T_grid.back();
  throw ConfigError("no T given: pass --T or provide plan.T_grid");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  return f;
}

struct CountArgs {
  std::string config;
  std::vector<std::string> theta;
  std::optional<double> T;
  bool timing = false;
  bool allow_d2 = false;
  int threads = 0;
};

int cmd_count(const CountArgs& a, std::ostream& out) {
  ExperimentConfig cfg = load_config(a.config);
  ProblemSpec spec = cfg.problem;
  spec.T = pick_T(a.T, cfg);
  spec.allow_d2 = a.allow_d2;
  spec.validate();
  const Theta theta = parse_theta(a.theta, spec.m, spec.n);
  const CountReport r = count_solutions(spec, theta, resolve_threads(a.threads));
  out << "count,T,predicted,ratio,q_enumerated,theorem_backed" << (a.timing ? ",wall_time" : "") << "\n";
  out << r.count << "," << num(r.T) << "," << num(r.predicted) << "," << num(r.ratio) << "," << r.q_enumerated << ","
      << (r.theorem_backed ? "true" : "false");
  if (a.timing) out << "," << num(r.wall_time);
  out << "\n";
  return kExitOk;
}

struct AsymptoticsArgs {
  std::string config;
  bool exponents = false;
  int threads = 0;
};

int cmd_asymptotics(const AsymptoticsArgs& a, std::ostream& out) {
  const ExperimentConfig cfg = load_config(a.config);
  const ExperimentPlan plan = cfg.experiment_plan();
  // Fail on unwritable paths before the run, not after it.
  std::optional<std::ofstream> csv, svg;
  if (cfg.outputs.csv_path) csv = open_output(*cfg.outputs.csv_path);
  if (cfg.outputs.svg_path) svg = open_output(*cfg.outputs.svg_path);

  const ConvergenceTable table = run_convergence(plan, resolve_threads(a.threads));
  if (csv) {
    write_convergence_csv(*csv, table);
    out << "T,median_ratio,q1,q3,median_abs_deviation\n";
    for (const GridSummary& s : table.summary) {
      out << num(s.T) << "," << num(s.median_ratio) << "," << num(s.q1) << "," << num(s.q3) << ","
          << num(s.median_abs_deviation) << "\n";
    }
  } else {
    write_convergence_csv(out, table);
  }
  if (svg) write_convergence_svg(*svg, table);
  if (a.exponents) {
    out << "theta_index,beta,points,degenerate\n";
    for (const ExponentFit& f : fit_error_exponent(table)) {
      out << f.theta_index << "," << num(f.beta) << "," << f.points << "," << (f.degenerate ? "true" : "false") << "\n";
    }
  }
  return kExitOk;
}

struct VolumeArgs {
  std::string config;
  std::string region = "E_T";
  std::optional<double> T;
  double eps = 0.1;
  std::uint64_t mc = 0;
  std::uint64_t seed = 0;
  int threads = 0;
};

int cmd_volume(const VolumeArgs& a, std::ostream& out) {
  const ExperimentConfig cfg = load_config(a.config);
  RegionSpec region;
  try {
    region.kind = parse_region_kind(a.region);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  region.m = cfg.problem.m;
  region.n = cfg.problem.n;
  region.psi = cfg.problem.psi;
  region.T = pick_T(a.T, cfg);
  region.eps = a.eps;
  region.validate();
  out << "region,d,T,eps,volume,alpha_infinity,adelic_volume,mc_volume,mc_std_error,mc_samples\n";
  out << to_string(region.kind) << "," << region.d() << "," << num(region.T) << "," << num(region.eps) << ","
      << num(volume_archimedean(region)) << "," << num(alpha_infinity(region)) << ","
      << num(adelic_volume(region, cfg.problem.field, cfg.problem.ideal)) << ",";
  if (a.mc > 0) {
    const MonteCarloVolume mc = monte_carlo_volume(region, a.mc, a.seed, resolve_threads(a.threads));
    out << num(mc.volume) << "," << num(mc.std_error) << "," << mc.samples << "\n";
  } else {
    out << ",,0\n";
  }
  return kExitOk;
}

struct HeightsArgs {
  int k = 2;
  int d = 3;
  double xmax = 16;
  std::string table = "counts";
};

int cmd_heights(const HeightsArgs& a, std::ostream& out) {
  if (a.table == "counts") {
    out << "height,count\n";
    std::vector<double> xs;
    for (double x = 1; x < a.xmax; x *= 2) xs.push_back(x);
    xs.push_back(a.xmax);
    for (double x : xs) out << num(x) << "," << subspace_count(a.k, x) << "\n";
    return kExitOk;
  }
  const TailReport r = tail_sum(a.k, a.d, a.xmax);
  const double c = fit_block_constant(r);
  out << "j,lines,S_j,partial_sum,bound\n";
  for (const HeightBlock& b : r.blocks) {
    out << b.j << "," << b.lines << "," << num(b.block_sum) << "," << num(b.partial_sum) << ","
        << num(c * std::ldexp(1.0, (a.k - a.d) * b.j)) << "\n";
  }
  return kExitOk;
}

struct EchelonArgs {
  int m = 1;
  int k = 2;
  int bound = 1;
  std::optional<std::int64_t> D;
};

int cmd_echelon(const EchelonArgs& a, std::ostream& out) {
  std::optional<FieldSpec> field;
  if (a.D) field = field_new(*a.D);
  const auto forms = echelon_enumerate(a.m, a.k, a.bound, field);
  out << "index,pivots,form,height\n";
  for (std::size_t i = 0; i < forms.size(); ++i) {
    std::string piv;
    for (int p : forms[i].pivots) piv += (piv.empty() ? "" : " ") + std::to_string(p + 1);
    out << i << "," << piv << "," << forms[i].to_string() << "," << num(subspace_height(forms[i], field)) << "\n";
  }
  return kExitOk;
}

struct SiegelArgs {
  std::vector<double> radii;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
};

int cmd_siegel(const SiegelArgs& a, std::ostream& out) {
  out << "radius,samples,mean,std_error,target\n";
  for (double r : a.radii) {
    const SiegelReport rep = siegel_mc_check(r, a.samples, a.seed, resolve_threads(a.threads));
    out << num(rep.radius) << "," << rep.samples << "," << num(rep.mean_count) << "," << num(rep.std_error) << ","
        << num(rep.target_area) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counting experiments for Diophantine approximation over imaginary quadratic fields", "qdioph"};
  app.require_subcommand(1);

  CountArgs count;
  auto* c = app.add_subcommand("count", "Count solutions for one theta; prints one CSV row");
  c->add_option("config", count.config, "JSON experiment config")->required();
  c->add_option("--theta", count.theta, "'zero' or 2mn reals (hex floats accepted), re/im per entry")->expected(1, -1);
  c->add_option("--T", count.T, "Cutoff T (default: last plan.T_grid value)");
  c->add_flag("--timing", count.timing, "Append wall_time column");
  c->add_flag("--allow-d2", count.allow_d2, "Permit m + n = 2");
  c->add_option("--threads", count.threads, "Worker threads (default: COUNT_THREADS or all cores)")->check(CLI::NonNegativeNumber);

  AsymptoticsArgs asym;
  auto* s = app.add_subcommand("asymptotics", "Run the convergence plan; write CSV and SVG");
  s->add_option("config", asym.config, "JSON experiment config")->required();
  s->add_flag("--exponents", asym.exponents, "Also print per-theta error exponent fits");
  s->add_option("--threads", asym.threads, "Worker threads")->check(CLI::NonNegativeNumber);

  VolumeArgs vol;
  auto* v = app.add_subcommand("volume", "Closed-form and Monte Carlo region volumes");
  v->add_option("config", vol.config, "JSON experiment config")->required();
  v->add_option("--region", vol.region, "E_T, E_T_eps_minus, E_T_eps_plus or C0");
  v->add_option("--T", vol.T, "Cutoff T (default: last plan.T_grid value)");
  v->add_option("--eps", vol.eps, "Thickening parameter for E_T_eps_*");
  v->add_option("--mc", vol.mc, "Monte Carlo samples (0 disables)");
  v->add_option("--seed", vol.seed, "Monte Carlo seed");
  v->add_option("--threads", vol.threads, "Worker threads")->check(CLI::NonNegativeNumber);

  HeightsArgs h;
  auto* he = app.add_subcommand("heights", "Line counts by height or dyadic tail blocks");
  he->add_option("--k", h.k, "Ambient dimension")->required();
  he->add_option("--d", h.d, "Exponent of the tail sum (blocks table)");
  he->add_option("--xmax", h.xmax, "Height cutoff")->required();
  he->add_option("--table", h.table, "counts or blocks")->check(CLI::IsMember({"counts", "blocks"}));

  EchelonArgs e;
  auto* ec = app.add_subcommand("echelon", "Enumerate echelon forms with bounded entries");
  ec->add_option("--m", e.m, "Rank")->required();
  ec->add_option("--k", e.k, "Columns")->required();
  ec->add_option("--bound", e.bound, "Numerator and denominator bound")->required();
  ec->add_option("--D", e.D, "Work over Q(sqrt(-D)) instead of Q");

  SiegelArgs sg;
  auto* si = app.add_subcommand("siegel", "Monte Carlo mean lattice-point count over random planar lattices");
  si->add_option("--radius", sg.radii, "Disc radius (repeatable)")->required()->expected(1, -1);
  si->add_option("--samples", sg.samples, "Sampled lattices");
  si->add_option("--seed", sg.seed, "Seed");
  si->add_option("--threads", sg.threads, "Worker threads")->check(CLI::NonNegativeNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_count(count, out);
    if (s->parsed()) return cmd_asymptotics(asym, out);
    if (v->parsed()) return cmd_volume(vol, out);
    if (he->parsed()) return cmd_heights(h, out);
    if (ec->parsed()) return cmd_echelon(e, out);
    if (si->parsed()) return cmd_siegel(sg, out);
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::overflow_error& ex) {
    err << "numeric error: " << ex.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& ex) {
    err << "numeric error: " << ex.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace qdioph::cli
