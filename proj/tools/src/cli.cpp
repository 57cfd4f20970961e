#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "khess/constants.hpp"
#include "khess/errors.hpp"
#include "khess/io.hpp"
#include "khess/phase_plane.hpp"
#include "khess/pohozaev.hpp"
#include "khess/radial_profiles.hpp"
#include "khess/svg.hpp"
#include "manifest.hpp"

namespace khess::cli {

namespace fs = std::filesystem;
using io::format_number;
using io::put;

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  fs::path out_dir;
  std::string timestamp;
  std::vector<fs::path> outputs;
};

fs::path resolve(const Context& ctx, const std::string& name) {
  fs::path p(name);
  return p.is_absolute() ? p : ctx.out_dir / p;
}

void write_file(Context& ctx, const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  f.close();
  if (!f) throw std::runtime_error("write failed for " + path.string());
  ctx.outputs.push_back(path);
}

void finish(Context& ctx, const std::string& command, const std::string& stem, io::Record params,
            io::Record tolerances) {
  RunManifest m;
  m.command = command;
  m.parameters = std::move(params);
  m.tolerances = std::move(tolerances);
  m.outputs = ctx.outputs;
  m.timestamp = ctx.timestamp;
  const fs::path path = ctx.out_dir / (stem + ".manifest.json");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << m.to_json();
  ctx.out << "manifest: " << path.string() << '\n';
}

std::string stem_of(const std::string& cmd, int n, int k) {
  return cmd + "_n" + std::to_string(n) + "_k" + std::to_string(k);
}

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0) return format_number(z.real());
  return format_number(z.real()) + (z.imag() < 0 ? "-" : "+") + format_number(std::abs(z.imag())) +
         "i";
}

std::string exponent_text(const CriticalExponent& g) {
  if (g.is_infinite()) return "inf";
  const auto& r = g.exact();
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

struct ConfigFlags {
  double rel_tol = 1e-10;
  double abs_tol = 1e-20;
  double t_max = 200;
  double eq_radius = 1e-6;
  double seed_delta = 1e-8;
  double max_step = 0.25;

  void attach(CLI::App* app) {
    app->add_option("--tol", rel_tol, "relative tolerance of the integrator")->capture_default_str();
    app->add_option("--abs-tol", abs_tol, "absolute tolerance")->capture_default_str();
    app->add_option("--t-max", t_max, "time cap in t = log s")->capture_default_str();
    app->add_option("--eq-radius", eq_radius, "radius of the equilibrium ball")->capture_default_str();
    app->add_option("--seed-delta", seed_delta, "origin seed size")->capture_default_str();
    app->add_option("--max-step", max_step, "largest step in t")->capture_default_str();
  }
  IntegratorConfig config() const {
    IntegratorConfig c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.t_max = t_max;
    c.eq_radius = eq_radius;
    c.seed_delta = seed_delta;
    c.max_step = max_step;
    c.validate();
    return c;
  }
  io::Record record() const {
    io::Record r;
    put(r, "rel_tol", rel_tol);
    put(r, "abs_tol", abs_tol);
    put(r, "t_max", t_max);
    put(r, "eq_radius", eq_radius);
    put(r, "seed_delta", seed_delta);
    put(r, "max_step", max_step);
    return r;
  }
};

// ---- exponents -----------------------------------------------------------

struct ExponentsArgs {
  int n = 0;
  int k = 0;
  std::optional<double> p;
  std::optional<int> d;
};

int cmd_exponents(Context& ctx, const ExponentsArgs& a) {
  const ProblemSpec spec(a.n, a.k);
  const auto th = thresholds(spec);
  const auto lin = equilibrium_linearization(spec);
  io::Record rec;
  put(rec, "n", a.n);
  put(rec, "k", a.k);
  put(rec, "gamma", exponent_text(th.gamma));
  put(rec, "a0", th.a0);
  put(rec, "alpha1", th.alpha1);
  put(rec, "alpha2", th.alpha2);
  put(rec, "beta", th.beta ? format_number(*th.beta) : std::string("none"));
  put(rec, "eig1", format_complex(lin.eig1));
  put(rec, "eig2", format_complex(lin.eig2));
  put(rec, "classification", std::string(to_string(lin.kind)));
  if (lin.b_range) {
    put(rec, "b_min", lin.b_range->first);
    put(rec, "b_max", lin.b_range->second);
  }
  if (a.p) {
    const auto pc = pohozaev_power_coefficient(spec, *a.p);
    put(rec, "p", *a.p);
    put(rec, "pohozaev_coefficient", pc.coefficient);
    put(rec, "verdict", pc.nonexistence
                            ? "p >= gamma = " + exponent_text(th.gamma) + ": nonexistence"
                            : "p < gamma = " + exponent_text(th.gamma) + ": below the critical exponent");
  }
  if (a.d) {
    const auto mt = moser_trudinger(*a.d);
    put(rec, "d", *a.d);
    put(rec, "mt_D", mt.D);
    put(rec, "mt_p0", mt.p0);
    put(rec, "mt_E", mt.E);
    put(rec, "mt_q0", mt.q0);
    put(rec, "alpha_tilde", mt.alpha_tilde);
    put(rec, "alpha_tilde_from_E", mt.alpha_tilde_from_E);
    put(rec, "mt_residual", mt.residual);
  }
  for (const auto& [key, value] : rec) ctx.out << key << " = " << value << '\n';
  const std::string stem = stem_of("exponents", a.n, a.k);
  write_file(ctx, ctx.out_dir / (stem + ".json"), io::to_json(rec));

  io::Record params;
  put(params, "n", a.n);
  put(params, "k", a.k);
  if (a.p) put(params, "p", *a.p);
  if (a.d) put(params, "d", *a.d);
  finish(ctx, "exponents", stem, params, {});
  return kOk;
}

// ---- phase ---------------------------------------------------------------

struct PhaseArgs {
  int n = 0;
  int k = 0;
  ConfigFlags cfg;
  std::string csv;
  std::string svg;
};

int cmd_phase(Context& ctx, const PhaseArgs& a) {
  const ProblemSpec spec(a.n, a.k);
  const auto traj = integrate_trajectory(spec, a.cfg.config());
  const std::string stem = stem_of("phase", a.n, a.k);

  std::vector<std::vector<double>> rows;
  for (const auto& s : traj.samples()) rows.push_back({s.t, s.point.v, s.point.w});
  std::ostringstream csv;
  io::write_csv(csv, {"t", "v", "w"}, rows);
  write_file(ctx, resolve(ctx, a.csv.empty() ? stem + ".csv" : a.csv), csv.str());
  write_file(ctx, resolve(ctx, a.svg.empty() ? stem + ".svg" : a.svg),
             svg::phase_diagram(traj, ctx.timestamp));

  const auto cc = count_crossings(traj, 1.0, a.cfg.eq_radius);
  const auto end = traj.end_point();
  ctx.out << "classification = " << to_string(equilibrium_linearization(spec).kind) << '\n'
          << "termination = " << to_string(traj.termination()) << '\n'
          << "t_end = " << format_number(traj.t_end()) << '\n'
          << "steps = " << traj.dense().segments().size() << '\n'
          << "end = (" << format_number(end.v) << ", " << format_number(end.w) << ")\n"
          << "max_v = " << format_number(traj.max_v()) << '\n'
          << "alpha_star = " << format_number(parameter_of_point(spec, traj.max_v())) << '\n'
          << "v_extrema = " << traj.extrema().size() << '\n'
          << "crossings_v1 = " << cc.count << " (" << to_string(cc.tail) << ")\n";

  io::Record params;
  put(params, "n", a.n);
  put(params, "k", a.k);
  finish(ctx, "phase", stem, params, a.cfg.record());
  return kOk;
}

// ---- bifurcation ---------------------------------------------------------

struct BifurcationArgs {
  int n = 0;
  int k = 0;
  ConfigFlags cfg;
  std::optional<double> a_min;
  std::optional<double> a_max;
  int count = 200;
  std::vector<double> values;
  std::string csv;
};

int cmd_bifurcation(Context& ctx, const BifurcationArgs& a) {
  const ProblemSpec spec(a.n, a.k);
  const auto traj = integrate_trajectory(spec, a.cfg.config());
  const double alpha_star = parameter_of_point(spec, traj.max_v());
  std::vector<double> grid = a.values;
  if (grid.empty()) {
    if (a.count < 1) throw DomainError("bifurcation: empty parameter grid");
    const auto th = thresholds(spec);
    const double scale = th.beta ? *th.beta : th.a0;
    const double lo = a.a_min.value_or(0.01 * scale);
    const double hi = a.a_max.value_or(1.5 * std::max(scale, alpha_star));
    if (!(hi > lo) && a.count > 1) throw DomainError("bifurcation: need a-min < a-max");
    for (int i = 0; i < a.count; ++i)
      grid.push_back(a.count == 1 ? lo : lo + (hi - lo) * i / (a.count - 1));
  }
  const auto diag = bifurcation_sweep(traj, grid, a.cfg.eq_radius);

  std::vector<std::vector<double>> rows;
  std::size_t max_count = 0;
  bool frontier_ok = true;
  for (const auto& e : diag.entries) {
    rows.push_back({e.a, static_cast<double>(e.count), e.infinite ? 1.0 : 0.0});
    max_count = std::max(max_count, e.count);
    if (nonexistence_exponential(spec, e.a).basic && e.count != 0) frontier_ok = false;
  }
  const std::string stem = stem_of("bifurcation", a.n, a.k);
  std::ostringstream csv;
  io::write_csv(csv, {"a", "count", "infinite"}, rows);
  write_file(ctx, resolve(ctx, a.csv.empty() ? stem + ".csv" : a.csv), csv.str());

  ctx.out << "termination = " << to_string(diag.termination) << '\n'
          << "alpha_star = " << format_number(diag.alpha_star_estimate) << '\n'
          << "beta = " << (diag.beta_marker ? format_number(*diag.beta_marker) : "none") << '\n'
          << "a0 = " << format_number(a0_exact(a.n).value()) << '\n'
          << "grid_points = " << grid.size() << '\n'
          << "max_count = " << max_count << '\n'
          << "frontier_consistent = " << (frontier_ok ? "true" : "false") << '\n';

  io::Record params;
  put(params, "n", a.n);
  put(params, "k", a.k);
  put(params, "grid_points", grid.size());
  put(params, "a_first", grid.front());
  put(params, "a_last", grid.back());
  finish(ctx, "bifurcation", stem, params, a.cfg.record());
  return frontier_ok ? kOk : kCheckFailed;
}

// ---- profile -------------------------------------------------------------

struct ProfileArgs {
  int n = 0;
  std::optional<int> k;
  std::optional<double> at_v;
  std::optional<double> eps;
  std::size_t grid = 2000;
  double check_tol = 1e-6;
  ConfigFlags cfg;
};

int cmd_profile(Context& ctx, const ProfileArgs& a) {
  const ProblemSpec spec(a.n, a.k.value_or(a.n));
  const int k = spec.k();
  GridSpec grid;
  grid.count = a.grid;
  RadialProfile pr;
  std::string mode;
  if (a.eps) {
    if (!spec.monge_ampere()) throw DomainError("profile: --explicit needs k = n");
    pr = explicit_ma(a.n, *a.eps, grid).profile;
    mode = "explicit";
  } else {
    const double v = *a.at_v;
    if (!(v > 0)) throw DomainError("profile: --at-v must be positive");
    const auto traj = integrate_trajectory(spec, a.cfg.config());
    const auto t_star = traj.first_time_v_equals(v);
    if (!t_star) throw DomainError("profile: v = " + format_number(v) + " is not reached by the trajectory");
    pr = reconstruct_profile(spec, traj, *t_star, grid);
    mode = "at-v";
  }

  const double a_param = *pr.a;
  const double integral = normalization_integral(pr, a.n);
  const double v0 = std::pow(pr.us.back() / k, k);
  const double w0 = *pr.lambda / std::pow(static_cast<double>(k), k);
  const double nonlocal = std::abs(w0 * integral - v0) / v0;
  const double residual = hessian_residual(spec, pr, exponential_rhs(spec, pr, a_param));
  const auto report = identity_radial(spec, pr, NonlinearitySpec::exponential(a_param), a.check_tol);
  const bool pass = residual <= a.check_tol && nonlocal <= a.check_tol &&
                    report.verdict == Verdict::identity_satisfied;

  io::Record rec;
  put(rec, "n", a.n);
  put(rec, "k", k);
  put(rec, "mode", mode);
  put(rec, "hessian_residual", residual);
  put(rec, "normalization_integral", integral);
  put(rec, "nonlocal_consistency", nonlocal);
  put(rec, "boundary_term", report.boundary_term);
  put(rec, "volume_term", report.volume_term);
  put(rec, "identity_residual", report.residual);
  put(rec, "holder_lhs", report.holder_lhs);
  put(rec, "holder_rhs", report.holder_rhs);
  put(rec, "verdict", std::string(to_string(report.verdict)));
  put(rec, "pass", pass);

  const std::string stem = stem_of("profile", a.n, k);
  std::ostringstream csv;
  io::write_profile_csv(csv, pr);
  write_file(ctx, ctx.out_dir / (stem + ".csv"), csv.str());
  write_file(ctx, ctx.out_dir / (stem + ".json"), io::profile_json(pr, rec));
  io::Record summary = rec;
  put(summary, "a", a_param);
  put(summary, "lambda", *pr.lambda);
  write_file(ctx, ctx.out_dir / (stem + ".report.json"), io::to_json(summary));
  for (const auto& [key, value] : summary) ctx.out << key << " = " << value << '\n';

  io::Record params;
  put(params, "n", a.n);
  put(params, "k", k);
  if (a.eps) put(params, "explicit", *a.eps);
  if (a.at_v) put(params, "at_v", *a.at_v);
  put(params, "grid", a.grid);
  io::Record tols = a.cfg.record();
  put(tols, "check_tol", a.check_tol);
  finish(ctx, "profile", stem, params, tols);
  return pass ? kOk : kCheckFailed;
}

// ---- shoot ---------------------------------------------------------------

struct ShootArgs {
  int n = 0;
  int k = 0;
  double p = 0;
  double m = 1;
  double s_cap = 1e6;
  double tol = 1e-12;
  bool sweep = false;
  double p_min = 0;
  double p_max = 0;
  int count = 11;
  std::size_t grid = 2000;
};

int cmd_shoot(Context& ctx, const ShootArgs& a) {
  const ProblemSpec spec(a.n, a.k);
  ShootingOptions opt;
  opt.m = a.m;
  opt.s_cap = a.s_cap;
  opt.rel_tol = a.tol;
  const auto gamma = critical_exponent(spec);
  io::Record params;
  put(params, "n", a.n);
  put(params, "k", a.k);
  put(params, "m", a.m);
  put(params, "s_cap", a.s_cap);
  io::Record tols;
  put(tols, "rel_tol", a.tol);

  if (a.sweep) {
    if (a.count < 2 || !(a.p_max > a.p_min) || !(a.p_min > 0))
      throw DomainError("shoot: sweep needs 0 < p-min < p-max and count >= 2");
    std::vector<std::vector<double>> rows;
    std::optional<double> prev;
    bool monotone = true;
    ctx.out << "p,status,first_zero\n";
    for (int i = 0; i < a.count; ++i) {
      const double p = a.p_min + (a.p_max - a.p_min) * i / (a.count - 1);
      const auto r = shoot_power(spec, p, opt);
      const bool found = r.first_zero().has_value();
      rows.push_back({p, found ? 1.0 : 0.0, r.s_stop()});
      ctx.out << format_number(p) << "," << to_string(r.status()) << ","
              << (found ? format_number(*r.first_zero()) : std::string("none")) << '\n';
      if (found) {
        if (prev && !(*r.first_zero() > *prev)) monotone = false;
        prev = r.first_zero();
      }
    }
    const std::string stem = stem_of("shoot_sweep", a.n, a.k);
    std::ostringstream csv;
    io::write_csv(csv, {"p", "zero_found", "first_zero_or_cap"}, rows);
    write_file(ctx, ctx.out_dir / (stem + ".csv"), csv.str());
    ctx.out << "gamma = " << exponent_text(gamma) << '\n'
            << "monotone = " << (monotone ? "true" : "false") << '\n';
    put(params, "p_min", a.p_min);
    put(params, "p_max", a.p_max);
    put(params, "count", a.count);
    finish(ctx, "shoot", stem, params, tols);
    return monotone ? kOk : kCheckFailed;
  }

  if (!(a.p > 0)) throw DomainError("shoot: --p must be positive");
  const auto r = shoot_power(spec, a.p, opt);
  const std::string stem = stem_of("shoot", a.n, a.k);
  std::vector<std::vector<double>> rows;
  for (const auto& s : r.samples()) rows.push_back({s[0], s[1], s[2]});
  std::ostringstream csv;
  io::write_csv(csv, {"s", "u", "u_s"}, rows);
  write_file(ctx, ctx.out_dir / (stem + ".csv"), csv.str());

  io::Record rec;
  put(rec, "status", std::string(to_string(r.status())));
  put(rec, "p", a.p);
  put(rec, "gamma", exponent_text(gamma));
  put(rec, "m", a.m);
  put(rec, "s_cap", a.s_cap);
  put(rec, "s_stop", r.s_stop());
  if (r.first_zero()) put(rec, "first_zero", *r.first_zero());
  put(rec, "series_slope", r.series_slope());
  put(rec, "radius_exponent_in_m", (a.k - a.p) / a.k);
  put(rec, "eigenvalue_regime", r.eigenvalue_regime());
  if (r.first_zero() && !r.eigenvalue_regime()) {
    GridSpec g;
    g.count = a.grid;
    std::ostringstream unit;
    io::write_profile_csv(unit, rescale_to_unit_ball(r, g));
    write_file(ctx, ctx.out_dir / (stem + ".unit.csv"), unit.str());
  }
  write_file(ctx, ctx.out_dir / (stem + ".json"), io::to_json(rec));
  for (const auto& [key, value] : rec) ctx.out << key << " = " << value << '\n';
  if (r.eigenvalue_regime())
    ctx.out << "note: p = k is the eigenvalue regime; existence theory out of scope\n";
  put(params, "p", a.p);
  finish(ctx, "shoot", stem, params, tols);
  return kOk;
}

// ---- audit ---------------------------------------------------------------

struct AuditArgs {
  std::string file;
  int n = 0;
  int k = 0;
  std::optional<double> power;
  std::optional<double> exponential;
  double tol = 1e-6;
};

int cmd_audit(Context& ctx, const AuditArgs& a) {
  const ProblemSpec spec(a.n, a.k);
  std::ifstream in(a.file);
  if (!in) throw DomainError("audit: cannot open " + a.file);
  const RadialProfile pr = io::read_profile_csv(in);
  const NonlinearitySpec nl =
      a.power ? NonlinearitySpec::power(*a.power) : NonlinearitySpec::exponential(*a.exponential);
  const auto r = identity_radial(spec, pr, nl, a.tol);

  io::Record rec;
  put(rec, "profile", fs::path(a.file).filename().string());
  put(rec, "n", a.n);
  put(rec, "k", a.k);
  put(rec, "nonlinearity", std::string(to_string(nl.kind)));
  put(rec, "parameter", nl.parameter);
  put(rec, "boundary_term", r.boundary_term);
  put(rec, "volume_term", r.volume_term);
  put(rec, "residual", r.residual);
  put(rec, "holder_lhs", r.holder_lhs);
  put(rec, "holder_rhs", r.holder_rhs);
  put(rec, "mass", r.mass);
  put(rec, "verdict", std::string(to_string(r.verdict)));
  if (nl.kind == NonlinearityKind::exponential_nonlocal && nl.parameter > 0) {
    const auto v = nonexistence_exponential(spec, nl.parameter);
    put(rec, "alpha1", v.alpha1);
    put(rec, "alpha2", v.alpha2);
    put(rec, "basic_nonexistence", v.basic);
    put(rec, "improved_nonexistence", v.improved);
  }
  if (nl.kind == NonlinearityKind::power) {
    const auto sc = power_sign_check(spec, pr, nl.parameter);
    put(rec, "max_volume_integrand", sc.max_volume_integrand);
    put(rec, "supercritical", critical_exponent(spec).reached_by(nl.parameter));
  }
  const std::string stem = stem_of("audit", a.n, a.k);
  write_file(ctx, ctx.out_dir / (stem + ".json"), io::to_json(rec));
  for (const auto& [key, value] : rec) ctx.out << key << " = " << value << '\n';

  io::Record params;
  put(params, "profile", a.file);
  put(params, "n", a.n);
  put(params, "k", a.k);
  put(params, "nonlinearity", std::string(to_string(nl.kind)));
  put(params, "parameter", nl.parameter);
  io::Record tols;
  put(tols, "identity_tol", a.tol);
  finish(ctx, "audit", stem, params, tols);
  return r.verdict == Verdict::identity_satisfied ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial complex k-Hessian problems on the unit ball"};
  app.require_subcommand(1);
  std::string out_dir;
  app.add_option("--out-dir", out_dir, std::string("output directory (default: $") + kOutDirEnv + " or .)");

  ExponentsArgs ex;
  auto* s_ex = app.add_subcommand("exponents", "critical exponent, thresholds, linearisation");
  s_ex->add_option("--n", ex.n, "complex dimension")->required();
  s_ex->add_option("--k", ex.k, "Hessian order")->required();
  s_ex->add_option("--p", ex.p, "power for the non-existence verdict");
  s_ex->add_option("--d", ex.d, "real dimension for the Moser-Trudinger constants");

  PhaseArgs ph;
  auto* s_ph = app.add_subcommand("phase", "integrate the phase-plane trajectory");
  s_ph->add_option("--n", ph.n)->required();
  s_ph->add_option("--k", ph.k)->required();
  s_ph->add_option("--csv", ph.csv, "trajectory CSV path");
  s_ph->add_option("--svg", ph.svg, "phase diagram SVG path");
  ph.cfg.attach(s_ph);

  BifurcationArgs bf;
  auto* s_bf = app.add_subcommand("bifurcation", "solution counts along a parameter grid");
  s_bf->add_option("--n", bf.n)->required();
  s_bf->add_option("--k", bf.k)->required();
  s_bf->add_option("--a-min", bf.a_min);
  s_bf->add_option("--a-max", bf.a_max);
  s_bf->add_option("--count", bf.count)->capture_default_str();
  s_bf->add_option("--a", bf.values, "explicit parameter values")->delimiter(',');
  s_bf->add_option("--csv", bf.csv);
  bf.cfg.attach(s_bf);

  ProfileArgs pf;
  auto* s_pf = app.add_subcommand("profile", "reconstruct or sample a profile and audit it");
  s_pf->add_option("--n", pf.n)->required();
  s_pf->add_option("--k", pf.k);
  auto* o_v = s_pf->add_option("--at-v", pf.at_v, "trajectory point with this v");
  auto* o_e = s_pf->add_option("--explicit", pf.eps, "explicit solution with this eps");
  o_v->excludes(o_e);
  s_pf->add_option("--grid", pf.grid)->capture_default_str();
  s_pf->add_option("--check-tol", pf.check_tol)->capture_default_str();
  pf.cfg.attach(s_pf);

  ShootArgs sh;
  auto* s_sh = app.add_subcommand("shoot", "shooting for the power nonlinearity");
  s_sh->add_option("--n", sh.n)->required();
  s_sh->add_option("--k", sh.k)->required();
  s_sh->add_option("--p", sh.p);
  s_sh->add_option("--m", sh.m)->capture_default_str();
  s_sh->add_option("--s-cap", sh.s_cap)->capture_default_str();
  s_sh->add_option("--tol", sh.tol)->capture_default_str();
  s_sh->add_option("--grid", sh.grid)->capture_default_str();
  s_sh->add_flag("--sweep", sh.sweep, "sweep p over [p-min, p-max]");
  s_sh->add_option("--p-min", sh.p_min);
  s_sh->add_option("--p-max", sh.p_max);
  s_sh->add_option("--count", sh.count)->capture_default_str();

  AuditArgs au;
  auto* s_au = app.add_subcommand("audit", "Pohozaev audit of a profile CSV");
  s_au->add_option("--profile", au.file)->required();
  s_au->add_option("--n", au.n)->required();
  s_au->add_option("--k", au.k)->required();
  auto* o_pw = s_au->add_option("--power", au.power);
  auto* o_ex = s_au->add_option("--exp", au.exponential);
  o_pw->excludes(o_ex);
  s_au->add_option("--tol", au.tol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Context ctx{out, err, ".", utc_timestamp(), {}};
  if (!out_dir.empty()) {
    ctx.out_dir = out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    ctx.out_dir = env;
  }

  try {
    fs::create_directories(ctx.out_dir);
    if (s_ex->parsed()) return cmd_exponents(ctx, ex);
    if (s_ph->parsed()) return cmd_phase(ctx, ph);
    if (s_bf->parsed()) return cmd_bifurcation(ctx, bf);
    if (s_pf->parsed()) {
      if (!pf.at_v && !pf.eps) throw DomainError("profile: one of --at-v or --explicit is required");
      return cmd_profile(ctx, pf);
    }
    if (s_sh->parsed()) return cmd_shoot(ctx, sh);
    if (s_au->parsed()) {
      if (!au.power && !au.exponential) throw DomainError("audit: one of --power or --exp is required");
      return cmd_audit(ctx, au);
    }
  } catch (const IntegrationFault& e) {
    err << "integration fault: " << e.what() << '\n';
    return kFault;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kFault;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"khess"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace khess::cli
