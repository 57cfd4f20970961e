#include "khess/phase_plane.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "khess/errors.hpp"
#include "khess/quadrature.hpp"

namespace khess {

namespace {

// v^{1/k} with 0^{1/k} = 0; negative round-off below zero is clamped.
double root_k(double v, int k) {
  if (v <= 0) return 0.0;
  return k == 1 ? v : std::pow(v, 1.0 / k);
}

void check_quadrant(PhasePoint p) {
  if (!(p.v >= 0) || !(p.w >= 0))
    throw DomainError("phase point must lie in the closed positive quadrant");
}

double v_slope(const ProblemSpec& spec, const ode::State<2>& y) {
  return -spec.gap() * y[0] + y[1];
}

}  // namespace

FieldValue vector_field(const ProblemSpec& spec, PhasePoint p) {
  check_quadrant(p);
  return {-spec.gap() * p.v + p.w, spec.k() * p.w * (1.0 - root_k(p.v, spec.k()))};
}

PhasePoint seed_near_origin(const ProblemSpec& spec, double delta) {
  if (!(delta > 0)) throw DomainError("seed_near_origin: delta must be positive");
  return {delta / spec.n(), delta};
}

std::vector<double> unstable_manifold_series(const ProblemSpec& spec, int terms) {
  if (terms < 1) throw DomainError("unstable_manifold_series: need at least one term");
  const double n = spec.n();
  const double k = spec.k();
  std::vector<double> c{n};
  for (int j = 1; j < terms; ++j) {
    double acc = k * c[j - 1];
    for (int i = 1; i < j; ++i) acc += c[i] * (1.0 + i / k) * c[j - i];
    c.push_back(-acc / (n + j));
  }
  if (spec.monge_ampere()) std::fill(c.begin() + std::min<std::ptrdiff_t>(2, terms), c.end(), 0.0);
  return c;
}

PhasePoint seed_on_manifold(const ProblemSpec& spec, double delta) {
  const PhasePoint lin = seed_near_origin(spec, delta);
  const auto c = unstable_manifold_series(spec);
  const double y = root_k(lin.v, spec.k());
  double poly = 0;
  for (std::size_t j = c.size(); j-- > 0;) poly = poly * y + c[j];
  return {lin.v, lin.v * poly};
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0) || !(t_max > 0) || !(eq_radius > 0) ||
      !(seed_delta > 0) || !(max_step > 0))
    throw DomainError("integrator configuration values must all be strictly positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::equilibrium_ball: return "equilibrium-ball";
    case Termination::integrable_limit: return "integrable-limit";
    case Termination::time_cap: return "time-cap";
  }
  return "unknown";
}

std::string_view to_string(CrossingTail t) {
  switch (t) {
    case CrossingTail::settled: return "settled";
    case CrossingTail::spiral_infinite_at_center: return "spiral-infinite-at-center";
    case CrossingTail::unresolved: return "unresolved";
  }
  return "unknown";
}

Trajectory::Trajectory(ProblemSpec spec, ode::DenseSolution<2> solution, Termination termination,
                       double seed_scale)
    : spec_(spec),
      solution_(std::move(solution)),
      termination_(termination),
      seed_scale_(seed_scale) {
  if (solution_.empty()) throw DomainError("trajectory needs at least one step");
  locate_extrema();
}

std::vector<TrajectorySample> Trajectory::samples() const {
  std::vector<TrajectorySample> out;
  const auto segs = solution_.segments();
  out.reserve(segs.size() + 1);
  out.push_back({segs.front().t0, {segs.front().r[0][0], segs.front().r[0][1]}});
  for (const auto& s : segs) {
    const auto y = s.end();
    out.push_back({s.t1(), {y[0], y[1]}});
  }
  return out;
}

PhasePoint Trajectory::at(double t) const {
  if (!(t >= t_begin()) || !(t <= t_end()))
    throw DomainError("trajectory: t outside [t_begin, t_end]");
  const auto y = solution_.at(t);
  return {y[0], y[1]};
}

PhasePoint Trajectory::end_point() const {
  const auto y = solution_.segments().back().end();
  return {y[0], y[1]};
}

void Trajectory::locate_extrema() {
  extrema_.clear();
  for (const auto& seg : solution_.segments()) {
    const double g0 = v_slope(spec_, seg.start());
    const double g1 = v_slope(spec_, seg.end());
    if (g0 == 0.0 || (g0 > 0) == (g1 > 0) || g1 == 0.0) {
      if (g1 == 0.0 && g0 != 0.0) extrema_.push_back({seg.t1(), seg.end()[0], g0 > 0});
      continue;
    }
    const double t = quad::find_root([&](double x) { return v_slope(spec_, seg.at(x)); }, seg.t0,
                                     seg.t1());
    extrema_.push_back({t, seg.at(t)[0], g0 > 0});
  }
}

double Trajectory::max_v() const {
  double m = std::max(solution_.segments().front().r[0][0], end_point().v);
  for (const auto& e : extrema_)
    if (e.maximum) m = std::max(m, e.v);
  return m;
}

namespace {

// First t in [ta, tb] with component(t) = level, scanning the dense segments.
std::optional<double> first_level_time(const ode::DenseSolution<2>& sol, std::size_t comp,
                                       double level, double ta, double tb,
                                       std::span<const VExtremum> extrema) {
  for (const auto& seg : sol.segments()) {
    if (seg.t1() < ta) continue;
    if (seg.t0 > tb) break;
    const double a = std::max(seg.t0, ta);
    const double b = std::min(seg.t1(), tb);
    const auto f = [&](double x) { return seg.at(x)[comp] - level; };
    const double fa = f(a);
    if (fa == 0.0) return a;
    const double fb = f(b);
    if ((fa > 0) != (fb > 0)) return quad::find_root(f, a, b);
    // A v-extremum inside the segment can hide a double crossing.
    if (comp == 0) {
      for (const auto& e : extrema) {
        if (e.t <= a || e.t >= b) continue;
        const double fe = f(e.t);
        if ((fe > 0) != (fa > 0) || fe == 0.0) return quad::find_root(f, a, e.t);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> Trajectory::first_time_v_equals(double level) const {
  return first_level_time(solution_, 0, level, t_begin(), t_end(), extrema_);
}

std::optional<double> Trajectory::first_time_w_equals(double level) const {
  return first_level_time(solution_, 1, level, t_begin(), t_end(), {});
}

Trajectory integrate_trajectory(const ProblemSpec& spec, const IntegratorConfig& config) {
  config.validate();
  const int g = spec.gap();
  const int k = spec.k();
  const ode::Rhs<2> rhs = [g, k](double, const ode::State<2>& y, ode::State<2>& dy) {
    const double v = std::max(y[0], 0.0);
    const double w = std::max(y[1], 0.0);
    dy[0] = -g * v + w;
    dy[1] = k * w * (1.0 - root_k(v, k));
  };

  Termination reason = Termination::time_cap;
  const ode::StepObserver<2> observer = [&](const ode::DenseSegment<2>& seg) {
    const auto y = seg.end();
    if (g > 0) {
      if (std::hypot(y[0] - 1.0, y[1] - g) < config.eq_radius) {
        reason = Termination::equilibrium_ball;
        return true;
      }
    } else if (y[1] < config.abs_tol && y[0] > 1.0) {
      reason = Termination::integrable_limit;
      return true;
    }
    return false;
  };

  const PhasePoint seed = seed_on_manifold(spec, config.seed_delta);
  ode::StepControl ctl;
  ctl.rel_tol = config.rel_tol;
  ctl.max_step = config.max_step;
  ctl.initial_step = std::min(1e-3, config.max_step);
  auto sol = ode::integrate<2>(rhs, 0.0, {seed.v, seed.w}, config.t_max,
                               {config.abs_tol, config.abs_tol}, ctl, observer);
  return Trajectory(spec, std::move(sol), reason, config.seed_delta);
}

double lyapunov(const ProblemSpec& spec, PhasePoint p) {
  if (spec.monge_ampere()) throw DomainError("lyapunov: undefined for k = n");
  if (!(p.w > 0) || !(p.v >= 0)) throw DomainError("lyapunov: need v >= 0 and w > 0");
  const double k = spec.k();
  const double g = spec.gap();
  const double vk = std::pow(p.v, (k + 1.0) / k);
  return k * (k / (k + 1.0) * vk - p.v + 1.0 / (k + 1.0)) + (p.w - g) - g * std::log(p.w / g);
}

double lyapunov_derivative(const ProblemSpec& spec, PhasePoint p) {
  if (spec.monge_ampere()) throw DomainError("lyapunov_derivative: undefined for k = n");
  if (!(p.w > 0) || !(p.v >= 0)) throw DomainError("lyapunov_derivative: need v >= 0 and w > 0");
  return -static_cast<double>(spec.gap()) * spec.k() * (root_k(p.v, spec.k()) - 1.0) * (p.v - 1.0);
}

Gradient lyapunov_gradient(const ProblemSpec& spec, PhasePoint p) {
  if (spec.monge_ampere()) throw DomainError("lyapunov_gradient: undefined for k = n");
  if (!(p.w > 0) || !(p.v >= 0)) throw DomainError("lyapunov_gradient: need v >= 0 and w > 0");
  return {spec.k() * (root_k(p.v, spec.k()) - 1.0), 1.0 - spec.gap() / p.w};
}

double region_exponent(const ProblemSpec& spec) {
  const auto lin = equilibrium_linearization(spec);
  if (!lin.b_range) throw DomainError("invariant region needs n - k >= 4");
  return lin.b_range->second;
}

namespace {

void check_region_exponent(const ProblemSpec& spec, double b) {
  const auto lin = equilibrium_linearization(spec);
  if (!lin.b_range) throw DomainError("invariant region needs n - k >= 4");
  const auto [lo, hi] = *lin.b_range;
  const double slack = 1e-12 * std::max(1.0, hi);
  if (b < lo - slack || b > hi + slack)
    throw DomainError("region exponent b outside the admissible range");
}

}  // namespace

double region_boundary_h(const ProblemSpec& spec, double b, double tau) {
  check_region_exponent(spec, b);
  if (!(tau > 0) || !(tau < 1)) throw DomainError("region_boundary_h: tau must lie in (0,1)");
  const double k = spec.k();
  return k * (1.0 - std::pow(tau, 1.0 / k)) - b * spec.gap() * (std::pow(tau, b - 1.0) - 1.0);
}

double region_boundary_h_slope_at_one(const ProblemSpec& spec, double b) {
  check_region_exponent(spec, b);
  return spec.gap() * b * (1.0 - b) - 1.0;
}

bool in_invariant_region(const ProblemSpec& spec, PhasePoint p) {
  const double b = region_exponent(spec);
  if (p.v < 0 || p.v > 1) return false;
  const double g = spec.gap();
  return g * p.v <= p.w && p.w <= g * std::pow(p.v, b);
}

double parameter_of_point(const ProblemSpec& spec, double v) {
  if (!(v >= 0)) throw DomainError("parameter_of_point: v must be nonnegative");
  return std::pow(static_cast<double>(spec.k()), spec.k()) *
         hessian_energy_constant_exact(spec).value() * v;
}

double point_of_parameter(const ProblemSpec& spec, double a) {
  return a / parameter_of_point(spec, 1.0);
}

CrossingCount count_crossings(const Trajectory& traj, double v_star, double eq_radius) {
  if (!(v_star > 0)) throw DomainError("count_crossings: v_star must be positive");
  CrossingCount cc;
  const double tol = 1e-12 * std::max(1.0, v_star);

  // Monotone pieces between consecutive nodes (start, interior extrema, end).
  struct Node {
    double t;
    double v;
  };
  std::vector<Node> nodes;
  nodes.push_back({traj.t_begin(), traj.at(traj.t_begin()).v});
  for (const auto& e : traj.extrema()) nodes.push_back({e.t, e.v});
  nodes.push_back({traj.t_end(), traj.end_point().v});

  for (const auto& nd : nodes)
    if (std::abs(nd.v - v_star) <= tol) ++cc.count;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = std::min(nodes[i].v, nodes[i + 1].v);
    const double hi = std::max(nodes[i].v, nodes[i + 1].v);
    if (v_star > lo + tol && v_star < hi - tol) {
      ++cc.count;
      if (auto t = first_level_time(traj.dense(), 0, v_star, nodes[i].t, nodes[i + 1].t, {}))
        cc.times.push_back(*t);
    }
  }

  if (traj.termination() == Termination::time_cap) {
    cc.tail = CrossingTail::unresolved;
  } else if (equilibrium_linearization(traj.spec()).kind == EquilibriumKind::spiral &&
             traj.termination() == Termination::equilibrium_ball &&
             std::abs(v_star - 1.0) <= eq_radius) {
    cc.tail = CrossingTail::spiral_infinite_at_center;
  }
  return cc;
}

BifurcationDiagram bifurcation_sweep(const Trajectory& traj, std::span<const double> a_grid,
                                     double eq_radius) {
  if (a_grid.empty()) throw DomainError("bifurcation_sweep: empty parameter grid");
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > 0)) throw DomainError("bifurcation_sweep: parameters must be positive");
    if (i > 0 && !(a_grid[i] > a_grid[i - 1]))
      throw DomainError("bifurcation_sweep: parameter grid must be strictly increasing");
  }
  const ProblemSpec& spec = traj.spec();
  BifurcationDiagram d;
  d.termination = traj.termination();
  d.alpha_star_estimate = parameter_of_point(spec, traj.max_v());
  if (!spec.monge_ampere()) d.beta_marker = beta_exact(spec).value();
  d.entries.reserve(a_grid.size());
  for (double a : a_grid) {
    const auto cc = count_crossings(traj, point_of_parameter(spec, a), eq_radius);
    d.entries.push_back({a, cc.count, cc.tail == CrossingTail::spiral_infinite_at_center});
  }
  return d;
}

BifurcationDiagram bifurcation_sweep(const ProblemSpec& spec, std::span<const double> a_grid,
                                     const IntegratorConfig& config) {
  const Trajectory traj = integrate_trajectory(spec, config);
  return bifurcation_sweep(traj, a_grid, config.eq_radius);
}

}  // namespace khess
