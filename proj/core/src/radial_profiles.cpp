#include "khess/radial_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "khess/errors.hpp"
#include "khess/quadrature.hpp"

namespace khess {

namespace {

double signed_pow(double x, int k) { return std::pow(std::abs(x), k - 1) * x; }

double binom_d(int n, int k) { return static_cast<double>(binomial(n, k)); }

// Uniform spacing in log s when the grid has it.
std::optional<double> try_log_spacing(std::span<const double> s) {
  try {
    return quad::log_spacing(s);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

// int_{s_0}^{1} g ds as an integral in t = log s.
double integral_over_grid(std::span<const double> s, std::span<const double> g) {
  std::vector<double> gt(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) gt[i] = g[i] * s[i];
  if (auto h = try_log_spacing(s)) return quad::gregory(gt, *h);
  double acc = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    acc += 0.5 * (gt[i] + gt[i + 1]) * std::log(s[i + 1] / s[i]);
  return acc;
}

// I[i] = int_{s_i}^{1} g ds.
std::vector<double> cumulative_over_grid(std::span<const double> s, std::span<const double> g) {
  std::vector<double> gt(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) gt[i] = g[i] * s[i];
  if (auto h = try_log_spacing(s)) return quad::cumulative_from_right(gt, *h);
  std::vector<double> out(s.size(), 0.0);
  for (std::size_t i = s.size() - 1; i-- > 0;)
    out[i] = out[i + 1] + 0.5 * (gt[i] + gt[i + 1]) * std::log(s[i + 1] / s[i]);
  return out;
}

// Integral with the piece below s_0 taken from g ~ g(s_0) (s/s_0)^w.
double integral_with_tail(std::span<const double> s, std::span<const double> g, double w) {
  return integral_over_grid(s, g) + g[0] * s[0] / (w + 1.0);
}

double conservative_hessian(const ProblemSpec& spec, const RadialProfile& pr,
                            std::span<const double> q, double h, std::size_t i) {
  const double dq_dt = quad::centered_derivative(q, h, i);
  return binom_d(spec.n() - 1, spec.k() - 1) / spec.k() * dq_dt / std::pow(pr.s[i], spec.n());
}

std::vector<double> flux_samples(const ProblemSpec& spec, const RadialProfile& pr) {
  std::vector<double> q(pr.size());
  for (std::size_t j = 0; j < pr.size(); ++j)
    q[j] = signed_pow(pr.us[j], spec.k()) * std::pow(pr.s[j], spec.n());
  return q;
}

RadialProfile sample_explicit(int n, double eps, const GridSpec& grid) {
  if (n < 1) throw DomainError("explicit profile needs n >= 1");
  if (!(eps > 0)) throw DomainError("explicit profile needs eps > 0");
  RadialProfile pr;
  pr.s = quad::log_grid(grid.s_min, 1.0, grid.count);
  pr.u.resize(pr.s.size());
  pr.us.resize(pr.s.size());
  const double e2 = eps * eps;
  for (std::size_t i = 0; i < pr.s.size(); ++i) {
    pr.u[i] = (n + 1) * std::log((pr.s[i] + e2) / (1.0 + e2));
    pr.us[i] = (n + 1) / (pr.s[i] + e2);
  }
  pr.u.back() = 0.0;
  return pr;
}

}  // namespace

double radial_integral(const RadialProfile& profile, std::span<const double> g,
                       double tail_power) {
  if (g.size() != profile.size()) throw DomainError("radial_integral: size mismatch");
  if (profile.size() < 2) throw DomainError("radial_integral: profile too short");
  return integral_with_tail(profile.s, g, tail_power);
}

double radial_integral_endpoint(const RadialProfile& profile, std::span<const double> g,
                                double tail_power, double q) {
  constexpr std::size_t kNodes = 8;
  const std::size_t N = profile.size();
  if (g.size() != N) throw DomainError("radial_integral_endpoint: size mismatch");
  if (q <= 0 || N < kNodes + 13) return radial_integral(profile, g, tail_power);
  const std::size_t j0 = N - 1 - kNodes;
  const auto s = std::span<const double>(profile.s);
  const double bulk = integral_with_tail(s.first(j0 + 1), g.first(j0 + 1), tail_power);
  std::vector<double> x(kNodes);
  std::vector<double> G(kNodes);
  for (std::size_t i = 0; i < kNodes; ++i) {
    x[i] = 1.0 - s[j0 + i];
    G[i] = g[j0 + i] / std::pow(x[i], q);
  }
  return bulk + quad::product_endpoint(x, G, q, 1.0 - s[j0]);
}

void RadialProfile::validate() const {
  if (s.size() < 2) throw DomainError("profile needs at least two grid points");
  if (u.size() != s.size() || us.size() != s.size())
    throw DomainError("profile columns have different lengths");
  if (!(s.front() > 0)) throw DomainError("profile grid must lie in (0, 1]");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1]))
      throw DomainError("profile grid not strictly increasing at index " + std::to_string(i));
  if (s.back() != 1.0) throw DomainError("profile grid must end at s = 1");
  if (u.back() != 0.0) throw DomainError("profile violates u(1) = 0");
}

double radial_hessian(const ProblemSpec& spec, const RadialProfile& profile, std::size_t i) {
  const double h = quad::log_spacing(profile.s);
  const auto q = flux_samples(spec, profile);
  return conservative_hessian(spec, profile, q, h, i);
}

double hessian_residual(const ProblemSpec& spec, const RadialProfile& profile,
                        std::span<const double> rhs) {
  if (rhs.size() != profile.size()) throw DomainError("rhs and profile sizes differ");
  const double h = quad::log_spacing(profile.s);
  const auto q = flux_samples(spec, profile);
  const std::size_t w = quad::kStencilHalfWidth;
  if (profile.size() < 2 * w + 1) throw DomainError("profile too short for the stencil");
  double worst = 0;
  for (std::size_t i = w; i + w < profile.size(); ++i) {
    const double sk = conservative_hessian(spec, profile, q, h, i);
    worst = std::max(worst, std::abs(sk - rhs[i]) / (1.0 + std::abs(rhs[i])));
  }
  return worst;
}

double normalization_integral(const RadialProfile& profile, int n) {
  if (n < 1) throw DomainError("normalization_integral: n must be positive");
  if (profile.size() < 2) throw DomainError("normalization_integral: profile too short");
  std::vector<double> g(profile.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::exp(-profile.u[i]) * std::pow(profile.s[i], n - 1);
  // e^{-u} s^n must decay towards the centre for the tail estimate to hold
  if (g[0] * profile.s[0] > g[1] * profile.s[1])
    throw DomainError("normalization_integral: integrand grows towards s = 0 (non-convergent tail)");
  return integral_with_tail(profile.s, g, n - 1);
}

std::vector<double> exponential_rhs(const ProblemSpec& spec, const RadialProfile& profile,
                                    double a) {
  const double vol = 0.5 * sphere_volume(2 * spec.n()) * normalization_integral(profile, spec.n());
  std::vector<double> f(profile.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a * std::exp(-profile.u[i]) / vol;
  return f;
}

RadialProfile reconstruct_profile(const ProblemSpec& spec, const Trajectory& traj, double t_star,
                                  const GridSpec& grid) {
  if (!(spec == traj.spec())) throw DomainError("reconstruct_profile: trajectory belongs to another spec");
  if (!(t_star >= traj.t_begin()) || !(t_star <= traj.t_end()))
    throw DomainError("reconstruct_profile: t_star outside the trajectory range");
  const int k = spec.k();
  const double tb = traj.t_begin();
  const auto root = [k](double v) { return v <= 0 ? 0.0 : std::pow(v, 1.0 / k); };

  RadialProfile pr;
  pr.s = quad::log_grid(grid.s_min, 1.0, grid.count);
  const std::size_t N = pr.s.size();
  std::vector<double> t(N);
  for (std::size_t i = 0; i < N; ++i) t[i] = t_star + std::log(pr.s[i]);
  t.back() = t_star;

  // Below the seed, y = v^{1/k} follows the unstable manifold of the origin,
  // y_t = y (1 + sum_{m>=1} c_m y^m / k), integrated backwards in sigma = tb - t.
  std::optional<ode::DenseSolution<1>> pre;
  if (t.front() < tb) {
    const auto c = unstable_manifold_series(spec);
    const ode::Rhs<1> back = [c, k](double, const ode::State<1>& y, ode::State<1>& dy) {
      const double x = std::max(y[0], 0.0);
      double poly = 0;
      for (std::size_t j = c.size(); j-- > 1;) poly = (poly + c[j]) * x;
      dy[0] = -x * (1.0 + poly / k);
    };
    ode::StepControl ctl;
    ctl.rel_tol = 1e-12;
    ctl.max_step = 0.25;
    pre = ode::integrate<1>(back, 0.0, {root(traj.at(tb).v)}, tb - t.front() + 1e-9, {1e-300},
                            ctl);
  }
  const auto y_at = [&](double x) {
    return x >= tb ? root(traj.at(x).v) : std::max(pre->at(tb - x)[0], 0.0);
  };

  const auto interval = [&](double a, double b) {
    double acc = 0;
    if (a < tb) {
      const double hi = std::min(b, tb);
      const auto& segs = pre->segments();
      for (std::size_t j = pre->locate(tb - hi); j < segs.size(); ++j) {
        const auto& seg = segs[j];
        if (seg.t0 >= tb - a) break;
        const double lo = std::max(seg.t0, tb - hi);
        const double up = std::min(seg.t1(), tb - a);
        if (up > lo)
          acc += quad::gauss_legendre([&](double x) { return std::max(seg.at(x)[0], 0.0); }, lo, up);
      }
      a = hi;
    }
    if (b <= a) return acc;
    const auto& dense = traj.dense();
    for (std::size_t j = dense.locate(a); j < dense.segments().size(); ++j) {
      const auto& seg = dense.segments()[j];
      if (seg.t0 >= b) break;
      const double lo = std::max(seg.t0, a);
      const double up = std::min(seg.t1(), b);
      if (up > lo) acc += quad::gauss_legendre([&](double x) { return root(seg.at(x)[0]); }, lo, up);
    }
    return acc;
  };

  pr.u.assign(N, 0.0);
  pr.us.assign(N, 0.0);
  for (std::size_t i = N - 1; i-- > 0;) pr.u[i] = pr.u[i + 1] - k * interval(t[i], t[i + 1]);
  for (std::size_t i = 0; i < N; ++i) pr.us[i] = k * y_at(t[i]) / pr.s[i];
  const PhasePoint p0 = traj.at(t_star);
  pr.a = parameter_of_point(spec, p0.v);
  pr.lambda = std::pow(static_cast<double>(k), k) * p0.w;
  return pr;
}

double explicit_ma_parameter(int n, double eps) {
  if (!(eps > 0)) throw DomainError("explicit_ma_parameter: eps must be positive");
  return a0_exact(n).value() / std::pow(1.0 + eps * eps, n);
}

ExplicitSolution explicit_ma(int n, double eps, const GridSpec& grid) {
  ExplicitSolution out;
  out.profile = sample_explicit(n, eps, grid);
  out.a_eps = explicit_ma_parameter(n, eps);
  const double e2 = eps * eps;
  out.profile.a = out.a_eps;
  out.profile.lambda = n * std::pow(n + 1.0, n) * e2 / std::pow(1.0 + e2, n + 1);
  return out;
}

PhasePoint explicit_ma_phase(int n, double eps, double s) {
  if (n < 1) throw DomainError("explicit_ma_phase: n must be positive");
  if (!(eps > 0)) throw DomainError("explicit_ma_phase: eps must be positive");
  if (!(s >= 0)) throw DomainError("explicit_ma_phase: s must be non-negative");
  const double e2 = eps * eps;
  const double x = s / (s + e2);
  const double v = std::pow((n + 1.0) / n, n) * std::pow(x, n);
  const double w = std::pow(n + 1.0, n) / std::pow(static_cast<double>(n), n - 1) * e2 *
                   std::pow(s, n) / std::pow(s + e2, n + 1);
  return {v, w};
}

std::string_view to_string(ShootingStatus s) {
  return s == ShootingStatus::zero_found ? "zero-found" : "no-zero-within-cap";
}

ShootingResult::ShootingResult(ProblemSpec spec, double p, double m, double s_start, double u_s0,
                               ode::DenseSolution<2> solution, std::optional<double> first_zero)
    : spec_(spec),
      p_(p),
      m_(m),
      s_start_(s_start),
      us0_(u_s0),
      sol_(std::move(solution)),
      first_zero_(first_zero) {}

double ShootingResult::s_stop() const {
  return first_zero_ ? *first_zero_ : std::exp(sol_.t_end());
}

double ShootingResult::u(double s) const {
  if (s < s_start_) return -m_ + us0_ * s;
  if (first_zero_ && s >= *first_zero_) return 0.0;
  return sol_.at(std::min(std::log(s), sol_.t_end()))[0];
}

double ShootingResult::us(double s) const {
  if (s < s_start_) return us0_;
  const double Q = sol_.at(std::min(std::log(s), sol_.t_end()))[1];
  return Q <= 0 ? 0.0 : std::pow(Q, 1.0 / spec_.k());
}

std::vector<std::array<double, 3>> ShootingResult::samples() const {
  std::vector<std::array<double, 3>> out;
  const auto segs = sol_.segments();
  const auto push = [&](double t, const ode::State<2>& y) {
    const double s = std::exp(t);
    if (first_zero_ && s > *first_zero_) return;
    out.push_back({s, y[0], y[1] <= 0 ? 0.0 : std::pow(y[1], 1.0 / spec_.k())});
  };
  push(segs.front().t0, segs.front().start());
  for (const auto& seg : segs) push(seg.t1(), seg.end());
  if (first_zero_) out.push_back({*first_zero_, 0.0, us(*first_zero_)});
  return out;
}

ShootingResult shoot_power(const ProblemSpec& spec, double p, const ShootingOptions& opt) {
  if (!(p > 0)) throw DomainError("shoot_power: p must be positive");
  if (!(opt.m > 0)) throw DomainError("shoot_power: m must be positive");
  if (!(opt.s_start > 0) || !(opt.s_cap > opt.s_start))
    throw DomainError("shoot_power: need 0 < s_start < s_cap");
  const int n = spec.n();
  const int k = spec.k();
  const double c = binom_d(n - 1, k - 1);
  const double us0 = std::pow(k * std::pow(opt.m, p) / (n * c), 1.0 / k);

  // t = log s, state (u, Q = u_s^k)
  const ode::Rhs<2> rhs = [=](double t, const ode::State<2>& y, ode::State<2>& dy) {
    const double Q = std::max(y[1], 0.0);
    dy[0] = std::exp(t) * std::pow(Q, 1.0 / k);
    dy[1] = k / c * std::pow(std::max(-y[0], 0.0), p) - n * Q;
  };
  const ode::StepObserver<2> stop = [](const ode::DenseSegment<2>& seg) { return seg.end()[0] >= 0; };
  ode::StepControl ctl;
  ctl.rel_tol = opt.rel_tol;
  ctl.max_step = 0.1;
  ctl.initial_step = 1e-4;
  const double t0 = std::log(opt.s_start);
  auto sol = ode::integrate<2>(rhs, t0, {-opt.m + us0 * opt.s_start, std::pow(us0, k)},
                               std::log(opt.s_cap), {1e-30, 1e-300}, ctl, stop);
  std::optional<double> zero;
  const auto& last = sol.segments().back();
  if (last.end()[0] >= 0) {
    const double tz = quad::find_root([&](double x) { return last.at(x)[0]; }, last.t0, last.t1());
    zero = std::exp(tz);
  }
  return ShootingResult(spec, p, opt.m, opt.s_start, us0, std::move(sol), zero);
}

double zero_radius_scaling(const ProblemSpec& spec, double p, double radius_at_unit_m, double m) {
  if (!(m > 0) || !(p > 0)) throw DomainError("zero_radius_scaling: m and p must be positive");
  return radius_at_unit_m * std::pow(m, (spec.k() - p) / spec.k());
}

RadialProfile rescale_to_unit_ball(const ShootingResult& result, const GridSpec& grid) {
  if (!result.first_zero()) throw DomainError("rescale_to_unit_ball: no zero to rescale to");
  if (result.eigenvalue_regime())
    throw DomainError("rescale_to_unit_ball: p = k has no scaling freedom");
  const double R = *result.first_zero();
  const double b = result.spec().k() / (result.p() - result.spec().k());
  const double su = std::pow(R, b);
  const double sd = su * R;
  RadialProfile pr;
  pr.s = quad::log_grid(grid.s_min, 1.0, grid.count);
  pr.u.resize(pr.s.size());
  pr.us.resize(pr.s.size());
  for (std::size_t i = 0; i < pr.s.size(); ++i) {
    pr.u[i] = su * result.u(R * pr.s[i]);
    pr.us[i] = sd * result.us(R * pr.s[i]);
  }
  pr.u.back() = 0.0;
  return pr;
}

double pointwise_bound_check(const ProblemSpec& spec, const RadialProfile& profile) {
  if (spec.monge_ampere()) throw DomainError("pointwise_bound_check: requires k < n");
  profile.validate();
  const int n = spec.n();
  const int k = spec.k();
  std::vector<double> g(profile.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::pow(std::abs(profile.us[i]), k + 1) * std::pow(profile.s[i], n);
  const auto energy = cumulative_over_grid(profile.s, g);
  const double e = static_cast<double>(n) / k;
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double lhs = std::abs(profile.u[i]);
    const double weight = (std::pow(profile.s[i], 1.0 - e) - 1.0) / (e - 1.0);
    const double rhs = std::pow(std::max(energy[i], 0.0), 1.0 / (k + 1)) *
                       std::pow(std::max(weight, 0.0), static_cast<double>(k) / (k + 1));
    if (lhs == 0) continue;
    if (rhs == 0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, lhs / rhs);
  }
  return worst;
}

FunctionalValue functional_value(const ProblemSpec& spec, const RadialProfile& profile, double p) {
  const auto nc = normalization(spec);
  const int n = spec.n();
  const int k = spec.k();
  std::vector<double> g1(profile.size());
  std::vector<double> g2(profile.size());
  for (std::size_t i = 0; i < g1.size(); ++i) {
    g1[i] = std::pow(std::abs(profile.us[i]), k + 1) * std::pow(profile.s[i], n);
    g2[i] = std::pow(std::abs(profile.u[i]), p + 1) * std::pow(profile.s[i], n - 1);
  }
  FunctionalValue fv;
  fv.hessian_energy = nc.A / (k + 1) * integral_with_tail(profile.s, g1, n);
  fv.potential = nc.B / (p + 1) * radial_integral_endpoint(profile, g2, n - 1, p + 1);
  fv.value = fv.hessian_energy - fv.potential;
  return fv;
}

std::vector<double> weak_form_residuals(const ProblemSpec& spec, const RadialProfile& profile,
                                        double p, int count) {
  const auto nc = normalization(spec);
  const int n = spec.n();
  const int k = spec.k();
  std::vector<double> out;
  std::vector<double> g1(profile.size());
  std::vector<double> g2(profile.size());
  for (int j = 1; j <= count; ++j) {
    for (std::size_t i = 0; i < g1.size(); ++i) {
      const double s = profile.s[i];
      g1[i] = signed_pow(profile.us[i], k) * (-j * std::pow(s, j - 1)) * std::pow(s, n);
      g2[i] = std::pow(std::abs(profile.u[i]), p) * (1.0 - std::pow(s, j)) * std::pow(s, n - 1);
    }
    const double lhs = nc.A * integral_with_tail(profile.s, g1, n + j - 1);
    const double rhs = nc.B * radial_integral_endpoint(profile, g2, n - 1, p + 1);
    const double den = std::abs(lhs) + std::abs(rhs);
    out.push_back(den == 0 ? 0.0 : std::abs(lhs + rhs) / den);
  }
  return out;
}

double real_halfdim_parameter(int d, double eps) {
  if (d < 2 || d % 2 != 0) throw DomainError("real_halfdim: d must be even and positive");
  if (!(eps > 0)) throw DomainError("real_halfdim: eps must be positive");
  const int n = d / 2;
  return binom_d(d - 1, n - 1) * std::pow(2.0 * n + 2.0, n) * sphere_volume(d) /
         (n * std::pow(1.0 + eps * eps, n));
}

RealHalfDim real_halfdim(int d, double eps, const GridSpec& grid) {
  RealHalfDim out;
  out.a_tilde = real_halfdim_parameter(d, eps);
  const int n = d / 2;
  out.alpha_tilde = moser_trudinger(d).alpha_tilde;
  out.below_threshold = out.a_tilde < out.alpha_tilde;
  out.profile = sample_explicit(n, eps, grid);
  out.profile.a = out.a_tilde;

  const auto& pr = out.profile;
  const double h = quad::log_spacing(pr.s);
  const double integral = normalization_integral(pr, n);
  const double coef =
      n * out.a_tilde / (sphere_volume(d) * binom_d(d - 1, n - 1) * std::pow(2.0, n));
  std::vector<double> g(pr.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(pr.us[i] * pr.s[i], n);
  const std::size_t w = quad::kStencilHalfWidth;
  for (std::size_t i = w; i + w < g.size(); ++i) {
    const double lhs = quad::centered_derivative(g, h, i);
    const double rhs = coef * std::pow(pr.s[i], n) * std::exp(-pr.u[i]) / integral;
    out.residual = std::max(out.residual, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  return out;
}

}  // namespace khess
