#include "khess/pohozaev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "khess/errors.hpp"
#include "khess/quadrature.hpp"

namespace khess {

std::string_view to_string(NonlinearityKind kind) {
  return kind == NonlinearityKind::power ? "power" : "exponential-nonlocal";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::identity_satisfied: return "identity-satisfied";
    case Verdict::identity_violated: return "identity-violated";
    case Verdict::nonexistence_triggered: return "nonexistence-triggered";
  }
  return "unknown";
}

NonlinearitySpec NonlinearitySpec::power(double p) {
  if (!(p > 0)) throw DomainError("power nonlinearity needs p > 0");
  return {NonlinearityKind::power, p};
}

NonlinearitySpec NonlinearitySpec::exponential(double a) {
  if (!(a >= 0)) throw DomainError("exponential nonlinearity needs a >= 0");
  return {NonlinearityKind::exponential_nonlocal, a};
}

double pohozaev_c0(const ProblemSpec& spec) {
  return static_cast<double>(spec.gap()) / (spec.k() + 1);
}

NonlinearityValues evaluate(const ProblemSpec& spec, const NonlinearitySpec& nl,
                            const RadialProfile& profile) {
  NonlinearityValues out;
  out.f.resize(profile.size());
  out.F.resize(profile.size());
  if (nl.kind == NonlinearityKind::power) {
    const double p = nl.parameter;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const double m = std::max(-profile.u[i], 0.0);
      out.f[i] = std::pow(m, p);
      out.F[i] = -std::pow(m, p + 1) / (p + 1);
    }
    return out;
  }
  const double vol = 0.5 * sphere_volume(2 * spec.n()) * normalization_integral(profile, spec.n());
  const double a = nl.parameter;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out.f[i] = a * std::exp(-profile.u[i]) / vol;
    out.F[i] = -a * std::expm1(-profile.u[i]) / vol;
  }
  return out;
}

double flux_lower_bound(const ProblemSpec& spec, double a) {
  if (!(a > 0)) throw DomainError("flux_lower_bound: a must be positive");
  const auto nc = normalization(spec);
  const double k = spec.k();
  return std::pow(k * a, (k + 1) / k) / std::pow(nc.levi_ball * nc.omega, 1.0 / k);
}

PohozaevReport identity_radial(const ProblemSpec& spec, const RadialProfile& profile,
                               const NonlinearitySpec& nl, double tolerance) {
  profile.validate();
  const auto nc = normalization(spec);
  const int n = spec.n();
  const int k = spec.k();
  const double c0 = pohozaev_c0(spec);
  const auto vals = evaluate(spec, nl, profile);

  std::vector<double> g(profile.size());
  std::vector<double> fm(profile.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = std::pow(profile.s[i], n - 1);
    g[i] = (n * vals.F[i] - c0 * profile.u[i] * vals.f[i]) * w;
    fm[i] = vals.f[i] * w;
  }

  PohozaevReport r;
  r.boundary_term = nc.omega * nc.levi_ball * std::pow(2.0 * profile.us.back(), k + 1);
  const bool power = nl.kind == NonlinearityKind::power;
  const double q = power ? nl.parameter : 0.0;
  r.volume_term = -(k + 1) * nc.omega * radial_integral_endpoint(profile, g, n - 1, q + 1);
  const double den = std::abs(r.boundary_term) + std::abs(r.volume_term);
  r.residual = den == 0 ? 0.0 : std::abs(r.boundary_term - r.volume_term) / den;
  r.holder_lhs = r.boundary_term;
  r.mass = 0.5 * nc.omega * radial_integral_endpoint(profile, fm, n - 1, q);
  r.holder_rhs = r.mass > 0 ? flux_lower_bound(spec, r.mass) : 0.0;

  if (r.residual <= tolerance) {
    r.verdict = Verdict::identity_satisfied;
  } else if (power) {
    const bool supercritical = critical_exponent(spec).reached_by(nl.parameter);
    r.verdict = supercritical && r.boundary_term > 0 && r.volume_term <= 0
                    ? Verdict::nonexistence_triggered
                    : Verdict::identity_violated;
  } else {
    r.verdict = nonexistence_exponential(spec, nl.parameter).basic
                    ? Verdict::nonexistence_triggered
                    : Verdict::identity_violated;
  }
  return r;
}

ExponentialVerdict nonexistence_exponential(const ProblemSpec& spec, double a) {
  if (!(a > 0)) throw DomainError("nonexistence_exponential: a must be positive");
  ExponentialVerdict v;
  v.a = a;
  v.alpha1 = spec.monge_ampere() ? a0_exact(spec.n()).value() : alpha1_exact(spec).value();
  v.alpha2 = spec.monge_ampere() ? v.alpha1 : alpha2(spec);
  v.basic = a >= v.alpha1;
  v.improved = a >= v.alpha2;
  v.basic_margin = a / v.alpha1 - 1.0;
  v.improved_margin = a / v.alpha2 - 1.0;
  v.verdict = v.basic ? Verdict::nonexistence_triggered : Verdict::identity_satisfied;
  return v;
}

double mu(const MuMaximum& c, double x) {
  const double ex = std::exp(x);
  return c.c1 * std::expm1(x) - c.c2 * x * ex - c.c3 * ex;
}

MuMaximum mu_max_verify(const ProblemSpec& spec) {
  if (spec.monge_ampere()) throw DomainError("mu_max_verify: requires k < n");
  const auto nc = normalization(spec);
  const double k = spec.k();
  MuMaximum m;
  m.c1 = spec.n() * (k + 1);
  m.c2 = spec.gap();
  m.c3 = std::pow(k, (k + 1) / k) * std::pow(alpha2(spec), 1.0 / k) /
         (2.0 * std::pow(nc.levi_ball * nc.omega, 1.0 / k));

  // mu'(x) e^{-x} = c1 - c2 (1 + x) - c3
  const auto slope = [&](double x) { return m.c1 - m.c2 * (1.0 + x) - m.c3; };
  if (slope(0.0) <= 0) {
    m.x = 0;
  } else {
    double hi = 1.0;
    while (slope(hi) > 0) hi *= 2;
    m.x = quad::find_root(slope, 0.0, hi);
  }
  m.value = mu(m, m.x);
  return m;
}

PowerSignCheck power_sign_check(const ProblemSpec& spec, const RadialProfile& profile, double p) {
  // -2 [n(k+1) F - (n-k) u f] = 2 (k+1) (n/(p+1) - c0) (-u)^{p+1}, coefficient exact
  const double coef = pohozaev_power_coefficient(spec, p).coefficient;
  const double k = spec.k();
  PowerSignCheck c;
  c.max_volume_integrand = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double m = std::max(-profile.u[i], 0.0);
    c.max_volume_integrand = std::max(c.max_volume_integrand, 2.0 * (k + 1) * coef * std::pow(m, p + 1));
  }
  const auto nc = normalization(spec);
  c.boundary_term = nc.omega * nc.levi_ball * std::pow(2.0 * profile.us.back(), k + 1);
  c.consistent = c.max_volume_integrand <= 0 && c.boundary_term > 0;
  return c;
}

}  // namespace khess
