#include "khess/constants.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "khess/errors.hpp"

namespace khess {

namespace {

Rational pow_rational(const Rational& base, int e) {
  Rational r{1};
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

ProblemSpec::ProblemSpec(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw DomainError("complex dimension n must be >= 1, got " + std::to_string(n));
  if (k < 1 || k > n)
    throw DomainError("Hessian order k must satisfy 1 <= k <= n, got k=" + std::to_string(k) +
                      " n=" + std::to_string(n));
}

double PiMonomial::value() const {
  if (coeff == 0) return 0.0;
  const double pi_part = (half_powers % 2 == 0)
                             ? std::pow(std::numbers::pi, half_powers / 2)
                             : std::pow(std::numbers::pi, 0.5 * half_powers);
  return to_double(coeff) * pi_part;
}

PiMonomial PiMonomial::operator*(const PiMonomial& o) const {
  return {coeff * o.coeff, half_powers + o.half_powers};
}

PiMonomial PiMonomial::operator*(const Rational& r) const { return {coeff * r, half_powers}; }

PiMonomial PiMonomial::operator/(const Rational& r) const { return {coeff / r, half_powers}; }

bool operator==(const PiMonomial& a, const PiMonomial& b) {
  if (a.coeff == 0 || b.coeff == 0) return a.coeff == b.coeff;
  return a.coeff == b.coeff && a.half_powers == b.half_powers;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 64) throw DomainError("binomial: n must lie in [0, 64], got " + std::to_string(n));
  return binomial_big(n, k).convert_to<std::uint64_t>();
}

BigInt binomial_big(int n, int k) {
  if (n < 0) throw DomainError("binomial: negative n");
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigInt factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

PiMonomial gamma_half_integer(int twice_x) {
  if (twice_x <= 0) throw DomainError("gamma_half_integer: argument must be positive");
  if (twice_x % 2 == 0) {
    return {Rational(factorial(twice_x / 2 - 1)), 0};
  }
  // Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
  const int m = (twice_x - 1) / 2;
  BigInt four_m = 1;
  for (int i = 0; i < m; ++i) four_m *= 4;
  return {Rational(factorial(2 * m), four_m * factorial(m)), 1};
}

PiMonomial sphere_volume_exact(int d) {
  if (d < 1) throw DomainError("sphere_volume: dimension must be >= 1, got " + std::to_string(d));
  const PiMonomial g = gamma_half_integer(d);
  return {Rational(2) / g.coeff, d - g.half_powers};
}

double sphere_volume(int d) { return sphere_volume_exact(d).value(); }

double CriticalExponent::value() const {
  return is_infinite() ? std::numeric_limits<double>::infinity() : to_double(*value_);
}

bool CriticalExponent::reached_by(double p) const {
  if (is_infinite()) return false;
  if (!std::isfinite(p)) return p > 0;
  return Rational(p) >= *value_;
}

CriticalExponent critical_exponent(const ProblemSpec& spec) {
  if (spec.monge_ampere()) return CriticalExponent::infinite();
  return CriticalExponent::finite(Rational((spec.n() + 1) * spec.k(), spec.gap()));
}

CriticalExponent real_critical_exponent(int k, int d) {
  if (d < 1 || k < 1 || k >= d) throw DomainError("real_critical_exponent: need 1 <= k < d");
  if (2 * k >= d) return CriticalExponent::infinite();
  return CriticalExponent::finite(Rational((d + 2) * k, d - 2 * k));
}

PiMonomial hessian_energy_constant_exact(const ProblemSpec& spec) {
  return sphere_volume_exact(2 * spec.n()) *
         Rational(binomial_big(spec.n() - 1, spec.k() - 1), 2 * spec.k());
}

double levi_invariant_ball(const ProblemSpec& spec, double radius) {
  if (!(radius > 0)) throw DomainError("levi_invariant_ball: radius must be positive");
  return static_cast<double>(binomial(spec.n() - 1, spec.k() - 1)) /
         std::pow(2.0 * radius, spec.k() + 1);
}

NormalizationConstants normalization(const ProblemSpec& spec, double radius) {
  NormalizationConstants c;
  c.omega = sphere_volume(2 * spec.n());
  c.A = hessian_energy_constant_exact(spec).value();
  c.B = c.omega / 2;
  c.levi_ball = levi_invariant_ball(spec, radius);
  c.radius = radius;
  return c;
}

PiMonomial a0_exact(int n) {
  if (n < 1) throw DomainError("a0: n must be >= 1");
  return {pow_rational(Rational(n + 1), n) / Rational(factorial(n)), 2 * n};
}

PiMonomial alpha1_exact(const ProblemSpec& spec) {
  const int n = spec.n();
  const int k = spec.k();
  const Rational base(n * (k + 1), k);
  return {pow_rational(base, k) * Rational(binomial_big(n, k)) / Rational(factorial(n)), 2 * n};
}

PiMonomial alpha1_from_levi_exact(const ProblemSpec& spec) {
  const int n = spec.n();
  const int k = spec.k();
  // S~_{k-1}(dB_1) = C(n-1,k-1)/2^{k+1}
  const Rational levi = Rational(binomial_big(n - 1, k - 1)) / pow_rational(Rational(2), k + 1);
  const Rational num = pow_rational(Rational(2 * n * (k + 1)), k) * levi;
  const Rational den = pow_rational(Rational(k), k + 1);
  return sphere_volume_exact(2 * n) * (num / den);
}

PiMonomial beta_exact(const ProblemSpec& spec) {
  if (spec.monge_ampere()) throw DomainError("beta(k,n) is defined only for k < n");
  const int n = spec.n();
  const int k = spec.k();
  return {pow_rational(Rational(k), k - 1) * Rational(binomial_big(n - 1, k - 1)) /
              Rational(factorial(n - 1)),
          2 * n};
}

double alpha2(const ProblemSpec& spec) {
  const double a1 = alpha1_exact(spec).value();
  if (spec.monge_ampere()) return a1;
  const double theta = static_cast<double>(spec.gap()) / (spec.n() * (spec.k() + 1.0));
  const double bracket = 1.0 - theta + theta * std::log(theta);
  return a1 * std::pow(bracket, spec.k());
}

Thresholds thresholds(const ProblemSpec& spec) {
  Thresholds t;
  t.gamma = critical_exponent(spec);
  t.a0 = a0_exact(spec.n()).value();
  t.alpha1 = alpha1_exact(spec).value();
  t.alpha2 = alpha2(spec);
  if (!spec.monge_ampere()) t.beta = beta_exact(spec).value();
  return t;
}

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::integrable: return "integrable";
    case EquilibriumKind::spiral: return "spiral";
    case EquilibriumKind::degenerate_node: return "degenerate-node";
    case EquilibriumKind::node: return "node";
  }
  return "unknown";
}

Linearization equilibrium_linearization(const ProblemSpec& spec) {
  Linearization lin;
  const int g = spec.gap();
  if (g == 0) {
    lin.eig1 = lin.eig2 = 0.0;
    lin.kind = EquilibriumKind::integrable;
    return lin;
  }
  const double disc = static_cast<double>(g) * g - 4.0 * g;
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  lin.eig1 = (static_cast<double>(-g) + root) / 2.0;
  lin.eig2 = (static_cast<double>(-g) - root) / 2.0;
  if (g < 4) {
    lin.kind = EquilibriumKind::spiral;
  } else if (g == 4) {
    lin.kind = EquilibriumKind::degenerate_node;
  } else {
    lin.kind = EquilibriumKind::node;
  }
  if (g >= 4) {
    lin.b_range = std::make_pair(1.0 / -lin.eig2.real(), 1.0 / -lin.eig1.real());
  }
  return lin;
}

PowerCoefficient pohozaev_power_coefficient(const ProblemSpec& spec, double p) {
  if (!(p > 0) || !std::isfinite(p)) throw DomainError("power exponent p must be finite and > 0");
  PowerCoefficient c;
  const Rational pr(p);
  c.exact = Rational(spec.n()) / (pr + 1) - Rational(spec.gap(), spec.k() + 1);
  c.coefficient = to_double(c.exact);
  c.nonexistence = c.exact <= 0;
  return c;
}

double real_threshold(int k, int d) {
  if (d < 2 || k < 1 || k > d) throw DomainError("real_threshold: need 1 <= k <= d");
  const double omega = sphere_volume(d);
  return std::pow((k + 1.0) * d, k) * static_cast<double>(binomial(d - 1, k - 1)) * omega /
         std::pow(static_cast<double>(k), k + 1);
}

RealMTConstants moser_trudinger(int d) {
  if (d < 2 || d % 2 != 0) throw DomainError("moser_trudinger: d must be an even integer >= 2");
  RealMTConstants c;
  c.d = d;
  c.k = d / 2;
  const double omega = sphere_volume(d);
  const double binom = static_cast<double>(binomial(d - 1, c.k - 1));
  c.D = d * std::pow(omega / c.k * binom, 2.0 / d);
  c.p0 = (d + 2.0) / d;
  c.q0 = d / 2.0 + 1.0;
  c.E = std::pow(c.D * c.p0, -c.q0 / c.p0) / c.q0;
  c.alpha_tilde = real_threshold(c.k, d);
  c.alpha_tilde_from_E = 1.0 / (c.E * (c.k + 1));
  c.alpha_tilde_direct = std::pow(d + 2.0, d / 2) * (2.0 / d) * binom * omega;
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  c.residual = std::max({rel(c.alpha_tilde_from_E, c.alpha_tilde),
                         rel(c.alpha_tilde_direct, c.alpha_tilde),
                         rel(c.alpha_tilde_from_E, c.alpha_tilde_direct)});
  return c;
}

}  // namespace khess
