#pragma once

// Closed-form constants, exponents and thresholds for the complex k-Hessian
// Dirichlet problems on the unit ball of C^n.
//
// Everything that is a rational multiple of a power of pi is carried exactly
// (PiMonomial) and only rounded when a double is requested.

#include <complex>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace khess {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Complex dimension n and Hessian order k, 1 <= k <= n.
class ProblemSpec {
 public:
  ProblemSpec(int n, int k);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  /// n - k; zero for the Monge-Ampere case.
  int gap() const noexcept { return n_ - k_; }
  bool monge_ampere() const noexcept { return n_ == k_; }

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

 private:
  int n_;
  int k_;
};

/// coeff * pi^(half_powers / 2). Closed under multiplication, which is all the
/// thresholds need.
struct PiMonomial {
  Rational coeff{0};
  int half_powers = 0;

  double value() const;
  PiMonomial operator*(const PiMonomial& o) const;
  PiMonomial operator*(const Rational& r) const;
  PiMonomial operator/(const Rational& r) const;

  /// Exact equality: same rational coefficient and same power of pi (zero
  /// equals zero regardless of power).
  friend bool operator==(const PiMonomial& a, const PiMonomial& b);
};

/// Exact C(n, k) for 0 <= n <= 64.
std::uint64_t binomial(int n, int k);
BigInt binomial_big(int n, int k);
BigInt factorial(int n);

/// Gamma(twice_x / 2) for a positive integer or half-integer argument, built
/// from factorials and Gamma(1/2) = sqrt(pi).
PiMonomial gamma_half_integer(int twice_x);

/// Surface area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
PiMonomial sphere_volume_exact(int d);
double sphere_volume(int d);

/// gamma(k,n) = (n+1)k/(n-k), or an explicit infinity marker when k = n.
class CriticalExponent {
 public:
  static CriticalExponent infinite() { return CriticalExponent{}; }
  static CriticalExponent finite(Rational value) { return CriticalExponent{std::move(value)}; }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  /// Exact value; only meaningful when finite.
  const Rational& exact() const { return *value_; }
  /// +infinity when infinite.
  double value() const;
  /// Exact test p >= gamma (the binary64 p is converted without rounding).
  bool reached_by(double p) const;

 private:
  CriticalExponent() = default;
  explicit CriticalExponent(Rational v) : value_(std::move(v)) {}
  std::optional<Rational> value_;
};

CriticalExponent critical_exponent(const ProblemSpec& spec);
/// Tso's real exponent: (d+2)k/(d-2k) for k < d/2, infinite otherwise.
CriticalExponent real_critical_exponent(int k, int d);

struct NormalizationConstants {
  double omega = 0;      // |S^{2n-1}|
  double A = 0;          // omega/(2k) C(n-1,k-1)
  double B = 0;          // omega/2
  double levi_ball = 0;  // S~_{k-1}(dB_R)
  double radius = 1;
};

NormalizationConstants normalization(const ProblemSpec& spec, double radius = 1.0);
PiMonomial hessian_energy_constant_exact(const ProblemSpec& spec);  // A(k,n)
/// S~_{k-1}(dB_R) = C(n-1,k-1) / (2^{k+1} R^{k+1}).
double levi_invariant_ball(const ProblemSpec& spec, double radius);

PiMonomial a0_exact(int n);
PiMonomial alpha1_exact(const ProblemSpec& spec);
/// Same threshold through (2n(k+1))^k omega S~ / k^{k+1}, kept separate so the
/// two closed forms can be compared.
PiMonomial alpha1_from_levi_exact(const ProblemSpec& spec);
/// k^{k-1} C(n-1,k-1) pi^n/(n-1)!; defined for k < n.
PiMonomial beta_exact(const ProblemSpec& spec);
double alpha2(const ProblemSpec& spec);

struct Thresholds {
  CriticalExponent gamma = CriticalExponent::infinite();
  double a0 = 0;
  double alpha1 = 0;
  double alpha2 = 0;
  std::optional<double> beta;  // absent when k = n
};

Thresholds thresholds(const ProblemSpec& spec);

enum class EquilibriumKind { integrable, spiral, degenerate_node, node };
std::string_view to_string(EquilibriumKind kind);

struct Linearization {
  std::complex<double> eig1;  // (k-n + sqrt(disc))/2
  std::complex<double> eig2;  // (k-n - sqrt(disc))/2
  EquilibriumKind kind = EquilibriumKind::integrable;
  /// [(-eig2)^{-1}, (-eig1)^{-1}], defined when n-k >= 4.
  std::optional<std::pair<double, double>> b_range;
};

Linearization equilibrium_linearization(const ProblemSpec& spec);

struct PowerCoefficient {
  Rational exact;          // n/(p+1) - (n-k)/(k+1)
  double coefficient = 0;
  bool nonexistence = false;  // coefficient <= 0
};

PowerCoefficient pohozaev_power_coefficient(const ProblemSpec& spec, double p);

/// Real threshold ((k+1)d)^k C(d-1,k-1) omega_{d-1} / k^{k+1}.
double real_threshold(int k, int d);

struct RealMTConstants {
  int d = 0;
  int k = 0;  // d/2
  double D = 0;
  double p0 = 0;
  double E = 0;
  double q0 = 0;
  double alpha_tilde = 0;        // real_threshold(d/2, d)
  double alpha_tilde_from_E = 0; // (E (k+1))^{-1}
  double alpha_tilde_direct = 0; // (d+2)^{d/2} (2/d) C(d-1,k-1) omega_{d-1}
  double residual = 0;           // max relative mismatch of the three
};

RealMTConstants moser_trudinger(int d);

}  // namespace khess
