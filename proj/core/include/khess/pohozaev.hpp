#pragma once

// Pohozaev identity for radial profiles on the unit ball and the
// non-existence tests built on it.
//
//   boundary: omega S~ (2 u_s(1))^{k+1}
//   volume:   -(k+1) omega int_0^1 [n F(u) - c0 u f(u)] s^{n-1} ds,  c0 = (n-k)/(k+1)

#include <string_view>
#include <vector>

#include "khess/constants.hpp"
#include "khess/radial_profiles.hpp"

namespace khess {

enum class NonlinearityKind { power, exponential_nonlocal };
std::string_view to_string(NonlinearityKind kind);

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::power;
  double parameter = 0;  // p for power, a for exponential-nonlocal

  static NonlinearitySpec power(double p);
  static NonlinearitySpec exponential(double a);
};

struct NonlinearityValues {
  std::vector<double> f;
  std::vector<double> F;  // primitive with F(0) = 0
};

/// f and F on the profile grid. For the exponential kind the normalising
/// integral int_{B_1} e^{-u} is taken from the profile itself.
NonlinearityValues evaluate(const ProblemSpec& spec, const NonlinearitySpec& nl,
                            const RadialProfile& profile);

/// (n-k)/(k+1)
double pohozaev_c0(const ProblemSpec& spec);

enum class Verdict { identity_satisfied, identity_violated, nonexistence_triggered };
std::string_view to_string(Verdict v);

struct PohozaevReport {
  double boundary_term = 0;
  double volume_term = 0;
  double residual = 0;
  double holder_lhs = 0;  // boundary flux of S~ |grad u|^{k+1}
  double holder_rhs = 0;  // flux_lower_bound at the profile mass
  double mass = 0;        // int_{B_1} f
  Verdict verdict = Verdict::identity_violated;
};

PohozaevReport identity_radial(const ProblemSpec& spec, const RadialProfile& profile,
                               const NonlinearitySpec& nl, double tolerance = 1e-6);

/// (k a)^{(k+1)/k} / (S~ omega)^{1/k} on the unit ball.
double flux_lower_bound(const ProblemSpec& spec, double a);

struct ExponentialVerdict {
  double a = 0;
  double alpha1 = 0;
  double alpha2 = 0;
  bool basic = false;     // a >= alpha1 (a0 when k = n)
  bool improved = false;  // a >= alpha2
  double basic_margin = 0;     // a / alpha1 - 1
  double improved_margin = 0;  // a / alpha2 - 1
  Verdict verdict = Verdict::identity_satisfied;
};

ExponentialVerdict nonexistence_exponential(const ProblemSpec& spec, double a);

struct MuMaximum {
  double c1 = 0;
  double c2 = 0;
  double c3 = 0;
  double x = 0;      // maximiser on [0, inf)
  double value = 0;  // mu(x)
};

/// mu(x) = c1 (e^x - 1) - c2 x e^x - c3 e^x at a = alpha2; its maximum over
/// x >= 0 should vanish.
MuMaximum mu_max_verify(const ProblemSpec& spec);
double mu(const MuMaximum& c, double x);

struct PowerSignCheck {
  double max_volume_integrand = 0;  // max of -2 [n(k+1) F - (n-k) u f]
  double boundary_term = 0;
  bool consistent = false;          // integrand <= 0 and boundary > 0
};

PowerSignCheck power_sign_check(const ProblemSpec& spec, const RadialProfile& profile, double p);

}  // namespace khess
