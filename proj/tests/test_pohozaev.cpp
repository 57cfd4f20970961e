#include <doctest.h>

#include <cmath>

#include "khess/constants.hpp"
#include "khess/errors.hpp"
#include "khess/phase_plane.hpp"
#include "khess/pohozaev.hpp"
#include "khess/quadrature.hpp"
#include "khess/radial_profiles.hpp"
#include "oracles.hpp"

using namespace khess;
using oracle::rel;

namespace {

RadialProfile zero_profile() {
  RadialProfile p;
  p.s = quad::log_grid(1e-12, 1.0, 400);
  p.u.assign(p.s.size(), 0.0);
  p.us.assign(p.s.size(), 0.0);
  return p;
}

// c3 with max_{x>=0} mu(x) = 0, by bisection on the maximum itself
double c3_oracle(double c1, double c2) {
  auto max_mu = [&](double c3) {
    double best = -c3;
    for (double x = 0; x < 60; x += 1e-3)
      best = std::max(best, c1 * std::expm1(x) - c2 * x * std::exp(x) - c3 * std::exp(x));
    return best;
  };
  double lo = 0, hi = c1;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (max_mu(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("nonlinearity values") {
  const auto e = explicit_ma(2, 0.5, {300, 1e-10});
  const ProblemSpec spec(2, 1);
  const auto pw = evaluate(spec, NonlinearitySpec::power(1.5), e.profile);
  for (std::size_t i = 0; i < e.profile.size(); ++i) {
    const double m = -e.profile.u[i];
    CHECK(pw.f[i] == doctest::Approx(std::pow(m, 1.5)));
    CHECK(pw.F[i] == doctest::Approx(-std::pow(m, 2.5) / 2.5));
  }
  const auto ex = evaluate(spec, NonlinearitySpec::exponential(3.0), e.profile);
  CHECK(ex.F.back() == 0);
  const double I = normalization(spec).B * normalization_integral(e.profile, 2);
  for (std::size_t i = 0; i < e.profile.size(); i += 17) {
    CHECK(rel(ex.f[i], 3.0 * std::exp(-e.profile.u[i]) / I) < 1e-12);
    CHECK(ex.F[i] == doctest::Approx(3.0 * -std::expm1(-e.profile.u[i]) / I));
  }
  CHECK_THROWS_AS(NonlinearitySpec::power(0), DomainError);
  CHECK_THROWS_AS(NonlinearitySpec::exponential(-1), DomainError);
  CHECK(pohozaev_c0(ProblemSpec(6, 2)) == doctest::Approx(4.0 / 3));
}

TEST_CASE("identity on the explicit family") {
  for (int n : {1, 2, 3, 6})
    for (double eps : {0.1, 0.5, 1.0, 2.0}) {
      const ProblemSpec spec(n, n);
      const auto e = explicit_ma(n, eps);
      const auto r = identity_radial(spec, e.profile, NonlinearitySpec::exponential(e.a_eps));
      CAPTURE(n);
      CAPTURE(eps);
      CHECK(r.residual <= 1e-6);
      CHECK(r.verdict == Verdict::identity_satisfied);
      CHECK(rel(r.mass, e.a_eps) < 1e-8);
      // Holder is an equality for radial profiles
      CHECK(rel(r.holder_lhs, flux_lower_bound(spec, e.a_eps)) < 1e-8);
      CHECK(r.holder_lhs >= r.holder_rhs * (1 - 1e-8));
    }
}

TEST_CASE("identity on trivial and broken profiles") {
  const auto z = identity_radial(ProblemSpec(3, 2), zero_profile(), NonlinearitySpec::power(2));
  CHECK(z.boundary_term == 0);
  CHECK(z.volume_term == 0);
  CHECK(z.residual == 0);
  CHECK(z.verdict == Verdict::identity_satisfied);

  auto bad = explicit_ma(2, 1.0).profile;
  bad.u.back() = 1e-4;
  CHECK_THROWS_AS(identity_radial(ProblemSpec(2, 2), bad, NonlinearitySpec::exponential(1)),
                  DomainError);

  // right profile, wrong parameter
  const auto e = explicit_ma(2, 1.0);
  const auto off = identity_radial(ProblemSpec(2, 2), e.profile,
                                   NonlinearitySpec::exponential(0.9 * e.a_eps));
  CHECK(off.verdict == Verdict::identity_violated);
  CHECK(off.residual > 1e-3);
}

TEST_CASE("identity on rescaled shooting solutions") {
  for (const auto& [n, k, p] : {std::tuple{2, 1, 2.0}, {3, 1, 1.6}, {3, 2, 3.2}, {6, 2, 3.0}}) {
    const ProblemSpec spec(n, k);
    const auto r = shoot_power(spec, p);
    REQUIRE(r.first_zero());
    const auto u = rescale_to_unit_ball(r);
    const auto rep = identity_radial(spec, u, NonlinearitySpec::power(p));
    CAPTURE(n);
    CAPTURE(k);
    CHECK(rep.residual <= 1e-5);
    CHECK(rep.holder_lhs >= rep.holder_rhs * (1 - 1e-8));
    CHECK(rel(rep.holder_lhs, rep.holder_rhs) < 1e-8);
  }
}

TEST_CASE("power sign mechanism") {
  // any negative profile: above gamma the volume integrand is nonpositive
  const ProblemSpec spec(3, 1);
  const auto cand = explicit_ma(3, 0.8).profile;
  const double gamma = critical_exponent(spec).value();
  for (double p : {gamma, gamma * 1.1, gamma * 3}) {
    const auto c = power_sign_check(spec, cand, p);
    CHECK(c.max_volume_integrand <= 0);
    CHECK(c.boundary_term > 0);
    CHECK(c.consistent);
    const auto r = identity_radial(spec, cand, NonlinearitySpec::power(p));
    CHECK(r.verdict == Verdict::nonexistence_triggered);
  }
  const auto sub = power_sign_check(spec, cand, gamma * 0.5);
  CHECK(sub.max_volume_integrand > 0);
  CHECK_FALSE(sub.consistent);
}

TEST_CASE("flux lower bound") {
  CHECK(flux_lower_bound(ProblemSpec(6, 2), 1.0) > 0);
  CHECK(flux_lower_bound(ProblemSpec(6, 2), 1e-12) < 1e-15);
  CHECK_THROWS_AS(flux_lower_bound(ProblemSpec(6, 2), 0), DomainError);
  // closed form at n = k = 1: (a)^2 / (levi * omega) = a^2 / (pi / 2)
  CHECK(rel(flux_lower_bound(ProblemSpec(1, 1), 2.0), 4.0 / (0.25 * 2 * oracle::pi)) < 1e-14);
}

TEST_CASE("exponential nonexistence verdicts") {
  for (int n = 1; n <= 8; ++n) {
    const ProblemSpec spec(n, n);
    const double a0 = a0_exact(n).value();
    CHECK(nonexistence_exponential(spec, a0).basic);
    CHECK(nonexistence_exponential(spec, a0).verdict == Verdict::nonexistence_triggered);
    CHECK_FALSE(nonexistence_exponential(spec, a0 * (1 - 1e-9)).basic);
  }
  const ProblemSpec spec(6, 2);
  const auto t = thresholds(spec);
  const auto mid = nonexistence_exponential(spec, 0.5 * (t.alpha1 + t.alpha2));
  CHECK(mid.improved);
  CHECK_FALSE(mid.basic);
  CHECK(mid.basic_margin < 0);
  CHECK(mid.improved_margin > 0);
  CHECK_THROWS_AS(nonexistence_exponential(spec, 0), DomainError);
}

TEST_CASE("mu maximum vanishes at alpha2") {
  for (int n = 2; n <= 12; ++n)
    for (int k = 1; k < n; ++k) {
      const auto m = mu_max_verify(ProblemSpec(n, k));
      CHECK(std::abs(m.value) <= 1e-10);
      CHECK(mu(m, 0) == doctest::Approx(-m.c3));
      CHECK(mu(m, 50) < -1e10);
    }
  CHECK_THROWS_AS(mu_max_verify(ProblemSpec(4, 4)), DomainError);

  // alpha2 recovered from a brute-force c3
  for (const auto& [n, k] : {std::pair{6, 2}, {3, 1}, {6, 5}, {9, 4}}) {
    const ProblemSpec spec(n, k);
    const auto m = mu_max_verify(spec);
    const double c3 = c3_oracle(m.c1, m.c2);
    const auto nc = normalization(spec);
    const double a2 = std::pow(2 * c3 * std::pow(nc.levi_ball * nc.omega, 1.0 / k), k) /
                      std::pow(k, k + 1.0);
    CHECK(rel(a2, alpha2(spec)) < 1e-5);
  }
}

TEST_CASE("frontier consistency") {
  for (int n = 2; n <= 7; ++n)
    for (int k = 1; k < n; ++k) {
      const ProblemSpec spec(n, k);
      const auto t = thresholds(spec);
      std::vector<double> grid;
      for (int i = 1; i <= 60; ++i) grid.push_back(t.alpha1 * 1.5 * i / 60);
      const auto d = bifurcation_sweep(spec, grid);
      for (const auto& e : d.entries)
        if (nonexistence_exponential(spec, e.a).basic) CHECK(e.count == 0);
    }
}
