#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "khess/constants.hpp"
#include "khess/errors.hpp"
#include "khess/phase_plane.hpp"
#include "oracles.hpp"
#include "path_distance.hpp"

using namespace khess;
using oracle::rel;


TEST_CASE("vector field") {
  for (int n = 1; n <= 8; ++n)
    for (int k = 1; k <= n; ++k) {
      const ProblemSpec spec(n, k);
      const auto f = vector_field(spec, {1.0, static_cast<double>(n - k)});
      CHECK(f.dv == 0);
      CHECK(f.dw == 0);
    }
  const auto o = vector_field(ProblemSpec(3, 3), {0, 0});
  CHECK(o.dv == 0);
  CHECK(o.dw == 0);
  const auto f = vector_field(ProblemSpec(6, 2), {1.0 / 16, 1.0});
  CHECK(f.dv == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(f.dw == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(vector_field(ProblemSpec(2, 1), {-1e-3, 1}), DomainError);
  CHECK_THROWS_AS(vector_field(ProblemSpec(2, 1), {1, -1e-3}), DomainError);
}

TEST_CASE("seeds") {
  const auto s = seed_near_origin(ProblemSpec(6, 2), 1e-8);
  CHECK(s.v == doctest::Approx(1e-8 / 6).epsilon(1e-15));
  CHECK(s.w == 1e-8);
  const auto s1 = seed_near_origin(ProblemSpec(1, 1), 3e-7);
  CHECK(s1.v == 3e-7);
  CHECK(s1.w == 3e-7);
  CHECK_THROWS_AS(seed_near_origin(ProblemSpec(2, 1), 0), DomainError);
  CHECK_THROWS_AS(seed_on_manifold(ProblemSpec(2, 1), -1), DomainError);

  // along the flow dv/dw matches the ratio on the seed up to O(delta^{1/k})
  for (int k = 1; k <= 6; ++k) {
    const ProblemSpec spec(6, k);
    const auto p = seed_near_origin(spec, 1e-8);
    const auto fv = vector_field(spec, p);
    CHECK(std::abs(fv.dv / fv.dw - p.v / p.w) < 10 * std::pow(1e-8, 1.0 / k) + 1e-12);
  }
}

TEST_CASE("unstable manifold series") {
  const auto c = unstable_manifold_series(ProblemSpec(6, 6), 8);
  CHECK(c[0] == 6);
  CHECK(c[1] == doctest::Approx(-36.0 / 7).epsilon(1e-15));
  for (std::size_t j = 2; j < c.size(); ++j) CHECK(std::abs(c[j]) < 1e-12);

  // the closed-form k = n curve w(v) lies on the series
  const int n = 4;
  const double eps = 0.7;
  for (double s : {1e-6, 1e-4, 1e-3}) {
    const auto [v, w] = oracle::phase_eps(n, eps, s);
    const auto cs = unstable_manifold_series(ProblemSpec(n, n));
    const double y = std::pow(v, 1.0 / n);
    CHECK(rel(v * (cs[0] + cs[1] * y), w) < 1e-12);
  }

  // for k < n the series reproduces an integrated trajectory
  const ProblemSpec spec(5, 2);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  const auto traj = integrate_trajectory(spec, cfg);
  const auto cs = unstable_manifold_series(spec);
  for (const auto& s : traj.samples()) {
    if (s.point.v > 1e-3) break;
    const double y = std::pow(s.point.v, 0.5);
    double sum = 0, yp = 1;
    for (double cj : cs) {
      sum += cj * yp;
      yp *= y;
    }
    CHECK(rel(s.point.v * sum, s.point.w) < 1e-9);
  }
}

TEST_CASE("config validation") {
  IntegratorConfig c;
  CHECK_NOTHROW(c.validate());
  for (double IntegratorConfig::*field :
       {&IntegratorConfig::rel_tol, &IntegratorConfig::abs_tol, &IntegratorConfig::t_max,
        &IntegratorConfig::eq_radius, &IntegratorConfig::seed_delta, &IntegratorConfig::max_step}) {
    IntegratorConfig bad;
    bad.*field = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad.*field = -1;
    CHECK_THROWS_AS(integrate_trajectory(ProblemSpec(2, 1), bad), DomainError);
  }
}

TEST_CASE("trajectory termination") {
  const auto ma = integrate_trajectory(ProblemSpec(6, 6));
  CHECK(ma.termination() == Termination::integrable_limit);
  CHECK(rel(ma.end_point().v, std::pow(7.0 / 6, 6)) < 1e-8);

  const auto node = integrate_trajectory(ProblemSpec(6, 1));
  CHECK(node.termination() == Termination::equilibrium_ball);
  CHECK(std::hypot(node.end_point().v - 1, node.end_point().w - 5) < 1e-6);
  CHECK(node.extrema().empty());
  const auto ns = node.samples();
  for (std::size_t i = 1; i < ns.size(); ++i) CHECK(ns[i].point.v >= ns[i - 1].point.v);

  IntegratorConfig short_cfg;
  short_cfg.t_max = 5;
  const auto capped = integrate_trajectory(ProblemSpec(6, 5), short_cfg);
  CHECK_THROWS_AS(capped.at(capped.t_end() + 1), DomainError);
  CHECK_THROWS_AS(capped.at(capped.t_begin() - 1), DomainError);
  CHECK(capped.termination() == Termination::time_cap);
  CHECK(capped.t_end() == doctest::Approx(5));
  CHECK(count_crossings(capped, 1.0).tail == CrossingTail::unresolved);
}

TEST_CASE("k = n trajectory follows the explicit family") {
  for (int n : {1, 2, 6}) {
    const ProblemSpec spec(n, n);
    const auto traj = integrate_trajectory(spec);
    // w = n v (1 - (n/(n+1)) v^{1/n}) on the explicit curve; align through v
    double worst = 0;
    for (const auto& s : traj.samples()) {
      const double v = s.point.v;
      const double w = n * v * (1 - n / (n + 1.0) * std::pow(v, 1.0 / n));
      worst = std::max(worst, std::abs(s.point.w - w));
    }
    CHECK(worst <= 100 * 1e-10);
    // time alignment with the closed form at eps = 1: t = log s
    const auto t1 = traj.first_time_v_equals(oracle::phase_eps(n, 1.0, 1.0).first);
    REQUIRE(t1);
    double dev = 0;
    for (double s : {1e-4, 1e-3, 1e-2, 0.1, 0.5, 2.0, 10.0, 100.0}) {
      const auto [v, w] = oracle::phase_eps(n, 1.0, s);
      const double t = *t1 + std::log(s);
      if (t < traj.t_begin()) continue;
      const auto p = traj.at(t);
      dev = std::max({dev, std::abs(p.v - v), std::abs(p.w - w)});
    }
    CHECK(dev <= 1e-7);
  }
}

TEST_CASE("lyapunov function") {
  CHECK_THROWS_AS(lyapunov(ProblemSpec(3, 3), {1, 1}), DomainError);
  CHECK_THROWS_AS(lyapunov(ProblemSpec(3, 1), {1, 0}), DomainError);
  for (int n = 2; n <= 8; ++n)
    for (int k = 1; k < n; ++k) {
      const ProblemSpec spec(n, k);
      CHECK(std::abs(lyapunov(spec, {1.0, static_cast<double>(n - k)})) < 1e-15);
      CHECK(lyapunov(spec, {0.0, static_cast<double>(n - k)}) == doctest::Approx(k / (k + 1.0)));
      CHECK(lyapunov_derivative(spec, {1.0, 3.0}) == 0);
      CHECK(lyapunov_derivative(spec, {0.0, 2.0}) == doctest::Approx(-(n - k) * k));
    }

  oracle::Gen gen(2024);
  for (int i = 0; i < 10000; ++i) {
    const auto [n, k] = gen.spec_below(10);
    const ProblemSpec spec(n, k);
    const PhasePoint p{gen.log_uniform(1e-6, 20), gen.log_uniform(1e-6, 50)};
    const double d = lyapunov_derivative(spec, p);
    const auto g = lyapunov_gradient(spec, p);
    const auto f = vector_field(spec, p);
    const double chain = g.dv * f.dv + g.dw * f.dw;
    const double scale = std::abs(g.dv * f.dv) + std::abs(g.dw * f.dw);
    REQUIRE(std::abs(d - chain) <= 1e-10 * std::max(scale, std::abs(d)) + 1e-300);
    CHECK(d <= 0);
    CHECK(lyapunov(spec, p) >= 0);
  }
}

TEST_CASE("lyapunov is nonincreasing along trajectories") {
  const int specs[][2] = {{2, 1}, {3, 1}, {3, 2}, {4, 1}, {5, 3}, {6, 1}, {6, 2}, {6, 5}, {7, 4}, {9, 2}};
  for (const auto& nk : specs) {
    const ProblemSpec spec(nk[0], nk[1]);
    IntegratorConfig cfg;
    const auto traj = integrate_trajectory(spec, cfg);
    double prev = lyapunov(spec, traj.at(traj.t_begin()));
    for (const auto& seg : traj.dense().segments())
      for (int j = 1; j <= 4; ++j) {
        const double l = lyapunov(spec, traj.at(seg.t0 + seg.h * j / 4));
        REQUIRE(l - prev <= 10 * cfg.rel_tol * std::max(1.0, std::abs(prev)));
        prev = std::min(prev, l);
      }
  }
}

TEST_CASE("quadrant invariance") {
  for (int n = 1; n <= 8; ++n)
    for (int k = 1; k <= n; ++k) {
      const auto traj = integrate_trajectory(ProblemSpec(n, k));
      for (const auto& s : traj.samples()) {
        REQUIRE(s.point.v >= 0);
        REQUIRE(s.point.w > 0);
      }
      const auto ts = traj.samples();
      for (std::size_t i = 1; i < ts.size(); ++i) REQUIRE(ts[i].t > ts[i - 1].t);
    }
}

TEST_CASE("seed robustness") {
  for (const auto& nk : {std::pair{6, 1}, std::pair{6, 5}, std::pair{6, 6}, std::pair{3, 2}}) {
    const ProblemSpec spec(nk.first, nk.second);
    IntegratorConfig a;
    IntegratorConfig b;
    b.seed_delta = a.seed_delta / 2;
    const auto ta = integrate_trajectory(spec, a);
    const auto tb = integrate_trajectory(spec, b);
    const double d = pathdist::hausdorff(ta, tb, std::log(2.0) / spec.k());
    CAPTURE(nk.first);
    CAPTURE(nk.second);
    CHECK(d <= 10 * a.rel_tol);
  }
}

TEST_CASE("invariant region") {
  CHECK_THROWS_AS(region_exponent(ProblemSpec(6, 3)), DomainError);
  CHECK_THROWS_AS(in_invariant_region(ProblemSpec(5, 3), {0.5, 0.5}), DomainError);
  const ProblemSpec spec(6, 1);
  const double b = region_exponent(spec);
  CHECK(b == doctest::Approx(2 / (5 - std::sqrt(5.0))).epsilon(1e-14));
  CHECK(std::abs(region_boundary_h_slope_at_one(spec, b)) < 1e-14);
  CHECK(region_boundary_h(spec, b, 0.5) < 0);
  CHECK(std::abs(region_boundary_h(spec, b, 1 - 1e-9)) < 1e-8);
  CHECK_THROWS_AS(region_boundary_h(spec, b, 0), DomainError);
  CHECK_THROWS_AS(region_boundary_h(spec, b, 1), DomainError);
  CHECK(in_invariant_region(spec, {1, 5}));
  CHECK(in_invariant_region(spec, {0, 0}));
  CHECK_FALSE(in_invariant_region(spec, {0.5, 1}));
  CHECK_FALSE(in_invariant_region(spec, {1.1, 5.5}));

  for (int n = 5; n <= 12; ++n)
    for (int k = 1; n - k >= 4; ++k) {
      const ProblemSpec sp(n, k);
      const double bb = region_exponent(sp);
      const auto lin = equilibrium_linearization(sp);
      CHECK(bb >= lin.b_range->first - 1e-15);
      CHECK(bb <= lin.b_range->second + 1e-15);
      // inward pointing field on the upper boundary curve
      const double g = n - k;
      for (int i = 1; i <= 104; ++i) {
        const double v = i / 105.0;
        const PhasePoint p{v, g * std::pow(v, bb)};
        const auto f = vector_field(sp, p);
        const double normal = f.dw - g * bb * std::pow(v, bb - 1) * f.dv;
        CHECK(normal <= 1e-12 * std::abs(f.dw));
        CHECK(region_boundary_h(sp, bb, v) <= 1e-12);
      }
      const auto traj = integrate_trajectory(sp);
      for (const auto& s : traj.dense().segments())
        for (int j = 0; j < 4; ++j) {
          const auto p = traj.at(s.t0 + s.h * j / 4);
          REQUIRE(in_invariant_region(sp, p));
        }
    }
}

TEST_CASE("crossing counts") {
  const ProblemSpec ma(6, 6);
  const auto tma = integrate_trajectory(ma);
  const auto over = count_crossings(tma, std::pow(7.0 / 6, 6) * 1.001);
  CHECK(over.count == 0);
  CHECK(over.tail == CrossingTail::settled);
  CHECK(count_crossings(tma, 1.0).count == 1);

  const auto node = integrate_trajectory(ProblemSpec(6, 1));
  for (double v : {1e-6, 0.1, 0.5, 0.9, 0.999}) {
    const auto c = count_crossings(node, v);
    CHECK(c.count == 1);
    CHECK(c.tail == CrossingTail::settled);
  }
  CHECK(count_crossings(node, 1.5).count == 0);

  const auto spiral = integrate_trajectory(ProblemSpec(6, 5));
  const auto c = count_crossings(spiral, 1.0);
  CHECK(c.tail == CrossingTail::spiral_infinite_at_center);
  CHECK(c.count >= 8);
  CHECK(c.times.size() == c.count);
  CHECK(std::is_sorted(c.times.begin(), c.times.end()));
  for (double t : c.times) CHECK(std::abs(spiral.at(t).v - 1) < 1e-9);

  IntegratorConfig fine;
  fine.eq_radius = 1e-10;
  const auto deep = integrate_trajectory(ProblemSpec(6, 5), fine);
  CHECK(count_crossings(deep, 1.0, fine.eq_radius).count >= 10);

  // the maximum counts as one tangential crossing
  const double top = spiral.max_v();
  CHECK(count_crossings(spiral, top).count == 1);
  CHECK(count_crossings(spiral, top * (1 + 1e-9)).count == 0);
}

TEST_CASE("spiral tail agrees with the linearization") {
  for (int n = 1; n <= 10; ++n)
    for (int k = 1; k <= n; ++k) {
      const ProblemSpec spec(n, k);
      const auto traj = integrate_trajectory(spec);
      const auto c = count_crossings(traj, 1.0);
      const bool spiral = equilibrium_linearization(spec).kind == EquilibriumKind::spiral;
      CAPTURE(n);
      CAPTURE(k);
      CHECK((c.tail == CrossingTail::spiral_infinite_at_center) == spiral);
    }
}

TEST_CASE("parameter of point") {
  for (int n = 2; n <= 12; ++n)
    for (int k = 1; k < n; ++k) {
      const ProblemSpec spec(n, k);
      CHECK(rel(parameter_of_point(spec, 1.0), oracle::beta(n, k)) < 1e-13);
      CHECK(parameter_of_point(spec, 0) == 0);
      CHECK(point_of_parameter(spec, parameter_of_point(spec, 0.37)) == doctest::Approx(0.37));
    }
  for (int n = 1; n <= 12; ++n)
    CHECK(rel(parameter_of_point(ProblemSpec(n, n), std::pow((n + 1.0) / n, n)), oracle::a0(n)) <
          1e-13);
  CHECK_THROWS_AS(parameter_of_point(ProblemSpec(2, 1), -1), DomainError);
}

TEST_CASE("bifurcation sweep") {
  const double a0 = oracle::a0(6);
  std::vector<double> below;
  for (int i = 1; i <= 40; ++i) below.push_back(a0 * i / 41.0);
  const auto ma = bifurcation_sweep(ProblemSpec(6, 6), below);
  CHECK(rel(ma.alpha_star_estimate, a0) < 1e-3);
  CHECK_FALSE(ma.beta_marker);
  for (const auto& e : ma.entries) CHECK(e.count == 1);

  const double beta1 = oracle::beta(6, 1);
  const std::vector<double> node_grid{0.5 * beta1, 0.99 * beta1, 1.001 * beta1, 2 * beta1};
  const auto node = bifurcation_sweep(ProblemSpec(6, 1), node_grid);
  REQUIRE(node.beta_marker);
  CHECK(rel(*node.beta_marker, beta1) < 1e-13);
  CHECK(node.entries[0].count == 1);
  CHECK(node.entries[1].count == 1);
  CHECK(node.entries[2].count == 0);
  CHECK(node.entries[3].count == 0);

  const std::vector<double> empty;
  CHECK_THROWS_AS(bifurcation_sweep(ProblemSpec(6, 1), empty), DomainError);
  const std::vector<double> unsorted{2, 1};
  CHECK_THROWS_AS(bifurcation_sweep(ProblemSpec(6, 1), unsorted), DomainError);
  const std::vector<double> negative{-1, 1};
  CHECK_THROWS_AS(bifurcation_sweep(ProblemSpec(6, 1), negative), DomainError);
}
