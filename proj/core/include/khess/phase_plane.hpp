#pragma once

// The autonomous system in t = log s
//
//   v_t = -(n-k) v + w,   w_t = k w (1 - v^{1/k})
//
// obtained from v = (u_s s / k)^k, w = lambda k^{-k} s^k e^{-u}. Radial
// solutions of the nonlocal exponential problem are the points of the unique
// trajectory leaving the origin; the parameter a is read off from v.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "khess/constants.hpp"
#include "khess/ode.hpp"

namespace khess {

struct PhasePoint {
  double v = 0;
  double w = 0;
};

struct FieldValue {
  double dv = 0;
  double dw = 0;
};

/// Rejects points outside the closed positive quadrant.
FieldValue vector_field(const ProblemSpec& spec, PhasePoint p);

/// Point on the unstable direction w = n v of the origin.
PhasePoint seed_near_origin(const ProblemSpec& spec, double delta);

/// Coefficients c_j of the unstable manifold of the origin written as
/// w = v sum_j c_j y^j, y = v^{1/k}; c_0 = n. Exact after j = 1 when k = n.
std::vector<double> unstable_manifold_series(const ProblemSpec& spec, int terms = 16);
/// (delta/n, w) with w taken from the manifold series instead of w = n v.
PhasePoint seed_on_manifold(const ProblemSpec& spec, double delta);

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-20;
  double t_max = 200;
  double eq_radius = 1e-6;
  double seed_delta = 1e-8;
  double max_step = 0.25;

  void validate() const;
};

enum class Termination { equilibrium_ball, integrable_limit, time_cap };
std::string_view to_string(Termination t);

struct TrajectorySample {
  double t = 0;
  PhasePoint point;
};

/// Local extremum of v(t) located on the dense output.
struct VExtremum {
  double t = 0;
  double v = 0;
  bool maximum = false;
};

class Trajectory {
 public:
  Trajectory(ProblemSpec spec, ode::DenseSolution<2> solution, Termination termination,
             double seed_scale);

  const ProblemSpec& spec() const { return spec_; }
  Termination termination() const { return termination_; }
  double seed_scale() const { return seed_scale_; }
  double t_begin() const { return solution_.t_begin(); }
  double t_end() const { return solution_.t_end(); }

  /// Step endpoints, starting with the seed.
  std::vector<TrajectorySample> samples() const;
  /// Dense-output value; throws DomainError outside [t_begin, t_end].
  PhasePoint at(double t) const;
  PhasePoint end_point() const;
  const ode::DenseSolution<2>& dense() const { return solution_; }

  /// Interior extrema of v, in time order.
  const std::vector<VExtremum>& extrema() const { return extrema_; }
  /// Largest v on the trajectory (interior maxima and endpoints).
  double max_v() const;
  /// First time with v(t) = level, located on the dense output.
  std::optional<double> first_time_v_equals(double level) const;
  /// First time with w(t) = level.
  std::optional<double> first_time_w_equals(double level) const;

 private:
  void locate_extrema();

  ProblemSpec spec_;
  ode::DenseSolution<2> solution_;
  Termination termination_;
  double seed_scale_;
  std::vector<VExtremum> extrema_;
};

Trajectory integrate_trajectory(const ProblemSpec& spec, const IntegratorConfig& config = {});

/// L(v,w); requires k < n and w > 0.
double lyapunov(const ProblemSpec& spec, PhasePoint p);
/// dL/dt along the flow, -(n-k) k (v^{1/k} - 1)(v - 1).
double lyapunov_derivative(const ProblemSpec& spec, PhasePoint p);
struct Gradient {
  double dv = 0;
  double dw = 0;
};
Gradient lyapunov_gradient(const ProblemSpec& spec, PhasePoint p);

/// h(tau) = k(1 - tau^{1/k}) - b(n-k)(tau^{b-1} - 1) for tau in (0,1);
/// negative values mean the flow enters the region through w = (n-k) v^b.
double region_boundary_h(const ProblemSpec& spec, double b, double tau);
/// h'(1) = (n-k) b (1-b) - 1.
double region_boundary_h_slope_at_one(const ProblemSpec& spec, double b);
/// Exponent of the upper boundary curve, (-eig1)^{-1}; needs n-k >= 4.
double region_exponent(const ProblemSpec& spec);
/// (n-k) v <= w <= (n-k) v^b and 0 <= v <= 1.
bool in_invariant_region(const ProblemSpec& spec, PhasePoint p);

enum class CrossingTail { settled, spiral_infinite_at_center, unresolved };
std::string_view to_string(CrossingTail t);

struct CrossingCount {
  std::size_t count = 0;
  CrossingTail tail = CrossingTail::settled;
  /// Transversal crossing times (tangential touches are counted but not listed).
  std::vector<double> times;
};

/// Number of solutions of v(t) = v_star along the trajectory; a tangential
/// touch at an extremum counts once.
CrossingCount count_crossings(const Trajectory& traj, double v_star, double eq_radius = 1e-6);

/// a = k^k A(k,n) v.
double parameter_of_point(const ProblemSpec& spec, double v);
/// Inverse of parameter_of_point.
double point_of_parameter(const ProblemSpec& spec, double a);

struct BifurcationEntry {
  double a = 0;
  std::size_t count = 0;
  bool infinite = false;  // a sits on the spiral center
};

struct BifurcationDiagram {
  std::vector<BifurcationEntry> entries;
  double alpha_star_estimate = 0;
  std::optional<double> beta_marker;  // absent for k = n
  Termination termination = Termination::time_cap;
};

BifurcationDiagram bifurcation_sweep(const ProblemSpec& spec, std::span<const double> a_grid,
                                     const IntegratorConfig& config = {});
/// Same sweep on an already integrated trajectory.
BifurcationDiagram bifurcation_sweep(const Trajectory& traj, std::span<const double> a_grid,
                                     double eq_radius = 1e-6);

}  // namespace khess
