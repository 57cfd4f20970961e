#pragma once

// Radial profiles u(s), s = |z|^2, on grids in (0, 1] with u(1) = 0.
//
// The reduced equation is (u_s^k s^n)_s s^{1-n} = lambda e^{-u}; with the
// binomial factor restored, S_k(u) = (1/k) C(n-1,k-1) (u_s^k s^n)_s s^{1-n}.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "khess/constants.hpp"
#include "khess/ode.hpp"
#include "khess/phase_plane.hpp"

namespace khess {

struct RadialProfile {
  std::vector<double> s;
  std::vector<double> u;
  std::vector<double> us;
  std::optional<double> a;
  std::optional<double> lambda;

  std::size_t size() const { return s.size(); }
  /// Equal lengths, at least two points, s strictly increasing in (0, 1],
  /// s.back() == 1 and u.back() == 0.
  void validate() const;
};

struct GridSpec {
  std::size_t count = 2000;
  double s_min = 1e-12;
};

/// int_0^1 g ds over the profile grid; below the first point g is taken to
/// scale like s^tail_power.
double radial_integral(const RadialProfile& profile, std::span<const double> g,
                       double tail_power);

/// Same integral for g vanishing like (1-s)^q at s = 1 (powers of -u): the
/// last intervals use a product rule for (1-s)^q times a polynomial.
double radial_integral_endpoint(const RadialProfile& profile, std::span<const double> g,
                                double tail_power, double q);

/// S_k at grid index i from centered differences of u_s^k s^n in log s.
double radial_hessian(const ProblemSpec& spec, const RadialProfile& profile, std::size_t i);

/// Profile read off the trajectory with t_star moved to s = 1.
RadialProfile reconstruct_profile(const ProblemSpec& spec, const Trajectory& traj, double t_star,
                                  const GridSpec& grid = {});

struct ExplicitSolution {
  RadialProfile profile;
  double a_eps = 0;
};

/// u_eps = (n+1)[log(s+eps^2) - log(1+eps^2)] with its parameter
/// a_eps = (n+1)^n pi^n / (n! (1+eps^2)^n).
ExplicitSolution explicit_ma(int n, double eps, const GridSpec& grid = {});
double explicit_ma_parameter(int n, double eps);
/// Closed-form phase point of u_eps at s.
PhasePoint explicit_ma_phase(int n, double eps, double s);

/// int_0^1 e^{-u} s^{n-1} ds; the part below the first grid point is taken
/// as e^{-u(s_0)} s_0^n / n. Throws DomainError when the integrand grows
/// towards s = 0 at the first grid points.
double normalization_integral(const RadialProfile& profile, int n);

/// max |S_k - rhs| / (1 + |rhs|) over points with a full stencil.
double hessian_residual(const ProblemSpec& spec, const RadialProfile& profile,
                        std::span<const double> rhs);

/// lambda e^{-u} with the binomial factor, i.e. a e^{-u} / int_{B_1} e^{-u}.
std::vector<double> exponential_rhs(const ProblemSpec& spec, const RadialProfile& profile,
                                    double a);

enum class ShootingStatus { zero_found, no_zero_within_cap };
std::string_view to_string(ShootingStatus s);

struct ShootingOptions {
  double m = 1;
  double s_cap = 1e6;
  double s_start = 1e-10;
  double rel_tol = 1e-12;
};

/// Solution of (1/k) C(n-1,k-1) (u_s^k s^n)_s s^{1-n} = (-u)^p from u(0) = -m.
class ShootingResult {
 public:
  ShootingResult(ProblemSpec spec, double p, double m, double s_start, double u_s0,
                 ode::DenseSolution<2> solution, std::optional<double> first_zero);

  const ProblemSpec& spec() const { return spec_; }
  double p() const { return p_; }
  double m() const { return m_; }
  ShootingStatus status() const {
    return first_zero_ ? ShootingStatus::zero_found : ShootingStatus::no_zero_within_cap;
  }
  std::optional<double> first_zero() const { return first_zero_; }
  double s_stop() const;
  /// p == k: the eigenvalue case, solved but outside the existence theory.
  bool eigenvalue_regime() const { return p_ == spec_.k(); }
  double series_slope() const { return us0_; }

  double u(double s) const;
  double us(double s) const;
  /// Values at the accepted steps (s, u, u_s).
  std::vector<std::array<double, 3>> samples() const;

 private:
  ProblemSpec spec_;
  double p_;
  double m_;
  double s_start_;
  double us0_;
  ode::DenseSolution<2> sol_;
  std::optional<double> first_zero_;
};

ShootingResult shoot_power(const ProblemSpec& spec, double p, const ShootingOptions& opt = {});

/// Zero radius for u(0) = -m from the radius for m = 1:
/// R(m) = R(1) m^{(k-p)/k}.
double zero_radius_scaling(const ProblemSpec& spec, double p, double radius_at_unit_m, double m);

/// Rescales a zero-found shooting solution to the unit ball:
/// u~(s) = R^{k/(p-k)} u(R s), which solves the same equation.
RadialProfile rescale_to_unit_ball(const ShootingResult& result, const GridSpec& grid = {});

/// max over the grid of |u(s)| / [(int_s^1 |u_s|^{k+1} s^n)^{1/(k+1)}
/// (int_s^1 s^{-n/k})^{k/(k+1)}]; 0/0 counts as 0. Requires k < n.
double pointwise_bound_check(const ProblemSpec& spec, const RadialProfile& profile);

struct FunctionalValue {
  double hessian_energy = 0;  // A/(k+1) int |u_s|^{k+1} s^n
  double potential = 0;       // B/(p+1) int |u|^{p+1} s^{n-1}
  double value = 0;
};

FunctionalValue functional_value(const ProblemSpec& spec, const RadialProfile& profile, double p);

/// Relative residual |A int u_s^k phi' s^n + B int |u|^p phi s^{n-1}| / (|.| + |.|)
/// for phi(s) = 1 - s^j; one entry per j in 1..count.
std::vector<double> weak_form_residuals(const ProblemSpec& spec, const RadialProfile& profile,
                                        double p, int count = 5);

struct RealHalfDim {
  RadialProfile profile;
  double a_tilde = 0;
  double alpha_tilde = 0;
  double residual = 0;
  bool below_threshold = false;
};

/// Real Hessian of order d/2 in R^d, radial in s = |x|^2.
RealHalfDim real_halfdim(int d, double eps, const GridSpec& grid = {});
double real_halfdim_parameter(int d, double eps);

}  // namespace khess
