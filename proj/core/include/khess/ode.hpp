#pragma once

// Dormand-Prince 5(4) with the standard fourth-order continuous extension.
// Small fixed-size systems only; state is a std::array.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "khess/errors.hpp"

namespace khess::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted step [t0, t0 + h] with its interpolant.
template <std::size_t N>
struct DenseSegment {
  double t0 = 0;
  double h = 0;
  std::array<State<N>, 5> r{};

  double t1() const { return t0 + h; }
  State<N> start() const { return r[0]; }
  State<N> end() const {
    State<N> y{};
    for (std::size_t i = 0; i < N; ++i) y[i] = r[0][i] + r[1][i];
    return y;
  }
  State<N> at(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State<N> y{};
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
    return y;
  }
};

struct StepControl {
  double rel_tol = 1e-10;
  double max_step = 0.25;
  double initial_step = 1e-3;
  std::size_t max_steps = 2'000'000;
};

/// Piecewise interpolant over the accepted steps.
template <std::size_t N>
class DenseSolution {
 public:
  DenseSolution() = default;
  explicit DenseSolution(std::vector<DenseSegment<N>> segs) : segs_(std::move(segs)) {}

  bool empty() const { return segs_.empty(); }
  double t_begin() const { return segs_.front().t0; }
  double t_end() const { return segs_.back().t1(); }
  std::span<const DenseSegment<N>> segments() const { return segs_; }

  std::size_t locate(double t) const {
    auto it = std::upper_bound(segs_.begin(), segs_.end(), t,
                               [](double x, const DenseSegment<N>& s) { return x < s.t0; });
    if (it == segs_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(segs_.begin(), it) - 1);
  }
  State<N> at(double t) const { return segs_[locate(t)].at(t); }

 private:
  std::vector<DenseSegment<N>> segs_;
};

template <std::size_t N>
using Rhs = std::function<void(double, const State<N>&, State<N>&)>;

/// Called after every accepted step; returning true stops the integration.
template <std::size_t N>
using StepObserver = std::function<bool(const DenseSegment<N>&)>;

/// Integrates y' = f(t, y) from t0 towards t_end. abs_tol is per component.
template <std::size_t N>
DenseSolution<N> integrate(const Rhs<N>& f, double t0, State<N> y0, double t_end,
                           const State<N>& abs_tol, const StepControl& ctl,
                           const StepObserver<N>& observer = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  if (!(t_end > t0)) throw IntegrationFault("integrate: t_end must exceed t0");
  if (!(ctl.rel_tol > 0)) throw IntegrationFault("integrate: rel_tol must be positive");

  std::vector<DenseSegment<N>> segs;
  State<N> k1, k2, k3, k4, k5, k6, k7, tmp, y1;
  double t = t0;
  State<N> y = y0;
  double h = std::min({ctl.initial_step, ctl.max_step, t_end - t0});
  f(t, y, k1);

  auto combine = [&](State<N>& out, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    for (std::size_t i = 0; i < N; ++i) {
      double s = 0;
      for (const auto& [c, k] : terms) s += c * (*k)[i];
      out[i] = y[i] + h * s;
    }
  };

  std::size_t steps = 0;
  double err_prev = 1e-4;
  bool last_rejected = false;
  while (t < t_end) {
    if (++steps > ctl.max_steps)
      throw IntegrationFault("integrate: step budget exhausted at t=" + std::to_string(t));
    if (t + h > t_end) h = t_end - t;
    if (h <= 1e-14 * std::max(1.0, std::abs(t)))
      throw IntegrationFault("integrate: step size underflow at t=" + std::to_string(t));

    combine(tmp, {{a21, &k1}});
    f(t + c2 * h, tmp, k2);
    combine(tmp, {{a31, &k1}, {a32, &k2}});
    f(t + c3 * h, tmp, k3);
    combine(tmp, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    f(t + c4 * h, tmp, k4);
    combine(tmp, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    f(t + c5 * h, tmp, k5);
    combine(tmp, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    f(t + h, tmp, k6);
    combine(y1, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    f(t + h, y1, k7);

    double err = 0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double est =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = abs_tol[i] + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (est / sc) * (est / sc);
      finite = finite && std::isfinite(y1[i]);
    }
    err = std::sqrt(err / N);
    if (!finite || !std::isfinite(err)) {
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      DenseSegment<N> seg;
      seg.t0 = t;
      seg.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = y1[i] - y[i];
        const double bspl = h * k1[i] - dy;
        seg.r[0][i] = y[i];
        seg.r[1][i] = dy;
        seg.r[2][i] = bspl;
        seg.r[3][i] = dy - h * k7[i] - bspl;
        seg.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                           d7 * k7[i]);
      }
      segs.push_back(seg);
      t += h;
      y = y1;
      k1 = k7;
      // PI step-size controller (Hairer-Wanner, beta = 0.04)
      double fac = 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      err_prev = std::max(err, 1e-4);
      last_rejected = false;
      h = std::min(h * fac, ctl.max_step);
      if (observer && observer(segs.back())) break;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }
  return DenseSolution<N>(std::move(segs));
}

}  // namespace khess::ode
