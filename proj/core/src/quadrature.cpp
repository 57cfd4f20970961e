#include "khess/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "khess/errors.hpp"

namespace khess::quad {

namespace {

constexpr std::size_t kRulePoints = 6;

// Weights w_j with sum_j w_j p(x_j) = integral_0^1 p for every polynomial of
// degree < kRulePoints; nodes are integer offsets relative to the interval start.
std::array<double, kRulePoints> interval_weights(int first_offset) {
  std::array<std::array<double, kRulePoints + 1>, kRulePoints> m{};
  for (std::size_t q = 0; q < kRulePoints; ++q) {
    for (std::size_t j = 0; j < kRulePoints; ++j)
      m[q][j] = std::pow(static_cast<double>(first_offset + static_cast<int>(j)), q);
    m[q][kRulePoints] = 1.0 / static_cast<double>(q + 1);
  }
  for (std::size_t c = 0; c < kRulePoints; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < kRulePoints; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    for (std::size_t r = 0; r < kRulePoints; ++r) {
      if (r == c) continue;
      const double fac = m[r][c] / m[c][c];
      for (std::size_t j = c; j <= kRulePoints; ++j) m[r][j] -= fac * m[c][j];
    }
  }
  std::array<double, kRulePoints> w{};
  for (std::size_t j = 0; j < kRulePoints; ++j) w[j] = m[j][kRulePoints] / m[j][j];
  return w;
}

const std::array<std::array<double, kRulePoints>, kRulePoints>& weight_table() {
  // Row r: stencil starts r points before the interval start (r = 0..5).
  static const auto table = [] {
    std::array<std::array<double, kRulePoints>, kRulePoints> t{};
    for (std::size_t r = 0; r < kRulePoints; ++r) t[r] = interval_weights(-static_cast<int>(r));
    return t;
  }();
  return table;
}

}  // namespace

std::vector<double> log_grid(double s_min, double s_max, std::size_t count) {
  if (!(s_min > 0) || !(s_max > s_min)) throw DomainError("log_grid: need 0 < s_min < s_max");
  if (count < 2) throw DomainError("log_grid: need at least two points");
  std::vector<double> g(count);
  const double t0 = std::log(s_min);
  const double t1 = std::log(s_max);
  const double h = (t1 - t0) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = std::exp(t1 - h * static_cast<double>(count - 1 - i));
  g.back() = s_max;
  return g;
}

double log_spacing(std::span<const double> grid) {
  if (grid.size() < 2) throw DomainError("log_spacing: grid needs at least two points");
  const double h = std::log(grid.back() / grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double hi = std::log(grid[i] / grid[i - 1]);
    if (std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw DomainError("grid is not log-uniform at index " + std::to_string(i));
  }
  return h;
}

double gregory(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  double trap = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < n; ++i) trap += f[i];
  trap *= h;
  if (n < 12) {
    if (n >= 3 && n % 2 == 1) {
      double s = f.front() + f.back();
      for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
      return s * h / 3.0;
    }
    return trap;
  }
  static constexpr std::array<double, 5> c{1.0 / 12, 1.0 / 24, 19.0 / 720, 3.0 / 160,
                                           863.0 / 60480};
  static constexpr std::array<std::array<double, 6>, 6> binom{{{1, 0, 0, 0, 0, 0},
                                                               {1, 1, 0, 0, 0, 0},
                                                               {1, 2, 1, 0, 0, 0},
                                                               {1, 3, 3, 1, 0, 0},
                                                               {1, 4, 6, 4, 1, 0},
                                                               {1, 5, 10, 10, 5, 1}}};
  double corr = 0;
  for (std::size_t j = 1; j <= c.size(); ++j) {
    double fwd = 0;   // forward difference at the left end
    double back = 0;  // backward difference at the right end
    for (std::size_t i = 0; i <= j; ++i) {
      const double sign_f = ((j - i) % 2 == 0) ? 1.0 : -1.0;
      const double sign_b = (i % 2 == 0) ? 1.0 : -1.0;
      fwd += sign_f * binom[j][i] * f[i];
      back += sign_b * binom[j][i] * f[n - 1 - i];
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    corr += c[j - 1] * (back + sign * fwd);
  }
  return trap - h * corr;
}

std::vector<double> cumulative_from_right(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n < kRulePoints) {
    for (std::size_t i = n - 1; i-- > 0;) out[i] = out[i + 1] + 0.5 * h * (f[i] + f[i + 1]);
    return out;
  }
  const auto& table = weight_table();
  for (std::size_t i = n - 1; i-- > 0;) {
    // interval [i, i+1]; centre the stencil as far as the data allow
    const std::size_t ideal = (i >= 2) ? i - 2 : 0;
    const std::size_t start = std::min(ideal, n - kRulePoints);
    const auto& w = table[i - start];
    double s = 0;
    for (std::size_t j = 0; j < kRulePoints; ++j) s += w[j] * f[start + j];
    out[i] = out[i + 1] + h * s;
  }
  return out;
}

double centered_derivative(std::span<const double> f, double h, std::size_t i) {
  if (i < kStencilHalfWidth || i + kStencilHalfWidth >= f.size())
    throw DomainError("centered_derivative: index " + std::to_string(i) +
                      " lacks a full stencil");
  return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] +
          f[i + 3]) /
         (60.0 * h);
}

double product_endpoint(std::span<const double> x, std::span<const double> g, double q,
                        double X) {
  const std::size_t m = x.size();
  if (m == 0 || g.size() != m) throw DomainError("product_endpoint: need matching nodes and values");
  if (!(X > 0) || !(q > -1)) throw DomainError("product_endpoint: need X > 0 and q > -1");
  // weights from sum_j w_j xi_j^r = int_0^1 xi^{q+r}, nodes scaled to xi = x / X
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < m; ++j) a[r][j] = std::pow(x[j] / X, static_cast<double>(r));
    a[r][m] = 1.0 / (q + static_cast<double>(r) + 1.0);
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double fac = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= m; ++j) a[r][j] -= fac * a[c][j];
    }
  }
  double acc = 0;
  for (std::size_t j = 0; j < m; ++j) acc += a[j][m] / a[j][j] * g[j];
  return acc * std::pow(X, q + 1.0);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  static constexpr std::array<double, 5> x{0.0, 0.5384693101056831, -0.5384693101056831,
                                           0.9061798459386640, -0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665,
                                           0.4786286704993665, 0.2369268850561891,
                                           0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(mid + half * x[i]);
  return s * half;
}

double find_root(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a);
  const double fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0)) throw DomainError("find_root: interval does not bracket a root");
  std::uintmax_t iters = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (lo + hi);
}

}  // namespace khess::quad
