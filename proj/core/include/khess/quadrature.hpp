#pragma once

// Grids, finite differences and quadrature on uniform grids in t = log s.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace khess::quad {

/// count points, log-uniform on [s_min, s_max]; the last point is s_max exactly.
std::vector<double> log_grid(double s_min, double s_max, std::size_t count);

/// Spacing in t = log s of a log-uniform grid. Throws DomainError when the
/// grid is not log-uniform to relative 1e-9.
double log_spacing(std::span<const double> grid);

/// Trapezoid rule with Gregory endpoint corrections through fifth differences.
/// Needs at least 12 samples; falls back to Simpson/trapezoid below that.
double gregory(std::span<const double> f, double h);

/// I[i] = integral from x_i to x_N, each interval done with a six-point
/// interpolatory rule (one-sided near the ends).
std::vector<double> cumulative_from_right(std::span<const double> f, double h);

/// Sixth-order centered first derivative at interior index i.
double centered_derivative(std::span<const double> f, double h, std::size_t i);
inline constexpr std::size_t kStencilHalfWidth = 3;

/// int_0^X x^q P(x) dx where P interpolates (x_i, g_i); the nodes need not
/// include 0. For integrands with an algebraic zero at an endpoint.
double product_endpoint(std::span<const double> x, std::span<const double> g, double q, double X);

/// Five-point Gauss-Legendre on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Bracketed root of f on [a, b] (f(a), f(b) of opposite sign or zero).
double find_root(const std::function<double(double)>& f, double a, double b);

}  // namespace khess::quad
