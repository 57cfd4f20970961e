#pragma once

// Minimal self-contained SVG plots on a fixed 800x600 view box.

#include <string>
#include <utility>
#include <vector>

#include "khess/phase_plane.hpp"

namespace khess::svg {

struct Range {
  double lo = 0;
  double hi = 1;
};

class Canvas {
 public:
  Canvas(Range x, Range y, std::string title);

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double width = 1.5, bool dashed = false);
  void marker(double x, double y, const std::string& color, double radius = 4);
  void label(double x, double y, const std::string& text);
  void axes(const std::string& xlabel, const std::string& ylabel);

  /// The timestamp goes into a leading comment and nowhere else.
  std::string render(const std::string& timestamp) const;

  static constexpr double kWidth = 800;
  static constexpr double kHeight = 600;

 private:
  double px(double x) const;
  double py(double y) const;

  Range x_;
  Range y_;
  std::string title_;
  std::vector<std::string> body_;
};

/// Trajectory with the equilibrium, the line v = 1 and, for n - k >= 4, the
/// invariant-region boundaries.
std::string phase_diagram(const Trajectory& traj, const std::string& timestamp);

}  // namespace khess::svg
