#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qproj {

// Uniform lattice lo, lo+step, ..., hi with `points` nodes.
struct Grid1D {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 0;

  Grid1D() = default;
  Grid1D(double lo_, double hi_, std::size_t points_) : lo(lo_), hi(hi_), points(points_) {
    if (points < 2 || !(hi > lo)) throw std::invalid_argument("Grid1D: need hi > lo and >= 2 points");
  }
  static Grid1D with_step(double lo, double hi, double step);

  double step() const { return (hi - lo) / static_cast<double>(points - 1); }
  double at(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
  std::vector<double> nodes() const;
};

// Trapezoid rule on a uniform lattice.
double trapezoid(const std::vector<double>& values, double step);

struct Lattice2D {
  Grid1D x;
  Grid1D p;
};

}  // namespace qproj
