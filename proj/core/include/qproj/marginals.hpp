#pragma once

#include <vector>

#include "qproj/grid.hpp"

namespace qproj {

// Position density mu on x_grid, momentum density nu on p_grid, plus the
// arrival scenario (mass M, flight time dT, target edge a).
struct MarginalPair {
  Grid1D x_grid;
  Grid1D p_grid;
  std::vector<double> mu;
  std::vector<double> nu;
  double M = 1.0;
  double dT = 1.0;
  double a = 0.0;

  // Throws std::invalid_argument on negative values, size mismatch or
  // normalization off by more than tol.
  void validate(double tol = 1e-6) const;
};

}  // namespace qproj
