#pragma once

#include <cstddef>
#include <vector>

namespace infradius {

// Evaluation window for gridding a continuous density.
struct GridSpec {
  double lo = -8.0;
  double hi = 8.0;
  int n = 2001;  // >= 3
};

std::vector<double> linspace(double lo, double hi, int n);

// Geometric spacing; lo must be positive. Suited to integrands with an
// integrable singularity or a heavy tail at one end.
std::vector<double> geomspace(double lo, double hi, int n);

// Smallest window covering both specs at the finer resolution.
GridSpec merge_grids(const GridSpec& a, const GridSpec& b);

}  // namespace infradius
