#pragma once

#include <vector>

#include "sg2d/grid.hpp"

namespace sg2d {

/// P_N^2 G(x) = (1/4pi^2) sum_n chi_N(n)^2 <n>^{-2} cos(n.x), G the Green
/// function of 1 - Delta on T^2. Direct lattice summation over |n_i| <= N.
double truncated_green(double x1, double x2, int cutoff,
                       CutoffBridge bridge = CutoffBridge::smooth_exponential);

/// The same kernel at every grid point, via one inverse FFT.
std::vector<double> truncated_green_grid(const GridSpec& grid, int cutoff);

}  // namespace sg2d
