#pragma once

// Z = XY is infinitely divisible: for every m the order-1/m density is a
// genuine density whose m-fold convolution is the density of Z.

#include <vector>

#include "corrprod/types.hpp"

namespace corrprod {

/// Density of the m-th root of Z, i.e. pdf_sum_series at nu = 1/m.
EvalResult pdf_divisor(const BivariateParams& p, int m, double x, const EvalOptions& opts = {});

/// max |phi_{1/m}(t)^m - phi_1(t)| over t_grid.
double verify_divisibility_cf(const BivariateParams& p, int m, const std::vector<double>& t_grid);

struct ConvolutionCheck {
    double max_rel_dev = 0.0;
    /// Where the maximum was attained.
    double worst_x = 0.0;
    /// Lattice spacing and half-width actually used.
    double step = 0.0;
    double half_width = 0.0;
    int cells = 0;
};

/// Convolves m copies (m = 2 or 3) of the divisor on a lattice of cell
/// averages and compares with the cell averages of the density of Z at the
/// lattice cells nearest to the grid nodes. Nodes with |x| < 0.05 sigma_x
/// sigma_y are skipped. Throws PreconditionError if no window with divisor
/// tail mass below 1e-8 is found.
ConvolutionCheck convolution_check(const BivariateParams& p, int m, const GridSpec& grid);

/// convolution_check(...).max_rel_dev; m = 1 gives 0.
double verify_divisibility_convolution(const BivariateParams& p, int m, const GridSpec& grid);

} // namespace corrprod
