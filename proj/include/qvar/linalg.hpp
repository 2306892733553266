#pragma once

#include "qvar/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qvar {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Exact rank via Bareiss fraction-free elimination after clearing row
// denominators.
int exact_rank(const RationalMatrix &m);

// Singular values below rel_tol * sigma_max are zero; so is everything when
// sigma_max <= abs_floor.
int numeric_rank(const Eigen::MatrixXcd &m, double rel_tol = 1e-9, double abs_floor = 0.0);

} // namespace qvar
