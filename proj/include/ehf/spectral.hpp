#pragma once

#include <span>
#include <vector>

namespace ehf {

/// Apply (c^2 - Laplacian)^{power/2} to a radial function sampled at r_j = j dr,
/// j = 0..N, with u vanishing at r = N dr.
///
/// Works on w = r u, which the radial Laplacian maps to w'' with odd symmetry
/// about the axis, so a type-I sine transform diagonalizes the operator with
/// wavenumbers kappa_k = pi k / (N dr). The axis value comes from the even
/// quadratic through the first two interior nodes.
std::vector<double> apply_radial_symbol(std::span<const double> u, double dr, double c, double power);

}  // namespace ehf
