#pragma once

#include <vector>

#include "frontier/types.hpp"

namespace frontier
{

// Number of polynomials of total degree <= n in two variables.
constexpr int poly_dim(int n) { return (n + 1) * (n + 2) / 2; }

// Orthonormal basis of P_n on the reference triangle (0,0),(1,0),(0,1),
// ordered by total degree so that the first poly_dim(m) entries span P_m.
// Writes poly_dim(n) values; grad_x/grad_y may be null.
void orthonormal_basis(int n, double x, double y, double* value,
                       double* grad_x = nullptr, double* grad_y = nullptr);

// Legendre polynomials on [0,1] (not normalized; L_i(1) = 1).
void shifted_legendre(int n, double s, double* value);

// Homogeneous monomials (x-cx)^{n-i}(y-cy)^i, i = 0..n, with gradients.
void shifted_monomials(int n, double x, double y, double cx, double cy,
                       double* value, double* grad_x, double* grad_y);

}  // namespace frontier
