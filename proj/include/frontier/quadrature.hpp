#pragma once

#include <vector>

#include "frontier/types.hpp"

namespace frontier
{

struct QuadratureRule
{
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;
  std::size_t size() const { return weights.size(); }
};

// Gauss-Legendre rule on [0,1] with n points (exact to degree 2n-1).
const QuadratureRule& gauss_legendre(int n);

// Rule on the reference triangle (area 1/2) exact for total degree `degree`.
// Collapsed Gauss-Legendre x Gauss-Jacobi(1,0) product; positive weights.
const QuadratureRule& triangle_rule(int degree);

}  // namespace frontier
