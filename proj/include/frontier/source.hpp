#pragma once

#include <functional>
#include <optional>

#include "frontier/types.hpp"

namespace frontier
{

struct Box
{
  double xmin, xmax, ymin, ymax;
  bool contains(Point p) const
  {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

// Right-hand side evaluable pointwise. Outside `support` it vanishes.
struct Source
{
  std::function<Complex(Point)> value;
  std::optional<Box> support;
  // Lower bound on the degree of triangle rules used for integrals of f.
  int rule_degree = 0;
};

// Rule degree for every integral involving f against polynomials of
// degree <= space_degree + 2.
inline int load_rule_degree(const Source& f, int space_degree)
{
  return std::max(f.rule_degree, 2 * space_degree + 6);
}

inline Source indicator_source(Box box)
{
  Source s;
  s.value = [box](Point p) { return Complex(box.contains(p) ? 1.0 : 0.0); };
  s.support = box;
  return s;
}

inline Source zero_source()
{
  Source s;
  s.value = [](Point) { return Complex(0.0); };
  s.support = Box{0.0, 0.0, 0.0, 0.0};
  return s;
}

}  // namespace frontier
