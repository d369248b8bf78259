#pragma once

#include <vector>

#include "frontier/types.hpp"

namespace frontier
{

enum class DomainKind
{
  FullPlane,
  TShapedWaveguide
};

// Semi-infinite strip {x : x.t > offset, section_lo < x.n < section_hi},
// n = t rotated by +90 degrees.
struct Cylinder
{
  Vec2 axis;
  Vec2 normal;
  double offset = 0.0;
  double section_lo = 0.0;
  double section_hi = 0.0;
  double width() const { return section_hi - section_lo; }
  double along(Point x) const { return axis.x() * x.x + axis.y() * x.y; }
  double across(Point x) const { return normal.x() * x.x + normal.y() * x.y; }
  Point at(double along_coord, double across_coord) const
  {
    return {axis.x() * along_coord + normal.x() * across_coord,
            axis.y() * along_coord + normal.y() * across_coord};
  }
};

class DomainSpec
{
public:
  static DomainSpec full_plane();
  // Horizontal strip R x (-1,1) joined with the downward strip (-1,1) x (-inf,1);
  // absorbing layers where |x|_inf > 5.
  static DomainSpec t_shaped_waveguide();

  DomainKind kind() const { return kind_; }

  // Unit square [i,i+1] x [j,j+1] lies in the domain.
  bool contains_square(int i, int j) const;
  // Square lies in the domain and inside |x|_inf <= L.
  bool admissible_square(int i, int j, int L) const;

  const std::vector<Cylinder>& cylinders() const { return cylinders_; }
  double layer_start() const { return layer_start_; }
  // -1 inside the bounded core, otherwise the cylinder index.
  int region_of(Point x) const;

private:
  DomainKind kind_ = DomainKind::FullPlane;
  std::vector<Cylinder> cylinders_;
  double layer_start_ = 0.0;
};

}  // namespace frontier
