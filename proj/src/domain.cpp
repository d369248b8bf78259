#include "frontier/domain.hpp"

#include <algorithm>
#include <cmath>

namespace frontier
{

DomainSpec DomainSpec::full_plane()
{
  return DomainSpec{};
}

DomainSpec DomainSpec::t_shaped_waveguide()
{
  DomainSpec d;
  d.kind_ = DomainKind::TShapedWaveguide;
  d.layer_start_ = 5.0;
  for (Vec2 t : {Vec2(1.0, 0.0), Vec2(-1.0, 0.0), Vec2(0.0, -1.0)})
  {
    Cylinder c;
    c.axis = t;
    c.normal = Vec2(-t.y(), t.x());
    c.offset = 5.0;
    c.section_lo = -1.0;
    c.section_hi = 1.0;
    d.cylinders_.push_back(c);
  }
  return d;
}

bool DomainSpec::contains_square(int i, int j) const
{
  if (kind_ == DomainKind::FullPlane)
    return true;
  return j == -1 || j == 0 || ((i == -1 || i == 0) && j <= -2);
}

bool DomainSpec::admissible_square(int i, int j, int L) const
{
  const int r = std::max({std::abs(i), std::abs(i + 1), std::abs(j),
                          std::abs(j + 1)});
  return r <= L && contains_square(i, j);
}

int DomainSpec::region_of(Point x) const
{
  if (kind_ == DomainKind::FullPlane)
    return -1;
  if (std::max(std::abs(x.x), std::abs(x.y)) <= layer_start_)
    return -1;
  for (std::size_t r = 0; r < cylinders_.size(); ++r)
  {
    const Cylinder& c = cylinders_[r];
    const double s = c.across(x);
    if (c.along(x) > c.offset && s > c.section_lo && s < c.section_hi)
      return static_cast<int>(r);
  }
  throw Error("region_of: point outside the waveguide");
}

}  // namespace frontier
