#include "frontier/field.hpp"

namespace frontier
{

ScalarField::ScalarField(std::shared_ptr<const LagrangeSpace> space,
                         ScalarKind kind, Eigen::VectorXcd free_values)
    : space_(std::move(space)), kind_(kind), free_(std::move(free_values))
{
  if (free_.size() != space_->num_free())
    throw Error("ScalarField: coefficient count does not match the space");
  if (kind_ == ScalarKind::Real && free_.size() > 0
      && free_.imag().cwiseAbs().maxCoeff() != 0.0)
    throw Error("ScalarField: real field with imaginary coefficients");
}

ScalarField ScalarField::zero(std::shared_ptr<const LagrangeSpace> space,
                              ScalarKind kind)
{
  const Index n = space->num_free();
  return ScalarField(std::move(space), kind, Eigen::VectorXcd::Zero(n));
}

ScalarField ScalarField::interpolate(std::shared_ptr<const LagrangeSpace> space,
                                     ScalarKind kind,
                                     const std::function<Complex(Point)>& g)
{
  Eigen::VectorXcd values(space->num_free());
  for (Index d = 0; d < space->num_dofs(); ++d)
  {
    const Index i = space->free_index(d);
    if (i >= 0)
    {
      Complex v = g(space->dof_position(d));
      if (kind == ScalarKind::Real)
        v = v.real();
      values[i] = v;
    }
  }
  return ScalarField(std::move(space), kind, std::move(values));
}

Complex ScalarField::dof_value(Index dof) const
{
  const Index i = space_->free_index(dof);
  return i < 0 ? Complex(0.0) : free_[i];
}

Eigen::VectorXcd ScalarField::element_coefficients(Index K) const
{
  auto dofs = space_->element_dofs(K);
  Eigen::VectorXcd c(dofs.size());
  for (std::size_t l = 0; l < dofs.size(); ++l)
    c[l] = dof_value(dofs[l]);
  return c;
}

Complex ScalarField::evaluate(Index K, Point xhat) const
{
  const LagrangeElement& el = space_->element();
  double v[64];
  el.evaluate(xhat, v);
  auto dofs = space_->element_dofs(K);
  Complex s = 0.0;
  for (std::size_t l = 0; l < dofs.size(); ++l)
    s += v[l] * dof_value(dofs[l]);
  return s;
}

Eigen::Vector2cd ScalarField::gradient(Index K, Point xhat) const
{
  const LagrangeElement& el = space_->element();
  double v[64], gx[64], gy[64];
  el.evaluate(xhat, v, gx, gy);
  auto dofs = space_->element_dofs(K);
  Eigen::Vector2cd g = Eigen::Vector2cd::Zero();
  for (std::size_t l = 0; l < dofs.size(); ++l)
  {
    const Complex c = dof_value(dofs[l]);
    g[0] += gx[l] * c;
    g[1] += gy[l] * c;
  }
  const Mat2 Jinv_t = mesh().jacobian(K).inverse().transpose();
  return Jinv_t.cast<Complex>() * g;
}

}  // namespace frontier
