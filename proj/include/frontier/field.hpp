#pragma once

#include <functional>
#include <memory>

#include "frontier/lagrange.hpp"

namespace frontier
{

// Finite-element function over free dofs; zero on the mesh boundary and
// extended by zero outside the covered set.
class ScalarField
{
public:
  ScalarField() = default;
  ScalarField(std::shared_ptr<const LagrangeSpace> space, ScalarKind kind,
              Eigen::VectorXcd free_values);
  static ScalarField zero(std::shared_ptr<const LagrangeSpace> space,
                          ScalarKind kind);
  // Nodal interpolant; boundary dofs are set to zero.
  static ScalarField interpolate(std::shared_ptr<const LagrangeSpace> space,
                                 ScalarKind kind,
                                 const std::function<Complex(Point)>& g);

  const LagrangeSpace& space() const { return *space_; }
  std::shared_ptr<const LagrangeSpace> space_ptr() const { return space_; }
  const Mesh& mesh() const { return space_->mesh(); }
  ScalarKind kind() const { return kind_; }
  const Eigen::VectorXcd& free_values() const { return free_; }

  Complex dof_value(Index dof) const;
  Eigen::VectorXcd element_coefficients(Index K) const;
  Complex evaluate(Index K, Point xhat) const;
  // Physical gradient at a reference point of K.
  Eigen::Vector2cd gradient(Index K, Point xhat) const;

private:
  std::shared_ptr<const LagrangeSpace> space_;
  ScalarKind kind_ = ScalarKind::Real;
  Eigen::VectorXcd free_;
};

}  // namespace frontier
