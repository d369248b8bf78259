#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "frontier/mesh.hpp"
#include "frontier/quadrature.hpp"

namespace frontier
{

// Values and reference gradients of a basis at the points of a rule;
// rows are points, columns are basis functions.
struct Tabulation
{
  Eigen::MatrixXd value;
  Eigen::MatrixXd dx;
  Eigen::MatrixXd dy;
};

// Nodal P_p element on the principal lattice of the reference triangle.
// Local order: vertices, edge nodes (edge e runs from vertex e to e+1),
// interior nodes.
class LagrangeElement
{
public:
  explicit LagrangeElement(int degree);

  int degree() const { return degree_; }
  int num_dofs() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }
  // phi_l = sum_k coefficients()(k, l) P_k in the orthonormal basis.
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }

  void evaluate(Point xhat, double* value, double* dx = nullptr,
                double* dy = nullptr) const;
  const Tabulation& tabulate(const QuadratureRule& rule) const;

  // Reference matrices: mass, and gradient products d_a phi_i d_b phi_j.
  const Eigen::MatrixXd& mass() const { return mass_; }
  const Eigen::MatrixXd& stiffness_xx() const { return sxx_; }
  const Eigen::MatrixXd& stiffness_yy() const { return syy_; }
  // S_xy + S_yx
  const Eigen::MatrixXd& stiffness_mixed() const { return smix_; }

private:
  int degree_;
  std::vector<Point> nodes_;
  Eigen::MatrixXd coefficients_;
  Eigen::MatrixXd mass_, sxx_, syy_, smix_;
  mutable std::mutex cache_mutex_;
  mutable std::map<const QuadratureRule*, std::unique_ptr<Tabulation>> cache_;
};

const LagrangeElement& lagrange_element(int degree);

class LagrangeSpace
{
public:
  LagrangeSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const LagrangeElement& element() const { return *element_; }
  int degree() const { return degree_; }
  int degree_of(Index /*K*/) const { return degree_; }
  // Largest element degree over the patch of vertex a.
  int patch_max_degree(Index a) const;

  Index num_dofs() const { return num_dofs_; }
  Index num_free() const { return num_free_; }
  std::span<const Index> element_dofs(Index K) const
  {
    const int n = element_->num_dofs();
    return {element_dofs_.data() + K * n, element_dofs_.data() + (K + 1) * n};
  }
  // Position among free dofs, or -1 for dofs on the mesh boundary.
  Index free_index(Index dof) const { return free_index_[dof]; }
  Point dof_position(Index dof) const { return dof_position_[dof]; }

private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  const LagrangeElement* element_;
  Index num_dofs_ = 0;
  Index num_free_ = 0;
  std::vector<Index> element_dofs_;
  std::vector<Index> free_index_;
  std::vector<Point> dof_position_;
};

// Affine map of a reference point into element K.
inline Point map_to_element(const Mesh& mesh, Index K, Point xhat)
{
  const Point a = mesh.corner(K, 0), b = mesh.corner(K, 1), c = mesh.corner(K, 2);
  return {a.x + (b.x - a.x) * xhat.x + (c.x - a.x) * xhat.y,
          a.y + (b.y - a.y) * xhat.x + (c.y - a.y) * xhat.y};
}

}  // namespace frontier
