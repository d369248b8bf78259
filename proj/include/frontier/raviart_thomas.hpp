#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "frontier/mesh.hpp"
#include "frontier/quadrature.hpp"

namespace frontier
{

struct VectorTabulation
{
  Eigen::MatrixXd x;    // points x basis
  Eigen::MatrixXd y;
  Eigen::MatrixXd div;
};

// H(div) element RT_q on the reference triangle. Degrees of freedom:
// normal moments against Legendre polynomials on each edge (edge e runs
// from vertex e to e+1, outward normal), then moments against the
// orthonormal basis of P_{q-1} times e_x, e_y (interleaved).
class RaviartThomasElement
{
public:
  explicit RaviartThomasElement(int degree);

  int degree() const { return degree_; }
  int num_dofs() const { return (degree_ + 1) * (degree_ + 3); }
  int face_dofs() const { return degree_ + 1; }
  int first_interior_dof() const { return 3 * (degree_ + 1); }
  int face_dof(int e, int i) const { return e * (degree_ + 1) + i; }

  void evaluate(Point xhat, double* vx, double* vy, double* div = nullptr) const;
  const VectorTabulation& tabulate(const QuadratureRule& rule) const;

  // Int w_i,a w_j,b over the reference triangle.
  const Eigen::MatrixXd& mass_xx() const { return rxx_; }
  const Eigen::MatrixXd& mass_xy() const { return rxy_; }
  const Eigen::MatrixXd& mass_yy() const { return ryy_; }
  // D(m, j) = int div w_j P_m, P_m orthonormal on P_q.
  const Eigen::MatrixXd& divergence() const { return div_; }

private:
  int degree_;
  int span_size_;
  Eigen::MatrixXd coefficients_;  // span -> basis
  Eigen::MatrixXd rxx_, rxy_, ryy_, div_;
  mutable std::mutex cache_mutex_;
  mutable std::map<const QuadratureRule*, std::unique_ptr<VectorTabulation>>
      cache_;

  void evaluate_span(Point xhat, double* vx, double* vy, double* div) const;
};

const RaviartThomasElement& raviart_thomas_element(int degree);

// Reference outward normal and length of local edge e.
Point reference_edge_normal(int e);
double reference_edge_length(int e);

// Multiplier converting the global moment i of face `e` of K (global
// orientation: from the lower to the higher vertex id) into the local one.
inline double face_orientation(const Mesh& mesh, Index K, int e, int i)
{
  const auto& v = mesh.element(K).v;
  if (v[e] < v[(e + 1) % 3])
    return 1.0;
  return i % 2 == 0 ? -1.0 : 1.0;
}

// Contravariant map of reference vectors: w = J what / det J.
inline Eigen::Vector2d piola(const Mat2& J, double det, double wx, double wy)
{
  return J * Eigen::Vector2d(wx, wy) / det;
}

}  // namespace frontier
