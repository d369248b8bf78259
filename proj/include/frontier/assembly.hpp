#pragma once

#include <functional>

#include <Eigen/Sparse>

#include "frontier/execution.hpp"
#include "frontier/field.hpp"
#include "frontier/problem.hpp"

namespace frontier
{

// Free-dof system of the sesquilinear form b(u, v), v conjugated.
struct SparseSystem
{
  ScalarKind kind = ScalarKind::Real;
  bool symmetric = true;  // real: SPD; complex: symmetric, not Hermitian
  Eigen::SparseMatrix<double> real_matrix;
  Eigen::VectorXd real_rhs;
  Eigen::SparseMatrix<Complex> complex_matrix;
  Eigen::VectorXcd complex_rhs;
  Index size() const
  {
    return kind == ScalarKind::Real ? real_rhs.size() : complex_rhs.size();
  }
};

struct AssemblyOptions
{
  // Degree of the rule used for load integrals; -1 picks the default.
  int load_rule_degree = -1;
  Execution execution = Execution::Parallel;
};

// Bounding box of K intersects the box.
bool element_meets_box(const Mesh& mesh, Index K, const Box& box);

// Element matrix E(i, j) = b(phi_j, phi_i) in local dof order.
Eigen::MatrixXcd element_form_matrix(const ElementCoefficients& c,
                                     const LagrangeElement& el, const Mat2& J);
// Real symmetric element matrix of the energy inner product.
Eigen::MatrixXd element_energy_matrix(const ElementCoefficients& c,
                                      const LagrangeElement& el, const Mat2& J);
// (f, phi_l)_K with the given rule.
Eigen::VectorXcd element_load(const Source& f, const Mesh& mesh, Index K,
                              const LagrangeElement& el,
                              const QuadratureRule& rule);

SparseSystem assemble(const Problem& problem, const LagrangeSpace& space,
                      const AssemblyOptions& options = {});
// Direct factorization; throws on breakdown or residual-check failure.
Eigen::VectorXcd solve(const SparseSystem& system);
ScalarField solve_problem(const Problem& problem,
                          std::shared_ptr<const LagrangeSpace> space,
                          const AssemblyOptions& options = {});

using ElementFilter = std::function<bool(Index)>;

// Energy norm over the elements accepted by `region` (all if empty).
double energy_norm(const ScalarField& field, const Problem& problem,
                   const ElementFilter& region = {});
// 2 Re (f, u) - b(u, u) for a real symmetric form. Equals |u|^2 at the
// Galerkin solution; a solver error enters only quadratically.
double galerkin_energy(const ScalarField& field, const Problem& problem);
// b(u, v) on a single element of a shared mesh.
Complex element_form(const Problem& problem, const ScalarField& u,
                     const ScalarField& v, Index K);

// Index in `fine` of every element of `coarse`; both meshes must contain
// the coarse elements unchanged, otherwise throws.
std::vector<Index> element_correspondence(const Mesh& coarse, const Mesh& fine);

// (f, v) - b(u_h, v), with v possibly on a larger mesh containing u_h's mesh.
Complex residual_functional(const Problem& problem, const ScalarField& u_h,
                            const ScalarField& v);

}  // namespace frontier
