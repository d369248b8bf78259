#pragma once

#include <memory>
#include <vector>

#include "frontier/assembly.hpp"
#include "frontier/raviart_thomas.hpp"

namespace frontier
{

// Broken polynomial data f_h; coefficients in the orthonormal reference
// basis of P_degree on every element.
struct OscillationData
{
  int degree = 0;
  std::vector<Eigen::VectorXcd> coefficients;
  Complex evaluate(Index K, Point xhat) const;
};

OscillationData project_oscillation(const Problem& problem,
                                    const LagrangeSpace& space,
                                    Execution exec = Execution::Parallel);

// Contribution of one vertex patch, as local RT coefficients on each patch
// element.
struct PatchFlux
{
  Index center = -1;
  std::vector<Index> elements;
  std::vector<Eigen::VectorXcd> local;
  // Relative violation of the divergence compatibility condition (interior
  // vertices only).
  double compatibility = 0.0;
};

// Degree of the flux space for a Lagrange space of degree p.
inline int flux_degree(int p) { return p + 2; }

// Signed integral of the divergence datum over the patch and the sum of the
// magnitudes of its parts.
struct PatchCompatibility
{
  Complex sum = 0.0;
  double scale = 0.0;
};
PatchCompatibility patch_compatibility(const Problem& problem,
                                       const ScalarField& u_h, Index a);

// Compatibility is measured relative to max(patch scale, reference_scale);
// equilibrate() passes the largest patch scale of the mesh.
PatchFlux solve_patch(const Problem& problem, const ScalarField& u_h, Index a,
                      double reference_scale = 0.0);

class EquilibratedFlux
{
public:
  EquilibratedFlux() = default;
  EquilibratedFlux(std::shared_ptr<const Mesh> mesh, int degree,
                   ScalarKind kind, std::vector<Eigen::VectorXcd> coefficients);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  ScalarKind kind() const { return kind_; }
  const RaviartThomasElement& element() const { return *element_; }
  const Eigen::VectorXcd& coefficients(Index K) const { return coefficients_[K]; }
  Eigen::VectorXcd& coefficients(Index K) { return coefficients_[K]; }

  Eigen::Vector2cd value(Index K, Point xhat) const;
  Complex divergence(Index K, Point xhat) const;
  // Moment i of the normal trace on local edge e against the Legendre
  // polynomial, outward normal of K.
  Complex normal_moment(Index K, int e, int i) const
  {
    return coefficients_[K][element_->face_dof(e, i)];
  }

private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_ = 0;
  ScalarKind kind_ = ScalarKind::Real;
  const RaviartThomasElement* element_ = nullptr;
  std::vector<Eigen::VectorXcd> coefficients_;
};

// Sums the patch contributions elementwise; throws if normal traces jump
// across an interior face by more than 1e-9 relative.
EquilibratedFlux assemble_flux(std::shared_ptr<const Mesh> mesh, int degree,
                               ScalarKind kind,
                               const std::vector<PatchFlux>& patches,
                               Execution exec = Execution::Parallel);

// Largest normal-trace jump across interior faces, relative to the largest
// face moment.
double normal_jump(const EquilibratedFlux& flux);

struct Equilibration
{
  EquilibratedFlux flux;
  OscillationData oscillation;
};

Equilibration equilibrate(const Problem& problem, const ScalarField& u_h,
                          Execution exec = Execution::Parallel);

struct BoundaryTrace
{
  struct Entry
  {
    Index face;
    Index element;
    double norm;
  };
  std::vector<Entry> faces;            // artificial boundary faces only
  std::vector<double> element_norm;   // per element, 0 away from the boundary
};

// L2 norm of the normal trace on artificial boundary faces.
BoundaryTrace boundary_normal_trace(const EquilibratedFlux& flux);
// Norm on [0, |e|] of the trace with the given Legendre moments.
double trace_norm_from_moments(const Eigen::VectorXcd& moments, double length);

}  // namespace frontier
