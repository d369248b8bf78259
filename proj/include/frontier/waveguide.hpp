#pragma once

#include <vector>

#include "frontier/field.hpp"
#include "frontier/source.hpp"

namespace frontier
{

// Piecewise-constant absorbing-layer coefficients on a grid-aligned mesh.
class PmlCoefficients
{
public:
  PmlCoefficients() = default;
  PmlCoefficients(DomainSpec domain, Complex gamma);

  Complex gamma() const { return gamma_; }
  // Cylinder index of element K (-1 in the bounded core); throws if K
  // straddles the layer interface.
  int region(const Mesh& mesh, Index K) const;

  Complex alpha(int region) const;
  CMat2 A(int region) const;
  double alpha_r(int region) const { return alpha(region).real(); }
  Mat2 A_r(int region) const { return A(region).real(); }
  // |gamma|^2 / Re(gamma)
  double norm_factor() const { return std::norm(gamma_) / gamma_.real(); }

private:
  DomainSpec domain_;
  Complex gamma_{1.0, 0.0};
};

struct ModeBasis
{
  std::vector<double> lambda;
  std::vector<Complex> k;   // k_j^2 = k^2 - lambda_j^2, Re >= 0, Im >= 0
  std::vector<double> nu;   // decay rate of the layer-damped mode
  double k_star = 0.0;
  double mu = 0.0;
};

std::vector<double> cutoff_frequencies(double width, int count);
// Orthonormal Dirichlet eigenfunction on (0, width), argument measured from
// the lower wall.
double cross_section_mode(int j, double width, double s);
ModeBasis modal_wavenumbers(double k, const std::vector<double>& lambda,
                            Complex gamma);

// Transition profile rising from 0 at x2 = -3.5 to 1 at x2 = -3.
struct Transition
{
  double value, d1, d2;
};
Transition guided_transition(double x2);
// f = (-k^2 - Laplacian)(chi U) with U the second guided mode.
Source guided_mode_source(double k);

// Projections of the trace of u on the cross-section at along-coordinate
// `station` of cylinder c onto the first J modes.
Eigen::VectorXcd modal_decomposition(const ScalarField& u, const Cylinder& c,
                                     double station, int J);

}  // namespace frontier
