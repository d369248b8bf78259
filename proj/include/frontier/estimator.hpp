#pragma once

#include <vector>

#include "frontier/equilibration.hpp"

namespace frontier
{

struct EstimatorReport
{
  std::vector<double> osc;
  std::vector<double> misfit;
  std::vector<double> bnd;
  std::vector<double> eta;  // osc + misfit + bnd per element
  double total = 0.0;       // sqrt(sum eta_K^2)
  double eta_tilde = 0.0;   // without the boundary term
  double tail = 0.0;        // source mass outside the mesh (reaction-diffusion)
  double osc_total = 0.0;
  double misfit_total = 0.0;
  double bnd_total = 0.0;
};

// Weight of the boundary term.
double mu_k(const Problem& problem, const Mesh& mesh, Index K,
            const ElementGeometry& geometry);

// kappa^{-1} f outside the truncation box of the mesh, in L2.
double source_tail(const Problem& problem, const Mesh& mesh);

EstimatorReport estimate_rd(const Problem& problem, const ScalarField& u_h,
                            const Equilibration& eq,
                            Execution exec = Execution::Parallel);
// Throws if the source is not covered by the mesh.
EstimatorReport estimate_helmholtz(const Problem& problem, const ScalarField& u_h,
                                   const Equilibration& eq,
                                   Execution exec = Execution::Parallel);
EstimatorReport estimate(const Problem& problem, const ScalarField& u_h,
                         const Equilibration& eq,
                         Execution exec = Execution::Parallel);

struct ResidualBoundResult
{
  Index samples = 0;
  Index violations = 0;
  double worst_ratio = 0.0;  // |residual| / bound
};

// |(f, v) - b(u_h, v)| <= (eta + tail) ||v|| for every trial field.
ResidualBoundResult residual_bound_check(const Problem& problem,
                                         const ScalarField& u_h,
                                         const EstimatorReport& report,
                                         const std::vector<ScalarField>& trials);

}  // namespace frontier
