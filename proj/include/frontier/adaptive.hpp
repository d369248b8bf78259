#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "frontier/oracles.hpp"

namespace frontier
{

struct AdaptiveConfig
{
  double theta = 0.2;
  int max_iter = 64;
  int p = 1;
  int L0 = 1;
  int L_ref = 48;
  // Reference solve on every n-th iteration and always on the last one;
  // 0 solves on the last one only.
  int reference_period = 1;
  // Reaction-diffusion only: the error of every iterate follows from the
  // final reference by Galerkin orthogonality of the nested spaces,
  // |u_ref - u_h|^2 = |u_ref|^2 - |u_h|^2.
  bool energy_identity = false;
  // Random test functions per iteration, degree p + 2 on the mesh extended
  // by `enriched_rings`.
  int residual_samples = 1;
  int enriched_rings = 2;
  std::uint64_t seed = 1;
  Execution execution = Execution::Parallel;

  void validate() const;
};

struct IterationRecord
{
  int iter = 0;
  Index n_dofs = 0;
  Index n_elements = 0;
  int L = 0;
  double eta = 0.0;
  double eta_tilde = 0.0;
  double osc_total = 0.0;
  double misfit_total = 0.0;
  double bnd_total = 0.0;
  double tail = 0.0;
  double energy = 0.0;  // |u_h| in the energy norm
  bool has_reference = false;
  double error_global = 0.0;
  double error_omega0 = 0.0;  // Helmholtz only
  double effectivity = 0.0;
  double effectivity_tilde = 0.0;
  Index marked = 0;
  bool boundary_marked = false;  // triggered an extension
  Index boundary_bisections = 0;  // closure bisections of boundary-ring elements
  double equilibration_worst = 0.0;
  double flux_jump = 0.0;
  Index residual_samples = 0;
  Index residual_violations = 0;
  double residual_worst = 0.0;
  // max eta_K / local error over elements away from the artificial boundary
  double efficiency_max = 0.0;
};

struct RunHistory
{
  ProblemKind kind = ProblemKind::ReactionDiffusion;
  AdaptiveConfig config;
  std::vector<IterationRecord> records;
  bool converged = false;  // stopped on a zero estimator
  // Final state, kept for artifact output.
  std::shared_ptr<const Mesh> final_mesh;
  ScalarField final_solution;
  ScalarField final_reference;
};

// Minimal prefix of the eta_K^2-descending order reaching theta * total;
// ties broken by ascending element id. Empty for an all-zero estimator.
std::vector<Index> dorfler_mark(const std::vector<double>& eta, double theta);

struct RefineResult
{
  Mesh mesh;
  bool boundary_pushed = false;
  Index interior_marked = 0;
  Index boundary_marked = 0;
  Index boundary_bisections = 0;
};

// Bisects the marked elements away from the artificial boundary and, if any
// marked element touches it, extends the truncation once.
RefineResult refine_or_extend(const Mesh& mesh, const std::vector<Index>& marked,
                              const DomainSpec& domain);

// Coarse element containing each element of a mesh that refines and/or
// extends it; -1 outside the coarse mesh.
std::vector<Index> locate_in_coarse(const Mesh& coarse, const Mesh& fine);

// u_h carried into a finer or larger space (zero outside its mesh).
ScalarField lift(const ScalarField& u_h, std::shared_ptr<const LagrangeSpace> target);

struct ReferenceError
{
  ScalarField reference;
  ScalarField difference;  // reference - lifted u_h
  double global = 0.0;
  double omega0 = 0.0;
  std::vector<double> element;  // per element of u_h's mesh
};

ReferenceError reference_error(const Problem& problem, const ScalarField& u_h,
                               int L_ref, int degree);

// Called once per iteration with the finished record and its mesh.
using IterationObserver = std::function<void(const IterationRecord&, const Mesh&)>;

RunHistory run_adaptive_loop(const Problem& problem, const AdaptiveConfig& config,
                             const IterationObserver& observer = {});

// Least-squares slope of log(error) vs log(N_dofs) over the records with
// iter in [first, last] that carry a reference error; throws for fewer than
// five points.
double convergence_rate_fit(const RunHistory& history, int first, int last);
double convergence_rate_fit(const std::vector<double>& n_dofs,
                            const std::vector<double>& error);

}  // namespace frontier
