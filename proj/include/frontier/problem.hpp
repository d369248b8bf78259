#pragma once

#include <functional>

#include "frontier/mesh.hpp"
#include "frontier/source.hpp"
#include "frontier/waveguide.hpp"

namespace frontier
{

enum class ProblemKind
{
  ReactionDiffusion,
  Helmholtz
};

// Elementwise constant data of the form
//   (reaction u, v) + (diffusion grad u, grad v)
// and of the energy norm
//   (energy_reaction u, u) + (energy_diffusion grad u, grad u).
struct ElementCoefficients
{
  Complex reaction;
  CMat2 diffusion;
  double energy_reaction = 0.0;
  Mat2 energy_diffusion;
  int region = -1;
};

class Problem
{
public:
  // kappa is sampled at element centroids (piecewise constant on the mesh).
  static Problem reaction_diffusion(DomainSpec domain,
                                    std::function<double(Point)> kappa,
                                    Source f);
  static Problem helmholtz(double k, Complex gamma, Source f,
                           DomainSpec domain = DomainSpec::t_shaped_waveguide());

  ProblemKind kind() const { return kind_; }
  ScalarKind scalar_kind() const
  {
    return kind_ == ProblemKind::Helmholtz ? ScalarKind::Complex : ScalarKind::Real;
  }
  const DomainSpec& domain() const { return domain_; }
  const Source& source() const { return source_; }
  Problem with_source(Source f) const;

  double kappa(const Mesh& mesh, Index K) const;
  double kappa_at(Point x) const { return kappa_(x); }
  double wavenumber() const { return k_; }
  Complex gamma() const { return pml_.gamma(); }
  const PmlCoefficients& pml() const { return pml_; }
  const ModeBasis& modes() const { return modes_; }

  ElementCoefficients coefficients(const Mesh& mesh, Index K) const;

private:
  ProblemKind kind_ = ProblemKind::ReactionDiffusion;
  DomainSpec domain_;
  Source source_;
  std::function<double(Point)> kappa_;
  double k_ = 0.0;
  PmlCoefficients pml_;
  ModeBasis modes_;
};

// Number of transverse modes tracked for diagnostics and cut-off checks.
inline constexpr int default_mode_count = 12;

}  // namespace frontier
