#include "frontier/problem.hpp"

#include <cmath>

namespace frontier
{

Problem Problem::reaction_diffusion(DomainSpec domain,
                                    std::function<double(Point)> kappa,
                                    Source f)
{
  Problem p;
  p.kind_ = ProblemKind::ReactionDiffusion;
  p.domain_ = std::move(domain);
  p.kappa_ = std::move(kappa);
  p.source_ = std::move(f);
  return p;
}

Problem Problem::helmholtz(double k, Complex gamma, Source f, DomainSpec domain)
{
  if (domain.kind() != DomainKind::TShapedWaveguide)
    throw Error("Problem::helmholtz: needs a waveguide domain");
  if (!(k > 0.0))
    throw Error("Problem::helmholtz: wavenumber must be positive");
  Problem p;
  p.kind_ = ProblemKind::Helmholtz;
  p.k_ = k;
  p.pml_ = PmlCoefficients(domain, gamma);
  const double width = domain.cylinders().front().width();
  p.modes_ = modal_wavenumbers(k, cutoff_frequencies(width, default_mode_count), gamma);
  p.domain_ = std::move(domain);
  p.source_ = std::move(f);
  return p;
}

Problem Problem::with_source(Source f) const
{
  Problem p = *this;
  p.source_ = std::move(f);
  return p;
}

double Problem::kappa(const Mesh& mesh, Index K) const
{
  const double v = kappa_(mesh.centroid(K));
  if (!(v > 0.0))
    throw Error("Problem: kappa must be positive");
  return v;
}

ElementCoefficients Problem::coefficients(const Mesh& mesh, Index K) const
{
  ElementCoefficients c;
  if (kind_ == ProblemKind::ReactionDiffusion)
  {
    const double kap = kappa(mesh, K);
    c.reaction = kap * kap;
    c.diffusion = CMat2::Identity();
    c.energy_reaction = kap * kap;
    c.energy_diffusion = Mat2::Identity();
    return c;
  }
  c.region = pml_.region(mesh, K);
  const Complex a = pml_.alpha(c.region);
  c.reaction = -k_ * k_ * a;
  c.diffusion = pml_.A(c.region);
  c.energy_reaction = k_ * k_ * a.real();
  c.energy_diffusion = c.diffusion.real();
  return c;
}

}  // namespace frontier
