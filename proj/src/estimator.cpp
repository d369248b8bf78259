#include "frontier/estimator.hpp"

#include <cmath>

namespace frontier
{

double mu_k(const Problem& problem, const Mesh& mesh, Index K,
            const ElementGeometry& geometry)
{
  const double sqrt3 = std::sqrt(3.0);
  if (problem.kind() == ProblemKind::ReactionDiffusion)
    return std::max(geometry.beta, sqrt3 / (problem.kappa(mesh, K) * geometry.rho));
  return problem.pml().norm_factor()
         * std::max(geometry.beta, sqrt3 / (problem.wavenumber() * geometry.rho));
}

namespace
{

// int over the rectangle of |f / kappa|^2 by tensor Gauss rules.
double rectangle_integral(const Problem& problem, double x0, double x1, double y0,
                          double y1)
{
  if (!(x1 > x0 && y1 > y0))
    return 0.0;
  const QuadratureRule& g = gauss_legendre(8);
  const int nx = std::max(1, static_cast<int>(std::ceil((x1 - x0) / 0.25)));
  const int ny = std::max(1, static_cast<int>(std::ceil((y1 - y0) / 0.25)));
  const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  double sum = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
        {
          const Point x{x0 + (i + g.points[a].x) * hx, y0 + (j + g.points[b].x) * hy};
          const double v = std::abs(problem.source().value(x)) / problem.kappa_at(x);
          sum += g.weights[a] * g.weights[b] * hx * hy * v * v;
        }
  return sum;
}

}  // namespace

double source_tail(const Problem& problem, const Mesh& mesh)
{
  if (problem.kind() != ProblemKind::ReactionDiffusion)
    return 0.0;
  const Source& f = problem.source();
  if (!f.support)
    throw Error("source_tail: source without bounded support");
  const Box& b = *f.support;
  const double L = mesh.truncation();
  if (b.xmin >= -L && b.xmax <= L && b.ymin >= -L && b.ymax <= L)
    return 0.0;
  double sum = 0.0;
  sum += rectangle_integral(problem, b.xmin, std::min(b.xmax, -L), b.ymin, b.ymax);
  sum += rectangle_integral(problem, std::max(b.xmin, L), b.xmax, b.ymin, b.ymax);
  const double cx0 = std::max(b.xmin, -L), cx1 = std::min(b.xmax, L);
  sum += rectangle_integral(problem, cx0, cx1, b.ymin, std::min(b.ymax, -L));
  sum += rectangle_integral(problem, cx0, cx1, std::max(b.ymin, L), b.ymax);
  return std::sqrt(sum);
}

namespace
{

EstimatorReport estimate_common(const Problem& problem, const ScalarField& u_h,
                                const Equilibration& eq, Execution exec)
{
  const Mesh& mesh = u_h.mesh();
  const Index ne = mesh.num_elements();
  EstimatorReport r;
  r.osc.assign(ne, 0.0);
  r.misfit.assign(ne, 0.0);
  r.bnd.assign(ne, 0.0);
  r.eta.assign(ne, 0.0);

  const RaviartThomasElement& rt = eq.flux.element();
  const LagrangeElement& el = u_h.space().element();
  const int q = rt.degree();
  const QuadratureRule& rule = triangle_rule(2 * q + 2);
  const VectorTabulation& wt = rt.tabulate(rule);
  const Tabulation& ut = el.tabulate(rule);
  const QuadratureRule& frule = triangle_rule(
      std::max(load_rule_degree(problem.source(), u_h.space().degree()), 2 * q));
  const BoundaryTrace trace = boundary_normal_trace(eq.flux);

  for_each_index(
      ne, exec,
      [&](Index K)
      {
        const ElementGeometry geo = element_geometry(mesh, K);
        const ElementCoefficients c = problem.coefficients(mesh, K);
        const Mat2 J = mesh.jacobian(K);
        const double det = J.determinant();
        const Mat2 Jit = J.inverse().transpose();
        const Mat2 W = c.energy_diffusion.inverse();

        // misfit ||sigma + D grad u_h||_W
        const Eigen::VectorXcd& s = eq.flux.coefficients(K);
        const Eigen::VectorXcd uc = u_h.element_coefficients(K);
        const Eigen::VectorXcd sx = wt.x.cast<Complex>() * s;
        const Eigen::VectorXcd sy = wt.y.cast<Complex>() * s;
        const Eigen::VectorXcd udx = ut.dx.cast<Complex>() * uc;
        const Eigen::VectorXcd udy = ut.dy.cast<Complex>() * uc;
        double m2 = 0.0;
        for (std::size_t g = 0; g < rule.size(); ++g)
        {
          const Eigen::Vector2cd sigma
              = J.cast<Complex>() * Eigen::Vector2cd(sx[g], sy[g]) / det;
          const Eigen::Vector2cd grad = Jit.cast<Complex>() * Eigen::Vector2cd(udx[g], udy[g]);
          const Eigen::Vector2cd d = sigma + c.diffusion * grad;
          m2 += det * rule.weights[g]
                * (d.real().dot(W * d.real()) + d.imag().dot(W * d.imag()));
        }
        r.misfit[K] = std::sqrt(std::max(m2, 0.0));

        // data oscillation with the guaranteed constant h/pi
        const Source& f = problem.source();
        if (!f.support || element_meets_box(mesh, K, *f.support))
        {
          double o2 = 0.0;
          for (std::size_t g = 0; g < frule.size(); ++g)
          {
            const Point xh = frule.points[g];
            const Complex d = f.value(map_to_element(mesh, K, xh))
                              - eq.oscillation.evaluate(K, xh);
            o2 += det * frule.weights[g] * std::norm(d);
          }
          r.osc[K] = geo.h / M_PI * std::sqrt(o2);
        }

        if (trace.element_norm[K] > 0.0)
          r.bnd[K] = mu_k(problem, mesh, K, geo) * std::sqrt(geo.rho)
                     * trace.element_norm[K];
        r.eta[K] = r.osc[K] + r.misfit[K] + r.bnd[K];
      });

  double t = 0.0, tt = 0.0, so = 0.0, sm = 0.0, sb = 0.0;
  for (Index K = 0; K < ne; ++K)
  {
    t += r.eta[K] * r.eta[K];
    tt += (r.osc[K] + r.misfit[K]) * (r.osc[K] + r.misfit[K]);
    so += r.osc[K] * r.osc[K];
    sm += r.misfit[K] * r.misfit[K];
    sb += r.bnd[K] * r.bnd[K];
  }
  r.total = std::sqrt(t);
  r.eta_tilde = std::sqrt(tt);
  r.osc_total = std::sqrt(so);
  r.misfit_total = std::sqrt(sm);
  r.bnd_total = std::sqrt(sb);
  return r;
}

}  // namespace

EstimatorReport estimate_rd(const Problem& problem, const ScalarField& u_h,
                            const Equilibration& eq, Execution exec)
{
  if (problem.kind() != ProblemKind::ReactionDiffusion)
    throw Error("estimate_rd: not a reaction-diffusion problem");
  EstimatorReport r = estimate_common(problem, u_h, eq, exec);
  r.tail = source_tail(problem, u_h.mesh());
  return r;
}

EstimatorReport estimate_helmholtz(const Problem& problem, const ScalarField& u_h,
                                   const Equilibration& eq, Execution exec)
{
  if (problem.kind() != ProblemKind::Helmholtz)
    throw Error("estimate_helmholtz: not a Helmholtz problem");
  const Source& f = problem.source();
  const double L = u_h.mesh().truncation();
  if (!f.support || f.support->xmin < -L || f.support->xmax > L
      || f.support->ymin < -L || f.support->ymax > L)
    throw Error("estimate_helmholtz: source support not covered by the mesh");
  return estimate_common(problem, u_h, eq, exec);
}

EstimatorReport estimate(const Problem& problem, const ScalarField& u_h,
                         const Equilibration& eq, Execution exec)
{
  return problem.kind() == ProblemKind::ReactionDiffusion
             ? estimate_rd(problem, u_h, eq, exec)
             : estimate_helmholtz(problem, u_h, eq, exec);
}

ResidualBoundResult residual_bound_check(const Problem& problem,
                                         const ScalarField& u_h,
                                         const EstimatorReport& report,
                                         const std::vector<ScalarField>& trials)
{
  ResidualBoundResult out;
  for (const ScalarField& v : trials)
  {
    const double lhs = std::abs(residual_functional(problem, u_h, v));
    const double rhs = (report.total + report.tail) * energy_norm(v, problem);
    ++out.samples;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (ratio > 1.0)
      ++out.violations;
  }
  return out;
}

}  // namespace frontier
