#include "frontier/oracles.hpp"

#include <cmath>

#include "frontier/polynomials.hpp"

namespace frontier
{

InequalityCheckResult make_inequality_result(double lhs, double rhs,
                                             std::string witness)
{
  InequalityCheckResult r;
  r.lhs = lhs;
  r.rhs = rhs;
  if (rhs > 0.0)
    r.ratio = lhs / rhs;
  else
    r.ratio = lhs > 0.0 ? INFINITY : 0.0;
  r.pass = r.ratio <= 1.0 + 1e-10;
  r.witness = std::move(witness);
  return r;
}

namespace
{

struct PolySample
{
  double v, gx, gy;  // physical gradient
};

PolySample eval_poly(const ElementPolynomial& p, Point xh, const Mat2& Jit)
{
  const int n = poly_dim(p.degree);
  std::vector<double> v(n), gx(n), gy(n);
  orthonormal_basis(p.degree, xh.x, xh.y, v.data(), gx.data(), gy.data());
  double s = 0.0, sx = 0.0, sy = 0.0;
  for (int k = 0; k < n; ++k)
  {
    s += p.coefficients[k] * v[k];
    sx += p.coefficients[k] * gx[k];
    sy += p.coefficients[k] * gy[k];
  }
  const Vec2 g = Jit * Vec2(sx, sy);
  return {s, g.x(), g.y()};
}

struct ElementNorms
{
  double boundary2 = 0.0, l2 = 0.0, grad2 = 0.0;
};

ElementNorms element_norms(Point a, Point b, Point c, const ElementPolynomial& p)
{
  Mat2 J;
  J << b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y;
  const double det = J.determinant();
  const Mat2 Jit = J.inverse().transpose();
  ElementNorms n;
  const QuadratureRule& rule = triangle_rule(2 * p.degree + 2);
  for (std::size_t g = 0; g < rule.size(); ++g)
  {
    const PolySample s = eval_poly(p, rule.points[g], Jit);
    n.l2 += det * rule.weights[g] * s.v * s.v;
    n.grad2 += det * rule.weights[g] * (s.gx * s.gx + s.gy * s.gy);
  }
  const QuadratureRule& line = gauss_legendre(p.degree + 2);
  const Point ref[3] = {{0, 0}, {1, 0}, {0, 1}};
  const Point phys[3] = {a, b, c};
  for (int e = 0; e < 3; ++e)
  {
    const Point pa = phys[e], pb = phys[(e + 1) % 3];
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    for (std::size_t g = 0; g < line.size(); ++g)
    {
      const Point xh = ref[e] + (ref[(e + 1) % 3] - ref[e]) * line.points[g].x;
      const PolySample s = eval_poly(p, xh, Jit);
      n.boundary2 += len * line.weights[g] * s.v * s.v;
    }
  }
  return n;
}

}  // namespace

InequalityCheckResult check_trace_inequality(Point a, Point b, Point c,
                                             const ElementPolynomial& v, double nu)
{
  const ElementGeometry geo = triangle_geometry(a, b, c);
  const ElementNorms n = element_norms(a, b, c, v);
  const double lhs = std::sqrt(n.boundary2 / geo.rho);
  const double rhs = std::max(geo.beta, std::sqrt(3.0) / (nu * geo.rho))
                     * std::sqrt(nu * nu * n.l2 + n.grad2);
  return make_inequality_result(lhs, rhs, "trace nu=" + std::to_string(nu));
}

double discrete_trace_ratio(Point a, Point b, Point c, const ElementPolynomial& v)
{
  const ElementGeometry geo = triangle_geometry(a, b, c);
  const ElementNorms n = element_norms(a, b, c, v);
  if (n.l2 == 0.0)
    return 0.0;
  return std::sqrt(geo.rho * n.boundary2) / (std::max(v.degree, 1) * std::sqrt(n.l2));
}

namespace
{

// Tensor Gauss integral over (0, length) x (0, width).
template <class F>
double box_integral(double length, double width, F&& f)
{
  const QuadratureRule& g = gauss_legendre(12);
  const int na = std::max(4, static_cast<int>(std::ceil(length * 4.0)));
  const int ns = std::max(4, static_cast<int>(std::ceil(width * 4.0)));
  const double ha = length / na, hs = width / ns;
  double sum = 0.0;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < ns; ++j)
      for (std::size_t x = 0; x < g.size(); ++x)
        for (std::size_t y = 0; y < g.size(); ++y)
          sum += g.weights[x] * g.weights[y] * ha * hs
                 * f((i + g.points[x].x) * ha, (j + g.points[y].x) * hs);
  return sum;
}

template <class F>
double line_integral(double width, F&& f)
{
  const QuadratureRule& g = gauss_legendre(12);
  const int ns = std::max(4, static_cast<int>(std::ceil(width * 4.0)));
  const double hs = width / ns;
  double sum = 0.0;
  for (int j = 0; j < ns; ++j)
    for (std::size_t y = 0; y < g.size(); ++y)
      sum += g.weights[y] * hs * f((j + g.points[y].x) * hs);
  return sum;
}

}  // namespace

InequalityCheckResult check_poincare_cylinder(double q, double k, double width,
                                              const CylinderSample& v)
{
  const double length = q / k;
  const double vol = box_integral(length, width, [&](double a, double s)
                                  { const double x = v.value(a, s); return x * x; });
  const double dal = box_integral(length, width, [&](double a, double s)
                                  { const double x = v.d_along(a, s); return x * x; });
  const double sec = line_integral(width, [&](double s)
                                   { const double x = v.value(length, s); return x * x; });
  return make_inequality_result(k * k * vol, 2.0 * q * k * sec + 4.0 * q * q * dal,
                                "poincare q=" + std::to_string(q));
}

InequalityCheckResult check_cylinder_trace(double k, double width, double length,
                                           const CylinderSample& v)
{
  const double energy = box_integral(
      length, width,
      [&](double a, double s)
      {
        const double x = v.value(a, s), da = v.d_along(a, s), ds = v.d_across(a, s);
        return k * k * x * x + da * da + ds * ds;
      });
  const double sec = line_integral(width, [&](double s)
                                   { const double x = v.value(0.0, s); return x * x; });
  return make_inequality_result(k * sec, 2.0 * energy, "cylinder trace");
}

DecayReport check_pml_decay(const ScalarField& u, const Cylinder& cylinder,
                            const ModeBasis& modes,
                            const std::vector<double>& stations, double floor,
                            double tolerance)
{
  if (stations.size() < 2)
    throw Error("check_pml_decay: at least two stations are required");
  DecayReport rep;
  rep.stations = stations;
  const int J = static_cast<int>(modes.nu.size());
  for (double s : stations)
    rep.coefficients.push_back(modal_decomposition(u, cylinder, s, J));
  double leading = 0.0;
  for (int j = 0; j < J; ++j)
    leading = std::max(leading, std::abs(rep.coefficients[0][j]));
  for (int j = 0; j < J; ++j)
  {
    ModeFit fit;
    fit.mode = j;
    fit.nu = modes.nu[j];
    // stations where the mode is above the floor
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < stations.size(); ++i)
    {
      const double amp = std::abs(rep.coefficients[i][j]);
      if (leading > 0.0 && amp > floor * leading)
      {
        xs.push_back(stations[i]);
        ys.push_back(std::log(amp));
      }
      else
        break;
    }
    fit.usable = xs.size() >= 2;
    if (fit.usable)
    {
      const double n = static_cast<double>(xs.size());
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i)
      {
        mx += xs[i] / n;
        my += ys[i] / n;
      }
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i)
      {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
      }
      fit.fitted = -sxy / sxx;
      fit.relative_error = std::abs(fit.fitted - fit.nu) / fit.nu;
      fit.pass = fit.relative_error <= tolerance;
      rep.pass = rep.pass && fit.pass;
    }
    rep.modes.push_back(fit);
  }
  return rep;
}

EquilibrationCheck check_equilibration(const Problem& problem,
                                       const ScalarField& u_h,
                                       const Equilibration& eq, double tolerance)
{
  const Mesh& mesh = u_h.mesh();
  const int q = eq.flux.degree();
  const int np = poly_dim(q);
  const QuadratureRule& rule = triangle_rule(
      std::max(load_rule_degree(problem.source(), u_h.space().degree()), 2 * q + 2));
  const RaviartThomasElement& rt = eq.flux.element();
  const VectorTabulation& wt = rt.tabulate(rule);
  const Tabulation& ut = u_h.space().element().tabulate(rule);
  Eigen::MatrixXd P(rule.size(), np);
  {
    std::vector<double> v(np);
    for (std::size_t g = 0; g < rule.size(); ++g)
    {
      orthonormal_basis(q, rule.points[g].x, rule.points[g].y, v.data());
      for (int k = 0; k < np; ++k)
        P(g, k) = v[k];
    }
  }
  EquilibrationCheck out;
  out.element.assign(mesh.num_elements(), 0.0);
  std::vector<double> moment(mesh.num_elements(), 0.0), scale(mesh.num_elements(), 0.0);
  for_each_index(
      mesh.num_elements(), Execution::Parallel,
      [&](Index K)
      {
        const double det = mesh.jacobian(K).determinant();
        const ElementCoefficients c = problem.coefficients(mesh, K);
        const Eigen::VectorXcd div = wt.div.cast<Complex>() * eq.flux.coefficients(K) / det;
        const Eigen::VectorXcd uval = ut.value.cast<Complex>() * u_h.element_coefficients(K);
        const Source& f = problem.source();
        const bool has_f = !f.support || element_meets_box(mesh, K, *f.support);
        Eigen::VectorXcd m = Eigen::VectorXcd::Zero(np);
        double nf = 0.0, nu = 0.0, nd = 0.0;
        for (std::size_t g = 0; g < rule.size(); ++g)
        {
          const Complex fx = has_f ? f.value(map_to_element(mesh, K, rule.points[g]))
                                   : Complex(0.0);
          const Complex r = fx - c.reaction * uval[g] - div[g];
          // test functions normalized in L2(K): P_m / sqrt(det)
          m += (std::sqrt(det) * rule.weights[g] * r) * P.row(g).transpose().cast<Complex>();
          nf += det * rule.weights[g] * std::norm(fx);
          nu += det * rule.weights[g] * std::norm(c.reaction * uval[g]);
          nd += det * rule.weights[g] * std::norm(div[g]);
        }
        moment[K] = m.cwiseAbs().maxCoeff();
        scale[K] = std::sqrt(nf) + std::sqrt(nu) + std::sqrt(nd);
      });
  double global = 0.0;
  for (double s : scale)
    global = std::max(global, s);
  for (Index K = 0; K < mesh.num_elements(); ++K)
  {
    out.element[K] = global > 0.0 ? moment[K] / global : 0.0;
    out.worst = std::max(out.worst, out.element[K]);
  }
  out.pass = out.worst <= tolerance;
  return out;
}

}  // namespace frontier
