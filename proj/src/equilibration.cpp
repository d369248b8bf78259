#include "frontier/equilibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/LU>


#include "frontier/polynomials.hpp"

namespace frontier
{

namespace
{

const Eigen::Vector2d barycentric_gradient[3] = {
    Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 0.0),
    Eigen::Vector2d(0.0, 1.0)};

double barycentric(int i, Point x)
{
  return i == 0 ? 1.0 - x.x - x.y : (i == 1 ? x.x : x.y);
}

Eigen::MatrixXd orthonormal_table(int degree, const QuadratureRule& rule)
{
  const int np = poly_dim(degree);
  Eigen::MatrixXd P(rule.size(), np);
  std::vector<double> v(np);
  for (std::size_t g = 0; g < rule.size(); ++g)
  {
    orthonormal_basis(degree, rule.points[g].x, rule.points[g].y, v.data());
    for (int k = 0; k < np; ++k)
      P(g, k) = v[k];
  }
  return P;
}

// int_T P_k over the reference triangle.
double basis_integral(int k) { return k == 0 ? std::sqrt(0.5) : 0.0; }

// int_That psi f P_m for the hat function of local vertex i.
Eigen::VectorXcd weighted_source_moments(const Source& f, const Mesh& mesh,
                                         Index K, int i, int degree,
                                         const QuadratureRule& rule,
                                         const Eigen::MatrixXd& P)
{
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(poly_dim(degree));
  if (f.support && !element_meets_box(mesh, K, *f.support))
    return g;
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Point xh = rule.points[q];
    const Complex fx = f.value(map_to_element(mesh, K, xh));
    if (fx == 0.0)
      continue;
    const Complex w = rule.weights[q] * barycentric(i, xh) * fx;
    g += w * P.row(q).transpose().cast<Complex>();
  }
  return g;
}

}  // namespace

Complex OscillationData::evaluate(Index K, Point xhat) const
{
  std::vector<double> v(poly_dim(degree));
  orthonormal_basis(degree, xhat.x, xhat.y, v.data());
  Complex s = 0.0;
  for (int k = 0; k < poly_dim(degree); ++k)
    s += coefficients[K][k] * v[k];
  return s;
}

OscillationData project_oscillation(const Problem& problem,
                                    const LagrangeSpace& space, Execution exec)
{
  const Mesh& mesh = space.mesh();
  OscillationData osc;
  osc.degree = flux_degree(space.degree());
  const QuadratureRule& rule
      = triangle_rule(load_rule_degree(problem.source(), space.degree()));
  const Eigen::MatrixXd P = orthonormal_table(osc.degree, rule);
  osc.coefficients.assign(mesh.num_elements(), Eigen::VectorXcd());
  for_each_index(mesh.num_elements(), exec,
                 [&](Index K)
                 {
                   Eigen::VectorXcd c = Eigen::VectorXcd::Zero(poly_dim(osc.degree));
                   for (int i = 0; i < 3; ++i)
                     c += weighted_source_moments(problem.source(), mesh, K, i,
                                                  osc.degree, rule, P);
                   osc.coefficients[K] = c;
                 });
  return osc;
}

PatchCompatibility patch_compatibility(const Problem& problem,
                                       const ScalarField& u_h, Index a)
{
  const LagrangeSpace& space = u_h.space();
  const Mesh& mesh = space.mesh();
  const int p = space.patch_max_degree(a);
  const LagrangeElement& el = space.element();
  const QuadratureRule& rule = triangle_rule(p + 1);
  const Tabulation& ut = el.tabulate(rule);
  const QuadratureRule& frule
      = triangle_rule(load_rule_degree(problem.source(), space.degree()));
  const Eigen::MatrixXd Pf = orthonormal_table(0, frule);
  PatchCompatibility out;
  for (Index K : mesh.vertex_elements(a))
  {
    const auto& v = mesh.element(K).v;
    const int la = static_cast<int>(std::find(v.begin(), v.end(), a) - v.begin());
    const Mat2 J = mesh.jacobian(K);
    const double det = J.determinant();
    const Mat2 Jit = J.inverse().transpose();
    const ElementCoefficients c = problem.coefficients(mesh, K);
    const Eigen::Vector2d gpsi = Jit * barycentric_gradient[la];
    const Eigen::VectorXcd uc = u_h.element_coefficients(K);
    const Eigen::VectorXcd uval = ut.value.cast<Complex>() * uc;
    const Eigen::VectorXcd udx = ut.dx.cast<Complex>() * uc;
    const Eigen::VectorXcd udy = ut.dy.cast<Complex>() * uc;
    Complex react = 0.0, cross = 0.0;
    for (std::size_t g = 0; g < rule.size(); ++g)
    {
      const Eigen::Vector2cd gu = Jit.cast<Complex>() * Eigen::Vector2cd(udx[g], udy[g]);
      react += rule.weights[g] * c.reaction * barycentric(la, rule.points[g]) * uval[g];
      cross += rule.weights[g] * gpsi.cast<Complex>().dot(c.diffusion * gu);
    }
    const Complex fpart
        = weighted_source_moments(problem.source(), mesh, K, la, 0, frule, Pf)[0]
          / std::sqrt(2.0);
    out.sum += det * (fpart - react - cross);
    out.scale += det * (std::abs(fpart) + std::abs(react) + std::abs(cross));
  }
  return out;
}

PatchFlux solve_patch(const Problem& problem, const ScalarField& u_h, Index a,
                      double reference_scale)
{
  const LagrangeSpace& space = u_h.space();
  const Mesh& mesh = space.mesh();
  const int p = space.patch_max_degree(a);
  const int q = flux_degree(p);
  const RaviartThomasElement& rt = raviart_thomas_element(q);
  const LagrangeElement& el = space.element();
  const int n = rt.num_dofs();
  const int nface = rt.face_dofs();
  const int ninterior = n - rt.first_interior_dof();
  const int np = poly_dim(q);

  PatchFlux out;
  out.center = a;
  auto incident = mesh.vertex_elements(a);
  out.elements.assign(incident.begin(), incident.end());
  const Index ne = static_cast<Index>(out.elements.size());
  const bool interior_vertex = !mesh.vertex_on_boundary(a);

  // Free face unknowns: faces through a.
  std::map<Index, int> face_slot;
  for (Index K : out.elements)
    for (int e = 0; e < 3; ++e)
    {
      const auto& v = mesh.element(K).v;
      if (v[e] == a || v[(e + 1) % 3] == a)
        face_slot.emplace(mesh.element_faces(K)[e], 0);
    }
  int next = 0;
  for (auto& [F, slot] : face_slot)
  {
    slot = next;
    next += nface;
  }

  // Per element: interior flux dofs and non-constant pressure modes are
  // condensed out, leaving face dofs, one constant pressure per element and
  // the multiplier.
  const int first_interior = rt.first_interior_dof();
  const int p0_offset = next;
  const int size = next + static_cast<int>(ne) + (interior_vertex ? 1 : 0);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(size, size);
  Eigen::MatrixXd rr = Eigen::MatrixXd::Zero(size, 2);

  const QuadratureRule& rule = triangle_rule(q + p + 1);
  const VectorTabulation& wt = rt.tabulate(rule);
  const Tabulation& ut = el.tabulate(rule);
  const Eigen::MatrixXd P = orthonormal_table(q, rule);
  const QuadratureRule& frule
      = triangle_rule(load_rule_degree(problem.source(), space.degree()));
  const Eigen::MatrixXd Pf = orthonormal_table(q, frule);
  const Eigen::MatrixXd& D = rt.divergence();

  struct Condensed
  {
    std::vector<int> kept_global;
    std::vector<double> face_sign;  // per local flux dof
    std::vector<int> face_map;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::MatrixXd AEK;
    Eigen::MatrixXd rE;
  };
  std::vector<Condensed> cond(ne);
  double compat_sum_scale = 0.0;
  Complex compat_sum = 0.0;
  std::vector<double> dets(ne);

  for (Index b = 0; b < ne; ++b)
  {
    const Index K = out.elements[b];
    const auto& v = mesh.element(K).v;
    const int la = static_cast<int>(std::find(v.begin(), v.end(), a) - v.begin());
    const Mat2 J = mesh.jacobian(K);
    const double det = J.determinant();
    dets[b] = det;
    const Mat2 Jinv = J.inverse();
    const ElementCoefficients c = problem.coefficients(mesh, K);
    const Mat2 W = c.energy_diffusion.inverse();

    Condensed& cd = cond[b];
    cd.face_map.assign(first_interior, -1);
    cd.face_sign.assign(n, 1.0);
    for (int e = 0; e < 3; ++e)
    {
      if (!(v[e] == a || v[(e + 1) % 3] == a))
        continue;
      const int slot = face_slot.at(mesh.element_faces(K)[e]);
      for (int i = 0; i < nface; ++i)
      {
        cd.face_map[rt.face_dof(e, i)] = slot + i;
        cd.face_sign[rt.face_dof(e, i)] = face_orientation(mesh, K, e, i);
      }
    }
    // local numbering: flux dofs 0..n-1, pressure modes n..n+np-1
    std::vector<int> kept, elim;
    for (int i = 0; i < first_interior; ++i)
      if (cd.face_map[i] >= 0)
      {
        kept.push_back(i);
        cd.kept_global.push_back(cd.face_map[i]);
      }
    kept.push_back(n);
    cd.kept_global.push_back(p0_offset + static_cast<int>(b));
    for (int i = first_interior; i < n; ++i)
      elim.push_back(i);
    for (int m = 1; m < np; ++m)
      elim.push_back(n + m);

    // Weighted mass matrix.
    const Mat2 G = J.transpose() * W * J;
    const Eigen::MatrixXd M
        = (G(0, 0) * rt.mass_xx() + G(0, 1) * (rt.mass_xy() + rt.mass_xy().transpose())
           + G(1, 1) * rt.mass_yy())
          / det;
    // Target -psi D grad u_h, tested with the basis.
    const Eigen::VectorXcd uc = u_h.element_coefficients(K);
    const CMat2 H = J.transpose().cast<Complex>() * W.cast<Complex>() * c.diffusion
                    * Jinv.transpose().cast<Complex>();
    const Eigen::Vector2d gpsi = Jinv.transpose() * barycentric_gradient[la];

    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd data = Eigen::VectorXcd::Zero(np);
    const Eigen::VectorXcd uval = ut.value.cast<Complex>() * uc;
    const Eigen::VectorXcd udx = ut.dx.cast<Complex>() * uc;
    const Eigen::VectorXcd udy = ut.dy.cast<Complex>() * uc;
    Complex reaction_part0 = 0.0, flux_part0 = 0.0;
    for (std::size_t g = 0; g < rule.size(); ++g)
    {
      const double w = rule.weights[g];
      const double psi = barycentric(la, rule.points[g]);
      const Eigen::Vector2cd gref(udx[g], udy[g]);
      const Eigen::Vector2cd hv = H * gref;
      target -= (w * psi) * (wt.x.row(g).transpose().cast<Complex>() * hv[0]
                             + wt.y.row(g).transpose().cast<Complex>() * hv[1]);
      // physical grad u_h and D grad u_h
      const Eigen::Vector2cd gu = Jinv.transpose().cast<Complex>() * gref;
      const Complex cross = gpsi.cast<Complex>().dot(c.diffusion * gu);
      const Complex react = c.reaction * psi * uval[g];
      data -= (w * (react + cross)) * P.row(g).transpose().cast<Complex>();
      reaction_part0 += w * react * P(g, 0);
      flux_part0 += w * cross * P(g, 0);
    }
    const Eigen::VectorXcd fpart
        = weighted_source_moments(problem.source(), mesh, K, la, q, frule, Pf);
    data += fpart;
    compat_sum += det * data[0] * basis_integral(0);
    compat_sum_scale += det * basis_integral(0)
                        * (std::abs(fpart[0]) + std::abs(reaction_part0)
                           + std::abs(flux_part0));

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + np, n + np);
    Eigen::MatrixXd r(n + np, 2);
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < n; ++j)
        A(i, j) = cd.face_sign[i] * cd.face_sign[j] * M(i, j);
      r(i, 0) = cd.face_sign[i] * target[i].real();
      r(i, 1) = cd.face_sign[i] * target[i].imag();
    }
    for (int m = 0; m < np; ++m)
    {
      for (int j = 0; j < n; ++j)
      {
        A(n + m, j) = cd.face_sign[j] * D(m, j);
        A(j, n + m) = A(n + m, j);
      }
      r(n + m, 0) = det * data[m].real();
      r(n + m, 1) = det * data[m].imag();
    }

    const Eigen::MatrixXd AEE = A(elim, elim);
    cd.AEK = A(elim, kept);
    cd.rE = r(elim, Eigen::all);
    cd.lu.compute(AEE);
    const Eigen::MatrixXd X = cd.lu.solve(cd.AEK);
    const Eigen::MatrixXd y = cd.lu.solve(cd.rE);
    if (!((AEE * X - cd.AEK).norm() <= 1e-10 * (AEE.norm() * X.norm() + cd.AEK.norm())))
      throw Error("solve_patch: singular element block at vertex " + std::to_string(a));
    const Eigen::MatrixXd schur = A(kept, kept) - cd.AEK.transpose() * X;
    const Eigen::MatrixXd rk = r(kept, Eigen::all) - cd.AEK.transpose() * y;
    for (std::size_t i = 0; i < kept.size(); ++i)
    {
      rr.row(cd.kept_global[i]) += rk.row(i);
      for (std::size_t j = 0; j < kept.size(); ++j)
        R(cd.kept_global[i], cd.kept_global[j]) += schur(i, j);
    }
    if (interior_vertex)
    {
      R(size - 1, p0_offset + b) = det * basis_integral(0);
      R(p0_offset + b, size - 1) = det * basis_integral(0);
    }
  }

  if (interior_vertex)
  {
    const double denom = std::max(compat_sum_scale, reference_scale);
    const double rel = denom > 0.0 ? std::abs(compat_sum) / denom : 0.0;
    out.compatibility = rel;
    if (rel > 1e-9)
      throw Error("solve_patch: compatibility violated at vertex "
                  + std::to_string(a) + " (relative " + std::to_string(rel) + ")");
    // Remove the mean of the divergence datum.
    double area = 0.0;
    for (Index b = 0; b < ne; ++b)
      area += dets[b] * 0.5;
    const Complex mean = compat_sum / area;
    for (Index b = 0; b < ne; ++b)
    {
      const Complex shift = dets[b] * mean * basis_integral(0);
      rr(p0_offset + b, 0) -= shift.real();
      rr(p0_offset + b, 1) -= shift.imag();
    }
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  if (!lu.isInvertible())
    throw Error("solve_patch: singular saddle-point system at vertex "
                + std::to_string(a));
  const Eigen::MatrixXd sol = lu.solve(rr);
  if (!((R * sol - rr).norm() <= 1e-10 * (R.norm() * sol.norm() + rr.norm())))
    throw Error("solve_patch: inaccurate saddle-point solve at vertex "
                + std::to_string(a));

  out.local.resize(ne);
  for (Index b = 0; b < ne; ++b)
  {
    const Condensed& cd = cond[b];
    Eigen::MatrixXd xK(cd.kept_global.size(), 2);
    for (std::size_t i = 0; i < cd.kept_global.size(); ++i)
      xK.row(i) = sol.row(cd.kept_global[i]);
    const Eigen::MatrixXd xE = cd.lu.solve(cd.rE - cd.AEK * xK);
    Eigen::VectorXcd loc = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < first_interior; ++i)
      if (cd.face_map[i] >= 0)
        loc[i] = cd.face_sign[i] * Complex(sol(cd.face_map[i], 0), sol(cd.face_map[i], 1));
    for (int i = 0; i < ninterior; ++i)
      loc[first_interior + i] = Complex(xE(i, 0), xE(i, 1));
    out.local[b] = std::move(loc);
  }
  return out;
}

EquilibratedFlux::EquilibratedFlux(std::shared_ptr<const Mesh> mesh, int degree,
                                   ScalarKind kind,
                                   std::vector<Eigen::VectorXcd> coefficients)
    : mesh_(std::move(mesh)), degree_(degree), kind_(kind),
      element_(&raviart_thomas_element(degree)),
      coefficients_(std::move(coefficients))
{
}

Eigen::Vector2cd EquilibratedFlux::value(Index K, Point xhat) const
{
  const int n = element_->num_dofs();
  std::vector<double> vx(n), vy(n);
  element_->evaluate(xhat, vx.data(), vy.data());
  Eigen::Vector2cd r = Eigen::Vector2cd::Zero();
  for (int i = 0; i < n; ++i)
  {
    r[0] += vx[i] * coefficients_[K][i];
    r[1] += vy[i] * coefficients_[K][i];
  }
  const Mat2 J = mesh_->jacobian(K);
  return J.cast<Complex>() * r / J.determinant();
}

Complex EquilibratedFlux::divergence(Index K, Point xhat) const
{
  const int n = element_->num_dofs();
  std::vector<double> vx(n), vy(n), vd(n);
  element_->evaluate(xhat, vx.data(), vy.data(), vd.data());
  Complex s = 0.0;
  for (int i = 0; i < n; ++i)
    s += vd[i] * coefficients_[K][i];
  return s / mesh_->jacobian(K).determinant();
}

double normal_jump(const EquilibratedFlux& flux)
{
  const Mesh& mesh = flux.mesh();
  const int nface = flux.element().face_dofs();
  double worst = 0.0, scale = 0.0;
  for (Index F = 0; F < mesh.num_faces(); ++F)
  {
    const Face& f = mesh.face(F);
    for (int s = 0; s < 2; ++s)
      if (f.elements[s] >= 0)
        for (int i = 0; i < nface; ++i)
          scale = std::max(scale,
                           std::abs(flux.normal_moment(f.elements[s], f.local_edge[s], i)));
    if (f.boundary())
      continue;
    for (int i = 0; i < nface; ++i)
    {
      const Index K0 = f.elements[0], K1 = f.elements[1];
      const int e0 = f.local_edge[0], e1 = f.local_edge[1];
      const Complex g0 = flux.normal_moment(K0, e0, i) * face_orientation(mesh, K0, e0, i);
      const Complex g1 = flux.normal_moment(K1, e1, i) * face_orientation(mesh, K1, e1, i);
      worst = std::max(worst, std::abs(g0 - g1));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

EquilibratedFlux assemble_flux(std::shared_ptr<const Mesh> mesh, int degree,
                               ScalarKind kind,
                               const std::vector<PatchFlux>& patches,
                               Execution exec)
{
  const Index ne = mesh->num_elements();
  const int n = raviart_thomas_element(degree).num_dofs();
  // Per element, the contributing (patch, slot) pairs in local vertex order.
  std::vector<std::array<std::pair<Index, Index>, 3>> sources(
      ne, {std::pair<Index, Index>{-1, -1}, {-1, -1}, {-1, -1}});
  for (Index pi = 0; pi < static_cast<Index>(patches.size()); ++pi)
  {
    const PatchFlux& pf = patches[pi];
    for (Index b = 0; b < static_cast<Index>(pf.elements.size()); ++b)
    {
      const Index K = pf.elements[b];
      const auto& v = mesh->element(K).v;
      const int la = static_cast<int>(std::find(v.begin(), v.end(), pf.center) - v.begin());
      if (la > 2 || pf.local[b].size() != n)
        throw Error("assemble_flux: inconsistent patch contribution");
      sources[K][la] = {pi, b};
    }
  }
  std::vector<Eigen::VectorXcd> coeffs(ne);
  for_each_index(ne, exec,
                 [&](Index K)
                 {
                   Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
                   for (int i = 0; i < 3; ++i)
                     if (sources[K][i].first >= 0)
                       c += patches[sources[K][i].first].local[sources[K][i].second];
                   coeffs[K] = std::move(c);
                 });
  EquilibratedFlux flux(std::move(mesh), degree, kind, std::move(coeffs));
  const double jump = normal_jump(flux);
  if (jump > 1e-9)
    throw Error("assemble_flux: normal trace discontinuous (relative jump "
                + std::to_string(jump) + ")");
  return flux;
}

Equilibration equilibrate(const Problem& problem, const ScalarField& u_h,
                          Execution exec)
{
  const Mesh& mesh = u_h.mesh();
  std::vector<double> scales(mesh.num_vertices(), 0.0);
  for_each_index(mesh.num_vertices(), exec,
                 [&](Index a)
                 {
                   if (!mesh.vertex_on_boundary(a))
                     scales[a] = patch_compatibility(problem, u_h, a).scale;
                 });
  const double reference = *std::max_element(scales.begin(), scales.end());
  std::vector<PatchFlux> patches(mesh.num_vertices());
  for_each_index(mesh.num_vertices(), exec,
                 [&](Index a) { patches[a] = solve_patch(problem, u_h, a, reference); });
  Equilibration out;
  out.flux = assemble_flux(u_h.space().mesh_ptr(), flux_degree(u_h.space().degree()),
                           u_h.kind(), patches, exec);
  out.oscillation = project_oscillation(problem, u_h.space(), exec);
  return out;
}

double trace_norm_from_moments(const Eigen::VectorXcd& moments, double length)
{
  double s = 0.0;
  for (Index i = 0; i < moments.size(); ++i)
    s += std::norm(moments[i]) * (2.0 * i + 1.0);
  return std::sqrt(s / length);
}

BoundaryTrace boundary_normal_trace(const EquilibratedFlux& flux)
{
  const Mesh& mesh = flux.mesh();
  const int nface = flux.element().face_dofs();
  BoundaryTrace out;
  out.element_norm.assign(mesh.num_elements(), 0.0);
  std::vector<double> squared(mesh.num_elements(), 0.0);
  for (Index F = 0; F < mesh.num_faces(); ++F)
  {
    const Face& f = mesh.face(F);
    if (f.tag != FaceTag::ArtificialGammaH)
      continue;
    const Index K = f.elements[0];
    const int e = f.local_edge[0];
    Eigen::VectorXcd m(nface);
    for (int i = 0; i < nface; ++i)
      m[i] = flux.normal_moment(K, e, i);
    const Point a = mesh.vertex(f.v[0]), b = mesh.vertex(f.v[1]);
    const double norm = trace_norm_from_moments(m, std::hypot(b.x - a.x, b.y - a.y));
    out.faces.push_back({F, K, norm});
    squared[K] += norm * norm;
  }
  for (Index K = 0; K < mesh.num_elements(); ++K)
    out.element_norm[K] = std::sqrt(squared[K]);
  return out;
}

}  // namespace frontier
