#include "frontier/assembly.hpp"

#include <algorithm>
#include <array>
#include <map>

#include <Eigen/CholmodSupport>
#include <Eigen/UmfPackSupport>

namespace frontier
{
namespace
{

// Reference-to-physical gradient metric det(J) J^{-1} D J^{-T}.
template <class M>
auto gradient_metric(const M& D, const Mat2& J)
{
  using S = typename M::Scalar;
  const double det = J.determinant();
  const Mat2 Jinv = J.inverse();
  return (det * Jinv.cast<S>() * D * Jinv.transpose().cast<S>()).eval();
}

// Compressed column pattern over free dofs.
struct Pattern
{
  std::vector<int> outer;
  std::vector<int> inner;
  Index position(Index row, Index col) const
  {
    const int* b = inner.data() + outer[col];
    const int* e = inner.data() + outer[col + 1];
    return std::lower_bound(b, e, static_cast<int>(row)) - inner.data();
  }
};

Pattern free_pattern(const LagrangeSpace& space)
{
  const Mesh& mesh = space.mesh();
  const Index nf = space.num_free();
  const int n = space.element().num_dofs();
  std::vector<Index> offsets(nf + 1, 0);
  for (Index K = 0; K < mesh.num_elements(); ++K)
    for (Index d : space.element_dofs(K))
      if (Index i = space.free_index(d); i >= 0)
        ++offsets[i + 1];
  for (Index i = 0; i < nf; ++i)
    offsets[i + 1] += offsets[i];
  std::vector<Index> dof_elements(offsets.back());
  std::vector<Index> fill(offsets.begin(), offsets.end() - 1);
  for (Index K = 0; K < mesh.num_elements(); ++K)
    for (Index d : space.element_dofs(K))
      if (Index i = space.free_index(d); i >= 0)
        dof_elements[fill[i]++] = K;

  Pattern p;
  p.outer.assign(nf + 1, 0);
  std::vector<int> column;
  for (Index j = 0; j < nf; ++j)
  {
    column.clear();
    for (Index s = offsets[j]; s < offsets[j + 1]; ++s)
      for (Index d : space.element_dofs(dof_elements[s]))
        if (Index i = space.free_index(d); i >= 0)
          column.push_back(static_cast<int>(i));
    std::sort(column.begin(), column.end());
    column.erase(std::unique(column.begin(), column.end()), column.end());
    p.inner.insert(p.inner.end(), column.begin(), column.end());
    p.outer[j + 1] = static_cast<int>(p.inner.size());
  }
  (void)n;
  return p;
}

}  // namespace

bool element_meets_box(const Mesh& mesh, Index K, const Box& box)
{
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (int i = 0; i < 3; ++i)
  {
    const Point x = mesh.corner(K, i);
    xmin = std::min(xmin, x.x);
    xmax = std::max(xmax, x.x);
    ymin = std::min(ymin, x.y);
    ymax = std::max(ymax, x.y);
  }
  return xmax >= box.xmin && xmin <= box.xmax && ymax >= box.ymin
         && ymin <= box.ymax;
}

Eigen::MatrixXcd element_form_matrix(const ElementCoefficients& c,
                                     const LagrangeElement& el, const Mat2& J)
{
  const CMat2 G = gradient_metric(c.diffusion, J);
  const double det = J.determinant();
  return (c.reaction * det) * el.mass().cast<Complex>()
         + G(0, 0) * el.stiffness_xx().cast<Complex>()
         + G(1, 1) * el.stiffness_yy().cast<Complex>()
         + G(0, 1) * el.stiffness_mixed().cast<Complex>();
}

Eigen::MatrixXd element_energy_matrix(const ElementCoefficients& c,
                                      const LagrangeElement& el, const Mat2& J)
{
  const Mat2 G = gradient_metric(c.energy_diffusion, J);
  const double det = J.determinant();
  return (c.energy_reaction * det) * el.mass() + G(0, 0) * el.stiffness_xx()
         + G(1, 1) * el.stiffness_yy() + G(0, 1) * el.stiffness_mixed();
}

Eigen::VectorXcd element_load(const Source& f, const Mesh& mesh, Index K,
                              const LagrangeElement& el,
                              const QuadratureRule& rule)
{
  Eigen::VectorXcd F = Eigen::VectorXcd::Zero(el.num_dofs());
  if (f.support && !element_meets_box(mesh, K, *f.support))
    return F;
  const Tabulation& t = el.tabulate(rule);
  const double det = mesh.jacobian(K).determinant();
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    const Complex fx = f.value(map_to_element(mesh, K, rule.points[q]));
    if (fx == 0.0)
      continue;
    F += (det * rule.weights[q] * fx) * t.value.row(q).transpose().cast<Complex>();
  }
  return F;
}

SparseSystem assemble(const Problem& problem, const LagrangeSpace& space,
                      const AssemblyOptions& options)
{
  const Mesh& mesh = space.mesh();
  const LagrangeElement& el = space.element();
  const int p = space.degree();
  int rule_degree = options.load_rule_degree;
  if (rule_degree < 0)
    rule_degree = load_rule_degree(problem.source(), p);
  if (rule_degree < 2 * p)
    throw Error("assemble: load quadrature of degree "
                + std::to_string(rule_degree) + " cannot be exact for degree "
                + std::to_string(p) + " products");
  const QuadratureRule& rule = triangle_rule(rule_degree);

  const Pattern pattern = free_pattern(space);
  const Index nf = space.num_free();
  std::vector<Complex> values(pattern.inner.size(), Complex(0.0));
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nf);

  const int n = el.num_dofs();
  const Index block = 2048;
  std::vector<Eigen::MatrixXcd> E(block);
  std::vector<Eigen::VectorXcd> F(block);
  for (Index start = 0; start < mesh.num_elements(); start += block)
  {
    const Index count = std::min(block, mesh.num_elements() - start);
    for_each_index(count, options.execution,
                   [&](Index b)
                   {
                     const Index K = start + b;
                     const ElementCoefficients c = problem.coefficients(mesh, K);
                     E[b] = element_form_matrix(c, el, mesh.jacobian(K));
                     F[b] = element_load(problem.source(), mesh, K, el, rule);
                   });
    for (Index b = 0; b < count; ++b)
    {
      auto dofs = space.element_dofs(start + b);
      for (int j = 0; j < n; ++j)
      {
        const Index cj = space.free_index(dofs[j]);
        if (cj < 0)
          continue;
        rhs[cj] += F[b][j];
        for (int i = 0; i < n; ++i)
        {
          const Index ri = space.free_index(dofs[i]);
          if (ri >= 0)
            values[pattern.position(ri, cj)] += E[b](i, j);
        }
      }
    }
  }

  SparseSystem sys;
  sys.kind = problem.scalar_kind();
  sys.symmetric = true;
  const auto nnz = static_cast<Index>(pattern.inner.size());
  if (sys.kind == ScalarKind::Real)
  {
    std::vector<double> re(values.size());
    for (std::size_t s = 0; s < values.size(); ++s)
      re[s] = values[s].real();
    sys.real_matrix = Eigen::Map<const Eigen::SparseMatrix<double>>(
        nf, nf, nnz, pattern.outer.data(), pattern.inner.data(), re.data());
    sys.real_rhs = rhs.real();
  }
  else
  {
    sys.complex_matrix = Eigen::Map<const Eigen::SparseMatrix<Complex>>(
        nf, nf, nnz, pattern.outer.data(), pattern.inner.data(), values.data());
    sys.complex_rhs = rhs;
  }
  return sys;
}

Eigen::VectorXcd solve(const SparseSystem& system)
{
  const Index n = system.size();
  if (n == 0)
    return Eigen::VectorXcd(0);
  if (system.kind == ScalarKind::Real)
  {
    const auto& A = system.real_matrix;
    const auto& b = system.real_rhs;
    // supernodal factorization misreports definiteness with the installed BLAS
    Eigen::CholmodSimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt;
    llt.cholmod().print = 0;
    llt.compute(A);
    if (llt.info() != Eigen::Success)
      throw Error("solve: Cholesky breakdown (n = " + std::to_string(n)
                  + ", failing column "
                  + std::to_string(static_cast<long>(llt.cholmod().status))
                  + "); matrix not positive definite");
    const Eigen::VectorXd x = llt.solve(b);
    const double res = (A * x - b).norm();
    const double scale = A.cwiseAbs().sum() * x.norm() + b.norm();
    if (!(res <= 1e-10 * scale))
      throw Error("solve: residual check failed (" + std::to_string(res) + ")");
    return x.cast<Complex>();
  }
  const auto& A = system.complex_matrix;
  const auto& b = system.complex_rhs;
  Eigen::UmfPackLU<Eigen::SparseMatrix<Complex>> lu;
  lu.umfpackControl()(UMFPACK_PRL) = 0;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw Error("solve: LU breakdown (n = " + std::to_string(n)
                + "); matrix singular or near-singular");
  const Eigen::VectorXcd x = lu.solve(b);
  const double res = (A * x - b).norm();
  const double scale = A.cwiseAbs().sum() * x.norm() + b.norm();
  if (!(res <= 1e-10 * scale))
    throw Error("solve: residual check failed (" + std::to_string(res) + ")");
  return x;
}

ScalarField solve_problem(const Problem& problem,
                          std::shared_ptr<const LagrangeSpace> space,
                          const AssemblyOptions& options)
{
  const SparseSystem sys = assemble(problem, *space, options);
  return ScalarField(std::move(space), problem.scalar_kind(), solve(sys));
}

double energy_norm(const ScalarField& field, const Problem& problem,
                   const ElementFilter& region)
{
  const Mesh& mesh = field.mesh();
  const LagrangeElement& el = field.space().element();
  double sum = 0.0;
  for (Index K = 0; K < mesh.num_elements(); ++K)
  {
    if (region && !region(K))
      continue;
    const Eigen::VectorXcd c = field.element_coefficients(K);
    if (c.cwiseAbs().maxCoeff() == 0.0)
      continue;
    const Eigen::MatrixXd A = element_energy_matrix(problem.coefficients(mesh, K),
                                                    el, mesh.jacobian(K));
    sum += c.real().dot(A * c.real()) + c.imag().dot(A * c.imag());
  }
  return std::sqrt(std::max(sum, 0.0));
}

double galerkin_energy(const ScalarField& field, const Problem& problem)
{
  const Mesh& mesh = field.mesh();
  const LagrangeElement& el = field.space().element();
  const QuadratureRule& rule
      = triangle_rule(load_rule_degree(problem.source(), field.space().degree()));
  double sum = 0.0;
  for (Index K = 0; K < mesh.num_elements(); ++K)
  {
    const Eigen::VectorXd c = field.element_coefficients(K).real();
    const Eigen::MatrixXd A = element_energy_matrix(problem.coefficients(mesh, K),
                                                    el, mesh.jacobian(K));
    const Eigen::VectorXd F = element_load(problem.source(), mesh, K, el, rule).real();
    sum += 2.0 * F.dot(c) - c.dot(A * c);
  }
  return sum;
}

Complex element_form(const Problem& problem, const ScalarField& u,
                     const ScalarField& v, Index K)
{
  if (&u.mesh() != &v.mesh() || u.space().degree() != v.space().degree())
    throw Error("element_form: fields must share a space layout");
  const Eigen::MatrixXcd E = element_form_matrix(
      problem.coefficients(u.mesh(), K), u.space().element(), u.mesh().jacobian(K));
  return v.element_coefficients(K).dot(E * u.element_coefficients(K));
}

std::vector<Index> element_correspondence(const Mesh& coarse, const Mesh& fine)
{
  auto key = [](const Mesh& m, Index K)
  {
    std::array<std::pair<double, double>, 3> p;
    for (int i = 0; i < 3; ++i)
      p[i] = {m.corner(K, i).x, m.corner(K, i).y};
    std::sort(p.begin(), p.end());
    return p;
  };
  std::vector<Index> out(coarse.num_elements(), -1);
  // fast path: the fine mesh extends the coarse one in place
  bool prefix = fine.num_elements() >= coarse.num_elements();
  for (Index K = 0; prefix && K < coarse.num_elements(); ++K)
    for (int i = 0; i < 3; ++i)
      prefix = prefix && coarse.corner(K, i) == fine.corner(K, i);
  if (prefix)
  {
    for (Index K = 0; K < coarse.num_elements(); ++K)
      out[K] = K;
    return out;
  }
  std::map<std::array<std::pair<double, double>, 3>, Index> lookup;
  for (Index K = 0; K < fine.num_elements(); ++K)
    lookup.emplace(key(fine, K), K);
  for (Index K = 0; K < coarse.num_elements(); ++K)
  {
    auto it = lookup.find(key(coarse, K));
    if (it == lookup.end())
      throw Error("residual_functional: meshes not nested");
    out[K] = it->second;
  }
  return out;
}

Complex residual_functional(const Problem& problem, const ScalarField& u_h,
                            const ScalarField& v)
{
  const Mesh& cm = u_h.mesh();
  const Mesh& fm = v.mesh();
  const std::vector<Index> corr = element_correspondence(cm, fm);
  const LagrangeElement& ve = v.space().element();
  const LagrangeElement& ue = u_h.space().element();

  Complex load = 0.0;
  const QuadratureRule& lrule
      = triangle_rule(load_rule_degree(problem.source(), v.space().degree()));
  for (Index K = 0; K < fm.num_elements(); ++K)
  {
    const Eigen::VectorXcd F = element_load(problem.source(), fm, K, ve, lrule);
    load += v.element_coefficients(K).dot(F);
  }

  Complex form = 0.0;
  const QuadratureRule& rule = triangle_rule(ve.degree() + ue.degree());
  const Tabulation& vt = ve.tabulate(rule);
  std::vector<double> uv(ue.num_dofs()), ux(ue.num_dofs()), uy(ue.num_dofs());
  for (Index K = 0; K < cm.num_elements(); ++K)
  {
    const Index Kf = corr[K];
    const Eigen::VectorXcd uc = u_h.element_coefficients(K);
    const Eigen::VectorXcd vc = v.element_coefficients(Kf);
    if (uc.cwiseAbs().maxCoeff() == 0.0 || vc.cwiseAbs().maxCoeff() == 0.0)
      continue;
    const ElementCoefficients c = problem.coefficients(cm, K);
    const Mat2 Jf = fm.jacobian(Kf), Jc = cm.jacobian(K);
    const Mat2 Jf_it = Jf.inverse().transpose(), Jc_it = Jc.inverse().transpose();
    const Mat2 Jc_inv = Jc.inverse();
    const double det = std::abs(Jf.determinant());
    const Point a = cm.corner(K, 0);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Point x = map_to_element(fm, Kf, rule.points[q]);
      const Vec2 xh = Jc_inv * Vec2(x.x - a.x, x.y - a.y);
      ue.evaluate({xh.x(), xh.y()}, uv.data(), ux.data(), uy.data());
      Complex u = 0.0;
      Eigen::Vector2cd gu = Eigen::Vector2cd::Zero();
      for (int l = 0; l < ue.num_dofs(); ++l)
      {
        u += uv[l] * uc[l];
        gu[0] += ux[l] * uc[l];
        gu[1] += uy[l] * uc[l];
      }
      gu = Jc_it.cast<Complex>() * gu;
      // conjugated test function and gradient
      const Complex vbar = vt.value.row(q).cast<Complex>().dot(vc.conjugate());
      Eigen::Vector2cd gvbar(vt.dx.row(q).cast<Complex>().dot(vc.conjugate()),
                             vt.dy.row(q).cast<Complex>().dot(vc.conjugate()));
      gvbar = Jf_it.cast<Complex>() * gvbar;
      const Complex flux = (c.diffusion * gu).cwiseProduct(gvbar).sum();
      form += det * rule.weights[q] * (c.reaction * u * vbar + flux);
    }
  }
  return load - form;
}

}  // namespace frontier
