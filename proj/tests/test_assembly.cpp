#include <doctest.h>

#include <cmath>
#include <random>

#include "frontier/assembly.hpp"
#include "frontier/polynomials.hpp"

using namespace frontier;

namespace
{

Problem unit_rd(double kappa = 1.0)
{
  return Problem::reaction_diffusion(DomainSpec::full_plane(),
                                     [kappa](Point) { return kappa; },
                                     indicator_source({-1, 1, -1, 1}));
}

std::shared_ptr<const LagrangeSpace> space_on(const Mesh& m, int p)
{
  return std::make_shared<LagrangeSpace>(std::make_shared<Mesh>(m), p);
}

ScalarField random_field(std::shared_ptr<const LagrangeSpace> s, ScalarKind kind,
                         std::mt19937& rng)
{
  std::normal_distribution<double> N;
  Eigen::VectorXcd v(s->num_free());
  for (Index i = 0; i < v.size(); ++i)
    v[i] = kind == ScalarKind::Real ? Complex(N(rng)) : Complex(N(rng), N(rng));
  return ScalarField(s, kind, v);
}

// (f, v) - b(u, v) by brute-force quadrature at physical points.
Complex brute_residual(const Problem& problem, const ScalarField& u,
                       const ScalarField& v, int degree)
{
  const Mesh& m = u.mesh();
  const QuadratureRule& rule = triangle_rule(degree);
  Complex sum = 0.0;
  for (Index K = 0; K < m.num_elements(); ++K)
  {
    const ElementCoefficients c = problem.coefficients(m, K);
    const double det = m.jacobian(K).determinant();
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const Point xh = rule.points[q];
      const Point x = map_to_element(m, K, xh);
      const Complex vv = std::conj(v.evaluate(K, xh));
      const Eigen::Vector2cd gv = v.gradient(K, xh).conjugate();
      const Complex uu = u.evaluate(K, xh);
      const Eigen::Vector2cd gu = u.gradient(K, xh);
      const Complex form = c.reaction * uu * vv + (c.diffusion * gu).cwiseProduct(gv).sum();
      sum += det * rule.weights[q] * (problem.source().value(x) * vv - form);
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("P1 stiffness on the reference triangle")
{
  ElementCoefficients c;
  c.reaction = 0.0;
  c.diffusion = CMat2::Identity();
  const Eigen::MatrixXcd E = element_form_matrix(c, lagrange_element(1), Mat2::Identity());
  Eigen::Matrix3d expected;
  expected << 1, -0.5, -0.5, -0.5, 0.5, 0, -0.5, 0, 0.5;
  CHECK((E.real() - expected).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(E.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("absorbing-layer coefficients")
{
  const Complex g(1.0, 1.0);
  const PmlCoefficients pml(DomainSpec::t_shaped_waveguide(), g);
  const CMat2 A = pml.A(0);  // axis +e1
  CHECK(std::abs(A(0, 0) - 1.0 / g) < 1e-15);
  CHECK(std::abs(A(1, 1) - g) < 1e-15);
  CHECK(std::abs(A(0, 1)) == 0.0);
  const CMat2 B = pml.A(2);  // axis -e2
  CHECK(std::abs(B(1, 1) - 1.0 / g) < 1e-15);
  CHECK(std::abs(B(0, 0) - g) < 1e-15);
  CHECK(pml.norm_factor() == doctest::Approx(2.0));
  CHECK_THROWS_AS(PmlCoefficients(DomainSpec::t_shaped_waveguide(), Complex(1.0, 0.5)), Error);
}

TEST_CASE("hat-function integral of a constant reaction term")
{
  const Mesh m = build_initial_mesh(DomainSpec::full_plane(), 2);
  const double kappa = 1.7, c = 0.3;
  const Index a = m.find_vertex({0, 0});
  double patch_area = 0.0, assembled = 0.0;
  for (Index K : m.vertex_elements(a))
  {
    patch_area += m.signed_area(K);
    ElementCoefficients co;
    co.reaction = kappa * kappa;
    co.diffusion = CMat2::Zero();
    const Eigen::MatrixXcd E = element_form_matrix(co, lagrange_element(1), m.jacobian(K));
    const int la = static_cast<int>(std::find(m.element(K).v.begin(), m.element(K).v.end(), a)
                                    - m.element(K).v.begin());
    assembled += (E.row(la).sum() * c).real();
  }
  CHECK(assembled == doctest::Approx(c * kappa * kappa * patch_area / 3.0));
}

TEST_CASE("solve: identity and residual checks")
{
  SparseSystem s;
  s.kind = ScalarKind::Real;
  s.real_matrix.resize(3, 3);
  s.real_matrix.setIdentity();
  s.real_rhs = Eigen::Vector3d(1, 2, 3);
  CHECK((solve(s).real() - s.real_rhs).norm() < 1e-15);

  SparseSystem z;
  z.kind = ScalarKind::Real;
  z.real_matrix.resize(2, 2);
  z.real_matrix.insert(0, 0) = 1.0;
  z.real_matrix.insert(1, 1) = -1.0;
  z.real_rhs = Eigen::Vector2d(1, 1);
  CHECK_THROWS_AS(solve(z), Error);
}

TEST_CASE("Galerkin orthogonality and manufactured solution")
{
  const Mesh m = build_initial_mesh(DomainSpec::full_plane(), 1);
  const Problem rd = unit_rd();
  for (int p : {1, 2, 3})
  {
    auto s = space_on(m, p);
    const ScalarField u = solve_problem(rd, s);
    std::mt19937 rng(p);
    for (int t = 0; t < 5; ++t)
    {
      const ScalarField v = random_field(s, ScalarKind::Real, rng);
      CHECK(std::abs(residual_functional(rd, u, v)) < 1e-10);
    }
    for (Index d = 0; d < s->num_dofs(); ++d)
    {
      if (s->free_index(d) < 0)
        continue;
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s->num_free());
      e[s->free_index(d)] = 1.0;
      CHECK(std::abs(residual_functional(rd, u, ScalarField(s, ScalarKind::Real, e))) < 1e-10);
    }
  }

  // g = (1-x^2)(1-y^2) lies in the P4 space on (-1,1)^2
  const double kappa = 2.0;
  Source f;
  f.value = [kappa](Point x)
  {
    const double g = (1 - x.x * x.x) * (1 - x.y * x.y);
    return Complex(kappa * kappa * g + 2 * (1 - x.y * x.y) + 2 * (1 - x.x * x.x));
  };
  f.support = Box{-1, 1, -1, 1};
  const Problem mp = Problem::reaction_diffusion(DomainSpec::full_plane(),
                                                 [kappa](Point) { return kappa; }, f);
  auto s4 = space_on(refine_nvb(m, {0, 5, 9}), 4);
  const ScalarField u = solve_problem(mp, s4);
  for (Index d = 0; d < s4->num_dofs(); ++d)
  {
    const Point x = s4->dof_position(d);
    CHECK(std::abs(u.dof_value(d) - (1 - x.x * x.x) * (1 - x.y * x.y)) < 1e-10);
  }

  // linearity in the source
  Source f3 = f;
  f3.value = [f](Point x) { return 3.0 * f.value(x); };
  const ScalarField u3 = solve_problem(mp.with_source(f3), s4);
  CHECK((u3.free_values() - 3.0 * u.free_values()).cwiseAbs().maxCoeff()
        < 1e-12 * u3.free_values().cwiseAbs().maxCoeff());
}

TEST_CASE("energy norm examples")
{
  const Mesh m = build_initial_mesh(DomainSpec::full_plane(), 1);
  const ElementCoefficients c = unit_rd().coefficients(m, 0);
  const Eigen::MatrixXd A = element_energy_matrix(c, lagrange_element(2), m.jacobian(0));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
  CHECK(ones.dot(A * ones) == doctest::Approx(m.signed_area(0)));

  const Mesh t = build_initial_mesh(DomainSpec::t_shaped_waveguide(), 7);
  const Problem h = Problem::helmholtz(0.7 * 2 * M_PI, Complex(1, 1), guided_mode_source(0.7 * 2 * M_PI));
  for (Index K = 0; K < t.num_elements(); ++K)
  {
    const ElementCoefficients hc = h.coefficients(t, K);
    if (hc.region != 0)
      continue;
    ElementCoefficients grad_only = hc;
    grad_only.energy_reaction = 0.0;
    const Eigen::MatrixXd B = element_energy_matrix(grad_only, lagrange_element(1), t.jacobian(K));
    Eigen::Vector3d x;
    for (int i = 0; i < 3; ++i)
      x[i] = t.corner(K, i).x;
    CHECK(x.dot(B * x) == doctest::Approx(0.5 * t.signed_area(K)));
  }
  auto s = space_on(m, 2);
  CHECK(energy_norm(ScalarField::zero(s, ScalarKind::Real), unit_rd()) == 0.0);
}

TEST_CASE("Galerkin energy is stationary at the discrete solution")
{
  const Problem pr = unit_rd(2.0);
  const auto s = space_on(build_initial_mesh(pr.domain(), 2), 2);
  const ScalarField u = solve_problem(pr, s);
  const double norm = energy_norm(u, pr);
  CHECK(galerkin_energy(u, pr) == doctest::Approx(norm * norm).epsilon(1e-12));

  std::mt19937 rng(7);
  const ScalarField d = random_field(s, ScalarKind::Real, rng);
  const double dn = energy_norm(d, pr);
  for (double t : {1e-3, 1.0})
  {
    const ScalarField w(s, ScalarKind::Real, u.free_values() + t * d.free_values());
    CHECK(galerkin_energy(w, pr)
          == doctest::Approx(norm * norm - t * t * dn * dn).epsilon(1e-10));
  }
}

TEST_CASE("Helmholtz form: Garding identity, norm bound, Galerkin orthogonality")
{
  const double k = 0.7 * 2 * M_PI;
  const Problem h = Problem::helmholtz(k, Complex(1, 1), guided_mode_source(k));
  const Mesh t = build_initial_mesh(DomainSpec::t_shaped_waveguide(), 7);
  auto s = space_on(t, 2);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial)
  {
    const ScalarField phi = random_field(s, ScalarKind::Complex, rng);
    Complex b = 0.0;
    double l2_alpha_r = 0.0, plain = 0.0;
    for (Index K = 0; K < t.num_elements(); ++K)
    {
      b += element_form(h, phi, phi, K);
      const ElementCoefficients c = h.coefficients(t, K);
      const Eigen::VectorXcd cc = phi.element_coefficients(K);
      const double det = t.jacobian(K).determinant();
      const Eigen::MatrixXd M = det * s->element().mass();
      const double l2 = cc.real().dot(M * cc.real()) + cc.imag().dot(M * cc.imag());
      l2_alpha_r += c.energy_reaction / (k * k) * l2;
      ElementCoefficients g;
      g.energy_reaction = k * k;
      g.energy_diffusion = Mat2::Identity();
      const Eigen::MatrixXd P = element_energy_matrix(g, s->element(), t.jacobian(K));
      plain += cc.real().dot(P * cc.real()) + cc.imag().dot(P * cc.imag());
    }
    const double en = energy_norm(phi, h);
    CHECK(b.real() == doctest::Approx(en * en - 2 * k * k * l2_alpha_r).epsilon(1e-10));
    CHECK(plain <= h.pml().norm_factor() * en * en * (1 + 1e-12));
  }
  const ScalarField u = solve_problem(h, s);
  for (int trial = 0; trial < 5; ++trial)
  {
    const ScalarField v = random_field(s, ScalarKind::Complex, rng);
    CHECK(std::abs(residual_functional(h, u, v)) < 1e-9 * (1 + u.free_values().norm()));
  }
}

TEST_CASE("residual functional matches brute-force quadrature")
{
  const Mesh m = build_initial_mesh(DomainSpec::full_plane(), 1);
  const Problem rd = unit_rd();
  auto s = space_on(m, 1);
  const ScalarField u = solve_problem(rd, s);
  auto s3 = std::make_shared<LagrangeSpace>(s->mesh_ptr(), 3);
  std::mt19937 rng(5);
  // single interior bubble on element 0
  Eigen::VectorXcd vc = Eigen::VectorXcd::Zero(s3->num_free());
  auto dofs = s3->element_dofs(0);
  vc[s3->free_index(dofs.back())] = 1.7;
  const ScalarField bubble(s3, ScalarKind::Real, vc);
  const ScalarField us3 = ScalarField::interpolate(
      s3, ScalarKind::Real,
      [&](Point x)
      {
        for (Index K = 0; K < m.num_elements(); ++K)
        {
          const Mat2 Ji = m.jacobian(K).inverse();
          const Point a = m.corner(K, 0);
          const Vec2 xh = Ji * Vec2(x.x - a.x, x.y - a.y);
          if (xh.x() >= -1e-12 && xh.y() >= -1e-12 && xh.x() + xh.y() <= 1 + 1e-12)
            return u.evaluate(K, {xh.x(), xh.y()});
        }
        return Complex(0.0);
      });
  CHECK(std::abs(residual_functional(rd, u, bubble) - brute_residual(rd, us3, bubble, 12)) < 1e-12);
  const ScalarField v = random_field(s3, ScalarKind::Real, rng);
  CHECK(std::abs(residual_functional(rd, u, v) - brute_residual(rd, us3, v, 12)) < 1e-11);

  // extended mesh: v lives on a larger mesh
  auto big = space_on(extend_truncation(m, m.domain()), 3);
  const ScalarField w = random_field(big, ScalarKind::Real, rng);
  CHECK(std::isfinite(std::abs(residual_functional(rd, u, w))));
  // unrelated mesh is rejected
  auto other = space_on(refine_nvb(m, {0}), 1);
  CHECK_THROWS_AS(residual_functional(rd, u, random_field(other, ScalarKind::Real, rng)), Error);
}
