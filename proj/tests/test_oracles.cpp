#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "frontier/oracles.hpp"
#include "frontier/polynomials.hpp"
#include "frontier/suites.hpp"

using namespace frontier;

TEST_CASE("inequality result bookkeeping")
{
  CHECK(make_inequality_result(1.0, 2.0, "").ratio == 0.5);
  CHECK(make_inequality_result(0.0, 0.0, "").pass);
  CHECK(make_inequality_result(1.0 + 1e-11, 1.0, "").pass);
  CHECK_FALSE(make_inequality_result(1.0 + 1e-9, 1.0, "").pass);
  CHECK_FALSE(make_inequality_result(1e-30, 0.0, "").pass);
}

TEST_CASE("trace inequality: constant on a right isosceles triangle")
{
  const Point a{0, 0}, b{1, 0}, c{0.5, 0.5};
  // the orthonormal constant is sqrt(2)
  const ElementPolynomial one{0, Eigen::VectorXd::Constant(1, 1.0 / std::sqrt(2.0))};
  const double perimeter = 1.0 + std::sqrt(2.0);
  const double area = 0.25;
  const double rho = 2.0 * area / perimeter;
  const double beta = 1.0 / rho;
  const InequalityCheckResult r = check_trace_inequality(a, b, c, one, 1.0);
  CHECK(r.lhs == doctest::Approx(std::sqrt(perimeter / rho)));
  CHECK(r.lhs == doctest::Approx(3.4142).epsilon(1e-4));
  CHECK(r.rhs == doctest::Approx(std::max(beta, std::sqrt(3.0) / rho) * std::sqrt(area)));
  CHECK(r.rhs == doctest::Approx(4.1814).epsilon(1e-4));
  CHECK(r.pass);

  ElementPolynomial zero{3, Eigen::VectorXd::Zero(poly_dim(3))};
  const InequalityCheckResult z = check_trace_inequality(a, b, c, zero, 1.0);
  CHECK(z.lhs == 0.0);
  CHECK(z.pass);
}

TEST_CASE("trace inequality holds on random NVB elements")
{
  for (std::uint64_t seed : {20240601ULL, 99ULL})
  {
    const SuiteReport r = trace_suite(seed);
    MESSAGE("trace worst ratio " << r.worst_ratio << " discrete ratio " << r.extra);
    CHECK(r.samples == 12000);
    CHECK(r.failures == 0);
    CHECK(r.worst_ratio < 1.0);
  }
  CHECK(trace_suite(5, 3, 2).samples == 18);
}

TEST_CASE("cylinder Poincare inequality")
{
  SUBCASE("constant along the axis gives ratio 1/2")
  {
    const double w = 2.0, k = 3.0, q = 1.5;
    const CylinderSample v{[w](double, double s) { return std::sin(M_PI * s / w); },
                           [](double, double) { return 0.0; },
                           [w](double, double s) { return M_PI / w * std::cos(M_PI * s / w); }};
    const InequalityCheckResult r = check_poincare_cylinder(q, k, w, v);
    CHECK(r.lhs == doctest::Approx(k * q * w / 2.0));
    CHECK(r.ratio == doctest::Approx(0.5));
  }
  SUBCASE("zero field")
  {
    const auto zero = [](double, double) { return 0.0; };
    CHECK(check_poincare_cylinder(1.0, 1.0, 2.0, {zero, zero, zero}).pass);
  }
  SUBCASE("random trigonometric fields")
  {
    for (std::uint64_t seed : {7ULL, 8ULL})
    {
      const SuiteReport r = poincare_cylinder_suite(seed);
      MESSAGE("poincare worst ratio " << r.worst_ratio);
      CHECK(r.samples == 300);
      CHECK(r.failures == 0);
    }
  }
}

TEST_CASE("cylinder trace inequality")
{
  for (std::uint64_t seed : {11ULL, 12ULL})
  {
    const SuiteReport r = cylinder_trace_suite(seed);
    MESSAGE("cylinder trace worst ratio " << r.worst_ratio);
    CHECK(r.samples == 300);
    CHECK(r.failures == 0);
  }
}

TEST_CASE("decay fit on a synthetic modal field")
{
  const double k = 0.7 * 2 * M_PI;
  const Complex gamma(1, 1);
  const DomainSpec dom = DomainSpec::t_shaped_waveguide();
  Mesh m = extend_truncation(build_initial_mesh(dom, 7), dom, 3);
  std::vector<Index> all(m.num_elements());
  std::iota(all.begin(), all.end(), Index{0});
  m = refine_nvb(m, all);
  const auto space = std::make_shared<LagrangeSpace>(std::make_shared<Mesh>(m), 6);
  const ModeBasis modes = modal_wavenumbers(k, cutoff_frequencies(2.0, 12), gamma);
  const Cylinder& cyl = dom.cylinders()[0];
  const std::vector<int> present{0, 1, 2, 4};
  const std::vector<double> amp{0.3, 1.0, 0.1, 0.05};
  const ScalarField u = ScalarField::interpolate(
      space, ScalarKind::Complex,
      [&](Point x)
      {
        const double a = cyl.along(x), s = cyl.across(x) - cyl.section_lo;
        if (a < 5.0 || s < 0.0 || s > cyl.width())
          return Complex(0.0);
        Complex sum = 0.0;
        for (std::size_t i = 0; i < present.size(); ++i)
        {
          const int j = present[i];
          sum += amp[i] * cross_section_mode(j, cyl.width(), s)
                 * std::exp(Complex(0, 1) * gamma * modes.k[j] * (a - 5.0));
        }
        return sum;
      });

  const std::vector<double> stations{5.25, 5.5, 5.75, 6.0};
  // interpolation error leaks into unexcited modes near 1e-5 of the leading one
  const DecayReport r = check_pml_decay(u, cyl, modes, stations, 1e-4);
  for (const ModeFit& f : r.modes)
  {
    const bool excited
        = std::find(present.begin(), present.end(), f.mode) != present.end();
    CHECK(f.usable == excited);
    if (f.usable)
    {
      MESSAGE("mode " << f.mode << " nu " << f.nu << " fitted " << f.fitted);
      CHECK(f.relative_error < 0.01);
    }
  }
  CHECK(r.pass);
  // faster-decaying modes have larger fitted rates
  for (std::size_t i = 0; i < present.size(); ++i)
    for (std::size_t j = 0; j < present.size(); ++j)
      if (modes.nu[present[i]] < modes.nu[present[j]])
        CHECK(r.modes[present[i]].fitted < r.modes[present[j]].fitted);

  // ratio over a distance with nu * distance = 2
  const double d = 2.0 / modes.nu[1];
  const Eigen::VectorXcd c0 = modal_decomposition(u, cyl, 5.5, 12);
  const Eigen::VectorXcd c1 = modal_decomposition(u, cyl, 5.5 + d, 12);
  CHECK(std::abs(c1[1]) / std::abs(c0[1]) == doctest::Approx(std::exp(-2.0)).epsilon(0.1));

  const DecayReport z = check_pml_decay(ScalarField::zero(space, ScalarKind::Complex), cyl,
                                        modes, stations);
  CHECK(z.pass);
  CHECK_THROWS_AS(check_pml_decay(u, cyl, modes, {5.5}), Error);
}

TEST_CASE("equilibration check detects a corrupted flux")
{
  const Problem pr = Problem::reaction_diffusion(
      DomainSpec::full_plane(), [](Point) { return 1.0; }, indicator_source({-1, 1, -1, 1}));
  const auto s = std::make_shared<LagrangeSpace>(
      std::make_shared<Mesh>(build_initial_mesh(DomainSpec::full_plane(), 2)), 2);
  const ScalarField u = solve_problem(pr, s);
  Equilibration eq = equilibrate(pr, u);
  const EquilibrationCheck ok = check_equilibration(pr, u, eq);
  MESSAGE("clean worst " << ok.worst);
  CHECK(ok.pass);

  const Index K = 5;
  eq.flux.coefficients(K)[eq.flux.element().face_dof(0, 0)] += 1e-3;
  const EquilibrationCheck bad = check_equilibration(pr, u, eq);
  CHECK_FALSE(bad.pass);
  for (Index E = 0; E < s->mesh().num_elements(); ++E)
    CHECK((bad.element[E] > 1e-9) == (E == K));
}

TEST_CASE("equilibration suite")
{
  const SuiteReport clean = equilibration_suite();
  CHECK(clean.pass());
  CHECK(clean.samples > 100);
  const SuiteReport bad = equilibration_suite({.inject_fault = true});
  CHECK_FALSE(bad.pass());
  CHECK(bad.failures == 1);
  CHECK(bad.samples == clean.samples);
  CHECK_THROWS_AS(equilibration_suite({.inject_fault = true, .fault_element = 100000}), Error);
}
