#include <doctest.h>

#include <cmath>

#include "frontier/adaptive.hpp"

using namespace frontier;

namespace
{

Problem unit_rd()
{
  return Problem::reaction_diffusion(DomainSpec::full_plane(), [](Point) { return 1.0; },
                                     indicator_source({-1.0, 1.0, -1.0, 1.0}));
}

// elements with no vertex on the artificial boundary
std::vector<Index> inner_elements(const Mesh& m)
{
  std::vector<Index> out;
  for (Index K = 0; K < m.num_elements(); ++K)
    if (!m.touches_artificial(K))
      out.push_back(K);
  return out;
}

std::vector<Index> ring_elements(const Mesh& m)
{
  std::vector<Index> out;
  for (Index K = 0; K < m.num_elements(); ++K)
    if (m.touches_artificial(K))
      out.push_back(K);
  return out;
}

}  // namespace

TEST_CASE("doerfler marking")
{
  CHECK(dorfler_mark({4, 3, 2, 1}, 0.2) == std::vector<Index>{0});
  CHECK(dorfler_mark({1, 2, 3, 4}, 0.2) == std::vector<Index>{3});
  // 16 / 30 < 0.6 so the second largest joins
  CHECK(dorfler_mark({4, 3, 2, 1}, 0.6) == std::vector<Index>{0, 1});
  CHECK(dorfler_mark({4, 0, 2, 1}, 0.999999).size() == 3);
  CHECK(dorfler_mark({0, 0, 0}, 0.5).empty());

  const std::vector<double> flat(7, 1.0);
  const std::vector<Index> half = dorfler_mark(flat, 0.5);
  CHECK(half == std::vector<Index>{0, 1, 2, 3});

  // marked set is minimal
  std::vector<double> eta;
  for (int i = 0; i < 50; ++i)
    eta.push_back(std::sin(1.3 * i) + 1.1);
  double total = 0.0;
  for (double e : eta)
    total += e * e;
  for (double theta : {0.1, 0.3, 0.7})
  {
    const std::vector<Index> m = dorfler_mark(eta, theta);
    double s = 0.0, smallest = INFINITY;
    for (Index K : m)
    {
      s += eta[K] * eta[K];
      smallest = std::min(smallest, eta[K] * eta[K]);
    }
    CHECK(s >= theta * total);
    CHECK(s - smallest < theta * total);
    for (std::size_t K = 0; K < eta.size(); ++K)
      if (std::find(m.begin(), m.end(), static_cast<Index>(K)) == m.end())
        CHECK(eta[K] * eta[K] <= smallest);
  }
}

TEST_CASE("refine or extend")
{
  const Problem pr = unit_rd();
  const Mesh m = build_initial_mesh(pr.domain(), 2);
  const std::vector<Index> inner = inner_elements(m), ring = ring_elements(m);
  REQUIRE(!inner.empty());
  REQUIRE(!ring.empty());

  SUBCASE("interior only")
  {
    const RefineResult r = refine_or_extend(m, {inner[0]}, pr.domain());
    CHECK(!r.boundary_pushed);
    CHECK(r.mesh.truncation() == 2);
    CHECK(r.mesh.num_elements() > m.num_elements());
    CHECK(r.interior_marked == 1);
    CHECK(r.boundary_marked == 0);
    check_mesh(r.mesh);
  }
  SUBCASE("boundary only")
  {
    const RefineResult r = refine_or_extend(m, {ring[0], ring[1]}, pr.domain());
    CHECK(r.boundary_pushed);
    CHECK(r.mesh.truncation() == 3);
    CHECK(r.mesh.num_elements() == extend_truncation(m, pr.domain(), 1).num_elements());
    CHECK(r.boundary_marked == 2);
    CHECK(r.boundary_bisections == 0);
    check_mesh(r.mesh);
  }
  SUBCASE("mixed")
  {
    const RefineResult r = refine_or_extend(m, {inner[0], ring[0]}, pr.domain());
    CHECK(r.boundary_pushed);
    CHECK(r.mesh.truncation() == 3);
    CHECK(r.mesh.num_elements()
          > extend_truncation(m, pr.domain(), 1).num_elements());
    check_mesh(r.mesh);
  }
  SUBCASE("nothing marked")
  {
    const RefineResult r = refine_or_extend(m, {}, pr.domain());
    CHECK(r.mesh.num_elements() == m.num_elements());
    CHECK(!r.boundary_pushed);
  }
}

TEST_CASE("lifting into refined and extended spaces")
{
  const Problem pr = unit_rd();
  const auto coarse = std::make_shared<Mesh>(build_initial_mesh(pr.domain(), 2));
  const auto cs = std::make_shared<LagrangeSpace>(coarse, 4);
  const auto bubble = [](Point x) { return Complex((4.0 - x.x * x.x) * (4.0 - x.y * x.y)); };
  const ScalarField u = ScalarField::interpolate(cs, ScalarKind::Real, bubble);

  Mesh fine = refine_nvb(*coarse, inner_elements(*coarse));
  fine = refine_nvb(fine, {0, 3, 7});
  fine = extend_truncation(fine, pr.domain(), 1);
  const auto fm = std::make_shared<Mesh>(fine);

  const std::vector<Index> owner = locate_in_coarse(*coarse, *fm);
  Index outside = 0;
  for (Index K = 0; K < fm->num_elements(); ++K)
  {
    const Point c = fm->centroid(K);
    const bool inside = std::abs(c.x) < 2.0 && std::abs(c.y) < 2.0;
    CHECK((owner[K] >= 0) == inside);
    outside += inside ? 0 : 1;
  }
  CHECK(outside > 0);

  const auto fs = std::make_shared<LagrangeSpace>(fm, 4);
  const ScalarField lifted = lift(u, fs);
  const ScalarField direct = ScalarField::interpolate(
      fs, ScalarKind::Real,
      [&](Point x)
      { return std::abs(x.x) <= 2.0 && std::abs(x.y) <= 2.0 ? bubble(x) : Complex(0.0); });
  CHECK((lifted.free_values() - direct.free_values()).norm()
        < 1e-11 * direct.free_values().norm());
}

TEST_CASE("reference error")
{
  const Problem pr = unit_rd();
  const auto mesh = std::make_shared<Mesh>(build_initial_mesh(pr.domain(), 2));
  const auto space = std::make_shared<LagrangeSpace>(mesh, 1);
  const ScalarField u = solve_problem(pr, space);

  const ReferenceError same = reference_error(pr, u, 2, 1);
  CHECK(same.global < 1e-12);

  const ReferenceError r = reference_error(pr, u, 2, 3);
  double s = 0.0;
  for (double e : r.element)
    s += e * e;
  CHECK(r.global > 0.0);
  CHECK(std::sqrt(s) == doctest::Approx(r.global).epsilon(1e-12));
  CHECK(r.omega0 == 0.0);

  // extended reference: the coarse elements only see part of the error
  const ReferenceError wide = reference_error(pr, u, 4, 3);
  double inner = 0.0;
  for (double e : wide.element)
    inner += e * e;
  CHECK(std::sqrt(inner) <= wide.global);
  CHECK(wide.global > r.global * 0.5);

  CHECK_THROWS_AS(reference_error(pr, u, 1, 3), Error);
}

TEST_CASE("convergence rate fit")
{
  std::vector<double> n, e;
  for (int i = 0; i < 8; ++i)
  {
    n.push_back(100.0 * std::pow(1.7, i));
    e.push_back(3.0 / std::sqrt(n.back()));
  }
  CHECK(std::abs(convergence_rate_fit(n, e) + 0.5) < 1e-12);
  n.resize(4);
  e.resize(4);
  CHECK_THROWS_AS(convergence_rate_fit(n, e), Error);
  CHECK_THROWS_AS(convergence_rate_fit({1, 2, 3, 4, 5}, {1, 2, 3}), Error);
}

TEST_CASE("adaptive loop bookkeeping")
{
  const Problem pr = unit_rd();
  AdaptiveConfig cfg;
  cfg.p = 1;
  cfg.L0 = 1;
  cfg.L_ref = 6;
  cfg.max_iter = 0;
  cfg.residual_samples = 2;
  const RunHistory zero = run_adaptive_loop(pr, cfg);
  REQUIRE(zero.records.size() == 1);
  CHECK(zero.records[0].has_reference);
  CHECK(zero.final_mesh);

  cfg.max_iter = 4;
  const RunHistory a = run_adaptive_loop(pr, cfg);
  const RunHistory b = run_adaptive_loop(pr, cfg);
  REQUIRE(a.records.size() == 5);
  for (std::size_t i = 0; i < a.records.size(); ++i)
  {
    const IterationRecord& r = a.records[i];
    CHECK(r.iter == static_cast<int>(i));
    CHECK(r.eta == b.records[i].eta);
    CHECK(r.error_global == b.records[i].error_global);
    CHECK(r.eta > 0.0);
    CHECK(r.eta >= r.eta_tilde);
    CHECK(r.equilibration_worst < 1e-9);
    CHECK(r.residual_samples == 3);
    CHECK(r.has_reference);
    CHECK(r.residual_violations == 0);
    if (i > 0)
    {
      CHECK(r.n_dofs > a.records[i - 1].n_dofs);
      CHECK(r.L >= a.records[i - 1].L);
    }
  }
  CHECK(a.records[0].L == 1);
  CHECK(a.records.back().marked == 0);

  cfg.theta = 1.0;
  CHECK_THROWS_AS(run_adaptive_loop(pr, cfg), Error);
  cfg.theta = 0.2;
  cfg.L_ref = 1;
  CHECK_THROWS_AS(run_adaptive_loop(pr, cfg), Error);
}

TEST_CASE("energy identity on nested spaces")
{
  const Problem pr = unit_rd();
  const auto coarse = std::make_shared<Mesh>(build_initial_mesh(pr.domain(), 2));
  const ScalarField u = solve_problem(pr, std::make_shared<LagrangeSpace>(coarse, 1));

  Mesh fine = refine_nvb(*coarse, {0, 5, 9, 12});
  fine = extend_truncation(fine, pr.domain(), 2);
  const auto fs = std::make_shared<LagrangeSpace>(std::make_shared<Mesh>(fine), 3);
  const ScalarField ref = solve_problem(pr, fs);
  const ScalarField diff(fs, ScalarKind::Real, ref.free_values() - lift(u, fs).free_values());
  const double direct = energy_norm(diff, pr);
  const double e_ref = energy_norm(ref, pr), e_u = energy_norm(u, pr);
  CHECK(direct == doctest::Approx(std::sqrt(e_ref * e_ref - e_u * e_u)).epsilon(1e-8));

  AdaptiveConfig cfg;
  cfg.L_ref = 6;
  cfg.max_iter = 3;
  cfg.reference_period = 0;
  cfg.energy_identity = true;
  const RunHistory h = run_adaptive_loop(pr, cfg);
  const ReferenceError last = reference_error(pr, h.final_solution, 6, 3);
  CHECK(h.records.back().error_global == doctest::Approx(last.global).epsilon(1e-8));
  for (std::size_t i = 1; i < h.records.size(); ++i)
    CHECK(h.records[i].error_global < h.records[i - 1].error_global);
  CHECK(h.records.front().residual_samples == 1);
  CHECK(h.records.back().residual_samples == 2);

  CHECK_THROWS_AS(run_adaptive_loop(Problem::helmholtz(0.7 * 2 * M_PI, Complex(1, 1),
                                                       zero_source()),
                                    cfg),
                  Error);
}
