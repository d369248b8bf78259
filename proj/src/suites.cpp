#include "frontier/suites.hpp"

#include <array>
#include <cmath>
#include <random>

#include "frontier/polynomials.hpp"

namespace frontier
{

namespace
{

void tally(SuiteReport& s, const InequalityCheckResult& r)
{
  ++s.samples;
  s.failures += r.pass ? 0 : 1;
  s.worst_ratio = std::max(s.worst_ratio, r.ratio);
}

ElementPolynomial random_polynomial(int degree, std::mt19937_64& rng)
{
  std::normal_distribution<double> N;
  ElementPolynomial p{degree, Eigen::VectorXd(poly_dim(degree))};
  for (Index i = 0; i < p.coefficients.size(); ++i)
    p.coefficients[i] = N(rng);
  return p;
}

std::vector<std::array<Point, 3>> random_nvb_elements(int count, std::mt19937_64& rng)
{
  Mesh m = build_initial_mesh(DomainSpec::full_plane(), 1);
  for (int round = 0; round < 6; ++round)
  {
    std::uniform_int_distribution<Index> pick(0, m.num_elements() - 1);
    std::vector<Index> marked;
    for (int i = 0; i < 3; ++i)
      marked.push_back(pick(rng));
    m = refine_nvb(m, marked);
  }
  std::vector<std::array<Point, 3>> out;
  std::uniform_int_distribution<Index> pick(0, m.num_elements() - 1);
  for (int i = 0; i < count; ++i)
  {
    const Index K = pick(rng);
    out.push_back({m.corner(K, 0), m.corner(K, 1), m.corner(K, 2)});
  }
  return out;
}

double in_range(std::mt19937_64& rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

SuiteReport trace_suite(std::uint64_t seed, int polynomials, int elements)
{
  SuiteReport s{.name = "trace inequality", .seed = seed, .extra_name = {}};
  s.extra_name = "discrete trace ratio";
  s.extra = 0.0;
  std::mt19937_64 rng(seed);
  const auto els = random_nvb_elements(elements, rng);
  std::uniform_int_distribution<int> deg(0, 4);
  for (int i = 0; i < polynomials; ++i)
  {
    const ElementPolynomial v = random_polynomial(deg(rng), rng);
    for (const auto& e : els)
    {
      for (double nu : {0.1, 1.0, 10.0})
        tally(s, check_trace_inequality(e[0], e[1], e[2], v, nu));
      s.extra = std::max(s.extra, discrete_trace_ratio(e[0], e[1], e[2], v));
    }
  }
  return s;
}

SuiteReport poincare_cylinder_suite(std::uint64_t seed, int samples)
{
  SuiteReport s{.name = "cylinder poincare", .seed = seed, .extra_name = {}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i)
  {
    const double w = in_range(rng, 0.5, 3.0);
    const double k = in_range(rng, 0.5, 10.0);
    const double q = in_range(rng, 0.2, 5.0);
    std::array<double, 12> c{}, om{};
    for (int j = 0; j < 12; ++j)
    {
      c[j] = in_range(rng, -1.0, 1.0);
      om[j] = in_range(rng, -4.0, 4.0);
    }
    const auto value = [=](double a, double x)
    {
      double sum = 0.0;
      for (int n = 0; n < 3; ++n)
        sum += (c[4 * n] * std::cos(om[4 * n] * a) + c[4 * n + 1] * std::sin(om[4 * n + 1] * a)
                + c[4 * n + 2] + c[4 * n + 3] * a)
               * std::sin((n + 1) * M_PI * x / w);
      return sum;
    };
    const auto d_along = [=](double a, double x)
    {
      double sum = 0.0;
      for (int n = 0; n < 3; ++n)
        sum += (-c[4 * n] * om[4 * n] * std::sin(om[4 * n] * a)
                + c[4 * n + 1] * om[4 * n + 1] * std::cos(om[4 * n + 1] * a) + c[4 * n + 3])
               * std::sin((n + 1) * M_PI * x / w);
      return sum;
    };
    const auto d_across = [](double, double) { return 0.0; };
    tally(s, check_poincare_cylinder(q, k, w, {value, d_along, d_across}));
  }
  return s;
}

SuiteReport cylinder_trace_suite(std::uint64_t seed, int samples)
{
  SuiteReport s{.name = "cylinder trace", .seed = seed, .extra_name = {}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i)
  {
    const double w = in_range(rng, 0.5, 3.0);
    const double k = in_range(rng, 0.5, 10.0);
    const double len = in_range(rng, 0.5, 6.0);
    std::array<double, 9> c{};
    for (double& x : c)
      x = in_range(rng, -1.0, 1.0);
    const auto along = [len](int m, double a)
    { return std::sin((2 * m + 1) * M_PI * (len - a) / (2.0 * len)); };
    const auto along_d = [len](int m, double a)
    {
      const double f = (2 * m + 1) * M_PI / (2.0 * len);
      return -f * std::cos(f * (len - a));
    };
    const auto value = [=](double a, double x)
    {
      double sum = 0.0;
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
          sum += c[3 * m + n] * along(m, a) * std::sin((n + 1) * M_PI * x / w);
      return sum;
    };
    const auto d_along = [=](double a, double x)
    {
      double sum = 0.0;
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
          sum += c[3 * m + n] * along_d(m, a) * std::sin((n + 1) * M_PI * x / w);
      return sum;
    };
    const auto d_across = [=](double a, double x)
    {
      double sum = 0.0;
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
          sum += c[3 * m + n] * along(m, a) * (n + 1) * M_PI / w
                 * std::cos((n + 1) * M_PI * x / w);
      return sum;
    };
    tally(s, check_cylinder_trace(k, w, len, {value, d_along, d_across}));
  }
  return s;
}

SuiteReport equilibration_suite(const EquilibrationSuiteOptions& options)
{
  SuiteReport s{.name = options.inject_fault ? "equilibration (fault injected)" : "equilibration", .extra_name = {}};
  const double tolerance = 1e-9;
  auto run = [&](const Problem& pr, int L, int p, bool corrupt)
  {
    const auto space = std::make_shared<LagrangeSpace>(
        std::make_shared<Mesh>(build_initial_mesh(pr.domain(), L)), p);
    const ScalarField u = solve_problem(pr, space);
    Equilibration eq = equilibrate(pr, u);
    if (corrupt)
    {
      if (options.fault_element >= space->mesh().num_elements())
        throw Error("equilibration_suite: fault element out of range");
      eq.flux.coefficients(options.fault_element)[eq.flux.element().face_dof(0, 0)]
          += options.fault_size;
    }
    const EquilibrationCheck c = check_equilibration(pr, u, eq, tolerance);
    for (double e : c.element)
    {
      ++s.samples;
      s.failures += e > tolerance ? 1 : 0;
      s.worst_ratio = std::max(s.worst_ratio, e / tolerance);
    }
  };
  run(Problem::reaction_diffusion(DomainSpec::full_plane(), [](Point) { return 1.0; },
                                  indicator_source({-1, 1, -1, 1})),
      2, 2, options.inject_fault);
  const double k = 0.7 * 2 * M_PI;
  run(Problem::helmholtz(k, Complex(1, 1), guided_mode_source(k)), 7, 1, false);
  return s;
}

}  // namespace frontier
