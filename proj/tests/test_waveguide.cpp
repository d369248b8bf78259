#include <doctest.h>

#include <cmath>
#include <random>

#include "frontier/assembly.hpp"
#include "frontier/quadrature.hpp"
#include "frontier/waveguide.hpp"

using namespace frontier;

namespace
{

// Polynomial in one variable, ascending coefficients.
using Poly = std::vector<double>;

Poly multiply(const Poly& a, const Poly& b)
{
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] += a[i] * b[j];
  return c;
}

Poly derivative(const Poly& a)
{
  Poly d(std::max<std::size_t>(a.size(), 2) - 1, 0.0);
  for (std::size_t i = 1; i < a.size(); ++i)
    d[i - 1] = i * a[i];
  return d;
}

double eval(const Poly& a, double x)
{
  double s = 0.0;
  for (std::size_t i = a.size(); i-- > 0;)
    s = s * x + a[i];
  return s;
}

// (x - lo)^2 (hi - x)^2
Poly double_root_bump(double lo, double hi)
{
  const Poly l{-lo, 1.0}, h{hi, -1.0};
  return multiply(multiply(l, l), multiply(h, h));
}

}  // namespace

TEST_CASE("cut-off frequencies of the unit-width strip")
{
  const std::vector<double> lam = cutoff_frequencies(2.0, 4);
  const double expect[4] = {1.5708, 3.1416, 4.7124, 6.2832};
  for (int j = 0; j < 4; ++j)
    CHECK(lam[j] == doctest::Approx(expect[j]).epsilon(1e-4));
  const std::vector<double> wide = cutoff_frequencies(4.0, 4);
  for (int j = 0; j < 4; ++j)
    CHECK(wide[j] == doctest::Approx(lam[j] / 2.0));
  CHECK_THROWS_AS(cutoff_frequencies(0.0, 3), Error);

  const QuadratureRule& g = gauss_legendre(20);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
    {
      double s = 0.0;
      for (int cell = 0; cell < 4; ++cell)
        for (std::size_t q = 0; q < g.size(); ++q)
        {
          const double x = 0.5 * (cell + g.points[q].x);
          s += 0.5 * g.weights[q] * cross_section_mode(i, 2.0, x) * cross_section_mode(j, 2.0, x);
        }
      CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("modal wavenumbers")
{
  const Complex gamma(1, 1);
  const double k = 0.7 * 2 * M_PI;
  const ModeBasis m = modal_wavenumbers(k, cutoff_frequencies(2.0, 12), gamma);
  // sqrt|k^2 - ((j+1) pi / 2)^2|
  const double expect[4] = {4.1082, 3.0781, 1.6918, 4.4871};
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(m.k[j]) == doctest::Approx(expect[j]).epsilon(1e-4));
  CHECK(m.k[0].imag() == 0.0);
  CHECK(m.k[1].imag() == 0.0);
  CHECK(m.k[2].real() == 0.0);
  CHECK(m.k[2].imag() > 0.0);
  CHECK(m.k_star == doctest::Approx(1.6918).epsilon(1e-4));
  CHECK(m.mu == doctest::Approx(m.k_star / k));
  for (std::size_t j = 0; j < m.k.size(); ++j)
  {
    CHECK(std::abs(m.k[j] * m.k[j] - (k * k - m.lambda[j] * m.lambda[j])) < 1e-10 * k * k);
    // gamma = 1 + i damps every mode at rate |k_j|
    CHECK(m.nu[j] == doctest::Approx(std::abs(m.k[j])));
  }

  const double k2 = 1.7 * 2 * M_PI;
  const ModeBasis m2 = modal_wavenumbers(k2, cutoff_frequencies(2.0, 12), gamma);
  CHECK(m2.k[1].real() == doctest::Approx(10.2093).epsilon(1e-4));
  CHECK_THROWS_AS(modal_wavenumbers(M_PI / 2, cutoff_frequencies(2.0, 12), gamma), Error);
}

TEST_CASE("mode decay rates satisfy the lower bounds")
{
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(1.0, 3.0), K(3.3, 20.0);
  for (int t = 0; t < 50; ++t)
  {
    const Complex gamma(U(rng), U(rng));
    const double gmin = std::min(gamma.real(), gamma.imag());
    const ModeBasis m = modal_wavenumbers(K(rng), cutoff_frequencies(2.0, 16), gamma);
    for (std::size_t j = 0; j < m.k.size(); ++j)
    {
      CHECK(m.nu[j] >= gmin * std::abs(m.k[j]) * (1.0 - 1e-12));
      CHECK(m.lambda[j] / m.nu[j]
            <= std::max(1.0, m.mu) * std::sqrt(2.0) / (gmin * m.mu) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("guided mode source")
{
  const Transition lo = guided_transition(-3.5), hi = guided_transition(-3.0);
  CHECK(lo.value == 0.0);
  CHECK(hi.value == 1.0);
  CHECK(lo.d1 == 0.0);
  CHECK(hi.d1 == 0.0);
  CHECK(lo.d2 == 0.0);
  CHECK(hi.d2 == 0.0);
  CHECK(guided_transition(-3.25).value == doctest::Approx(0.5));
  CHECK_THROWS_AS(guided_mode_source(3.0), Error);

  const double k = 0.7 * 2 * M_PI;
  const Source f = guided_mode_source(k);
  CHECK(f.value({0.3, -2.9}) == Complex(0.0));
  CHECK(f.value({0.3, -3.6}) == Complex(0.0));
  CHECK(f.value({1.0, -3.2}) == Complex(0.0));
  CHECK(std::abs(f.value({0.3, -3.2})) > 0.0);

  // int f v = int chi U (-k^2 v - lap v) for v vanishing to second order on
  // the box (-1,1) x (-4,-2.5)
  const double K = std::sqrt(k * k - M_PI * M_PI);
  const double y0 = -4.0, y1 = -2.5;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const QuadratureRule& g = gauss_legendre(16);
  for (int t = 0; t < 10; ++t)
  {
    const Poly X = multiply(double_root_bump(-1.0, 1.0), {1.0, U(rng), U(rng)});
    const Poly Y = multiply(double_root_bump(y0, y1), {1.0, U(rng), U(rng), U(rng)});
    const Poly X2 = derivative(derivative(X)), Y2 = derivative(derivative(Y));
    Complex lhs = 0.0, rhs = 0.0;
    const int nx = 8, ny = 12;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        for (std::size_t a = 0; a < g.size(); ++a)
          for (std::size_t b = 0; b < g.size(); ++b)
          {
            const double x = -1.0 + (i + g.points[a].x) * 2.0 / nx;
            const double y = y0 + (j + g.points[b].x) * (y1 - y0) / ny;
            const double w = g.weights[a] * g.weights[b] * (2.0 / nx) * ((y1 - y0) / ny);
            const double v = eval(X, x) * eval(Y, y);
            const double lap = eval(X2, x) * eval(Y, y) + eval(X, x) * eval(Y2, y);
            const Complex chiU = guided_transition(y).value
                                 * std::exp(Complex(0.0, K * y)) * std::sin(M_PI * x);
            lhs += w * f.value({x, y}) * v;
            rhs += w * chiU * (-k * k * v - lap);
          }
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("modal decomposition of an interpolated mode")
{
  const DomainSpec dom = DomainSpec::t_shaped_waveguide();
  const Mesh mesh = build_initial_mesh(dom, 7);
  const auto space = std::make_shared<LagrangeSpace>(std::make_shared<Mesh>(mesh), 6);
  const Cylinder& c = dom.cylinders()[0];
  const ScalarField u = ScalarField::interpolate(
      space, ScalarKind::Complex,
      [&](Point x)
      {
        const double s = c.across(x) - c.section_lo;
        if (c.along(x) < 1.0 || s < 0.0 || s > c.width())
          return Complex(0.0);
        return Complex(cross_section_mode(1, c.width(), s));
      });
  const Eigen::VectorXcd v = modal_decomposition(u, c, 6.0, 12);
  CHECK(std::abs(v[1] - 1.0) < 1e-4);
  for (int j = 0; j < 12; ++j)
    if (j != 1)
      CHECK(std::abs(v[j]) < 1e-4);
  // Parseval: the trace has unit norm
  CHECK(v.squaredNorm() <= 1.0 + 1e-4);

  const Eigen::VectorXcd z
      = modal_decomposition(ScalarField::zero(space, ScalarKind::Complex), c, 6.0, 12);
  CHECK(z.norm() == 0.0);
  CHECK_THROWS_AS(modal_decomposition(u, c, 7.5, 4), Error);

  const PmlCoefficients pml(dom, Complex(1, 1));
  int layer = 0;
  for (Index K = 0; K < mesh.num_elements(); ++K)
    layer += pml.region(mesh, K) >= 0 ? 1 : 0;
  CHECK(layer > 0);
}
