#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "frontier/polynomials.hpp"
#include "frontier/quadrature.hpp"

using namespace frontier;

namespace
{
double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }
}

TEST_CASE("triangle rules integrate monomials exactly")
{
  for (int degree : {0, 1, 4, 7, 12, 20})
  {
    const QuadratureRule& rule = triangle_rule(degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
      {
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
          sum += rule.weights[q] * std::pow(rule.points[q].x, a)
                 * std::pow(rule.points[q].y, b);
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
      }
    for (double w : rule.weights)
      CHECK(w > 0.0);
  }
}

TEST_CASE("gauss-legendre rule on the unit interval")
{
  const QuadratureRule& rule = gauss_legendre(5);
  for (int a = 0; a <= 9; ++a)
  {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q)
      sum += rule.weights[q] * std::pow(rule.points[q].x, a);
    CHECK(sum == doctest::Approx(1.0 / (a + 1)).epsilon(1e-14));
  }
}

TEST_CASE("orthonormal basis is orthonormal on the reference triangle")
{
  const int n = 7;
  const int m = poly_dim(n);
  const QuadratureRule& rule = triangle_rule(2 * n);
  std::vector<double> v(m);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    orthonormal_basis(n, rule.points[q].x, rule.points[q].y, v.data());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        G(i, j) += rule.weights[q] * v[i] * v[j];
  }
  CHECK((G - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orthonormal basis: nested by degree and gradients match differences")
{
  const int n = 6;
  const int m = poly_dim(n);
  std::vector<double> v(m), gx(m), gy(m), vp(m), vm(m);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.05, 0.45);
  for (int trial = 0; trial < 10; ++trial)
  {
    const double x = U(rng), y = U(rng), h = 1e-6;
    orthonormal_basis(n, x, y, v.data(), gx.data(), gy.data());
    std::vector<double> low(poly_dim(3));
    orthonormal_basis(3, x, y, low.data());
    for (int i = 0; i < poly_dim(3); ++i)
      CHECK(low[i] == doctest::Approx(v[i]).epsilon(1e-13));
    orthonormal_basis(n, x + h, y, vp.data());
    orthonormal_basis(n, x - h, y, vm.data());
    for (int i = 0; i < m; ++i)
      CHECK(gx[i] == doctest::Approx((vp[i] - vm[i]) / (2 * h)).epsilon(1e-6));
    orthonormal_basis(n, x, y + h, vp.data());
    orthonormal_basis(n, x, y - h, vm.data());
    for (int i = 0; i < m; ++i)
      CHECK(gy[i] == doctest::Approx((vp[i] - vm[i]) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("shifted legendre polynomials are orthogonal on [0,1]")
{
  const QuadratureRule& rule = gauss_legendre(8);
  std::vector<double> v(6);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(6, 6);
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    shifted_legendre(5, rule.points[q].x, v.data());
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        G(i, j) += rule.weights[q] * v[i] * v[j];
  }
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(G(i, j) == doctest::Approx(i == j ? 1.0 / (2 * i + 1) : 0.0).epsilon(1e-14));
}
