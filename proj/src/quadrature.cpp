#include "frontier/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace frontier
{
namespace
{

// Golub-Welsch on [-1,1] for weight (1-t)^alpha; returns nodes and weights.
void gauss_jacobi(int n, double alpha, std::vector<double>& x,
                  std::vector<double>& w)
{
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  const double a = alpha, b = 0.0;
  for (int i = 0; i < n; ++i)
  {
    const double s = 2.0 * i + a + b;
    T(i, i) = (s == 0.0 || s + 2.0 == 0.0) ? (b - a) / (a + b + 2.0)
                                            : (b * b - a * a) / (s * (s + 2.0));
    if (i + 1 < n)
    {
      const double k = i + 1.0;
      const double s1 = 2.0 * k + a + b;
      T(i, i + 1) = T(i + 1, i)
          = std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b)
                      / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  const double mu0 = std::pow(2.0, a + b + 1.0) / (a + b + 1.0);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i)
  {
    x[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
}

std::mutex cache_mutex;

}  // namespace

const QuadratureRule& gauss_legendre(int n)
{
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot)
  {
    if (n < 1)
      throw Error("gauss_legendre: need at least one point");
    std::vector<double> x, w;
    gauss_jacobi(n, 0.0, x, w);
    slot = std::make_unique<QuadratureRule>();
    slot->degree = 2 * n - 1;
    for (int i = 0; i < n; ++i)
    {
      slot->points.push_back({0.5 * (x[i] + 1.0), 0.0});
      slot->weights.push_back(0.5 * w[i]);
    }
  }
  return *slot;
}

const QuadratureRule& triangle_rule(int degree)
{
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  const int m = std::max(1, (degree + 2) / 2);
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(degree); it != cache.end())
      return *it->second;
  }
  const QuadratureRule& line = gauss_legendre(m);
  std::vector<double> t, wt;
  gauss_jacobi(m, 1.0, t, wt);
  auto rule = std::make_unique<QuadratureRule>();
  rule->degree = degree;
  for (int j = 0; j < m; ++j)
  {
    // y = (1+t)/2, 1-y = (1-t)/2; Jacobian of the collapse is (1-y).
    const double y = 0.5 * (1.0 + t[j]);
    const double wy = 0.25 * wt[j];
    for (int i = 0; i < m; ++i)
    {
      const double u = line.points[i].x;
      rule->points.push_back({u * (1.0 - y), y});
      rule->weights.push_back(line.weights[i] * wy);
    }
  }
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[degree];
  if (!slot)
    slot = std::move(rule);
  return *slot;
}

}  // namespace frontier
