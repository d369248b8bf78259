#include "frontier/polynomials.hpp"

#include <array>
#include <cmath>

namespace frontier
{
namespace
{

constexpr int idx(int p, int q) { return (p + q + 1) * (p + q) / 2 + q; }

std::array<double, 3> jacobi_coefficients(int a, int n)
{
  const double an = (a + 2 * n + 1) * (a + 2 * n + 2)
                    / static_cast<double>(2 * (n + 1) * (a + n + 1));
  const double bn = a * a * (a + 2 * n + 1)
                    / static_cast<double>(2 * (n + 1) * (a + n + 1) * (a + 2 * n));
  const double cn = n * (a + n) * (a + 2 * n + 2)
                    / static_cast<double>((n + 1) * (a + n + 1) * (a + 2 * n));
  return {an, bn, cn};
}

}  // namespace

void orthonormal_basis(int n, double xr, double yr, double* v, double* dx,
                       double* dy)
{
  // Collapsed-coordinate recurrence on [-1,1]^2; derivative terms carry the
  // factor 2 of the map x -> 2x - 1.
  const double x = 2.0 * xr - 1.0;
  const double y = 2.0 * yr - 1.0;
  const double f3 = 0.25 * (1.0 - y) * (1.0 - y);
  const bool derivs = dx != nullptr && dy != nullptr;

  v[0] = 1.0;
  if (derivs)
  {
    dx[0] = 0.0;
    dy[0] = 0.0;
  }
  for (int p = 1; p <= n; ++p)
  {
    const double a = static_cast<double>(2 * p - 1) / p;
    const int c = idx(p, 0), c1 = idx(p - 1, 0);
    const double lin = x + 0.5 * y + 0.5;
    v[c] = lin * v[c1] * a;
    if (derivs)
    {
      dx[c] = lin * dx[c1] * a + 2.0 * a * v[c1];
      dy[c] = lin * dy[c1] * a + a * v[c1];
    }
    if (p > 1)
    {
      const int c2 = idx(p - 2, 0);
      v[c] -= f3 * v[c2] * (a - 1.0);
      if (derivs)
      {
        dx[c] -= f3 * dx[c2] * (a - 1.0);
        dy[c] -= f3 * dy[c2] * (a - 1.0) + (y - 1.0) * v[c2] * (a - 1.0);
      }
    }
  }
  for (int p = 0; p < n; ++p)
  {
    const int c0 = idx(p, 0), c1 = idx(p, 1);
    const double s = y * (1.5 + p) + 0.5 + p;
    v[c1] = v[c0] * s;
    if (derivs)
    {
      dx[c1] = dx[c0] * s;
      dy[c1] = dy[c0] * s + 2.0 * (1.5 + p) * v[c0];
    }
    for (int q = 1; q < n - p; ++q)
    {
      const auto [a1, a2, a3] = jacobi_coefficients(2 * p + 1, q);
      const int cq = idx(p, q), cp = idx(p, q + 1), cm = idx(p, q - 1);
      v[cp] = v[cq] * (y * a1 + a2) - v[cm] * a3;
      if (derivs)
      {
        dx[cp] = dx[cq] * (y * a1 + a2) - dx[cm] * a3;
        dy[cp] = dy[cq] * (y * a1 + a2) - dy[cm] * a3 + 2.0 * a1 * v[cq];
      }
    }
  }
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n - p; ++q)
    {
      const double s = 2.0 * std::sqrt((p + 0.5) * (p + q + 1));
      v[idx(p, q)] *= s;
      if (derivs)
      {
        dx[idx(p, q)] *= s;
        dy[idx(p, q)] *= s;
      }
    }
}

void shifted_legendre(int n, double s, double* v)
{
  const double t = 2.0 * s - 1.0;
  v[0] = 1.0;
  if (n >= 1)
    v[1] = t;
  for (int i = 2; i <= n; ++i)
    v[i] = ((2 * i - 1) * t * v[i - 1] - (i - 1) * v[i - 2]) / i;
}

void shifted_monomials(int n, double x, double y, double cx, double cy,
                       double* v, double* gx, double* gy)
{
  const double X = x - cx, Y = y - cy;
  for (int i = 0; i <= n; ++i)
  {
    const int a = n - i, b = i;
    const double xa = std::pow(X, a), yb = std::pow(Y, b);
    v[i] = xa * yb;
    gx[i] = a > 0 ? a * std::pow(X, a - 1) * yb : 0.0;
    gy[i] = b > 0 ? b * xa * std::pow(Y, b - 1) : 0.0;
  }
}

}  // namespace frontier
