#include "frontier/waveguide.hpp"

#include <cmath>
#include <numbers>

#include "frontier/quadrature.hpp"

namespace frontier
{

PmlCoefficients::PmlCoefficients(DomainSpec domain, Complex gamma)
    : domain_(std::move(domain)), gamma_(gamma)
{
  if (gamma.real() < 1.0 || gamma.imag() < 1.0)
    throw Error("PmlCoefficients: damping needs Re >= 1 and Im >= 1");
}

int PmlCoefficients::region(const Mesh& mesh, Index K) const
{
  const int r = domain_.region_of(mesh.centroid(K));
  const double start = domain_.layer_start();
  for (int i = 0; i < 3; ++i)
  {
    const Point x = mesh.corner(K, i);
    const double d = std::max(std::abs(x.x), std::abs(x.y));
    if ((r < 0 && d > start) || (r >= 0 && d < start))
      throw Error("PmlCoefficients: element straddles the layer interface");
  }
  return r;
}

Complex PmlCoefficients::alpha(int region) const
{
  return region < 0 ? Complex(1.0) : gamma_;
}

CMat2 PmlCoefficients::A(int region) const
{
  if (region < 0)
    return CMat2::Identity();
  const Vec2 t = domain_.cylinders()[region].axis;
  const Mat2 tt = t * t.transpose();
  return tt.cast<Complex>() / gamma_ + gamma_ * (Mat2::Identity() - tt).cast<Complex>();
}

std::vector<double> cutoff_frequencies(double width, int count)
{
  if (!(width > 0.0))
    throw Error("cutoff_frequencies: width must be positive");
  std::vector<double> lambda(count);
  for (int j = 0; j < count; ++j)
    lambda[j] = (j + 1) * std::numbers::pi / width;
  return lambda;
}

double cross_section_mode(int j, double width, double s)
{
  return std::sqrt(2.0 / width) * std::sin((j + 1) * std::numbers::pi * s / width);
}

ModeBasis modal_wavenumbers(double k, const std::vector<double>& lambda,
                            Complex gamma)
{
  ModeBasis m;
  m.lambda = lambda;
  m.k_star = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < lambda.size(); ++j)
  {
    const double d = k * k - lambda[j] * lambda[j];
    if (std::abs(d) <= 1e-12 * k * k)
      throw Error("modal_wavenumbers: k is a cut-off frequency (mode "
                  + std::to_string(j) + ")");
    const Complex kj = d > 0.0 ? Complex(std::sqrt(d), 0.0)
                               : Complex(0.0, std::sqrt(-d));
    m.k.push_back(kj);
    // the layer maps exp(i k_j s) to exp(i gamma k_j s)
    m.nu.push_back((gamma * kj).imag());
    m.k_star = std::min(m.k_star, std::abs(kj));
  }
  m.mu = m.k_star / k;
  return m;
}

Transition guided_transition(double x2)
{
  const double lo = -3.5, width = 0.5;
  const double t = (x2 - lo) / width;
  if (t <= 0.0)
    return {0.0, 0.0, 0.0};
  if (t >= 1.0)
    return {1.0, 0.0, 0.0};
  const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  const double s1 = 30.0 * t * t * (1.0 - t) * (1.0 - t);
  const double s2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
  return {s, s1 / width, s2 / (width * width)};
}

Source guided_mode_source(double k)
{
  const double pi = std::numbers::pi;
  if (!(k > pi))
    throw Error("guided_mode_source: the second mode must propagate (k > pi)");
  const double K = std::sqrt(k * k - pi * pi);
  Source s;
  s.support = Box{-1.0, 1.0, -3.5, -3.0};
  s.rule_degree = 30;
  s.value = [K, pi](Point x)
  {
    if (std::abs(x.x) >= 1.0 || x.y <= -3.5 || x.y >= -3.0)
      return Complex(0.0);
    const Transition chi = guided_transition(x.y);
    const Complex U = std::exp(Complex(0.0, K * x.y)) * std::sin(pi * x.x);
    const Complex dU = Complex(0.0, K) * U;
    return -chi.d2 * U - 2.0 * chi.d1 * dU;
  };
  return s;
}

Eigen::VectorXcd modal_decomposition(const ScalarField& u, const Cylinder& c,
                                     double station, int J)
{
  const Mesh& mesh = u.mesh();
  const QuadratureRule& line = gauss_legendre(24);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(J);
  double covered = 0.0;
  for (Index K = 0; K < mesh.num_elements(); ++K)
  {
    double amin = 1e300, amax = -1e300;
    Point p[3];
    for (int i = 0; i < 3; ++i)
    {
      p[i] = mesh.corner(K, i);
      amin = std::min(amin, c.along(p[i]));
      amax = std::max(amax, c.along(p[i]));
    }
    // each point of the line is counted on the side of increasing `along`
    if (!(amin <= station && station < amax))
      continue;
    double smin = 1e300, smax = -1e300;
    for (int e = 0; e < 3; ++e)
    {
      const Point a = p[e], b = p[(e + 1) % 3];
      const double ta = c.along(a) - station, tb = c.along(b) - station;
      if (ta == 0.0)
      {
        smin = std::min(smin, c.across(a));
        smax = std::max(smax, c.across(a));
      }
      if ((ta < 0.0 && tb > 0.0) || (ta > 0.0 && tb < 0.0))
      {
        const Point x = a + (ta / (ta - tb)) * (b - a);
        smin = std::min(smin, c.across(x));
        smax = std::max(smax, c.across(x));
      }
    }
    if (!(smax > smin))
      continue;
    covered += smax - smin;
    const Mat2 Jinv = mesh.jacobian(K).inverse();
    for (std::size_t q = 0; q < line.size(); ++q)
    {
      const double s = smin + (smax - smin) * line.points[q].x;
      const double w = (smax - smin) * line.weights[q];
      const Point x = c.at(station, s);
      const Vec2 xh = Jinv * Vec2(x.x - p[0].x, x.y - p[0].y);
      const Complex val = u.evaluate(K, {xh.x(), xh.y()});
      for (int j = 0; j < J; ++j)
        v[j] += w * val * cross_section_mode(j, c.width(), s - c.section_lo);
    }
  }
  if (std::abs(covered - c.width()) > 1e-9 * c.width())
    throw Error("modal_decomposition: station line not covered by the mesh");
  return v;
}

}  // namespace frontier
