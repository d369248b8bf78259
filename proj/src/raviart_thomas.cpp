#include "frontier/raviart_thomas.hpp"

#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "frontier/polynomials.hpp"

namespace frontier
{

namespace
{

constexpr Point ref_vertex[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
constexpr double span_center = 1.0 / 3.0;

}  // namespace

Point reference_edge_normal(int e)
{
  const Point a = ref_vertex[e], b = ref_vertex[(e + 1) % 3];
  const double len = reference_edge_length(e);
  return {(b.y - a.y) / len, -(b.x - a.x) / len};
}

double reference_edge_length(int e)
{
  const Point a = ref_vertex[e], b = ref_vertex[(e + 1) % 3];
  return std::hypot(b.x - a.x, b.y - a.y);
}

RaviartThomasElement::RaviartThomasElement(int degree) : degree_(degree)
{
  if (degree < 0 || degree > 12)
    throw Error("RaviartThomasElement: unsupported degree");
  const int q = degree;
  span_size_ = 2 * poly_dim(q) + q + 1;
  const int n = num_dofs();
  if (span_size_ != n)
    throw Error("RaviartThomasElement: dimension mismatch");

  // dof(i) applied to span function j
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> vx(n), vy(n), leg(q + 1);
  const QuadratureRule& line = gauss_legendre(q + 2);
  for (int e = 0; e < 3; ++e)
  {
    const Point a = ref_vertex[e], b = ref_vertex[(e + 1) % 3];
    const Point nrm = reference_edge_normal(e);
    const double len = reference_edge_length(e);
    for (std::size_t g = 0; g < line.size(); ++g)
    {
      const double s = line.points[g].x;
      evaluate_span(a + (b - a) * s, vx.data(), vy.data(), nullptr);
      shifted_legendre(q, s, leg.data());
      const double w = line.weights[g] * len;
      for (int j = 0; j < n; ++j)
      {
        const double wn = vx[j] * nrm.x + vy[j] * nrm.y;
        for (int i = 0; i <= q; ++i)
          D(face_dof(e, i), j) += w * wn * leg[i];
      }
    }
  }
  if (q > 0)
  {
    const int m = poly_dim(q - 1);
    std::vector<double> pv(m);
    const QuadratureRule& rule = triangle_rule(2 * q + 1);
    for (std::size_t g = 0; g < rule.size(); ++g)
    {
      const Point x = rule.points[g];
      evaluate_span(x, vx.data(), vy.data(), nullptr);
      orthonormal_basis(q - 1, x.x, x.y, pv.data());
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < m; ++k)
        {
          D(first_interior_dof() + 2 * k, j) += rule.weights[g] * vx[j] * pv[k];
          D(first_interior_dof() + 2 * k + 1, j) += rule.weights[g] * vy[j] * pv[k];
        }
    }
  }
  coefficients_ = D.partialPivLu().inverse();

  const QuadratureRule& rule = triangle_rule(2 * q + 2);
  const VectorTabulation& t = tabulate(rule);
  const Eigen::VectorXd w =
      Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  rxx_ = t.x.transpose() * w.asDiagonal() * t.x;
  rxy_ = t.x.transpose() * w.asDiagonal() * t.y;
  ryy_ = t.y.transpose() * w.asDiagonal() * t.y;
  const int np = poly_dim(q);
  Eigen::MatrixXd P(rule.size(), np);
  std::vector<double> pv(np);
  for (std::size_t g = 0; g < rule.size(); ++g)
  {
    orthonormal_basis(q, rule.points[g].x, rule.points[g].y, pv.data());
    for (int k = 0; k < np; ++k)
      P(g, k) = pv[k];
  }
  div_ = P.transpose() * w.asDiagonal() * t.div;
}

void RaviartThomasElement::evaluate_span(Point xhat, double* vx, double* vy,
                                         double* div) const
{
  const int q = degree_;
  const int np = poly_dim(q);
  std::vector<double> pv(np), px(np), py(np);
  orthonormal_basis(q, xhat.x, xhat.y, pv.data(), px.data(), py.data());
  for (int k = 0; k < np; ++k)
  {
    vx[2 * k] = pv[k];
    vy[2 * k] = 0.0;
    vx[2 * k + 1] = 0.0;
    vy[2 * k + 1] = pv[k];
    if (div)
    {
      div[2 * k] = px[k];
      div[2 * k + 1] = py[k];
    }
  }
  std::vector<double> mv(q + 1), mx(q + 1), my(q + 1);
  shifted_monomials(q, xhat.x, xhat.y, span_center, span_center, mv.data(),
                    mx.data(), my.data());
  for (int i = 0; i <= q; ++i)
  {
    vx[2 * np + i] = (xhat.x - span_center) * mv[i];
    vy[2 * np + i] = (xhat.y - span_center) * mv[i];
    if (div)
      div[2 * np + i] = (q + 2) * mv[i];
  }
}

void RaviartThomasElement::evaluate(Point xhat, double* vx, double* vy,
                                    double* div) const
{
  const int n = num_dofs();
  std::vector<double> sx(n), sy(n), sd(n);
  evaluate_span(xhat, sx.data(), sy.data(), div ? sd.data() : nullptr);
  for (int l = 0; l < n; ++l)
  {
    double ax = 0.0, ay = 0.0, ad = 0.0;
    for (int j = 0; j < n; ++j)
    {
      const double c = coefficients_(j, l);
      ax += c * sx[j];
      ay += c * sy[j];
      if (div)
        ad += c * sd[j];
    }
    vx[l] = ax;
    vy[l] = ay;
    if (div)
      div[l] = ad;
  }
}

const VectorTabulation& RaviartThomasElement::tabulate(
    const QuadratureRule& rule) const
{
  std::lock_guard lock(cache_mutex_);
  auto& slot = cache_[&rule];
  if (!slot)
  {
    const int n = num_dofs();
    const Index nq = static_cast<Index>(rule.size());
    auto t = std::make_unique<VectorTabulation>();
    t->x.resize(nq, n);
    t->y.resize(nq, n);
    t->div.resize(nq, n);
    std::vector<double> vx(n), vy(n), vd(n);
    for (Index g = 0; g < nq; ++g)
    {
      evaluate(rule.points[g], vx.data(), vy.data(), vd.data());
      for (int l = 0; l < n; ++l)
      {
        t->x(g, l) = vx[l];
        t->y(g, l) = vy[l];
        t->div(g, l) = vd[l];
      }
    }
    slot = std::move(t);
  }
  return *slot;
}

const RaviartThomasElement& raviart_thomas_element(int degree)
{
  static std::mutex guard;
  static std::map<int, std::unique_ptr<RaviartThomasElement>> cache;
  std::lock_guard lock(guard);
  auto& slot = cache[degree];
  if (!slot)
    slot = std::make_unique<RaviartThomasElement>(degree);
  return *slot;
}

}  // namespace frontier
