#include "frontier/lagrange.hpp"

#include <Eigen/LU>

#include "frontier/polynomials.hpp"

namespace frontier
{

LagrangeElement::LagrangeElement(int degree) : degree_(degree)
{
  if (degree < 1 || degree > 9)
    throw Error("LagrangeElement: unsupported degree");
  const int p = degree;
  const double h = 1.0 / p;
  nodes_ = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int i = 1; i < p; ++i)
    nodes_.push_back({i * h, 0.0});
  for (int i = 1; i < p; ++i)
    nodes_.push_back({1.0 - i * h, i * h});
  for (int i = 1; i < p; ++i)
    nodes_.push_back({0.0, 1.0 - i * h});
  for (int j = 1; j < p; ++j)
    for (int i = 1; i + j < p; ++i)
      nodes_.push_back({i * h, j * h});

  const int n = num_dofs();
  Eigen::MatrixXd V(n, n);
  std::vector<double> row(n);
  for (int m = 0; m < n; ++m)
  {
    orthonormal_basis(p, nodes_[m].x, nodes_[m].y, row.data());
    for (int k = 0; k < n; ++k)
      V(m, k) = row[k];
  }
  coefficients_ = V.partialPivLu().inverse();

  mass_ = coefficients_.transpose() * coefficients_;
  const QuadratureRule& rule = triangle_rule(2 * p);
  const Tabulation& t = tabulate(rule);
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(),
                                                         rule.size());
  sxx_ = t.dx.transpose() * w.asDiagonal() * t.dx;
  syy_ = t.dy.transpose() * w.asDiagonal() * t.dy;
  const Eigen::MatrixXd sxy = t.dx.transpose() * w.asDiagonal() * t.dy;
  smix_ = sxy + sxy.transpose();
}

void LagrangeElement::evaluate(Point xhat, double* value, double* dx,
                               double* dy) const
{
  const int n = num_dofs();
  double pv[64], px[64], py[64];
  const bool derivs = dx != nullptr;
  orthonormal_basis(degree_, xhat.x, xhat.y, pv, derivs ? px : nullptr,
                    derivs ? py : nullptr);
  for (int l = 0; l < n; ++l)
  {
    double v = 0.0, gx = 0.0, gy = 0.0;
    for (int k = 0; k < n; ++k)
    {
      const double c = coefficients_(k, l);
      v += c * pv[k];
      if (derivs)
      {
        gx += c * px[k];
        gy += c * py[k];
      }
    }
    value[l] = v;
    if (derivs)
    {
      dx[l] = gx;
      dy[l] = gy;
    }
  }
}

const Tabulation& LagrangeElement::tabulate(const QuadratureRule& rule) const
{
  std::lock_guard lock(cache_mutex_);
  auto& slot = cache_[&rule];
  if (!slot)
  {
    const int n = num_dofs();
    const Index nq = static_cast<Index>(rule.size());
    auto t = std::make_unique<Tabulation>();
    t->value.resize(nq, n);
    t->dx.resize(nq, n);
    t->dy.resize(nq, n);
    std::vector<double> v(n), gx(n), gy(n);
    for (Index q = 0; q < nq; ++q)
    {
      evaluate(rule.points[q], v.data(), gx.data(), gy.data());
      for (int l = 0; l < n; ++l)
      {
        t->value(q, l) = v[l];
        t->dx(q, l) = gx[l];
        t->dy(q, l) = gy[l];
      }
    }
    slot = std::move(t);
  }
  return *slot;
}

const LagrangeElement& lagrange_element(int degree)
{
  static std::mutex guard;
  static std::map<int, std::unique_ptr<LagrangeElement>> cache;
  std::lock_guard lock(guard);
  auto& slot = cache[degree];
  if (!slot)
    slot = std::make_unique<LagrangeElement>(degree);
  return *slot;
}

LagrangeSpace::LagrangeSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree), element_(&lagrange_element(degree))
{
  const Mesh& m = *mesh_;
  const int p = degree;
  const int per_edge = p - 1;
  const int per_cell = (p - 1) * (p - 2) / 2;
  const int n = element_->num_dofs();
  const Index nv = m.num_vertices(), nf = m.num_faces(), ne = m.num_elements();
  num_dofs_ = nv + nf * per_edge + ne * per_cell;

  element_dofs_.resize(ne * n);
  for (Index K = 0; K < ne; ++K)
  {
    Index* d = element_dofs_.data() + K * n;
    const auto& v = m.element(K).v;
    for (int i = 0; i < 3; ++i)
      d[i] = v[i];
    for (int e = 0; e < 3; ++e)
    {
      const Index F = m.element_faces(K)[e];
      const bool forward = v[e] < v[(e + 1) % 3];
      for (int i = 0; i < per_edge; ++i)
        d[3 + e * per_edge + i]
            = nv + F * per_edge + (forward ? i : per_edge - 1 - i);
    }
    for (int j = 0; j < per_cell; ++j)
      d[3 + 3 * per_edge + j] = nv + nf * per_edge + K * per_cell + j;
  }

  std::vector<char> constrained(num_dofs_, 0);
  for (Index a = 0; a < nv; ++a)
    constrained[a] = m.vertex_on_boundary(a);
  for (Index F = 0; F < nf; ++F)
    if (m.face(F).boundary())
      for (int i = 0; i < per_edge; ++i)
        constrained[nv + F * per_edge + i] = 1;
  free_index_.assign(num_dofs_, -1);
  for (Index d = 0; d < num_dofs_; ++d)
    if (!constrained[d])
      free_index_[d] = num_free_++;

  dof_position_.resize(num_dofs_);
  for (Index K = 0; K < ne; ++K)
  {
    auto dofs = element_dofs(K);
    for (int l = 0; l < n; ++l)
      dof_position_[dofs[l]] = map_to_element(m, K, element_->nodes()[l]);
  }
}

int LagrangeSpace::patch_max_degree(Index a) const
{
  int q = 0;
  for (Index K : mesh_->vertex_elements(a))
    q = std::max(q, degree_of(K));
  return q;
}

}  // namespace frontier
