#include "frontier/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace frontier
{
namespace
{

std::uint64_t edge_key(Index a, Index b)
{
  if (a > b)
    std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

void add_macro_cell(int i, int j, std::vector<Point>& vertices,
                    std::map<std::pair<double, double>, Index>& index,
                    std::vector<Element>& elements, Index& next_uid)
{
  auto vid = [&](Point p)
  {
    auto [it, inserted] = index.try_emplace({p.x, p.y}, 0);
    if (inserted)
    {
      it->second = static_cast<Index>(vertices.size());
      vertices.push_back(p);
    }
    return it->second;
  };
  const Index c0 = vid({double(i), double(j)});
  const Index c1 = vid({double(i + 1), double(j)});
  const Index c2 = vid({double(i + 1), double(j + 1)});
  const Index c3 = vid({double(i), double(j + 1)});
  const Index b = vid({i + 0.5, j + 0.5});
  for (auto [p, q] : {std::pair{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}})
  {
    Element e;
    e.v = {p, q, b};
    e.uid = next_uid++;
    elements.push_back(e);
  }
}

// Bisects every element whose refinement edge lies in the closure of the
// marked faces. Kept elements retain their order; children are appended.
Mesh bisect(const Mesh& mesh, std::vector<char> face_marked,
            const std::vector<char>& element_marked, RefinementStats* stats)
{
  std::vector<Index> work;
  for (Index F = 0; F < mesh.num_faces(); ++F)
    if (face_marked[F])
      work.push_back(F);
  while (!work.empty())
  {
    const Index F = work.back();
    work.pop_back();
    for (Index K : mesh.face(F).elements)
    {
      if (K < 0)
        continue;
      const Index R = mesh.element_faces(K)[0];
      if (!face_marked[R])
      {
        face_marked[R] = 1;
        work.push_back(R);
      }
    }
  }

  std::unordered_set<std::uint64_t> marked_edges;
  for (Index F = 0; F < mesh.num_faces(); ++F)
    if (face_marked[F])
      marked_edges.insert(edge_key(mesh.face(F).v[0], mesh.face(F).v[1]));

  std::vector<Point> vertices = mesh.vertices();
  std::unordered_map<std::uint64_t, Index> midpoints;
  Index next_uid = mesh.next_uid();
  std::vector<Element> kept, children;
  Index bisections = 0;

  std::function<void(const Element&)> split = [&](const Element& el)
  {
    const Index a = el.v[0], b = el.v[1], c = el.v[2];
    if (!marked_edges.count(edge_key(a, b)))
    {
      children.push_back(el);
      return;
    }
    ++bisections;
    auto [it, inserted] = midpoints.try_emplace(edge_key(a, b), -1);
    if (inserted)
    {
      const Point m = 0.5 * (vertices[a] + vertices[b]);
      Index existing = mesh.find_vertex(m);
      if (existing < 0)
      {
        existing = static_cast<Index>(vertices.size());
        vertices.push_back(m);
      }
      it->second = existing;
    }
    const Index m = it->second;
    Element left, right;
    left.v = {c, a, m};
    right.v = {b, c, m};
    for (Element* ch : {&left, &right})
    {
      ch->generation = el.generation + 1;
      ch->parent_uid = el.uid;
      ch->uid = next_uid++;
      split(*ch);
    }
  };

  for (Index K = 0; K < mesh.num_elements(); ++K)
  {
    const Element& el = mesh.element(K);
    if (!marked_edges.count(edge_key(el.v[0], el.v[1])))
    {
      kept.push_back(el);
      continue;
    }
    if (stats && !element_marked[K])
    {
      stats->closure_bisections += 1;
      stats->closure_elements.push_back(K);
    }
    split(el);
  }
  if (stats)
    stats->bisections += bisections;
  kept.insert(kept.end(), children.begin(), children.end());
  return Mesh(mesh.domain(), mesh.truncation(), std::move(vertices),
              std::move(kept), next_uid);
}

}  // namespace

Mesh::Mesh(DomainSpec domain, int truncation, std::vector<Point> vertices,
           std::vector<Element> elements, Index next_uid)
    : domain_(std::move(domain)), truncation_(truncation),
      vertices_(std::move(vertices)), elements_(std::move(elements)),
      next_uid_(next_uid)
{
  for (Index a = 0; a < num_vertices(); ++a)
    position_index_.emplace(std::pair{vertices_[a].x, vertices_[a].y}, a);
  build_topology();
  tag_boundary();
}

void Mesh::build_topology()
{
  std::unordered_map<std::uint64_t, Index> lookup;
  lookup.reserve(3 * elements_.size());
  element_faces_.assign(elements_.size(), {-1, -1, -1});
  faces_.clear();
  for (Index K = 0; K < num_elements(); ++K)
  {
    for (int e = 0; e < 3; ++e)
    {
      const Index a = elements_[K].v[e], b = elements_[K].v[(e + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), num_faces());
      if (inserted)
      {
        Face f;
        f.v = {std::min(a, b), std::max(a, b)};
        f.elements[0] = K;
        f.local_edge[0] = e;
        faces_.push_back(f);
      }
      else
      {
        Face& f = faces_[it->second];
        if (f.elements[1] >= 0)
          throw Error("mesh: edge shared by more than two elements");
        f.elements[1] = K;
        f.local_edge[1] = e;
      }
      element_faces_[K][e] = it->second;
    }
  }

  vertex_offsets_.assign(vertices_.size() + 1, 0);
  for (const Element& el : elements_)
    for (Index a : el.v)
      ++vertex_offsets_[a + 1];
  std::partial_sum(vertex_offsets_.begin(), vertex_offsets_.end(),
                   vertex_offsets_.begin());
  vertex_elements_.assign(vertex_offsets_.back(), 0);
  std::vector<Index> fill(vertex_offsets_.begin(), vertex_offsets_.end() - 1);
  for (Index K = 0; K < num_elements(); ++K)
    for (Index a : elements_[K].v)
      vertex_elements_[fill[a]++] = K;
}

void Mesh::tag_boundary()
{
  on_boundary_.assign(vertices_.size(), 0);
  on_artificial_.assign(vertices_.size(), 0);
  for (Face& f : faces_)
  {
    if (!f.boundary())
    {
      f.tag = FaceTag::Interior;
      continue;
    }
    // Probe the unit square on the far side of the face.
    const Point a = vertices_[f.v[0]], b = vertices_[f.v[1]];
    const Point m = 0.5 * (a + b);
    const Point c = centroid(f.elements[0]);
    Point n{b.y - a.y, a.x - b.x};
    if (n.x * (m.x - c.x) + n.y * (m.y - c.y) < 0.0)
      n = -1.0 * n;
    const double len = std::hypot(n.x, n.y);
    const Point probe = m + (0.25 / len) * n;
    const int i = static_cast<int>(std::floor(probe.x));
    const int j = static_cast<int>(std::floor(probe.y));
    f.tag = domain_.contains_square(i, j) ? FaceTag::ArtificialGammaH
                                          : FaceTag::PhysicalGamma;
    for (Index v : f.v)
    {
      on_boundary_[v] = 1;
      if (f.tag == FaceTag::ArtificialGammaH)
        on_artificial_[v] = 1;
    }
  }
}

Index Mesh::neighbor(Index K, int e) const
{
  const Face& f = faces_[element_faces_[K][e]];
  return f.elements[0] == K ? f.elements[1] : f.elements[0];
}

bool Mesh::touches_artificial(Index K) const
{
  for (Index a : elements_[K].v)
    if (on_artificial_[a])
      return true;
  return false;
}

Point Mesh::centroid(Index K) const
{
  const auto& v = elements_[K].v;
  return (1.0 / 3.0) * (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]);
}

double Mesh::signed_area(Index K) const
{
  const Point a = corner(K, 0), b = corner(K, 1), c = corner(K, 2);
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Mat2 Mesh::jacobian(Index K) const
{
  const Point a = corner(K, 0), b = corner(K, 1), c = corner(K, 2);
  Mat2 J;
  J << b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y;
  return J;
}

Index Mesh::find_vertex(Point x) const
{
  auto it = position_index_.find({x.x, x.y});
  return it == position_index_.end() ? -1 : it->second;
}

Mesh build_initial_mesh(const DomainSpec& domain, int L)
{
  if (L < 1)
    throw Error("build_initial_mesh: truncation must be at least 1");
  std::vector<Point> vertices;
  std::vector<Element> elements;
  std::map<std::pair<double, double>, Index> index;
  Index uid = 0;
  for (int j = -L; j < L; ++j)
    for (int i = -L; i < L; ++i)
      if (domain.admissible_square(i, j, L))
        add_macro_cell(i, j, vertices, index, elements, uid);
  if (elements.empty())
    throw Error("build_initial_mesh: no admissible squares");
  return Mesh(domain, L, std::move(vertices), std::move(elements), uid);
}

Mesh refine_nvb(const Mesh& mesh, const std::vector<Index>& marked,
                RefinementStats* stats)
{
  std::vector<char> face_marked(mesh.num_faces(), 0);
  std::vector<char> element_marked(mesh.num_elements(), 0);
  for (Index K : marked)
  {
    if (K < 0 || K >= mesh.num_elements())
      throw Error("refine_nvb: marked element out of range");
    element_marked[K] = 1;
    face_marked[mesh.element_faces(K)[0]] = 1;
  }
  if (marked.empty())
    return mesh;
  return bisect(mesh, std::move(face_marked), element_marked, stats);
}

Mesh extend_truncation(const Mesh& mesh, const DomainSpec& domain, int levels,
                       RefinementStats* stats)
{
  if (domain.kind() != mesh.domain().kind())
    throw Error("extend_truncation: domain mismatch");
  std::vector<Point> vertices = mesh.vertices();
  std::vector<Element> elements = mesh.elements();
  std::map<std::pair<double, double>, Index> index;
  for (Index a = 0; a < mesh.num_vertices(); ++a)
    index.emplace(std::pair{vertices[a].x, vertices[a].y}, a);
  Index uid = mesh.next_uid();
  const int L0 = mesh.truncation();
  for (int L = L0 + 1; L <= L0 + levels; ++L)
    for (int j = -L; j < L; ++j)
      for (int i = -L; i < L; ++i)
        if (domain.admissible_square(i, j, L)
            && !domain.admissible_square(i, j, L - 1))
          add_macro_cell(i, j, vertices, index, elements, uid);

  Mesh out(domain, L0 + levels, std::move(vertices), std::move(elements), uid);
  for (;;)
  {
    std::vector<char> hanging(out.num_faces(), 0);
    bool any = false;
    for (Index F = 0; F < out.num_faces(); ++F)
    {
      const Face& f = out.face(F);
      if (!f.boundary())
        continue;
      if (out.find_vertex(0.5 * (out.vertex(f.v[0]) + out.vertex(f.v[1]))) >= 0)
        hanging[F] = any = true;
    }
    if (!any)
      break;
    RefinementStats local;
    out = bisect(out, std::move(hanging),
                 std::vector<char>(out.num_elements(), 0), &local);
    if (stats)
    {
      stats->bisections += local.bisections;
      stats->closure_bisections += local.closure_bisections;
    }
  }
  return out;
}

ElementGeometry triangle_geometry(Point a, Point b, Point c)
{
  ElementGeometry g;
  const double ab = std::hypot(b.x - a.x, b.y - a.y);
  const double bc = std::hypot(c.x - b.x, c.y - b.y);
  const double ca = std::hypot(a.x - c.x, a.y - c.y);
  g.area = 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  g.perimeter = ab + bc + ca;
  if (!(g.area > 1e-14 * g.perimeter * g.perimeter))
    throw Error("element_geometry: degenerate triangle");
  g.h = std::max({ab, bc, ca});
  g.rho = 2.0 * g.area / g.perimeter;
  g.beta = g.h / g.rho;
  return g;
}

ElementGeometry element_geometry(const Mesh& mesh, Index K)
{
  if (K < 0 || K >= mesh.num_elements())
    throw Error("element_geometry: element out of range");
  return triangle_geometry(mesh.corner(K, 0), mesh.corner(K, 1),
                           mesh.corner(K, 2));
}

Patch patch_of(const Mesh& mesh, Index a)
{
  Patch p;
  p.center = a;
  auto incident = mesh.vertex_elements(a);
  p.elements.assign(incident.begin(), incident.end());
  std::unordered_set<Index> inside(p.elements.begin(), p.elements.end());
  std::vector<Index> seen;
  for (Index K : p.elements)
    for (Index F : mesh.element_faces(K))
    {
      const Face& f = mesh.face(F);
      const Index other = f.elements[0] == K ? f.elements[1] : f.elements[0];
      if (other >= 0 && inside.count(other))
        continue;
      if (f.v[0] == a || f.v[1] == a)
        p.gamma_c.push_back(F);
      else
        p.gamma.push_back(F);
    }
  return p;
}

void check_mesh(const Mesh& mesh)
{
  const int L = mesh.truncation();
  for (Index K = 0; K < mesh.num_elements(); ++K)
  {
    if (!(mesh.signed_area(K) > 0.0))
      throw Error("check_mesh: element not positively oriented");
    for (int i = 0; i < 3; ++i)
    {
      const Point x = mesh.corner(K, i);
      if (std::max(std::abs(x.x), std::abs(x.y)) > L)
        throw Error("check_mesh: element outside the truncation box");
    }
    const Point c = mesh.centroid(K);
    if (!mesh.domain().contains_square(static_cast<int>(std::floor(c.x)),
                                       static_cast<int>(std::floor(c.y))))
      throw Error("check_mesh: element outside the domain");
  }

  // No vertex may sit inside a boundary face (hanging node).
  std::unordered_map<std::uint64_t, std::vector<Index>> buckets;
  auto cell_key = [](long i, long j)
  { return (static_cast<std::uint64_t>(i + (1 << 20)) << 32)
           | static_cast<std::uint64_t>(j + (1 << 20)); };
  for (Index a = 0; a < mesh.num_vertices(); ++a)
  {
    const Point x = mesh.vertex(a);
    buckets[cell_key(std::lround(std::floor(x.x)), std::lround(std::floor(x.y)))]
        .push_back(a);
  }
  for (const Face& f : mesh.faces())
  {
    if (!f.boundary())
      continue;
    const Point a = mesh.vertex(f.v[0]), b = mesh.vertex(f.v[1]);
    const Point m = 0.5 * (a + b);
    const long ci = std::lround(std::floor(m.x)), cj = std::lround(std::floor(m.y));
    for (long di = -1; di <= 1; ++di)
      for (long dj = -1; dj <= 1; ++dj)
      {
        auto it = buckets.find(cell_key(ci + di, cj + dj));
        if (it == buckets.end())
          continue;
        for (Index v : it->second)
        {
          if (v == f.v[0] || v == f.v[1])
            continue;
          const Point x = mesh.vertex(v);
          const double cross = (b.x - a.x) * (x.y - a.y) - (b.y - a.y) * (x.x - a.x);
          const double t = ((x.x - a.x) * (b.x - a.x) + (x.y - a.y) * (b.y - a.y))
                           / ((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y));
          if (cross == 0.0 && t > 0.0 && t < 1.0)
            throw Error("check_mesh: hanging vertex on a boundary face");
        }
      }
  }

  // Edge-connectedness of the covered set.
  std::vector<char> seen(mesh.num_elements(), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index count = 1;
  while (!stack.empty())
  {
    const Index K = stack.back();
    stack.pop_back();
    for (int e = 0; e < 3; ++e)
    {
      const Index N = mesh.neighbor(K, e);
      if (N >= 0 && !seen[N])
      {
        seen[N] = 1;
        ++count;
        stack.push_back(N);
      }
    }
  }
  if (count != mesh.num_elements())
    throw Error("check_mesh: covered set is not connected");

  for (const Face& f : mesh.faces())
  {
    if (f.tag == FaceTag::Interior)
      continue;
    const Point a = mesh.vertex(f.v[0]), b = mesh.vertex(f.v[1]);
    if (a.x != b.x && a.y != b.y)
      throw Error("check_mesh: boundary face off the unit grid");
    const bool on_grid = (a.x == b.x && a.x == std::floor(a.x))
                         || (a.y == b.y && a.y == std::floor(a.y));
    if (!on_grid)
      throw Error("check_mesh: boundary face off the unit grid");
  }
}

}  // namespace frontier
