#pragma once

#include <array>
#include <span>
#include <map>
#include <vector>

#include "frontier/domain.hpp"
#include "frontier/types.hpp"

namespace frontier
{

enum class FaceTag
{
  Interior,
  PhysicalGamma,
  ArtificialGammaH
};

// Triangle with vertices ordered counter-clockwise; the refinement edge is
// always v[0]-v[1]. Local edge e joins v[e] and v[(e+1)%3].
struct Element
{
  std::array<Index, 3> v{};
  int generation = 0;
  Index uid = 0;
  Index parent_uid = -1;
};

struct Face
{
  std::array<Index, 2> v{};  // ascending vertex ids
  std::array<Index, 2> elements{-1, -1};
  std::array<int, 2> local_edge{-1, -1};
  FaceTag tag = FaceTag::Interior;
  bool boundary() const { return elements[1] < 0; }
};

struct ElementGeometry
{
  double h = 0.0;     // longest edge
  double rho = 0.0;   // inradius
  double beta = 0.0;  // h / rho
  double area = 0.0;
  double perimeter = 0.0;
};

struct Patch
{
  Index center = -1;
  std::vector<Index> elements;
  std::vector<Index> gamma;    // patch-boundary faces away from the center
  std::vector<Index> gamma_c;  // patch-boundary faces through the center
};

struct RefinementStats
{
  Index bisections = 0;
  Index closure_bisections = 0;
  // refine_nvb only: input-mesh indices of elements bisected without being
  // marked.
  std::vector<Index> closure_elements;
};

class Mesh
{
public:
  Mesh() = default;
  Mesh(DomainSpec domain, int truncation, std::vector<Point> vertices,
       std::vector<Element> elements, Index next_uid);

  const DomainSpec& domain() const { return domain_; }
  int truncation() const { return truncation_; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }

  Point vertex(Index a) const { return vertices_[a]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Element& element(Index K) const { return elements_[K]; }
  const std::vector<Element>& elements() const { return elements_; }
  const Face& face(Index F) const { return faces_[F]; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::array<Index, 3>& element_faces(Index K) const
  {
    return element_faces_[K];
  }
  std::span<const Index> vertex_elements(Index a) const
  {
    return {vertex_elements_.data() + vertex_offsets_[a],
            vertex_elements_.data() + vertex_offsets_[a + 1]};
  }
  // Neighbour across local edge e, or -1.
  Index neighbor(Index K, int e) const;

  bool vertex_on_boundary(Index a) const { return on_boundary_[a] != 0; }
  bool vertex_on_artificial(Index a) const { return on_artificial_[a] != 0; }
  // Shares at least one vertex with the artificial boundary.
  bool touches_artificial(Index K) const;

  Point corner(Index K, int i) const { return vertices_[elements_[K].v[i]]; }
  Point centroid(Index K) const;
  double signed_area(Index K) const;
  // Affine map x = x0 + J xhat from the reference triangle.
  Mat2 jacobian(Index K) const;

  // Vertex at exactly this position, or -1.
  Index find_vertex(Point x) const;
  Index next_uid() const { return next_uid_; }

private:
  void build_topology();
  void tag_boundary();

  DomainSpec domain_;
  int truncation_ = 0;
  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  Index next_uid_ = 0;

  std::vector<Face> faces_;
  std::vector<std::array<Index, 3>> element_faces_;
  std::vector<Index> vertex_offsets_;
  std::vector<Index> vertex_elements_;
  std::vector<char> on_boundary_;
  std::vector<char> on_artificial_;
  std::map<std::pair<double, double>, Index> position_index_;
};

Mesh build_initial_mesh(const DomainSpec& domain, int L);
Mesh refine_nvb(const Mesh& mesh, const std::vector<Index>& marked,
                RefinementStats* stats = nullptr);
// Adds the frontier ring of unit squares (repeated `levels` times) and
// restores conformity.
Mesh extend_truncation(const Mesh& mesh, const DomainSpec& domain,
                       int levels = 1, RefinementStats* stats = nullptr);
ElementGeometry element_geometry(const Mesh& mesh, Index K);
ElementGeometry triangle_geometry(Point a, Point b, Point c);
Patch patch_of(const Mesh& mesh, Index a);

// Throws on any violated mesh invariant.
void check_mesh(const Mesh& mesh);

}  // namespace frontier
