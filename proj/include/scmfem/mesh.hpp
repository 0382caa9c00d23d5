#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "scmfem/geometry.hpp"

namespace scmfem {

using Index = std::uint32_t;
using Element = std::array<Index, 3>;
using Triangle = std::array<Point, 3>;

/// Conforming triangulation refined by newest vertex bisection.
///
/// Elements are counterclockwise and carry their refinement state in the
/// vertex order: the refinement edge joins local vertices 0 and 1, and
/// local vertex 2 is the newest vertex. The boundary is kept as a closed
/// counterclockwise polyline that starts at the corner node.
class TriMesh {
 public:
  TriMesh(std::vector<Point> nodes, std::vector<Element> elements, int level = 0);

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  /// Boundary nodes in counterclockwise order, beginning at the corner.
  const std::vector<Index>& boundary() const { return boundary_; }
  Index corner_node() const { return corner_; }
  bool is_boundary_node(Index n) const { return boundary_pos_[n] >= 0; }
  /// Position of a node on the boundary polyline, or -1 for interior nodes.
  std::int64_t boundary_position(Index n) const { return boundary_pos_[n]; }

  /// Largest element diameter.
  double h() const { return h_; }
  int level() const { return level_; }

  Triangle triangle(std::size_t e) const;
  double area(std::size_t e) const;
  bool touches_corner(std::size_t e) const;
  std::pair<Index, Index> refinement_edge(std::size_t e) const {
    return {elements_[e][0], elements_[e][1]};
  }

 private:
  std::vector<Point> nodes_;
  std::vector<Element> elements_;
  std::vector<Index> boundary_;
  std::vector<std::int64_t> boundary_pos_;
  Index corner_ = 0;
  std::size_t num_edges_ = 0;
  double h_ = 0.0;
  int level_ = 0;
};

struct BoundaryEdge {
  Index a;
  Index b;
  double length;
  /// Distance of the nearer endpoint to the corner.
  double r_min;
};

/// Fan from the origin through every polygon vertex and every point where
/// the square boundary crosses a coordinate axis, followed by uniform
/// refinement until h <= h0. Throws std::invalid_argument for h0 <= 0.
TriMesh initial_triangulation(const PolygonalDomain& domain, double h0);

/// One uniform newest-vertex-bisection sweep: every edge is bisected, each
/// element is split into four, h halves.
TriMesh refine_uniform(const TriMesh& mesh);

double mesh_size(const TriMesh& mesh);

/// Closed counterclockwise traversal starting at the corner node.
std::vector<BoundaryEdge> boundary_edges(const TriMesh& mesh);

double diameter(const Triangle& t);
double signed_area(const Triangle& t);
/// Diameter over inradius.
double shape_ratio(const Triangle& t);
double min_angle(const Triangle& t);

/// Plain-text mesh format:
///   nodes N elements M boundary B
///   N lines "x y", M lines "i j k", B lines with one boundary node index.
void write_mesh(std::ostream& os, const TriMesh& mesh);
TriMesh read_mesh(std::istream& is);

}  // namespace scmfem
