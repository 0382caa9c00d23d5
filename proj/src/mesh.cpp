#include "scmfem/mesh.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace scmfem {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

double signed_area(const Triangle& t) { return 0.5 * cross(t[1] - t[0], t[2] - t[0]); }

double diameter(const Triangle& t) {
  return std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
}

double shape_ratio(const Triangle& t) {
  const double a = norm(t[1] - t[0]);
  const double b = norm(t[2] - t[1]);
  const double c = norm(t[0] - t[2]);
  const double inradius = 2.0 * std::abs(signed_area(t)) / (a + b + c);
  return std::max({a, b, c}) / inradius;
}

double min_angle(const Triangle& t) {
  double best = pi;
  for (int i = 0; i < 3; ++i) {
    const Point u = t[(i + 1) % 3] - t[i];
    const Point v = t[(i + 2) % 3] - t[i];
    best = std::min(best, std::acos(std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0)));
  }
  return best;
}

TriMesh::TriMesh(std::vector<Point> nodes, std::vector<Element> elements, int level)
    : nodes_(std::move(nodes)), elements_(std::move(elements)), level_(level) {
  const auto corner = std::find(nodes_.begin(), nodes_.end(), Point{0.0, 0.0});
  if (corner == nodes_.end()) throw std::invalid_argument("mesh has no node at the origin");
  corner_ = static_cast<Index>(corner - nodes_.begin());

  struct DirectedEdge {
    std::uint64_t key;
    Index a;
    Index b;
  };
  std::vector<DirectedEdge> edges;
  edges.reserve(3 * elements_.size());
  for (const Element& el : elements_) {
    for (int i = 0; i < 3; ++i) {
      const Index a = el[i];
      const Index b = el[(i + 1) % 3];
      if (a >= nodes_.size() || b >= nodes_.size()) {
        throw std::invalid_argument("element references a missing node");
      }
      edges.push_back({edge_key(a, b), a, b});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const DirectedEdge& x, const DirectedEdge& y) { return x.key < y.key; });

  std::vector<std::int64_t> next(nodes_.size(), -1);
  std::size_t i = 0;
  while (i < edges.size()) {
    std::size_t j = i;
    while (j < edges.size() && edges[j].key == edges[i].key) ++j;
    ++num_edges_;
    if (j - i == 1) {
      if (next[edges[i].a] != -1) throw std::invalid_argument("boundary is not a simple polyline");
      next[edges[i].a] = edges[i].b;
    } else if (j - i > 2) {
      throw std::invalid_argument("edge shared by more than two elements");
    }
    i = j;
  }

  boundary_pos_.assign(nodes_.size(), -1);
  Index cur = corner_;
  do {
    if (next[cur] < 0) throw std::invalid_argument("corner node is not on a closed boundary");
    boundary_pos_[cur] = static_cast<std::int64_t>(boundary_.size());
    boundary_.push_back(cur);
    cur = static_cast<Index>(next[cur]);
    if (boundary_.size() > nodes_.size()) throw std::invalid_argument("boundary traversal loops");
  } while (cur != corner_);

  for (std::size_t e = 0; e < elements_.size(); ++e) {
    h_ = std::max(h_, diameter(triangle(e)));
  }
}

Triangle TriMesh::triangle(std::size_t e) const {
  const Element& el = elements_[e];
  return {nodes_[el[0]], nodes_[el[1]], nodes_[el[2]]};
}

double TriMesh::area(std::size_t e) const { return signed_area(triangle(e)); }

bool TriMesh::touches_corner(std::size_t e) const {
  const Element& el = elements_[e];
  return el[0] == corner_ || el[1] == corner_ || el[2] == corner_;
}

TriMesh initial_triangulation(const PolygonalDomain& domain, double h0) {
  if (!(h0 > 0.0)) throw std::invalid_argument(fmt::format("target mesh size {} must be positive", h0));

  // Fan points: polygon vertices plus axis crossings of the square boundary,
  // sorted by angle. The polygon is star-shaped w.r.t. the origin.
  struct FanPoint {
    double theta;
    Point p;
  };
  std::vector<FanPoint> fan;
  for (std::size_t k = 1; k < domain.vertices().size(); ++k) {
    const Point p = domain.vertices()[k];
    fan.push_back({polar_of(domain, p).theta, p});
  }
  constexpr std::array<Point, 3> axis{{{0, 1}, {-1, 0}, {0, -1}}};
  for (int k = 0; k < 3; ++k) {
    const double phi = (k + 1) * pi / 2;
    if (phi < domain.omega() - 1e-12) fan.push_back({phi, axis[k]});
  }
  std::sort(fan.begin(), fan.end(), [](const FanPoint& a, const FanPoint& b) { return a.theta < b.theta; });
  fan.erase(std::unique(fan.begin(), fan.end(),
                        [](const FanPoint& a, const FanPoint& b) { return norm(a.p - b.p) < 1e-12; }),
            fan.end());

  std::vector<Point> nodes{{0.0, 0.0}};
  for (const FanPoint& f : fan) nodes.push_back(f.p);

  std::vector<Element> elements;
  for (Index k = 1; k + 1 < nodes.size(); ++k) {
    Element el{0, k, k + 1};
    // Seed the refinement edge as the longest edge; ties go to the edge with
    // the lowest node indices.
    int best = 0;
    double best_len = -1.0;
    std::pair<Index, Index> best_ids{0, 0};
    for (int i = 0; i < 3; ++i) {
      const Index a = el[i];
      const Index b = el[(i + 1) % 3];
      const double len = norm(nodes[b] - nodes[a]);
      const std::pair<Index, Index> ids{std::min(a, b), std::max(a, b)};
      if (len > best_len + 1e-14 || (std::abs(len - best_len) <= 1e-14 && ids < best_ids)) {
        best = i;
        best_len = len;
        best_ids = ids;
      }
    }
    std::rotate(el.begin(), el.begin() + best, el.end());
    elements.push_back(el);
  }

  TriMesh mesh(std::move(nodes), std::move(elements), 0);
  while (mesh.h() > h0 * (1.0 + 1e-12)) mesh = refine_uniform(mesh);
  return TriMesh(mesh.nodes(), mesh.elements(), 0);
}

TriMesh refine_uniform(const TriMesh& mesh) {
  std::vector<Point> nodes = mesh.nodes();
  std::unordered_map<std::uint64_t, Index> midpoints;
  midpoints.reserve(mesh.num_edges());
  auto mid = [&](Index a, Index b) {
    const auto [it, inserted] = midpoints.try_emplace(edge_key(a, b), static_cast<Index>(nodes.size()));
    if (inserted) nodes.push_back(midpoint(nodes[a], nodes[b]));
    return it->second;
  };

  std::vector<Element> elements;
  elements.reserve(4 * mesh.num_elements());
  for (const Element& el : mesh.elements()) {
    const auto [a, b, c] = el;
    // Bisect the refinement edge (a,b), then both children at theirs.
    const Index m = mid(a, b);
    const Index m1 = mid(c, a);
    const Index m2 = mid(b, c);
    elements.push_back({m, c, m1});
    elements.push_back({a, m, m1});
    elements.push_back({m, b, m2});
    elements.push_back({c, m, m2});
  }
  return TriMesh(std::move(nodes), std::move(elements), mesh.level() + 1);
}

double mesh_size(const TriMesh& mesh) { return mesh.h(); }

std::vector<BoundaryEdge> boundary_edges(const TriMesh& mesh) {
  const auto& bnd = mesh.boundary();
  const auto& x = mesh.nodes();
  std::vector<BoundaryEdge> out;
  out.reserve(bnd.size());
  for (std::size_t k = 0; k < bnd.size(); ++k) {
    const Index a = bnd[k];
    const Index b = bnd[(k + 1) % bnd.size()];
    out.push_back({a, b, norm(x[b] - x[a]), std::min(norm(x[a]), norm(x[b]))});
  }
  return out;
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  fmt::print(os, "nodes {} elements {} boundary {}\n", mesh.num_nodes(), mesh.num_elements(),
             mesh.boundary().size());
  for (const Point& p : mesh.nodes()) fmt::print(os, "{} {}\n", p.x, p.y);
  for (const Element& el : mesh.elements()) fmt::print(os, "{} {} {}\n", el[0], el[1], el[2]);
  for (Index n : mesh.boundary()) fmt::print(os, "{}\n", n);
}

TriMesh read_mesh(std::istream& is) {
  std::string w1, w2, w3;
  std::size_t n = 0, m = 0, b = 0;
  if (!(is >> w1 >> n >> w2 >> m >> w3 >> b) || w1 != "nodes" || w2 != "elements" || w3 != "boundary") {
    throw std::runtime_error("malformed mesh header");
  }
  std::vector<Point> nodes(n);
  for (Point& p : nodes) {
    if (!(is >> p.x >> p.y)) throw std::runtime_error("truncated node list");
  }
  std::vector<Element> elements(m);
  for (Element& el : elements) {
    if (!(is >> el[0] >> el[1] >> el[2])) throw std::runtime_error("truncated element list");
  }
  std::vector<Index> boundary(b);
  for (Index& i : boundary) {
    if (!(is >> i)) throw std::runtime_error("truncated boundary list");
  }
  TriMesh mesh(std::move(nodes), std::move(elements));
  if (mesh.boundary() != boundary) throw std::runtime_error("stored boundary disagrees with connectivity");
  return mesh;
}

}  // namespace scmfem
