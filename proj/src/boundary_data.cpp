#include "scmfem/boundary_data.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace scmfem {

SparseMatrix boundary_mass(const TriMesh& mesh) {
  const std::vector<BoundaryEdge> edges = boundary_edges(mesh);
  const std::size_t n = edges.size();
  std::vector<Triplet> t;
  t.reserve(4 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k;
    const std::size_t j = (k + 1) % n;
    const double c = edges[k].length / 6.0;
    t.push_back({i, i, 2.0 * c});
    t.push_back({j, j, 2.0 * c});
    t.push_back({i, j, c});
    t.push_back({j, i, c});
  }
  return SparseMatrix::from_triplets(n, std::move(t), true);
}

std::vector<double> projection_rhs(const ScalarField& u, const TriMesh& mesh, const GradedBoundaryRule& graded) {
  const std::size_t n = mesh.boundary().size();
  std::vector<double> b(n, 0.0);
  if (!u) return b;
  for (const BoundaryQuadPoint& q : segment_points(mesh, graded, 2)) {
    const double v = u(q.x);
    if (!std::isfinite(v)) {
      throw QuadratureError(fmt::format("boundary datum is not finite at ({}, {})", q.x.x, q.x.y));
    }
    b[q.edge] += q.weight * v * q.hat_a;
    b[(q.edge + 1) % n] += q.weight * v * q.hat_b;
  }
  return b;
}

BoundaryDatum l2_project_boundary(const ScalarField& u, const TriMesh& mesh, const GradedBoundaryRule& graded,
                                  const ProjectionOptions& opts) {
  BoundaryDatum d;
  d.source = u;
  d.rhs = projection_rhs(u, mesh, graded);
  CgOptions cg;
  cg.tol = opts.tol;
  d.projected = cg_solve(boundary_mass(mesh), d.rhs, cg).x;
  d.l2_norm_estimate = opts.estimate_norm ? boundary_l2_norm(u, mesh, opts.source_exponent, opts.corner)
                                          : std::numeric_limits<double>::quiet_NaN();
  return d;
}

double boundary_l2_norm(const ScalarField& u, const TriMesh& mesh, double source_exponent,
                        const CornerRuleOptions& opts) {
  if (!u) return 0.0;
  const auto& x = mesh.nodes();
  const Point corner = x[mesh.corner_node()];
  const LineRule& g = gauss_legendre(10);
  double sum = 0.0;
  auto add = [&](Point p, double w) {
    const double v = u(p);
    if (!std::isfinite(v)) throw QuadratureError("boundary datum is not finite");
    sum += w * v * v;
  };
  for (const BoundaryEdge& e : boundary_edges(mesh)) {
    if (e.r_min == 0.0) {
      const Point far = (x[e.a] == corner) ? x[e.b] : x[e.a];
      for (const QuadPoint& q : corner_segment_points(corner, far, 2.0 * source_exponent, opts)) add(q.x, q.weight);
      continue;
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double t = g.nodes[i];
      add((1.0 - t) * x[e.a] + t * x[e.b], g.weights[i] * e.length);
    }
  }
  return std::sqrt(sum);
}

double boundary_l2_norm(const TriMesh& mesh, std::span<const double> g) {
  if (g.size() != mesh.boundary().size()) throw std::invalid_argument("boundary vector size mismatch");
  return std::sqrt(std::max(0.0, boundary_mass(mesh).bilinear(g, g)));
}

ScalarField boundary_function(const TriMesh& mesh, std::vector<double> g) {
  if (g.size() != mesh.boundary().size()) throw std::invalid_argument("boundary vector size mismatch");
  std::vector<std::pair<Point, Point>> segs;
  for (const BoundaryEdge& e : boundary_edges(mesh)) segs.emplace_back(mesh.nodes()[e.a], mesh.nodes()[e.b]);
  return [segs = std::move(segs), g = std::move(g)](Point p) {
    const std::size_t n = segs.size();
    for (std::size_t k = 0; k < n; ++k) {
      const auto& [a, b] = segs[k];
      const Point d = b - a;
      const double len2 = dot(d, d);
      const double t = dot(p - a, d) / len2;
      if (t < -1e-12 || t > 1.0 + 1e-12) continue;
      if (std::abs(cross(d, p - a)) > 1e-12 * len2) continue;
      return (1.0 - t) * g[k] + t * g[(k + 1) % n];
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
}

double boundary_l2_error(const ScalarField& u, const TriMesh& mesh, std::span<const double> g,
                         const GradedBoundaryRule& graded) {
  const std::size_t n = mesh.boundary().size();
  if (g.size() != n) throw std::invalid_argument("boundary vector size mismatch");
  double sum = 0.0;
  for (const BoundaryQuadPoint& q : segment_points(mesh, graded, 2)) {
    const double uv = u ? u(q.x) : 0.0;
    const double d = uv - (q.hat_a * g[q.edge] + q.hat_b * g[(q.edge + 1) % n]);
    if (!std::isfinite(d)) throw QuadratureError("non-finite boundary error integrand");
    sum += q.weight * d * d;
  }
  return std::sqrt(sum);
}

}  // namespace scmfem
