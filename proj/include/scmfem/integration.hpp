#pragma once

#include <vector>

#include "scmfem/mesh.hpp"
#include "scmfem/quadrature.hpp"

namespace scmfem {

enum class ElementFilter { all, corner, regular };

/// Element-wise volume quadrature over a mesh that knows about the corner.
///
/// Elements touching the corner use the dyadic corner rule for an integrand
/// of leading order r^corner_alpha; elements within two diameters of the
/// corner use a composite rule; all others a single Gauss rule.
struct MeshQuadrature {
  double corner_alpha = 0.0;
  CornerRuleOptions corner;
  int order = 7;
  int near_corner_levels = 2;
  ElementFilter filter = ElementFilter::all;
};

namespace detail {
const TriRule& near_corner_rule(int order, int levels);
}

/// Calls visit(element, QuadPoint) for every quadrature point; QuadPoint::bary
/// refers to the element's own vertex order.
template <class Visit>
void for_each_quad_point(const TriMesh& mesh, const MeshQuadrature& mq, Visit&& visit) {
  const TriRule& base = tri_rule(mq.order);
  const TriRule& fine = detail::near_corner_rule(mq.order, mq.near_corner_levels);
  const Index corner = mesh.corner_node();
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements()[e];
    const bool at_corner = el[0] == corner || el[1] == corner || el[2] == corner;
    if ((mq.filter == ElementFilter::corner && !at_corner) || (mq.filter == ElementFilter::regular && at_corner)) {
      continue;
    }
    const Triangle tri = mesh.triangle(e);
    if (at_corner) {
      const int c = el[0] == corner ? 0 : (el[1] == corner ? 1 : 2);
      const Triangle rot{tri[c], tri[(c + 1) % 3], tri[(c + 2) % 3]};
      for (const QuadPoint& q : corner_triangle_points(rot, mq.corner_alpha, mq.corner)) {
        QuadPoint local = q;
        local.bary[c] = q.bary[0];
        local.bary[(c + 1) % 3] = q.bary[1];
        local.bary[(c + 2) % 3] = q.bary[2];
        visit(e, local);
      }
      continue;
    }
    const double diam = diameter(tri);
    const double dist = std::min({norm(tri[0]), norm(tri[1]), norm(tri[2])});
    const TriRule& rule = (dist < 2.0 * diam) ? fine : base;
    const double area = std::abs(signed_area(tri));
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
      visit(e, QuadPoint{map_barycentric(tri, rule.points[k]), rule.points[k], rule.weights[k] * area});
    }
  }
}

/// Σ_T ∫_T f, with f(element, QuadPoint) -> double.
template <class F>
double integrate_mesh(const TriMesh& mesh, const MeshQuadrature& mq, F&& f) {
  double sum = 0.0;
  bool finite = true;
  for_each_quad_point(mesh, mq, [&](std::size_t e, const QuadPoint& q) {
    const double v = f(e, q);
    finite = finite && std::isfinite(v);
    sum += q.weight * v;
  });
  if (!finite) throw QuadratureError("non-finite integrand value in mesh quadrature");
  return sum;
}

/// (f, φ_i) for every node i, with f(element, QuadPoint) -> double.
template <class F>
std::vector<double> integrate_against_hats(const TriMesh& mesh, const MeshQuadrature& mq, F&& f) {
  std::vector<double> out(mesh.num_nodes(), 0.0);
  bool finite = true;
  for_each_quad_point(mesh, mq, [&](std::size_t e, const QuadPoint& q) {
    const double v = f(e, q);
    finite = finite && std::isfinite(v);
    const Element& el = mesh.elements()[e];
    for (int k = 0; k < 3; ++k) out[el[k]] += q.weight * v * q.bary[k];
  });
  if (!finite) throw QuadratureError("non-finite integrand value in load assembly");
  return out;
}

}  // namespace scmfem
