#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "scmfem/geometry.hpp"
#include "scmfem/mesh.hpp"

namespace scmfem {

/// Raised when an integrand produces a non-finite value.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric rule on a triangle in barycentric coordinates. Weights sum to 1;
/// the physical integral is Σ w_i f(x_i) · |T|.
struct TriRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int order = 0;
};

/// Supported exactness degrees: 1, 2, 3, 5, 7. All weights are positive.
const TriRule& tri_rule(int order);

/// A base rule applied on the 4^levels congruent subtriangles of a uniform
/// red refinement of the reference triangle.
TriRule composite_rule(const TriRule& base, int levels);

inline Point map_barycentric(const Triangle& t, const std::array<double, 3>& b) {
  return {b[0] * t[0].x + b[1] * t[1].x + b[2] * t[2].x, b[0] * t[0].y + b[1] * t[1].y + b[2] * t[2].y};
}

template <class F>
double integrate_triangle(F&& f, const Triangle& tri, const TriRule& rule) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double v = f(map_barycentric(tri, rule.points[q]));
    if (!std::isfinite(v)) throw QuadratureError("non-finite integrand value in triangle rule");
    sum += rule.weights[q] * v;
  }
  return sum * std::abs(signed_area(tri));
}

/// A physical quadrature point together with its barycentric coordinates
/// with respect to the triangle it was generated for.
struct QuadPoint {
  Point x;
  std::array<double, 3> bary;
  double weight;
};

struct CornerRuleOptions {
  /// Gauss-Legendre points per layer in each collapsed direction.
  int gauss_points = 10;
  /// Relative size of the dropped innermost remainder.
  double tail_tolerance = 1e-12;
  /// Multiplies the number of dyadic layers (2 = depth doubling).
  double depth_factor = 1.0;
  /// Sum the remainder below the innermost layer as a geometric series.
  bool extrapolate_tail = true;
};

/// Number of dyadic layers for an r^alpha integrand (2D: ratio 2^-(alpha+2)
/// per layer, 1D: ratio 2^-(alpha+1)), capped at 1000.
int corner_layers(double alpha, int dimension, const CornerRuleOptions& opts);

/// Points for a triangle whose vertex 0 is the origin and whose integrand
/// behaves like r^alpha there (alpha > -2).
///
/// The triangle is written in collapsed coordinates x = s (P + t (Q - P)),
/// s in (0,1], t in [0,1], and s is split into the dyadic layers
/// [2^-(k+1), 2^-k]. Each layer carries a tensor Gauss-Legendre rule, so
/// every layer is resolved to the same relative accuracy.
std::vector<QuadPoint> corner_triangle_points(const Triangle& tri, double alpha,
                                              const CornerRuleOptions& opts = {});

template <class F>
double integrate_corner_triangle(F&& f, double alpha, const Triangle& tri,
                                 const CornerRuleOptions& opts = {}) {
  double sum = 0.0;
  for (const QuadPoint& q : corner_triangle_points(tri, alpha, opts)) {
    const double v = f(q.x);
    if (!std::isfinite(v)) throw QuadratureError("non-finite integrand value in corner rule");
    sum += q.weight * v;
  }
  return sum;
}

/// Circular sector {0 < r < radius, theta0 < θ < theta1} with the same
/// dyadic radial layering.
std::vector<QuadPoint> corner_sector_points(double radius, double theta0, double theta1, double alpha,
                                            const CornerRuleOptions& opts = {});

/// Segment from a (the singular endpoint) to b, integrand ~ |x - a|^alpha,
/// alpha > -1. The bary field holds (1 - t, t, 0).
std::vector<QuadPoint> corner_segment_points(Point a, Point b, double alpha,
                                             const CornerRuleOptions& opts = {});

template <class F>
double integrate_points(F&& f, std::span<const QuadPoint> pts) {
  double sum = 0.0;
  for (const QuadPoint& q : pts) {
    const double v = f(q.x);
    if (!std::isfinite(v)) throw QuadratureError("non-finite integrand value");
    sum += q.weight * v;
  }
  return sum;
}

/// Gauss-Legendre rule on [0, 1] with n points (n in {1, 2, 3, 7, 10, 15, 20}).
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const LineRule& gauss_legendre(int n);

/// One sub-segment of a boundary edge, as arc lengths measured from the
/// edge endpoint nearer to the corner (points near the corner stay exact).
struct GradedSegment {
  std::size_t edge;
  bool from_b;
  double s0;
  double s1;
};

struct BoundaryQuadPoint {
  Point x;
  double weight;
  /// Distance to the corner.
  double r;
  std::size_t edge;
  /// Values of the boundary hat functions of edge.a and edge.b.
  double hat_a;
  double hat_b;
  /// Outward unit normal of the edge.
  Point normal;
};

/// Boundary partition graded toward the corner: on edges nearer than R to
/// the corner the sub-segments satisfy length <= h r^(1-mu), the segment
/// touching the corner has length h^(1/mu); farther edges are kept whole.
struct GradedBoundaryRule {
  std::vector<BoundaryEdge> edges;
  std::vector<GradedSegment> segments;
  std::vector<BoundaryQuadPoint> points;
  /// Whether an edge was subdivided (lies within R of the corner).
  std::vector<bool> graded_edge;
  double mu = 1.0;
  double R = 0.1;
  double h = 0.0;
  int points_per_segment = 1;
};

/// Throws std::invalid_argument unless 0 < mu <= 1 and 0 < R <= √2.
GradedBoundaryRule graded_boundary_rule(const TriMesh& mesh, double h, double mu, double R,
                                        int points_per_segment = 1);

/// Gauss points of an arbitrary per-segment order over an existing partition.
std::vector<BoundaryQuadPoint> segment_points(const TriMesh& mesh, const GradedBoundaryRule& rule,
                                              int points_per_segment);

/// Grading exponent 2π/ω - 1, capped to (0, 1].
double default_grading_mu(double omega);

}  // namespace scmfem
