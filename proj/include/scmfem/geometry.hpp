#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace scmfem {

inline constexpr double pi = std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline Point midpoint(Point a, Point b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Pointwise scalar field given in Cartesian coordinates. An empty field
/// stands for the zero function wherever a source term is optional.
using ScalarField = std::function<double(Point)>;

/// The sector-cut square (-1,1)^2 ∩ {0 < r, 0 <= θ <= ω} with its
/// reentrant (or convex) corner at the origin.
///
/// Vertices are counterclockwise, starting at the origin and continuing
/// along the θ = 0 ray, so the corner is always vertex 0.
class PolygonalDomain {
 public:
  PolygonalDomain(double omega, std::vector<Point> vertices);

  double omega() const { return omega_; }
  /// Singular exponent π/ω.
  double lambda() const { return lambda_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t corner_index() const { return 0; }
  bool is_nonconvex() const { return omega_ > pi; }

  double area() const;
  double perimeter() const;

  /// Direct membership test from the defining formula (square ∩ sector).
  bool contains(Point p, double tol = 1e-12) const;

 private:
  double omega_;
  double lambda_;
  std::vector<Point> vertices_;
};

/// Builds Ω_ω. Throws std::invalid_argument unless 0 < omega < 2π.
PolygonalDomain make_domain(double omega);

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;
  /// False when the angle falls in the excluded sector (ω, 2π).
  bool in_sector = true;
};

/// Polar coordinates at the corner with θ in [0, ω]; the branch cut lies in
/// the excluded sector. Angles within 1e-12 of 0 or ω snap onto the ray.
PolarPoint polar_of(const PolygonalDomain& domain, Point p);

enum class SingularKind : int { primal = 1, dual = -1 };

/// coefficient · r^(±λ) sin(λθ).
struct SingularTerm {
  SingularKind kind = SingularKind::dual;
  double coefficient = 1.0;

  int sign() const { return static_cast<int>(kind); }
};

/// r^(sign λ) sin(λθ) from precomputed polar coordinates (no coefficient).
inline double singular_shape(double lambda, int sign, double r, double theta) {
  return std::pow(r, sign * lambda) * std::sin(lambda * theta);
}

/// Throws std::domain_error for the dual function at the origin.
double eval_singular(const PolygonalDomain& domain, const SingularTerm& term, Point p);

/// Cartesian gradient of r^λ sin(λθ), i.e. λ r^(λ-1) (sin((λ-1)θ), cos((λ-1)θ)).
Point grad_primal(const PolygonalDomain& domain, Point p);

/// ∇(r^λ sin λθ)·n. Singular at the origin for λ < 1; throws there.
double normal_derivative_primal(const PolygonalDomain& domain, Point p, Point n);

}  // namespace scmfem
