#include "scmfem/geometry.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include <fmt/format.h>

namespace scmfem {

namespace {

constexpr double kAngleSnap = 1e-12;

// Intersection of the ray at angle phi with the boundary of [-1,1]^2.
Point ray_square_hit(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double t = 1.0 / std::max(std::abs(c), std::abs(s));
  Point p{t * c, t * s};
  // Snap the coordinate lying on the square side exactly onto it.
  if (std::abs(std::abs(p.x) - 1.0) < 1e-14) p.x = std::copysign(1.0, p.x);
  if (std::abs(std::abs(p.y) - 1.0) < 1e-14) p.y = std::copysign(1.0, p.y);
  if (std::abs(p.x) < 1e-15) p.x = 0.0;
  if (std::abs(p.y) < 1e-15) p.y = 0.0;
  return p;
}

}  // namespace

PolygonalDomain::PolygonalDomain(double omega, std::vector<Point> vertices)
    : omega_(omega), lambda_(pi / omega), vertices_(std::move(vertices)) {}

double PolygonalDomain::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    twice += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
  }
  return 0.5 * twice;
}

double PolygonalDomain::perimeter() const {
  double len = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    len += norm(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  }
  return len;
}

bool PolygonalDomain::contains(Point p, double tol) const {
  if (std::abs(p.x) > 1.0 + tol || std::abs(p.y) > 1.0 + tol) return false;
  if (norm(p) <= tol) return true;
  double theta = std::atan2(p.y, p.x);
  if (theta < 0.0) theta += 2.0 * pi;
  // Angular tolerance measured as a distance to the nearer ray.
  const double r = norm(p);
  if (theta <= omega_) return true;
  return r * std::min(theta - omega_, 2.0 * pi - theta) <= tol;
}

PolygonalDomain make_domain(double omega) {
  if (!(omega > 0.0 && omega < 2.0 * pi)) {
    throw std::invalid_argument(fmt::format("opening angle {} outside (0, 2π)", omega));
  }
  std::vector<Point> v{{0.0, 0.0}, {1.0, 0.0}};
  constexpr std::array<Point, 4> corners{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  for (int k = 0; k < 4; ++k) {
    const double phi = (2 * k + 1) * pi / 4;
    if (phi < omega - kAngleSnap) v.push_back(corners[k]);
  }
  const Point hit = ray_square_hit(omega);
  if (norm(hit - v.back()) > 1e-12) v.push_back(hit);
  return PolygonalDomain(omega, std::move(v));
}

PolarPoint polar_of(const PolygonalDomain& domain, Point p) {
  PolarPoint out;
  out.r = norm(p);
  if (out.r == 0.0) return out;
  double theta = std::atan2(p.y, p.x);
  if (theta < 0.0) theta += 2.0 * pi;
  const double omega = domain.omega();
  if (theta > omega) {
    if (2.0 * pi - theta <= kAngleSnap) {
      theta = 0.0;
    } else if (theta - omega <= kAngleSnap) {
      theta = omega;
    } else {
      out.in_sector = false;
    }
  }
  out.theta = theta;
  return out;
}

double eval_singular(const PolygonalDomain& domain, const SingularTerm& term, Point p) {
  const PolarPoint q = polar_of(domain, p);
  if (q.r == 0.0) {
    if (term.kind == SingularKind::dual) {
      throw std::domain_error("dual singular function evaluated at the corner");
    }
    return 0.0;
  }
  return term.coefficient * singular_shape(domain.lambda(), term.sign(), q.r, q.theta);
}

Point grad_primal(const PolygonalDomain& domain, Point p) {
  const PolarPoint q = polar_of(domain, p);
  if (q.r == 0.0) {
    throw std::domain_error("gradient of r^λ sin(λθ) evaluated at the corner");
  }
  const double lam = domain.lambda();
  const double scale = lam * std::pow(q.r, lam - 1.0);
  const double phase = (lam - 1.0) * q.theta;
  return {scale * std::sin(phase), scale * std::cos(phase)};
}

double normal_derivative_primal(const PolygonalDomain& domain, Point p, Point n) {
  return dot(grad_primal(domain, p), n);
}

}  // namespace scmfem
