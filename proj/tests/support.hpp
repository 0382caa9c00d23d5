#pragma once

#include <functional>
#include <memory>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scmfem/experiments.hpp"
#include "scmfem/geometry.hpp"
#include "scmfem/mesh.hpp"

namespace scmfem::testing {

inline double deg(double d) { return d * pi / 180.0; }

/// Level k of the study schedule: initial mesh with h <= h0, refined k times.
inline MeshPtr mesh_at_level(const PolygonalDomain& domain, int level, double h0 = 0.25) {
  TriMesh m = initial_triangulation(domain, h0);
  for (int i = 0; i < level; ++i) m = refine_uniform(m);
  return std::make_shared<const TriMesh>(std::move(m));
}

inline std::vector<MeshPtr> mesh_hierarchy(const PolygonalDomain& domain, int levels, double h0 = 0.25) {
  std::vector<MeshPtr> out;
  out.push_back(std::make_shared<const TriMesh>(initial_triangulation(domain, h0)));
  for (int i = 1; i < levels; ++i) out.push_back(std::make_shared<const TriMesh>(refine_uniform(*out.back())));
  return out;
}

/// ∫_Ω r^a g(θ) dx by integrating ρ(θ)^(a+2)/(a+2) g(θ) over the angle, with
/// ρ(θ) the distance from the corner to the polygon along the ray θ. The
/// angular integrals use adaptive Gauss-Kronrod on every polygon side.
inline double polar_oracle(const PolygonalDomain& domain, double a, const std::function<double(double)>& g) {
  const auto& v = domain.vertices();
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const Point p = v[k];
    const Point q = v[k + 1];
    const double t0 = polar_of(domain, p).theta;
    const double t1 = polar_of(domain, q).theta;
    auto f = [&](double t) {
      const Point dir{std::cos(t), std::sin(t)};
      const double rho = cross(p, q - p) / cross(dir, q - p);
      return std::pow(rho, a + 2.0) / (a + 2.0) * g(t);
    };
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, t0, t1, 15, 1e-15);
  }
  return total;
}

}  // namespace scmfem::testing
