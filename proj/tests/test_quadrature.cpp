#include <gtest/gtest.h>

#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "scmfem/quadrature.hpp"
#include "support.hpp"

namespace scmfem {
namespace {

using testing::deg;

const Triangle kReference{Point{0, 0}, Point{1, 0}, Point{0, 1}};

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// ∫ over the reference triangle of x^a y^b.
double monomial_exact(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

class TriRuleExactness : public ::testing::TestWithParam<int> {};

TEST_P(TriRuleExactness, IntegratesMonomialsUpToOrder) {
  const TriRule& rule = tri_rule(GetParam());
  double wsum = 0.0;
  for (double w : rule.weights) {
    EXPECT_GT(w, 0.0);
    wsum += w;
  }
  EXPECT_NEAR(wsum, 1.0, 1e-15);
  for (const auto& b : rule.points) EXPECT_NEAR(b[0] + b[1] + b[2], 1.0, 1e-15);
  for (int a = 0; a <= rule.order; ++a) {
    for (int b = 0; a + b <= rule.order; ++b) {
      const double q = integrate_triangle([&](Point p) { return std::pow(p.x, a) * std::pow(p.y, b); }, kReference, rule);
      EXPECT_NEAR(q, monomial_exact(a, b), 1e-13) << "x^" << a << " y^" << b;
    }
  }
  const TriRule composite = composite_rule(rule, 2);
  for (int a = 0; a < rule.order; ++a) {
    const double q = integrate_triangle([&](Point p) { return std::pow(p.x, a) * p.y; }, kReference, composite);
    EXPECT_NEAR(q, monomial_exact(a, 1), 1e-13);
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, TriRuleExactness, ::testing::Values(1, 2, 3, 5, 7));

TEST(TriRule, KnownValues) {
  EXPECT_EQ(tri_rule(1).points.size(), 1u);
  EXPECT_EQ(tri_rule(2).points.size(), 3u);
  EXPECT_THROW(tri_rule(4), std::invalid_argument);
  EXPECT_NEAR(integrate_triangle([](Point p) { return p.x + p.y; }, kReference, tri_rule(2)), 1.0 / 3, 1e-15);
  EXPECT_NEAR(integrate_triangle([](Point p) { return p.x * p.x * p.y; }, kReference, tri_rule(3)), 1.0 / 60, 1e-15);
  const Triangle t{Point{0.3, -0.2}, Point{1.7, 0.4}, Point{-0.1, 2.2}};
  EXPECT_NEAR(integrate_triangle([](Point) { return 1.0; }, t, tri_rule(7)), signed_area(t), 1e-14 * signed_area(t));
  EXPECT_THROW(integrate_triangle([](Point) { return std::nan(""); }, t, tri_rule(1)), QuadratureError);
}

// ∫_T r^a g(θ) for a triangle with vertex 0 at the origin, by polar
// coordinates: ∫ ρ(θ)^(a+2)/(a+2) g(θ) dθ with tanh-sinh in θ.
double polar_triangle_oracle(const Triangle& t, double a, const std::function<double(double)>& g) {
  const Point p = t[1], q = t[2];
  const double t0 = std::atan2(p.y, p.x);
  double t1 = std::atan2(q.y, q.x);
  if (t1 < t0) t1 += 2 * pi;
  auto f = [&](double th) {
    const Point dir{std::cos(th), std::sin(th)};
    const double rho = cross(p, q - p) / cross(dir, q - p);
    return std::pow(rho, a + 2.0) / (a + 2.0) * g(th);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, t0, t1, 1e-15);
}

TEST(CornerTriangle, PowerIntegralsMatchPolarOracle) {
  const std::vector<Triangle> tris{{Point{0, 0}, Point{1, 0}, Point{1, 1}},
                                   {Point{0, 0}, Point{0.25, -0.1}, Point{-0.05, 0.3}},
                                   {Point{0, 0}, Point{1, -1}, Point{1, -0.0874886635259240}}};
  for (const Triangle& t : tris) {
    for (double a : {-1.9, -4.0 / 3, -1.0, -0.5, 0.0, 2.0 / 3}) {
      const double q = integrate_corner_triangle([&](Point x) { return std::pow(norm(x), a); }, a, t);
      const double ref = polar_triangle_oracle(t, a, [](double) { return 1.0; });
      EXPECT_NEAR(q, ref, 1e-10 * std::abs(ref)) << "alpha " << a << " tri " << t[1].x;
    }
  }
}

TEST(CornerTriangle, SingularTimesAngularFactor) {
  // r^(2/3) sin(2θ/3) on a corner triangle of the L-shape.
  const Triangle t{Point{0, 0}, Point{-1, 0}, Point{-1, -1}};
  const double lam = 2.0 / 3;
  auto angle = [](Point x) {
    double th = std::atan2(x.y, x.x);
    return th < 0 ? th + 2 * pi : th;
  };
  const double q =
      integrate_corner_triangle([&](Point x) { return std::pow(norm(x), lam) * std::sin(lam * angle(x)); }, lam, t);
  const double ref = polar_triangle_oracle(t, lam, [&](double th) {
    return std::sin(lam * (th < 0 ? th + 2 * pi : th));
  });
  EXPECT_NEAR(q, ref, 1e-9 * std::abs(ref));
}

TEST(CornerTriangle, AgreesWithGaussForSmoothIntegrands) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    Triangle t{Point{0, 0}, Point{u(rng), u(rng)}, Point{u(rng), u(rng)}};
    if (signed_area(t) < 0) std::swap(t[1], t[2]);
    if (signed_area(t) < 1e-3) continue;
    auto f = [](Point x) { return 1.0 + x.x * x.x * x.y - 3 * x.y * x.y * x.y + x.x; };
    const double g = integrate_triangle(f, t, tri_rule(7));
    const double c = integrate_corner_triangle(f, 0.0, t);
    EXPECT_NEAR(c, g, 1e-10 * (std::abs(g) + signed_area(t)));
  }
  const Triangle t{Point{0, 0}, Point{0.5, 0.1}, Point{0.2, 0.7}};
  EXPECT_NEAR(integrate_corner_triangle([](Point) { return 1.0; }, 0.0, t), signed_area(t), 1e-10 * signed_area(t));
}

TEST(CornerTriangle, DepthDoublingIsStable) {
  const Triangle t{Point{0, 0}, Point{0.3, 0}, Point{0.3, 0.2}};
  for (double a : {-1.9, -1.5, -1.0, -0.3, 0.5}) {
    auto f = [&](Point x) { return std::pow(norm(x), a) * (1.0 + x.x); };
    CornerRuleOptions deep;
    deep.depth_factor = 2.0;
    const double q1 = integrate_corner_triangle(f, a, t);
    const double q2 = integrate_corner_triangle(f, a, t, deep);
    EXPECT_NEAR(q1, q2, 1e-10 * std::abs(q2)) << "alpha " << a;
  }
}

TEST(CornerTriangle, LayerCount) {
  EXPECT_EQ(corner_layers(0.0, 2, {}), static_cast<int>(std::ceil(std::log2(1e12) / 2)));
  // Capped so that r^alpha stays finite at the innermost layer.
  EXPECT_EQ(corner_layers(-1.9998, 2, {}), 500);
  EXPECT_EQ(corner_layers(-0.5, 1, {}), 80);
  CornerRuleOptions twice;
  twice.depth_factor = 2;
  EXPECT_EQ(corner_layers(-1.0, 2, twice), 2 * corner_layers(-1.0, 2, {}));
  EXPECT_THROW(corner_layers(-2.0, 2, {}), std::invalid_argument);
  EXPECT_THROW(corner_layers(-1.0, 1, {}), std::invalid_argument);
}

// ∫ r^(-2λ) sin²(λθ) over the sector of radius R and angle ω = π/λ.
double sector_exact(double omega, double R) {
  const double lam = pi / omega;
  return 0.5 * omega * std::pow(R, 2 - 2 * lam) / (2 - 2 * lam);
}

TEST(CornerSector, ClosedFormSingularEnergy) {
  for (double omega : {1.5 * pi, deg(355), deg(200)}) {
    const double lam = pi / omega;
    for (double R : {1.0, 0.3}) {
      const auto pts = corner_sector_points(R, 0.0, omega, -2 * lam);
      const double q = integrate_points(
          [&](Point x) {
            double th = std::atan2(x.y, x.x);
            if (th < 0) th += 2 * pi;
            return std::pow(norm(x), -2 * lam) * std::pow(std::sin(lam * th), 2);
          },
          pts);
      EXPECT_NEAR(q, sector_exact(omega, R), 1e-8 * sector_exact(omega, R)) << omega << " " << R;
    }
  }
}

TEST(CornerSector, FanOfCornerTrianglesApproachesSector) {
  // Corner triangles of a fine fan inscribed in the sector: the polygon
  // misses O(n^-2) of the area, so the sum converges to the closed form.
  const double omega = 1.5 * pi, lam = 2.0 / 3, R = 0.5;
  double prev_err = 1.0;
  for (int n : {64, 128, 256}) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a0 = omega * k / n, a1 = omega * (k + 1) / n;
      const Triangle t{Point{0, 0}, Point{R * std::cos(a0), R * std::sin(a0)}, Point{R * std::cos(a1), R * std::sin(a1)}};
      sum += integrate_corner_triangle(
          [&](Point x) {
            double th = std::atan2(x.y, x.x);
            if (th < -1e-12) th += 2 * pi;
            return std::pow(norm(x), -2 * lam) * std::pow(std::sin(lam * th), 2);
          },
          -2 * lam, t);
    }
    const double err = std::abs(sum - sector_exact(omega, R)) / sector_exact(omega, R);
    EXPECT_LT(err, 0.3 * prev_err);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 1e-4);
}

TEST(CornerSegment, PowerIntegrals) {
  for (double a : {-0.9998, -0.99286, -0.9, -0.5, 0.0, 0.3}) {
    const Point a0{0, 0}, b0{0.0, -0.7};
    const double q = integrate_points([&](Point x) { return std::pow(norm(x), a); }, corner_segment_points(a0, b0, a));
    const double exact = std::pow(0.7, a + 1) / (a + 1);
    EXPECT_NEAR(q, exact, 1e-8 * exact) << "alpha " << a;
  }
  // Homogeneous integrand times a polynomial in the arc length.
  const double q = integrate_points([](Point x) { return std::pow(x.x, -0.5) * (1 + x.x); },
                                    corner_segment_points({0, 0}, {1, 0}, -0.5));
  EXPECT_NEAR(q, 2.0 + 2.0 / 3, 1e-10);
}

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n : {1, 2, 3, 7, 10, 15, 20}) {
    const LineRule& g = gauss_legendre(n);
    ASSERT_EQ(g.nodes.size(), static_cast<std::size_t>(n));
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << n << " points, degree " << k;
    }
  }
  EXPECT_THROW(gauss_legendre(4), std::invalid_argument);
}

class GradedRule : public ::testing::Test {
 protected:
  PolygonalDomain domain = make_domain(1.5 * pi);
  std::vector<MeshPtr> meshes = testing::mesh_hierarchy(domain, 5);
};

TEST_F(GradedRule, SegmentStructure) {
  const double mu = default_grading_mu(domain.omega());
  EXPECT_NEAR(mu, 1.0 / 3, 1e-15);
  const double h = 0.0625;
  const TriMesh& m = *meshes[2];
  const GradedBoundaryRule rule = graded_boundary_rule(m, h, mu, 0.1);
  double wsum = 0.0;
  for (const BoundaryQuadPoint& q : rule.points) {
    EXPECT_GT(q.r, 0.0);
    wsum += q.weight;
  }
  EXPECT_NEAR(wsum, domain.perimeter(), 1e-12 * domain.perimeter());
  int corner_segments = 0;
  for (const GradedSegment& s : rule.segments) {
    const BoundaryEdge& e = rule.edges[s.edge];
    const double len = s.s1 - s.s0;
    if (e.r_min == 0.0 && s.s0 == 0.0) {
      ++corner_segments;
      EXPECT_DOUBLE_EQ(len, std::pow(h, 1.0 / mu));
    } else if (rule.graded_edge[s.edge]) {
      // Distance of the segment start to the corner.
      const double r0 = e.r_min + s.s0;
      if (r0 < rule.R) EXPECT_LE(len, h * std::pow(r0, 1.0 - mu) * (1 + 1e-12));
    }
  }
  EXPECT_EQ(corner_segments, 2);
}

TEST_F(GradedRule, MuOneKeepsEdgesWhole) {
  const TriMesh& m = *meshes[1];
  const GradedBoundaryRule rule = graded_boundary_rule(m, 1.0, 1.0, 0.1);
  // h = 1 and μ = 1: every segment would be at least as long as its edge.
  EXPECT_EQ(rule.segments.size(), m.boundary().size());
  EXPECT_THROW(graded_boundary_rule(m, 0.1, 0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(graded_boundary_rule(m, 0.1, 1.5, 0.1), std::invalid_argument);
  EXPECT_THROW(graded_boundary_rule(m, 0.1, 0.5, 2.0), std::invalid_argument);
}

TEST_F(GradedRule, SegmentCountGrowsMildly) {
  const double mu = default_grading_mu(domain.omega());
  std::vector<double> c;
  for (int k = 0; k < 5; ++k) {
    const double h = 0.25 * std::ldexp(1.0, -k);
    const auto rule = graded_boundary_rule(*meshes[k], h, mu, 0.1);
    c.push_back(rule.segments.size() * std::pow(h, 1.2));
  }
  for (std::size_t k = 1; k < c.size(); ++k) EXPECT_LE(c[k], 2.0 * c[0]);
}

TEST_F(GradedRule, OnePointRuleOnCornerEdgeConvergesLikeSqrtH) {
  // ∫ of r^(λ-1.4999) along the θ = 0 side (length 1). The one-point rule on
  // the corner segment [0, h^(1/μ)] misses a fixed fraction of that segment's
  // integral, so the relative error behaves like h^(λ-0.4999) ≈ h^0.5.
  const double mu = default_grading_mu(domain.omega());
  const double a = domain.lambda() - 1.4999;
  const double exact = 1.0 / (a + 1);
  std::vector<double> err;
  for (int k = 0; k < 5; ++k) {
    const double h = 0.25 * std::ldexp(1.0, -k);
    const auto rule = graded_boundary_rule(*meshes[k], h, mu, 0.1);
    double q = 0.0;
    for (const BoundaryQuadPoint& p : rule.points) {
      if (p.x.y == 0.0 && p.x.x > 0.0) q += p.weight * std::pow(p.r, a);
    }
    err.push_back(std::abs(q - exact) / exact);
  }
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double rate = std::log2(err[k - 1] / err[k]);
    EXPECT_NEAR(rate, 0.5, 0.05);
  }
  EXPECT_LT(err.back(), 0.1);
}

}  // namespace
}  // namespace scmfem
