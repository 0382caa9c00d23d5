#include <gtest/gtest.h>

#include <random>

#include "scmfem/geometry.hpp"
#include "support.hpp"

namespace scmfem {
namespace {

using testing::deg;

TEST(Domain, LShapeVerticesAreaPerimeter) {
  const PolygonalDomain d = make_domain(1.5 * pi);
  ASSERT_EQ(d.vertices().size(), 6u);
  EXPECT_EQ(d.vertices()[0], (Point{0, 0}));
  EXPECT_EQ(d.vertices()[1], (Point{1, 0}));
  EXPECT_EQ(d.vertices()[5], (Point{0, -1}));
  EXPECT_NEAR(d.area(), 3.0, 1e-14);
  EXPECT_NEAR(d.perimeter(), 8.0, 1e-14);
  EXPECT_NEAR(d.lambda(), 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(d.is_nonconvex());
}

TEST(Domain, QuarterAndNearlyFullDisk) {
  const PolygonalDomain q = make_domain(0.5 * pi);
  EXPECT_EQ(q.vertices().size(), 4u);
  EXPECT_NEAR(q.area(), 1.0, 1e-14);
  EXPECT_FALSE(q.is_nonconvex());

  const PolygonalDomain d = make_domain(deg(355));
  EXPECT_EQ(d.vertices().size(), 7u);
  const Point last = d.vertices().back();
  EXPECT_DOUBLE_EQ(last.x, 1.0);
  EXPECT_NEAR(last.y, std::tan(deg(-5)), 1e-15);
  EXPECT_NEAR(d.area(), 4.0 - 0.5 * std::tan(deg(5)), 1e-14);
}

TEST(Domain, RejectsDegenerateAngles) {
  EXPECT_THROW(make_domain(0.0), std::invalid_argument);
  EXPECT_THROW(make_domain(2.0 * pi), std::invalid_argument);
  EXPECT_THROW(make_domain(-1.0), std::invalid_argument);
}

TEST(Domain, MembershipMatchesDefinition) {
  const PolygonalDomain d = make_domain(1.5 * pi);
  EXPECT_TRUE(d.contains({0.5, 0.5}));
  EXPECT_TRUE(d.contains({-0.5, -0.5}));
  EXPECT_FALSE(d.contains({0.5, -0.5}));
  EXPECT_FALSE(d.contains({1.5, 0.0}));
  EXPECT_TRUE(d.contains({0.0, -1.0}));
}

TEST(Polar, BranchAndSnapping) {
  const PolygonalDomain d = make_domain(1.5 * pi);
  PolarPoint p = polar_of(d, {0.0, -1.0});
  EXPECT_NEAR(p.r, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.theta, 1.5 * pi);
  EXPECT_TRUE(p.in_sector);

  p = polar_of(d, {1.0, 0.0});
  EXPECT_EQ(p.theta, 0.0);
  p = polar_of(d, {1.0, -1e-14});
  EXPECT_EQ(p.theta, 0.0);
  EXPECT_TRUE(p.in_sector);

  p = polar_of(d, {0.5, -0.5});
  EXPECT_FALSE(p.in_sector);
}

TEST(Singular, ValuesAndOriginBehaviour) {
  const PolygonalDomain d = make_domain(1.5 * pi);
  const SingularTerm dual{SingularKind::dual, 1.0};
  const SingularTerm primal{SingularKind::primal, 2.0};
  EXPECT_THROW(eval_singular(d, dual, {0, 0}), std::domain_error);
  EXPECT_EQ(eval_singular(d, primal, {0, 0}), 0.0);
  // θ = π/2 at (0, 0.25): r^-λ sin(λπ/2) = 0.25^(-2/3) sin(π/3).
  EXPECT_NEAR(eval_singular(d, dual, {0, 0.25}), std::pow(0.25, -2.0 / 3) * std::sin(pi / 3), 1e-14);
  // Both singular functions vanish on the two corner edges.
  EXPECT_NEAR(eval_singular(d, dual, {0.3, 0}), 0.0, 1e-15);
  EXPECT_NEAR(eval_singular(d, dual, {0, -0.3}), 0.0, 1e-14);
  EXPECT_NEAR(eval_singular(d, primal, {0, -0.3}), 0.0, 1e-14);
}

TEST(Singular, GradientMatchesFiniteDifferences) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (double omega : {1.5 * pi, deg(355), deg(200)}) {
    const PolygonalDomain d = make_domain(omega);
    const SingularTerm s{SingularKind::primal, 1.0};
    int checked = 0;
    while (checked < 40) {
      const Point p{u(rng), u(rng)};
      const PolarPoint pp = polar_of(d, p);
      if (!pp.in_sector || pp.r < 0.05 || pp.theta < 0.02 || pp.theta > omega - 0.02) continue;
      const double eps = 1e-6;
      const Point fd{(eval_singular(d, s, {p.x + eps, p.y}) - eval_singular(d, s, {p.x - eps, p.y})) / (2 * eps),
                     (eval_singular(d, s, {p.x, p.y + eps}) - eval_singular(d, s, {p.x, p.y - eps})) / (2 * eps)};
      const Point g = grad_primal(d, p);
      EXPECT_NEAR(g.x, fd.x, 1e-7 * (1 + norm(g)));
      EXPECT_NEAR(g.y, fd.y, 1e-7 * (1 + norm(g)));
      const Point n{0.6, -0.8};
      EXPECT_NEAR(normal_derivative_primal(d, p, n), dot(fd, n), 1e-7 * (1 + norm(g)));
      ++checked;
    }
  }
}

TEST(Singular, NormalDerivativeOnRaysAndOrigin) {
  const PolygonalDomain d = make_domain(1.5 * pi);
  const double lam = d.lambda();
  // On θ = 0 with outward normal (0,-1): -(1/r)∂_θ = -λ r^(λ-1).
  EXPECT_NEAR(normal_derivative_primal(d, {0.5, 0}, {0, -1}), -lam * std::pow(0.5, lam - 1), 1e-14);
  // On θ = ω with outward normal (1,0): (1/r)∂_θ = λ r^(λ-1) cos(π).
  EXPECT_NEAR(normal_derivative_primal(d, {0, -0.5}, {1, 0}), -lam * std::pow(0.5, lam - 1), 1e-13);
  EXPECT_THROW(normal_derivative_primal(d, {0, 0}, {1, 0}), std::domain_error);
}

}  // namespace
}  // namespace scmfem
