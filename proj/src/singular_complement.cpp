#include "scmfem/singular_complement.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace scmfem {

FeSpace::FeSpace(MeshPtr mesh, PolygonalDomain domain, CgOptions cg)
    : mesh_(std::move(mesh)),
      domain_(std::move(domain)),
      stiffness_(std::make_shared<const SparseMatrix>(assemble_stiffness(*mesh_))),
      mass_(assemble_mass(*mesh_)),
      solver_(mesh_, stiffness_),
      cg_(cg) {}

double AugmentedFunction::value_at(const PolygonalDomain& domain, Point p) const {
  const std::optional<double> fe = fe_part.value_at(p);
  if (!fe) throw std::invalid_argument(fmt::format("point ({}, {}) is outside the mesh", p.x, p.y));
  if (singular.coefficient == 0.0) return *fe;
  return *fe + eval_singular(domain, singular, p);
}

namespace {

double shape_at(const PolygonalDomain& domain, int sign, Point x) {
  const PolarPoint pp = polar_of(domain, x);
  return singular_shape(domain.lambda(), sign, pp.r, pp.theta);
}

MeshQuadrature corner_aware(double alpha, const CornerRuleOptions& opts) {
  MeshQuadrature mq;
  mq.corner_alpha = alpha;
  mq.corner = opts;
  return mq;
}

// B_h of the singular function trace, with the value 0 at the corner node.
FeFunction lifted_trace(const FeSpace& space, int sign) {
  const PolygonalDomain& domain = space.domain();
  const auto trace = boundary_trace(*space.mesh(), [&](Point p) {
    const PolarPoint pp = polar_of(domain, p);
    return pp.r == 0.0 ? 0.0 : singular_shape(domain.lambda(), sign, pp.r, pp.theta);
  });
  return lift_boundary(space.mesh(), trace);
}

}  // namespace

double fe_singular_product(const FeSpace& space, const FeFunction& fe, int sign, const CornerRuleOptions& opts) {
  const PolygonalDomain& domain = space.domain();
  return integrate_mesh(*space.mesh(), corner_aware(sign * domain.lambda(), opts),
                        [&](std::size_t e, const QuadPoint& q) {
                          return fe.value_in(e, q.bary) * shape_at(domain, sign, q.x);
                        });
}

double singular_singular_product(const FeSpace& space, int sign1, int sign2, const CornerRuleOptions& opts) {
  const PolygonalDomain& domain = space.domain();
  return integrate_mesh(*space.mesh(), corner_aware((sign1 + sign2) * domain.lambda(), opts),
                        [&](std::size_t, const QuadPoint& q) {
                          const PolarPoint pp = polar_of(domain, q.x);
                          return singular_shape(domain.lambda(), sign1, pp.r, pp.theta) *
                                 singular_shape(domain.lambda(), sign2, pp.r, pp.theta);
                        });
}

double inner_product(const FeSpace& space, const FeFunction& a, const AugmentedFunction& b) {
  double s = space.mass().bilinear(a.coeffs(), b.fe_part.coeffs());
  if (b.singular.coefficient != 0.0) {
    s += b.singular.coefficient * fe_singular_product(space, a, b.singular.sign(), space.corner_options);
  }
  return s;
}

double inner_product(const FeSpace& space, const AugmentedFunction& a, const AugmentedFunction& b) {
  double s = inner_product(space, a.fe_part, b);
  const double ca = a.singular.coefficient;
  if (ca != 0.0) {
    s += ca * fe_singular_product(space, b.fe_part, a.singular.sign(), space.corner_options);
    if (b.singular.coefficient != 0.0) {
      s += ca * b.singular.coefficient *
           singular_singular_product(space, a.singular.sign(), b.singular.sign(), space.corner_options);
    }
  }
  return s;
}

double norm_sq(const FeSpace& space, const AugmentedFunction& a) {
  const double n = inner_product(space, a, a);
  if (!(n >= 0.0)) throw std::runtime_error(fmt::format("computed squared L2 norm is negative ({})", n));
  return n;
}

AugmentedFunction compute_dual_singular(const FeSpace& space) {
  if (!(space.domain().lambda() < 1.0)) {
    throw std::invalid_argument("the dual singular function exists only on a non-convex domain");
  }
  const FeFunction r_h = lifted_trace(space, -1);
  const std::vector<double> rhs = space.stiffness() * std::span<const double>(r_h.coeffs());
  FeFunction p_star = space.solver().solve_homogeneous(rhs, space.cg());
  return {p_star - r_h, {SingularKind::dual, 1.0}};
}

double compute_beta(const FeSpace& space, const AugmentedFunction& ps) { return norm_sq(space, ps) / pi; }

AugmentedFunction compute_phi(const FeSpace& space, const AugmentedFunction& ps, double beta_h) {
  const TriMesh& mesh = *space.mesh();
  const PolygonalDomain& domain = space.domain();
  const FeFunction s_h = lifted_trace(space, 1);

  std::vector<double> load = space.mass() * std::span<const double>(ps.fe_part.coeffs());
  if (ps.singular.coefficient != 0.0) {
    const std::vector<double> sing =
        integrate_against_hats(mesh, corner_aware(ps.singular.sign() * domain.lambda(), space.corner_options),
                               [&](std::size_t, const QuadPoint& q) { return shape_at(domain, ps.singular.sign(), q.x); });
    for (std::size_t i = 0; i < load.size(); ++i) load[i] += ps.singular.coefficient * sing[i];
  }
  const std::vector<double> as = space.stiffness() * std::span<const double>(s_h.coeffs());
  for (std::size_t i = 0; i < load.size(); ++i) load[i] += beta_h * as[i];

  FeFunction phi_star = space.solver().solve_homogeneous(load, space.cg());
  return {phi_star - beta_h * s_h, {SingularKind::primal, beta_h}};
}

double compute_gamma(const FeSpace& space, const FeFunction& y_h, const AugmentedFunction& ps, double ps_norm_sq) {
  if (!(ps_norm_sq > 0.0)) throw std::invalid_argument("‖p_s^h‖² must be positive");
  return inner_product(space, y_h, ps) / ps_norm_sq;
}

double compute_alpha(const FeSpace& space, const BoundaryDatum& datum, const ScalarField& f,
                     const AugmentedFunction& ps, const AugmentedFunction& phi, double beta_h,
                     const GradedBoundaryRule& graded, double ps_norm_sq, const AlphaOptions& opts) {
  if (!(ps_norm_sq > 0.0)) throw std::invalid_argument("‖p_s^h‖² must be positive");
  const TriMesh& mesh = *space.mesh();
  const PolygonalDomain& domain = space.domain();
  const FeFunction bu = lift_boundary(space.mesh(), datum.projected);

  double num = inner_product(space, bu, ps);
  num -= space.stiffness().bilinear(bu.coeffs(), phi.fe_part.coeffs());

  if (datum.source && beta_h != 0.0) {
    double boundary = 0.0;
    for (const BoundaryQuadPoint& q : graded.points) {
      boundary += q.weight * datum.source(q.x) * normal_derivative_primal(domain, q.x, q.normal);
    }
    if (!std::isfinite(boundary)) throw QuadratureError("non-finite boundary term in α_h");
    num -= beta_h * boundary;
  }

  if (f) {
    const std::vector<double> load = load_vector(mesh, f);
    num += dot(load, phi.fe_part.coeffs());
    if (phi.singular.coefficient != 0.0) {
      num += phi.singular.coefficient *
             integrate_mesh(mesh, corner_aware(domain.lambda(), space.corner_options),
                            [&](std::size_t, const QuadPoint& q) { return f(q.x) * shape_at(domain, 1, q.x); });
    }
  }
  return num / (opts.denominator_squared ? ps_norm_sq * ps_norm_sq : ps_norm_sq);
}

AugmentedFunction corrected_solution(const FeFunction& y_h, const AugmentedFunction& ps,
                                     const CorrectionCoefficients& c) {
  return {y_h + c.delta_h * ps.fe_part, {ps.singular.kind, c.delta_h * ps.singular.coefficient}};
}

AugmentedFunction corrected_solution_via_projector(const FeFunction& y_h, const AugmentedFunction& ps,
                                                   const CorrectionCoefficients& c) {
  const FeFunction projected = y_h - c.gamma_h * ps.fe_part;
  const double coeff = -c.gamma_h * ps.singular.coefficient + c.alpha_h * ps.singular.coefficient;
  return {projected + c.alpha_h * ps.fe_part, {ps.singular.kind, coeff}};
}

FeFunction solve_standard(const FeSpace& space, const BoundaryDatum& datum, const ScalarField& f) {
  const std::vector<double> load = load_vector(*space.mesh(), f);
  return space.solver().solve(load, datum.projected, space.cg());
}

GradedBoundaryRule default_graded_rule(const FeSpace& space, const ScmOptions& opts) {
  const double mu = opts.mu > 0.0 ? opts.mu : default_grading_mu(space.domain().omega());
  const double h = opts.grading_h > 0.0 ? opts.grading_h : space.mesh()->h();
  return graded_boundary_rule(*space.mesh(), h, mu, opts.grading_radius, 1);
}

ScmResult solve_scm(const FeSpace& space, const ScalarField& f, const ScalarField& u, const ScmOptions& opts) {
  const GradedBoundaryRule graded = default_graded_rule(space, opts);
  ProjectionOptions popts;
  popts.source_exponent = opts.source_exponent;
  popts.estimate_norm = false;

  ScmResult r;
  r.datum = l2_project_boundary(u, *space.mesh(), graded, popts);
  r.y_h = solve_standard(space, r.datum, f);
  r.ps = compute_dual_singular(space);
  CorrectionCoefficients& c = r.coeffs;
  c.ps_norm_sq = norm_sq(space, r.ps);
  if (!(c.ps_norm_sq > 0.0)) throw std::runtime_error("‖p_s^h‖² vanished");
  c.beta_h = c.ps_norm_sq / pi;
  r.phi = compute_phi(space, r.ps, c.beta_h);
  c.gamma_h = compute_gamma(space, r.y_h, r.ps, c.ps_norm_sq);
  c.alpha_h = compute_alpha(space, r.datum, f, r.ps, r.phi, c.beta_h, graded, c.ps_norm_sq, opts.alpha);
  c.delta_h = c.alpha_h - c.gamma_h;
  r.z_h = corrected_solution(r.y_h, r.ps, c);
  return r;
}

}  // namespace scmfem
