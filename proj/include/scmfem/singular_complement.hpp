#pragma once

#include <memory>

#include "scmfem/boundary_data.hpp"
#include "scmfem/fem.hpp"
#include "scmfem/geometry.hpp"
#include "scmfem/integration.hpp"
#include "scmfem/quadrature.hpp"

namespace scmfem {

/// Everything assembled once per mesh: stiffness and mass matrices and the
/// Dirichlet solver sharing the stiffness matrix.
class FeSpace {
 public:
  FeSpace(MeshPtr mesh, PolygonalDomain domain, CgOptions cg = {});

  const MeshPtr& mesh() const { return mesh_; }
  const PolygonalDomain& domain() const { return domain_; }
  const SparseMatrix& stiffness() const { return *stiffness_; }
  const SparseMatrix& mass() const { return mass_; }
  const DirichletSolver& solver() const { return solver_; }
  const CgOptions& cg() const { return cg_; }
  CornerRuleOptions corner_options;

 private:
  MeshPtr mesh_;
  PolygonalDomain domain_;
  std::shared_ptr<const SparseMatrix> stiffness_;
  SparseMatrix mass_;
  DirichletSolver solver_;
  CgOptions cg_;
};

/// fe_part + coefficient · r^(±λ) sin(λθ).
struct AugmentedFunction {
  FeFunction fe_part;
  SingularTerm singular;

  /// Throws std::domain_error at the origin when the singular part is dual
  /// and its coefficient is nonzero.
  double value_at(const PolygonalDomain& domain, Point p) const;
};

/// ∫_Ω fe · r^(sign λ) sin(λθ), corner-aware.
double fe_singular_product(const FeSpace& space, const FeFunction& fe, int sign,
                           const CornerRuleOptions& opts);
/// ∫_Ω r^(s1 λ) sin(λθ) · r^(s2 λ) sin(λθ), corner-aware.
double singular_singular_product(const FeSpace& space, int sign1, int sign2, const CornerRuleOptions& opts);
/// (a, b)_Ω with every cross term computed as above.
double inner_product(const FeSpace& space, const AugmentedFunction& a, const AugmentedFunction& b);
double inner_product(const FeSpace& space, const FeFunction& a, const AugmentedFunction& b);
/// ‖a‖²_{L²(Ω)}; throws std::runtime_error if the computed value is negative.
double norm_sq(const FeSpace& space, const AugmentedFunction& a);

struct CorrectionCoefficients {
  double beta_h = 0.0;
  double gamma_h = 0.0;
  double alpha_h = 0.0;
  double delta_h = 0.0;
  double ps_norm_sq = 0.0;
};

/// p_s^h = (p_h^* - r_h) + r^(-λ) sin(λθ), where r_h lifts the trace of the
/// dual singular function (zero at the corner) and p_h^* in Y_0h solves
/// (∇p_h^*, ∇v) = (∇r_h, ∇v). Throws std::invalid_argument for λ >= 1.
AugmentedFunction compute_dual_singular(const FeSpace& space);

double compute_beta(const FeSpace& space, const AugmentedFunction& ps);

/// φ_s^h = (φ_h^* - β s_h) + β r^λ sin(λθ), where s_h lifts the trace of the
/// primal singular function and φ_h^* in Y_0h solves
/// (∇φ_h^*, ∇v) = (p_s^h, v) + β (∇s_h, ∇v).
AugmentedFunction compute_phi(const FeSpace& space, const AugmentedFunction& ps, double beta_h);

/// (y_h, p_s^h) / ‖p_s^h‖².
double compute_gamma(const FeSpace& space, const FeFunction& y_h, const AugmentedFunction& ps,
                     double ps_norm_sq);

struct AlphaOptions {
  /// Divide by ‖p_s^h‖⁴ instead of ‖p_s^h‖².
  bool denominator_squared = false;
};

/// α_h = [(B_h u^h, p_s^h) - (∇B_h u^h, ∇φ̃_h) - β_h (u, ∂_n(r^λ sin λθ))_Γ + (f, φ_s^h)] / ‖p_s^h‖².
/// The boundary term uses the original datum u at the points of the graded
/// rule; an empty f skips the last term.
double compute_alpha(const FeSpace& space, const BoundaryDatum& datum, const ScalarField& f,
                     const AugmentedFunction& ps, const AugmentedFunction& phi, double beta_h,
                     const GradedBoundaryRule& graded, double ps_norm_sq, const AlphaOptions& opts = {});

/// z_h = (y_h + δ_h p̃_h) + δ_h r^(-λ) sin(λθ).
AugmentedFunction corrected_solution(const FeFunction& y_h, const AugmentedFunction& ps,
                                     const CorrectionCoefficients& c);

/// The same function assembled as Π_R^h y_h + α_h p_s^h with
/// Π_R^h y_h = y_h - γ_h p_s^h.
AugmentedFunction corrected_solution_via_projector(const FeFunction& y_h, const AugmentedFunction& ps,
                                                   const CorrectionCoefficients& c);

/// All intermediate results of one corrected solve.
struct ScmResult {
  BoundaryDatum datum;
  FeFunction y_h;
  AugmentedFunction ps;
  AugmentedFunction phi;
  CorrectionCoefficients coeffs;
  AugmentedFunction z_h;
};

struct ScmOptions {
  double mu = 0.0;  // 0 selects the default grading for ω
  double grading_radius = 0.1;
  /// Base size h of the graded boundary partition; 0 selects the mesh size.
  double grading_h = 0.0;
  double source_exponent = 0.0;
  AlphaOptions alpha;
};

/// Standard Galerkin solve with the projected datum: y_h = B_h u^h + y_0h.
FeFunction solve_standard(const FeSpace& space, const BoundaryDatum& datum, const ScalarField& f);

/// Runs the full correction pipeline for data (f, u).
ScmResult solve_scm(const FeSpace& space, const ScalarField& f, const ScalarField& u, const ScmOptions& opts);

GradedBoundaryRule default_graded_rule(const FeSpace& space, const ScmOptions& opts);

}  // namespace scmfem
