#pragma once

#include <span>
#include <vector>

#include "scmfem/geometry.hpp"
#include "scmfem/mesh.hpp"
#include "scmfem/quadrature.hpp"
#include "scmfem/sparse.hpp"

namespace scmfem {

/// Boundary datum u together with its L²(Γ) projection u^h onto the
/// continuous piecewise linear functions on the boundary polyline.
struct BoundaryDatum {
  ScalarField source;
  /// Nodal values of u^h in boundary polyline order.
  std::vector<double> projected;
  /// (u, χ_i)_Γ for every boundary hat χ_i.
  std::vector<double> rhs;
  /// ‖u‖_{L²(Γ)}, NaN when not requested.
  double l2_norm_estimate = 0.0;
};

/// Consistent P1 mass matrix of the closed boundary polyline, indexed by
/// boundary position. Each edge of length L adds (L/6)[[2,1],[1,2]].
SparseMatrix boundary_mass(const TriMesh& mesh);

/// (u, χ_i)_Γ with two Gauss points per segment of the graded partition.
/// Edges that are kept whole use the same two-point rule, which is exact for
/// piecewise linear u.
std::vector<double> projection_rhs(const ScalarField& u, const TriMesh& mesh, const GradedBoundaryRule& graded);

struct ProjectionOptions {
  double tol = 1e-14;
  /// Leading exponent of u at the corner, used for the norm estimate.
  double source_exponent = 0.0;
  bool estimate_norm = true;
  CornerRuleOptions corner;
};

/// Solves M_Γ u^h = b. An empty u gives u^h = 0.
BoundaryDatum l2_project_boundary(const ScalarField& u, const TriMesh& mesh, const GradedBoundaryRule& graded,
                                  const ProjectionOptions& opts = {});

/// ‖u‖_{L²(Γ)}: dyadic corner rule on the two edges at the corner (integrand
/// ~ r^(2·source_exponent)), 10-point Gauss on the rest.
double boundary_l2_norm(const ScalarField& u, const TriMesh& mesh, double source_exponent,
                        const CornerRuleOptions& opts = {});

/// sqrt(gᵀ M_Γ g) for nodal boundary values g.
double boundary_l2_norm(const TriMesh& mesh, std::span<const double> g);

/// Piecewise linear boundary function with nodal values g, usable as a
/// pointwise source. Points off the boundary evaluate to NaN.
ScalarField boundary_function(const TriMesh& mesh, std::vector<double> g);

/// ‖u - g‖_{L²(Γ)} evaluated with the graded partition (two points per
/// segment) for nodal boundary values g.
double boundary_l2_error(const ScalarField& u, const TriMesh& mesh, std::span<const double> g,
                         const GradedBoundaryRule& graded);

}  // namespace scmfem
