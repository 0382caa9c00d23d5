#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "scmfem/geometry.hpp"
#include "scmfem/mesh.hpp"
#include "scmfem/quadrature.hpp"
#include "scmfem/sparse.hpp"

namespace scmfem {

using MeshPtr = std::shared_ptr<const TriMesh>;

/// Continuous piecewise linear function given by its nodal values.
class FeFunction {
 public:
  FeFunction() = default;
  FeFunction(MeshPtr mesh, std::vector<double> coeffs);
  static FeFunction zero(MeshPtr mesh);
  /// Nodal interpolant of f.
  static FeFunction interpolate(MeshPtr mesh, const ScalarField& f);

  const MeshPtr& mesh() const { return mesh_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }

  double value_in(std::size_t element, const std::array<double, 3>& bary) const {
    const Element& el = mesh_->elements()[element];
    return bary[0] * coeffs_[el[0]] + bary[1] * coeffs_[el[1]] + bary[2] * coeffs_[el[2]];
  }

  /// Value at an arbitrary point (linear search for the containing element);
  /// nullopt outside the mesh.
  std::optional<double> value_at(Point p) const;

  FeFunction& operator+=(const FeFunction& o);
  FeFunction& operator-=(const FeFunction& o);
  FeFunction& operator*=(double s);
  friend FeFunction operator+(FeFunction a, const FeFunction& b) { return a += b; }
  friend FeFunction operator-(FeFunction a, const FeFunction& b) { return a -= b; }
  friend FeFunction operator*(double s, FeFunction a) { return a *= s; }

 private:
  void check_same_mesh(const FeFunction& o) const;

  MeshPtr mesh_;
  std::vector<double> coeffs_;
};

/// Throws std::runtime_error on an element with |area| < 1e-14.
SparseMatrix assemble_stiffness(const TriMesh& mesh);
SparseMatrix assemble_mass(const TriMesh& mesh);

/// Nodal values of f at the boundary nodes, in boundary polyline order.
std::vector<double> boundary_trace(const TriMesh& mesh, const ScalarField& f);

/// B_h g: the boundary nodes carry g (polyline order), interior nodes 0.
FeFunction lift_boundary(MeshPtr mesh, std::span<const double> g);

/// (f, φ_i) for every node with the order-5 rule; empty f gives zeros.
std::vector<double> load_vector(const TriMesh& mesh, const ScalarField& f);

/// Dirichlet problems on one mesh: the interior block of the stiffness matrix
/// is extracted once and reused for every solve.
class DirichletSolver {
 public:
  DirichletSolver(MeshPtr mesh, std::shared_ptr<const SparseMatrix> stiffness);

  /// Galerkin solution with boundary values g and load (f, φ_i): boundary
  /// nodes take g exactly, the interior block is solved by CG with the
  /// load corrected by the lifted data.
  FeFunction solve(std::span<const double> load, std::span<const double> g, const CgOptions& opts = {},
                   SolveStats* stats = nullptr) const;

  /// Function in Y_0h solving A_II x = rhs_I (rhs is indexed by mesh node).
  FeFunction solve_homogeneous(std::span<const double> rhs, const CgOptions& opts = {},
                               SolveStats* stats = nullptr) const;

  std::size_t num_interior() const { return num_interior_; }
  const SparseMatrix& interior_block() const { return interior_; }
  const SparseMatrix& stiffness() const { return *stiffness_; }
  const MeshPtr& mesh() const { return mesh_; }

 private:
  MeshPtr mesh_;
  std::shared_ptr<const SparseMatrix> stiffness_;
  std::vector<std::int64_t> interior_map_;
  std::size_t num_interior_ = 0;
  SparseMatrix interior_;
};

/// Interpolates a function from a coarse mesh onto one uniform refinement of
/// it (nodes are matched by exact coordinates). Throws std::invalid_argument
/// if fine is not a refinement of coarse.mesh().
FeFunction prolongate(const FeFunction& coarse, MeshPtr fine);

/// Convenience wrapper: assembles and solves once.
FeFunction solve_dirichlet(MeshPtr mesh, std::span<const double> load, std::span<const double> g,
                           double tol = 1e-12);

}  // namespace scmfem
