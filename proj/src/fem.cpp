#include "scmfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "scmfem/integration.hpp"

namespace scmfem {

namespace detail {

const TriRule& near_corner_rule(int order, int levels) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, TriRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({order, levels});
  if (it == cache.end()) it = cache.emplace(std::pair{order, levels}, composite_rule(tri_rule(order), levels)).first;
  return it->second;
}

}  // namespace detail

namespace {

constexpr double kMinArea = 1e-14;

// Gradients of the three barycentric coordinates and the element area.
struct P1Geometry {
  std::array<Point, 3> grad;
  double area;
};

P1Geometry p1_geometry(const Triangle& t) {
  const double area = signed_area(t);
  if (!(area > kMinArea)) {
    throw std::runtime_error(fmt::format("degenerate or inverted element (area {:.3e})", area));
  }
  P1Geometry g;
  g.area = area;
  for (int i = 0; i < 3; ++i) {
    const Point& pj = t[(i + 1) % 3];
    const Point& pk = t[(i + 2) % 3];
    g.grad[i] = {(pj.y - pk.y) / (2.0 * area), (pk.x - pj.x) / (2.0 * area)};
  }
  return g;
}

}  // namespace

FeFunction::FeFunction(MeshPtr mesh, std::vector<double> coeffs) : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
  if (!mesh_) throw std::invalid_argument("finite element function without a mesh");
  if (coeffs_.size() != mesh_->num_nodes()) {
    throw std::invalid_argument(
        fmt::format("{} coefficients for a mesh with {} nodes", coeffs_.size(), mesh_->num_nodes()));
  }
}

FeFunction FeFunction::zero(MeshPtr mesh) {
  const std::size_t n = mesh->num_nodes();
  return FeFunction(std::move(mesh), std::vector<double>(n, 0.0));
}

FeFunction FeFunction::interpolate(MeshPtr mesh, const ScalarField& f) {
  std::vector<double> c(mesh->num_nodes());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f(mesh->nodes()[i]);
  return FeFunction(std::move(mesh), std::move(c));
}

std::optional<double> FeFunction::value_at(Point p) const {
  constexpr double tol = 1e-12;
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const Triangle t = mesh_->triangle(e);
    const double a = signed_area(t);
    const std::array<double, 3> b{0.5 * cross(t[1] - p, t[2] - p) / a, 0.5 * cross(t[2] - p, t[0] - p) / a,
                                  0.5 * cross(t[0] - p, t[1] - p) / a};
    if (b[0] >= -tol && b[1] >= -tol && b[2] >= -tol) return value_in(e, b);
  }
  return std::nullopt;
}

void FeFunction::check_same_mesh(const FeFunction& o) const {
  if (mesh_ != o.mesh_) throw std::invalid_argument("finite element functions live on different meshes");
}

FeFunction& FeFunction::operator+=(const FeFunction& o) {
  check_same_mesh(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

FeFunction& FeFunction::operator-=(const FeFunction& o) {
  check_same_mesh(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FeFunction& FeFunction::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

SparseMatrix assemble_stiffness(const TriMesh& mesh) {
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const P1Geometry g = p1_geometry(mesh.triangle(e));
    const Element& el = mesh.elements()[e];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t.push_back({el[i], el[j], g.area * dot(g.grad[i], g.grad[j])});
    }
  }
  return SparseMatrix::from_triplets(mesh.num_nodes(), std::move(t), true);
}

SparseMatrix assemble_mass(const TriMesh& mesh) {
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double area = mesh.area(e);
    if (!(area > kMinArea)) throw std::runtime_error(fmt::format("degenerate or inverted element (area {:.3e})", area));
    const Element& el = mesh.elements()[e];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t.push_back({el[i], el[j], area / 12.0 * (i == j ? 2.0 : 1.0)});
    }
  }
  return SparseMatrix::from_triplets(mesh.num_nodes(), std::move(t), true);
}

std::vector<double> boundary_trace(const TriMesh& mesh, const ScalarField& f) {
  std::vector<double> g;
  g.reserve(mesh.boundary().size());
  for (Index n : mesh.boundary()) g.push_back(f(mesh.nodes()[n]));
  return g;
}

FeFunction lift_boundary(MeshPtr mesh, std::span<const double> g) {
  if (g.size() != mesh->boundary().size()) {
    throw std::invalid_argument(
        fmt::format("{} boundary values for {} boundary nodes", g.size(), mesh->boundary().size()));
  }
  std::vector<double> c(mesh->num_nodes(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) c[mesh->boundary()[k]] = g[k];
  return FeFunction(std::move(mesh), std::move(c));
}

std::vector<double> load_vector(const TriMesh& mesh, const ScalarField& f) {
  if (!f) return std::vector<double>(mesh.num_nodes(), 0.0);
  const TriRule& rule = tri_rule(5);
  std::vector<double> out(mesh.num_nodes(), 0.0);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const Triangle tri = mesh.triangle(e);
    const double area = std::abs(signed_area(tri));
    const Element& el = mesh.elements()[e];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double v = f(map_barycentric(tri, rule.points[q]));
      if (!std::isfinite(v)) throw QuadratureError("non-finite source term value");
      for (int k = 0; k < 3; ++k) out[el[k]] += rule.weights[q] * area * v * rule.points[q][k];
    }
  }
  return out;
}

DirichletSolver::DirichletSolver(MeshPtr mesh, std::shared_ptr<const SparseMatrix> stiffness)
    : mesh_(std::move(mesh)), stiffness_(std::move(stiffness)) {
  if (stiffness_->size() != mesh_->num_nodes()) throw std::invalid_argument("stiffness matrix does not match mesh");
  interior_map_.assign(mesh_->num_nodes(), -1);
  for (std::size_t i = 0; i < mesh_->num_nodes(); ++i) {
    if (!mesh_->is_boundary_node(static_cast<Index>(i))) {
      interior_map_[i] = static_cast<std::int64_t>(num_interior_++);
    }
  }
  interior_ = stiffness_->submatrix(interior_map_, num_interior_);
}

FeFunction DirichletSolver::solve_homogeneous(std::span<const double> rhs, const CgOptions& opts,
                                              SolveStats* stats) const {
  if (rhs.size() != mesh_->num_nodes()) throw std::invalid_argument("load vector size mismatch");
  std::vector<double> b(num_interior_);
  for (std::size_t i = 0; i < interior_map_.size(); ++i) {
    if (interior_map_[i] >= 0) b[static_cast<std::size_t>(interior_map_[i])] = rhs[i];
  }
  const CgResult res = cg_solve(interior_, b, opts);
  if (stats) *stats = {res.iterations, res.relative_residual};
  std::vector<double> c(mesh_->num_nodes(), 0.0);
  for (std::size_t i = 0; i < interior_map_.size(); ++i) {
    if (interior_map_[i] >= 0) c[i] = res.x[static_cast<std::size_t>(interior_map_[i])];
  }
  return FeFunction(mesh_, std::move(c));
}

FeFunction DirichletSolver::solve(std::span<const double> load, std::span<const double> g, const CgOptions& opts,
                                  SolveStats* stats) const {
  FeFunction lifted = lift_boundary(mesh_, g);
  const std::vector<double> a_lift = (*stiffness_) * std::span<const double>(lifted.coeffs());
  std::vector<double> rhs(mesh_->num_nodes());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = load[i] - a_lift[i];
  FeFunction y = solve_homogeneous(rhs, opts, stats);
  y += lifted;
  return y;
}

FeFunction prolongate(const FeFunction& coarse, MeshPtr fine) {
  const TriMesh& cm = *coarse.mesh();
  std::map<std::pair<double, double>, Index> index;
  for (std::size_t i = 0; i < fine->num_nodes(); ++i) {
    index.emplace(std::pair{fine->nodes()[i].x, fine->nodes()[i].y}, static_cast<Index>(i));
  }
  std::vector<double> c(fine->num_nodes(), std::numeric_limits<double>::quiet_NaN());
  auto set = [&](Point p, double v) {
    const auto it = index.find({p.x, p.y});
    if (it == index.end()) throw std::invalid_argument("fine mesh is not a uniform refinement of the coarse mesh");
    c[it->second] = v;
  };
  for (std::size_t e = 0; e < cm.num_elements(); ++e) {
    const Element& el = cm.elements()[e];
    for (int k = 0; k < 3; ++k) {
      const Index a = el[k];
      const Index b = el[(k + 1) % 3];
      set(cm.nodes()[a], coarse[a]);
      set(midpoint(cm.nodes()[a], cm.nodes()[b]), 0.5 * (coarse[a] + coarse[b]));
    }
  }
  for (double v : c) {
    if (std::isnan(v)) throw std::invalid_argument("fine mesh has nodes that are not coarse nodes or edge midpoints");
  }
  return FeFunction(std::move(fine), std::move(c));
}

FeFunction solve_dirichlet(MeshPtr mesh, std::span<const double> load, std::span<const double> g, double tol) {
  auto stiffness = std::make_shared<const SparseMatrix>(assemble_stiffness(*mesh));
  DirichletSolver solver(mesh, stiffness);
  CgOptions opts;
  opts.tol = tol;
  return solver.solve(load, g, opts);
}

}  // namespace scmfem
