#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scmfem {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Square matrix in compressed row storage.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Duplicate entries are summed. Column indices end up sorted per row.
  static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets, bool symmetric);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  bool symmetric() const { return symmetric_; }
  const std::vector<std::size_t>& row_offsets() const { return row_ptr_; }
  const std::vector<std::size_t>& columns() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j), zero when not stored.
  double operator()(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  /// xᵀ A y.
  double bilinear(std::span<const double> x, std::span<const double> y) const;
  std::vector<double> diagonal() const;
  std::vector<double> row_sums() const;
  double sum() const;

  /// Keeps rows and columns i with map[i] >= 0, renumbered to map[i].
  SparseMatrix submatrix(std::span<const std::int64_t> map, std::size_t new_size) const;

 private:
  std::size_t n_ = 0;
  bool symmetric_ = false;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  std::size_t iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

struct CgOptions {
  double tol = 1e-12;
  /// 0 selects 20·√n.
  std::size_t max_iterations = 0;
  bool jacobi = true;
  /// When set, receives ½xᵀAx - bᵀx after every iteration.
  std::vector<double>* energy_history = nullptr;
};

struct SolveStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients for SPD A, stopping at
/// ‖b - Ax‖ <= tol ‖b‖. Throws ConvergenceError at the iteration cap.
CgResult cg_solve(const SparseMatrix& A, std::span<const double> b, const CgOptions& opts = {});

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace scmfem
