#include "scmfem/sparse.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace scmfem {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> triplets, bool symmetric) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.n_ = n;
  m.symmetric_ = symmetric;
  m.row_ptr_.assign(n + 1, 0);
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t i = 0;
  while (i < triplets.size()) {
    const Triplet& t = triplets[i];
    if (t.row >= n || t.col >= n) throw std::out_of_range("triplet outside matrix");
    double v = 0.0;
    std::size_t j = i;
    while (j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col) v += triplets[j++].value;
    m.cols_.push_back(t.col);
    m.values_.push_back(v);
    ++m.row_ptr_[t.row + 1];
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

double SparseMatrix::operator()(std::size_t i, std::size_t j) const {
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[static_cast<std::size_t>(it - cols_.begin())] : 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < n_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[cols_[k]];
    y[r] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

double SparseMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    double row = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) row += values_[k] * y[cols_[k]];
    s += x[r] * row;
  }
  return s;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r) d[r] = (*this)(r, r);
  return d;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> s(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s[r] += values_[k];
  }
  return s;
}

double SparseMatrix::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::int64_t> map, std::size_t new_size) const {
  SparseMatrix m;
  m.n_ = new_size;
  m.symmetric_ = symmetric_;
  m.row_ptr_.assign(new_size + 1, 0);
  // Rows are visited in increasing old index, so a monotone map keeps the
  // columns sorted.
  for (std::size_t r = 0; r < n_; ++r) {
    if (map[r] < 0) continue;
    const auto nr = static_cast<std::size_t>(map[r]);
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (map[cols_[k]] < 0) continue;
      m.cols_.push_back(static_cast<std::size_t>(map[cols_[k]]));
      m.values_.push_back(values_[k]);
      ++m.row_ptr_[nr + 1];
    }
  }
  for (std::size_t r = 0; r < new_size; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

CgResult cg_solve(const SparseMatrix& A, std::span<const double> b, const CgOptions& opts) {
  const std::size_t n = A.size();
  if (b.size() != n) throw std::invalid_argument("right-hand side size mismatch");
  const std::size_t max_it =
      opts.max_iterations ? opts.max_iterations
                          : static_cast<std::size_t>(std::ceil(20.0 * std::sqrt(static_cast<double>(n))));

  CgResult res;
  res.x.assign(n, 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return res;

  std::vector<double> inv_diag(n, 1.0);
  if (opts.jacobi) {
    const std::vector<double> d = A.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(d[i] > 0.0)) throw std::invalid_argument("non-positive diagonal entry in SPD solve");
      inv_diag[i] = 1.0 / d[i];
    }
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double rnorm = bnorm;

  for (std::size_t it = 1; it <= max_it; ++it) {
    A.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw ConvergenceError("matrix is not positive definite on the Krylov space", it, rnorm / bnorm);
    const double step = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += step * p[i];
      r[i] -= step * q[i];
    }
    rnorm = std::sqrt(dot(r, r));
    res.iterations = it;
    res.relative_residual = rnorm / bnorm;
    if (opts.energy_history) {
      // Ax = b - r, so ½xᵀAx - bᵀx = -½xᵀ(b + r).
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) e += res.x[i] * (b[i] + r[i]);
      opts.energy_history->push_back(-0.5 * e);
    }
    if (res.relative_residual <= opts.tol) return res;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw ConvergenceError(fmt::format("CG did not converge in {} iterations (relative residual {:.3e})", max_it,
                                     res.relative_residual),
                         max_it, res.relative_residual);
}

}  // namespace scmfem
