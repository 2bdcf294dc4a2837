#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <variant>

namespace drlr {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;
using SparseColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;

// Linear operator backed by either a dense or a compressed sparse matrix.
// Solvers only touch the matrix through products and single-column access,
// so both layouts share one interface.
class DataMatrix {
 public:
  explicit DataMatrix(DenseMatrix m);
  explicit DataMatrix(SparseColMatrix m);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseColMatrix>(m_); }

  // A x
  Vector apply(const Vector& x) const;
  // A^T y
  Vector apply_transpose(const Vector& y) const;

  double column_dot(Index j, const Vector& r) const;
  // r += alpha * A e_j
  void column_axpy(Index j, double alpha, Vector& r) const;

  // ||A e_j||^2 for every column.
  const Vector& column_sq_norms() const { return col_sq_norms_; }

  DenseMatrix to_dense() const;

 private:
  std::variant<DenseMatrix, SparseColMatrix> m_;
  Vector col_sq_norms_;
};

inline double norm_inf(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace drlr
