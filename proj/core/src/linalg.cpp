#include "drlr/linalg.hpp"

#include <utility>

namespace drlr {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

DataMatrix::DataMatrix(DenseMatrix m) : m_(std::move(m)) {
  const auto& d = std::get<DenseMatrix>(m_);
  col_sq_norms_ = d.colwise().squaredNorm().transpose();
}

DataMatrix::DataMatrix(SparseColMatrix m) : m_(std::move(m)) {
  auto& s = std::get<SparseColMatrix>(m_);
  s.makeCompressed();
  col_sq_norms_ = Vector::Zero(s.cols());
  for (Index j = 0; j < s.outerSize(); ++j) {
    for (SparseColMatrix::InnerIterator it(s, j); it; ++it) {
      col_sq_norms_[j] += it.value() * it.value();
    }
  }
}

Index DataMatrix::rows() const {
  return std::visit([](const auto& m) { return m.rows(); }, m_);
}

Index DataMatrix::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, m_);
}

Vector DataMatrix::apply(const Vector& x) const {
  return std::visit([&](const auto& m) -> Vector { return m * x; }, m_);
}

Vector DataMatrix::apply_transpose(const Vector& y) const {
  return std::visit([&](const auto& m) -> Vector { return m.transpose() * y; }, m_);
}

double DataMatrix::column_dot(Index j, const Vector& r) const {
  return std::visit(Overloaded{
                        [&](const DenseMatrix& m) { return m.col(j).dot(r); },
                        [&](const SparseColMatrix& m) {
                          double acc = 0.0;
                          for (SparseColMatrix::InnerIterator it(m, j); it; ++it) {
                            acc += it.value() * r[it.index()];
                          }
                          return acc;
                        },
                    },
                    m_);
}

void DataMatrix::column_axpy(Index j, double alpha, Vector& r) const {
  std::visit(Overloaded{
                 [&](const DenseMatrix& m) { r.noalias() += alpha * m.col(j); },
                 [&](const SparseColMatrix& m) {
                   for (SparseColMatrix::InnerIterator it(m, j); it; ++it) {
                     r[it.index()] += alpha * it.value();
                   }
                 },
             },
             m_);
}

DenseMatrix DataMatrix::to_dense() const {
  return std::visit(Overloaded{
                        [](const DenseMatrix& m) -> DenseMatrix { return m; },
                        [](const SparseColMatrix& m) -> DenseMatrix { return DenseMatrix(m); },
                    },
                    m_);
}

}  // namespace drlr
