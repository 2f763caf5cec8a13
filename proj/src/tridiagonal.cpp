#include "qes/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

namespace qes {

TridiagonalOperator::TridiagonalOperator(std::size_t dim)
    : sub_(dim > 0 ? dim - 1 : 0), main_(dim), super_(dim > 0 ? dim - 1 : 0) {
  if (dim == 0) fail(ErrorKind::InvalidParameter, "tridiagonal dimension must be positive");
}

TridiagonalOperator::TridiagonalOperator(std::vector<Complex> sub, std::vector<Complex> main,
                                         std::vector<Complex> super)
    : sub_(std::move(sub)), main_(std::move(main)), super_(std::move(super)) {
  if (main_.empty()) fail(ErrorKind::InvalidParameter, "tridiagonal dimension must be positive");
  if (sub_.size() + 1 != main_.size() || super_.size() + 1 != main_.size()) {
    fail(ErrorKind::LengthMismatch, "off-diagonals must have length dim-1");
  }
}

Complex TridiagonalOperator::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return main_[i];
  if (i == j + 1) return sub_[j];
  if (j == i + 1) return super_[i];
  return 0.0;
}

TridiagonalOperator TridiagonalOperator::transposed() const {
  return TridiagonalOperator(super_, main_, sub_);
}

TridiagonalOperator TridiagonalOperator::adjoint() const {
  auto conj_all = [](std::vector<Complex> v) {
    for (auto& x : v) x = std::conj(x);
    return v;
  };
  return TridiagonalOperator(conj_all(super_), conj_all(main_), conj_all(sub_));
}

std::vector<Complex> TridiagonalOperator::apply(std::span<const Complex> v) const {
  const std::size_t n = dim();
  if (v.size() != n) fail(ErrorKind::LengthMismatch, "vector length differs from dimension");
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc = main_[i] * v[i];
    if (i > 0) acc += sub_[i - 1] * v[i - 1];
    if (i + 1 < n) acc += super_[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

Eigen::MatrixXcd TridiagonalOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = main_[i];
    if (i + 1 < n) {
      m(i + 1, i) = sub_[i];
      m(i, i + 1) = super_[i];
    }
  }
  return m;
}

TridiagonalOperator TridiagonalOperator::from_dense(const Eigen::MatrixXcd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  TridiagonalOperator t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.main_[i] = m(i, i);
    if (i + 1 < n) {
      t.sub_[i] = m(i + 1, i);
      t.super_[i] = m(i, i + 1);
    }
  }
  return t;
}

double TridiagonalOperator::max_abs_entry() const {
  double m = 0.0;
  for (const auto* d : {&sub_, &main_, &super_}) {
    for (Complex x : *d) m = std::max(m, std::abs(x));
  }
  return m;
}

bool TridiagonalOperator::is_finite() const {
  for (const auto* d : {&sub_, &main_, &super_}) {
    for (Complex x : *d) {
      if (!qes::is_finite(x)) return false;
    }
  }
  return true;
}

double max_abs_difference(const TridiagonalOperator& a, const TridiagonalOperator& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::LengthMismatch, "operators differ in dimension");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    m = std::max(m, std::abs(a.main()[i] - b.main()[i]));
    if (i + 1 < a.dim()) {
      m = std::max(m, std::abs(a.sub()[i] - b.sub()[i]));
      m = std::max(m, std::abs(a.super()[i] - b.super()[i]));
    }
  }
  return m;
}

}  // namespace qes
