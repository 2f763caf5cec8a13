#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "qes/numerics.hpp"

namespace qes {

/// Square tridiagonal matrix stored as three diagonals:
///   sub[i]   = T(i+1, i),  i = 0..dim-2
///   main[i]  = T(i, i),    i = 0..dim-1
///   super[i] = T(i, i+1),  i = 0..dim-2
class TridiagonalOperator {
 public:
  explicit TridiagonalOperator(std::size_t dim = 1);
  TridiagonalOperator(std::vector<Complex> sub, std::vector<Complex> main,
                      std::vector<Complex> super);

  std::size_t dim() const { return main_.size(); }
  const std::vector<Complex>& sub() const { return sub_; }
  const std::vector<Complex>& main() const { return main_; }
  const std::vector<Complex>& super() const { return super_; }
  std::vector<Complex>& sub() { return sub_; }
  std::vector<Complex>& main() { return main_; }
  std::vector<Complex>& super() { return super_; }

  /// Entry (i, j); zero outside the band.
  Complex operator()(std::size_t i, std::size_t j) const;

  TridiagonalOperator transposed() const;
  /// Conjugate transpose.
  TridiagonalOperator adjoint() const;
  std::vector<Complex> apply(std::span<const Complex> v) const;
  Eigen::MatrixXcd to_dense() const;
  double max_abs_entry() const;
  bool is_finite() const;

  static TridiagonalOperator from_dense(const Eigen::MatrixXcd& m);

 private:
  std::vector<Complex> sub_, main_, super_;
};

double max_abs_difference(const TridiagonalOperator& a, const TridiagonalOperator& b);

}  // namespace qes
