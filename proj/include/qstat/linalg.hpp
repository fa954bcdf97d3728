#pragma once

#include <Eigen/Dense>

namespace qstat {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

namespace detail {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace detail
}  // namespace qstat
