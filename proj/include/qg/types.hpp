#pragma once

#include <complex>
#include <Eigen/Core>

namespace qg {

using Real = double;
using Complex = std::complex<Real>;

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr Real pi = 3.14159265358979323846;
inline constexpr Complex I{0.0, 1.0};

}  // namespace qg
