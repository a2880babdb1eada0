// types.hpp - shared scalar/matrix aliases and small matrix helpers
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace balmet {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// Complex dimension of the base (P^1 throughout) and total volume of omega.
inline constexpr int kDimension = 1;
inline constexpr double kVolume = 1.0;

inline Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

// Largest |eigenvalue| of a Hermitian matrix.
inline double herm_spectral_norm(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double herm_min_eigenvalue(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// exp(A) for Hermitian A via eigendecomposition.
inline Mat herm_exp(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
           es.eigenvectors().adjoint();
}

// log(A) for Hermitian positive definite A.
inline Mat herm_log(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    return es.eigenvectors() * es.eigenvalues().array().log().matrix().asDiagonal() *
           es.eigenvectors().adjoint();
}

}  // namespace balmet
