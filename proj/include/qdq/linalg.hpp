#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace qdq {

using RowMajorMatrixXcd = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Singular values below this fraction of the largest are numerical zeros.
inline constexpr double kNumericalRankTol = 1e-12;

struct TruncatedSvd {
    Eigen::MatrixXcd u;       // rows x kept
    Eigen::VectorXd s;        // kept, descending
    Eigen::MatrixXcd vh;      // kept x cols
    bool truncated = false;   // a nonzero singular value was dropped
    double discarded_weight = 0.0;  // sum of squares of dropped values
};

/**
 * Thin SVD keeping at most chi_max values, discarding those below
 * trunc_tol * s_max and numerical zeros. At least one value is kept.
 */
TruncatedSvd truncated_svd(const Eigen::MatrixXcd& m, std::size_t chi_max, double trunc_tol);

}  // namespace qdq
