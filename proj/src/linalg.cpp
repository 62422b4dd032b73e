#include "qdq/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "qdq/error.hpp"

namespace qdq {

namespace {

struct SvdFactors {
    Eigen::MatrixXcd u;
    Eigen::VectorXd s;
    Eigen::MatrixXcd v;
};

template <typename Solver>
SvdFactors factor(const Eigen::MatrixXcd& m) {
    Solver svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

// Sorted, finite, nonnegative, and carrying the whole Frobenius weight.
bool plausible(const SvdFactors& f, const Eigen::MatrixXcd& m) {
    const Eigen::VectorXd& s = f.s;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i]) || s[i] < 0.0) return false;
        if (i > 0 && s[i] > s[i - 1]) return false;
    }
    const double weight = m.squaredNorm();
    return std::abs(s.squaredNorm() - weight) <= 1e-10 * std::max(weight, 1.0);
}

// Blocks up to this size use one-sided Jacobi, which is accurate for
// degenerate spectra. Larger blocks use divide-and-conquer and fall back to
// Jacobi when the result fails the consistency check (Eigen 3.4.0's
// divide-and-conquer SVD can return wrong values on rank-deficient inputs).
constexpr Eigen::Index kJacobiMaxDim = 64;

SvdFactors robust_svd(const Eigen::MatrixXcd& m) {
    if (std::min(m.rows(), m.cols()) <= kJacobiMaxDim) return factor<Eigen::JacobiSVD<Eigen::MatrixXcd>>(m);
    SvdFactors f = factor<Eigen::BDCSVD<Eigen::MatrixXcd>>(m);
    if (!plausible(f, m)) f = factor<Eigen::JacobiSVD<Eigen::MatrixXcd>>(m);
    return f;
}

}  // namespace

TruncatedSvd truncated_svd(const Eigen::MatrixXcd& m, std::size_t chi_max, double trunc_tol) {
    if (chi_max < 1) throw DomainError("chi_max must be at least 1");
    if (trunc_tol < 0) throw DomainError("trunc_tol must be nonnegative");

    const SvdFactors svd = robust_svd(m);
    const Eigen::VectorXd& sv = svd.s;
    const Eigen::Index full = sv.size();
    const double s_max = full > 0 ? sv[0] : 0.0;
    const double rank_cut = kNumericalRankTol * s_max;
    const double tol_cut = trunc_tol * s_max;

    Eigen::Index numerical_rank = 0;
    while (numerical_rank < full && sv[numerical_rank] > rank_cut) ++numerical_rank;

    Eigen::Index keep = 0;
    while (keep < numerical_rank && static_cast<std::size_t>(keep) < chi_max && sv[keep] >= tol_cut) ++keep;
    keep = std::max<Eigen::Index>(keep, 1);

    TruncatedSvd out;
    out.truncated = keep < numerical_rank;
    for (Eigen::Index i = keep; i < full; ++i) out.discarded_weight += sv[i] * sv[i];
    out.u = svd.u.leftCols(keep);
    out.s = sv.head(keep);
    out.vh = svd.v.leftCols(keep).adjoint();
    return out;
}

}  // namespace qdq
