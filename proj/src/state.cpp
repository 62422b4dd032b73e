#include "qdq/state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "qdq/error.hpp"
#include "qdq/linalg.hpp"

namespace qdq {

namespace {

std::size_t checked_dimension(std::size_t n_qubits) {
    if (n_qubits == 0) throw InvariantViolation("a state needs at least one qubit");
    if (n_qubits > 30) throw ResourceLimit("dense state of " + std::to_string(n_qubits) + " qubits");
    return std::size_t{1} << n_qubits;
}

// Global-phase allowance for comparing overlaps against exactly 1.
constexpr double kOverlapSlack = 1e-12;

}  // namespace

// --- StateVector ---

StateVector::StateVector(std::size_t n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    const auto dim = checked_dimension(n_qubits);
    if (static_cast<std::size_t>(amplitudes_.size()) != dim) {
        throw InvariantViolation("state of " + std::to_string(n_qubits) + " qubits needs " + std::to_string(dim) +
                                 " amplitudes, got " + std::to_string(amplitudes_.size()));
    }
    const double norm2 = amplitudes_.squaredNorm();
    if (!(std::abs(norm2 - 1.0) <= kInvariantTol)) {
        throw InvariantViolation("state vector is not normalized (norm^2 = " + std::to_string(norm2) + ")");
    }
}

StateVector StateVector::zero(std::size_t n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(std::size_t n_qubits, std::size_t index) {
    const auto dim = checked_dimension(n_qubits);
    if (index >= dim) throw DomainError("basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(n_qubits, std::move(v));
}

StateVector StateVector::normalized(std::size_t n_qubits, Eigen::VectorXcd amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("cannot normalize a zero or non-finite vector");
    amplitudes /= norm;
    return StateVector(n_qubits, std::move(amplitudes));
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(dimension());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm((*this)[i]);
    return p;
}

StateVector StateVector::canonical_phase() const {
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
        const double mag = std::abs(amplitudes_[i]);
        if (mag > 1e-12) {
            const Complex phase = std::conj(amplitudes_[i]) / mag;
            return StateVector(n_qubits_, amplitudes_ * phase);
        }
    }
    return *this;
}

// --- DensityMatrix ---

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(std::size_t n_qubits, Eigen::MatrixXcd matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    const auto dim = static_cast<Eigen::Index>(checked_dimension(n_qubits));
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw InvariantViolation("density matrix of " + std::to_string(n_qubits) + " qubits must be " +
                                 std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!is_hermitian(matrix_, kInvariantTol)) throw InvariantViolation("density matrix is not Hermitian");
    const Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > kInvariantTol) {
        throw InvariantViolation("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    if (min_eigenvalue(matrix_) < -kInvariantTol) {
        throw InvariantViolation("density matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    return DensityMatrix(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
}

// --- MatrixProductState ---

std::string MatrixProductState::site_label(std::size_t k) { return "q" + std::to_string(k); }
std::string MatrixProductState::bond_label(std::size_t k) { return "b" + std::to_string(k); }

MatrixProductState::MatrixProductState(std::vector<Tensor> cores) : cores_(std::move(cores)) {
    if (cores_.empty()) throw InvariantViolation("MPS needs at least one core");
    const std::size_t n = cores_.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Tensor& c = cores_[k];
        const std::vector<std::string> expected{bond_label(k), site_label(k), bond_label(k + 1)};
        if (c.labels() != expected) throw InvariantViolation("MPS core " + std::to_string(k) + " has wrong labels");
        if (c.dims()[1] != 2) throw InvariantViolation("MPS core " + std::to_string(k) + " site dimension is not 2");
        if (k == 0 && c.dims()[0] != 1) throw InvariantViolation("MPS left boundary bond must be 1");
        if (k + 1 == n && c.dims()[2] != 1) throw InvariantViolation("MPS right boundary bond must be 1");
        if (k + 1 < n && c.dims()[2] != cores_[k + 1].dims()[0]) {
            throw InvariantViolation("MPS bond " + std::to_string(k + 1) + " sizes do not match");
        }
    }
    const double norm2 = mps_norm_squared(std::span<const Tensor>(cores_));
    if (!(std::abs(norm2 - 1.0) <= kInvariantTol)) {
        throw InvariantViolation("MPS is not normalized (norm^2 = " + std::to_string(norm2) + ")");
    }
}

MatrixProductState MatrixProductState::zero(std::size_t n_qubits) {
    if (n_qubits == 0) throw InvariantViolation("MPS needs at least one qubit");
    std::vector<Tensor> cores;
    cores.reserve(n_qubits);
    for (std::size_t k = 0; k < n_qubits; ++k) {
        cores.emplace_back(std::vector<std::string>{bond_label(k), site_label(k), bond_label(k + 1)},
                           std::vector<std::size_t>{1, 2, 1}, std::vector<Complex>{1.0, 0.0});
    }
    return MatrixProductState(std::move(cores));
}

std::vector<std::size_t> MatrixProductState::bond_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k + 1 < cores_.size(); ++k) out.push_back(cores_[k].dims()[2]);
    return out;
}

std::size_t MatrixProductState::max_bond_dim() const {
    std::size_t m = 1;
    for (auto d : bond_dims()) m = std::max(m, d);
    return m;
}

std::size_t MatrixProductState::element_count() const {
    std::size_t total = 0;
    for (const auto& c : cores_) total += c.size();
    return total;
}

double mps_norm_squared(const MatrixProductState& mps) { return mps_norm_squared(std::span<const Tensor>(mps.cores())); }

double mps_norm_squared(std::span<const Tensor> cores) {
    Eigen::MatrixXcd env = Eigen::MatrixXcd::Ones(1, 1);
    for (const auto& core : cores) {
        const auto l = static_cast<Eigen::Index>(core.dims()[0]);
        const auto r = static_cast<Eigen::Index>(core.dims()[2]);
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(r, r);
        for (Eigen::Index p = 0; p < 2; ++p) {
            // Slice A_p(l, r) out of the (l, 2, r) row-major block.
            Eigen::MatrixXcd a(l, r);
            for (Eigen::Index i = 0; i < l; ++i)
                for (Eigen::Index j = 0; j < r; ++j) a(i, j) = core.data()[static_cast<std::size_t>((i * 2 + p) * r + j)];
            next.noalias() += a.adjoint() * env * a;
        }
        env = std::move(next);
    }
    return env(0, 0).real();
}

MatrixProductState mps_from_statevector(const StateVector& sv, std::size_t chi_max, double trunc_tol) {
    if (chi_max < 1) throw DomainError("chi_max must be at least 1");
    if (trunc_tol < 0) throw DomainError("trunc_tol must be nonnegative");
    const std::size_t n = sv.n_qubits();

    std::vector<Tensor> cores;
    cores.reserve(n);
    std::vector<Complex> rest(sv.amplitudes().data(), sv.amplitudes().data() + sv.amplitudes().size());
    std::size_t chi_left = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto rows = static_cast<Eigen::Index>(chi_left * 2);
        const auto cols = static_cast<Eigen::Index>(rest.size()) / rows;
        const Eigen::MatrixXcd m = Eigen::Map<const RowMajorMatrixXcd>(rest.data(), rows, cols);
        const TruncatedSvd svd = truncated_svd(m, chi_max, trunc_tol);
        const auto kept = static_cast<std::size_t>(svd.s.size());

        const RowMajorMatrixXcd u = svd.u;
        cores.emplace_back(std::vector<std::string>{MatrixProductState::bond_label(k), MatrixProductState::site_label(k),
                                                    MatrixProductState::bond_label(k + 1)},
                           std::vector<std::size_t>{chi_left, 2, kept},
                           std::vector<Complex>(u.data(), u.data() + u.size()));

        const RowMajorMatrixXcd remainder = svd.s.cast<Complex>().asDiagonal() * svd.vh;
        rest.assign(remainder.data(), remainder.data() + remainder.size());
        chi_left = kept;
    }

    // Left cores are isometries, so the whole norm sits in the last core.
    double norm = 0.0;
    for (const auto& v : rest) norm += std::norm(v);
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw NumericalError("MPS factorization lost the whole state");
    for (auto& v : rest) v /= norm;
    cores.emplace_back(std::vector<std::string>{MatrixProductState::bond_label(n - 1),
                                                MatrixProductState::site_label(n - 1),
                                                MatrixProductState::bond_label(n)},
                       std::vector<std::size_t>{chi_left, 2, 1}, std::move(rest));
    return MatrixProductState(std::move(cores));
}

StateVector statevector_from_mps(const MatrixProductState& mps) {
    const std::span<const Tensor> network(mps.cores());
    // Free labels come back as (b0, q0, ..., q_{n-1}, b_n) and both outer bonds have size 1.
    const Tensor full = contract_network(network, linear_plan(network));
    Eigen::VectorXcd amps = Eigen::Map<const Eigen::VectorXcd>(full.data().data(), static_cast<Eigen::Index>(full.size()));
    return StateVector(mps.n_qubits(), std::move(amps));
}

// --- Comparisons ---

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
    if (rho.n_qubits() != psi.n_qubits()) throw DomainError("fidelity: qubit counts differ");
    const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
    if (std::abs(f.imag()) >= 1e-9) throw NumericalError("fidelity has a non-negligible imaginary part");
    return std::clamp(f.real(), 0.0, 1.0);
}

Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) throw DomainError("inner product: qubit counts differ");
    return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

bool equivalent(const StateVector& a, const StateVector& b, double eps) {
    if (eps < 0) throw DomainError("equivalence tolerance must be nonnegative");
    const double overlap = std::abs(inner_product(a, b)) / (a.amplitudes().norm() * b.amplitudes().norm());
    return overlap >= 1.0 - eps - kOverlapSlack;
}

DensityMatrix density_from_mixture(const std::vector<std::pair<double, StateVector>>& components) {
    if (components.empty()) throw DomainError("mixture needs at least one component");
    const std::size_t n = components.front().second.n_qubits();
    double total = 0.0;
    for (const auto& [p, psi] : components) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("mixture probabilities must be nonnegative");
        if (psi.n_qubits() != n) throw DomainError("mixture components have different qubit counts");
        total += p;
    }
    if (std::abs(total - 1.0) > kInvariantTol) throw DomainError("mixture probabilities do not sum to 1");

    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [p, psi] : components) rho.noalias() += p * (psi.amplitudes() * psi.amplitudes().adjoint());
    return DensityMatrix(n, std::move(rho));
}

}  // namespace qdq
