#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdq/tensor.hpp"

namespace qdq {

/// Tolerance used by the value-type invariant checks.
inline constexpr double kInvariantTol = 1e-9;

/**
 * Pure n-qubit state.
 *
 * Amplitude index x encodes the basis state |x_0 x_1 ... x_{n-1}>, qubit 0
 * being the most significant bit. Construction checks the length and that
 * the norm is 1 within kInvariantTol.
 */
class StateVector {
public:
    StateVector(std::size_t n_qubits, Eigen::VectorXcd amplitudes);

    /// |0...0>.
    static StateVector zero(std::size_t n_qubits);
    static StateVector basis(std::size_t n_qubits, std::size_t index);
    /// Divides by the norm first; throws NumericalError for a zero vector.
    static StateVector normalized(std::size_t n_qubits, Eigen::VectorXcd amplitudes);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t index) const { return amplitudes_[static_cast<Eigen::Index>(index)]; }

    /// |amplitude|^2 for every basis index.
    std::vector<double> probabilities() const;

    /// Copy with the first non-negligible amplitude made real and positive.
    StateVector canonical_phase() const;

private:
    std::size_t n_qubits_;
    Eigen::VectorXcd amplitudes_;
};

/// Mixed n-qubit state: Hermitian, unit trace, positive semidefinite (all within kInvariantTol).
class DensityMatrix {
public:
    DensityMatrix(std::size_t n_qubits, Eigen::MatrixXcd matrix);

    static DensityMatrix from_pure(const StateVector& psi);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    Complex operator()(std::size_t row, std::size_t col) const {
        return matrix_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

private:
    std::size_t n_qubits_;
    Eigen::MatrixXcd matrix_;
};

/**
 * Matrix product state.
 *
 * Core k is a rank-3 tensor labelled (bond_label(k), site_label(k),
 * bond_label(k+1)) with dims (left, 2, right); the outer bonds have size 1.
 */
class MatrixProductState {
public:
    explicit MatrixProductState(std::vector<Tensor> cores);

    /// |0...0> with all bonds of size 1.
    static MatrixProductState zero(std::size_t n_qubits);

    std::size_t n_qubits() const noexcept { return cores_.size(); }
    const std::vector<Tensor>& cores() const noexcept { return cores_; }
    const Tensor& core(std::size_t k) const { return cores_.at(k); }

    /// Interior bond sizes, n-1 entries.
    std::vector<std::size_t> bond_dims() const;
    std::size_t max_bond_dim() const;
    /// Total stored elements, a proxy for how compact the representation is.
    std::size_t element_count() const;

    static std::string site_label(std::size_t k);
    static std::string bond_label(std::size_t k);

private:
    std::vector<Tensor> cores_;
};

/// Squared norm <psi|psi> of an MPS computed with transfer matrices.
double mps_norm_squared(const MatrixProductState& mps);
/// Same, over raw cores that need not be normalized.
double mps_norm_squared(std::span<const Tensor> cores);

/// Dense 2^n x 2^n matrix checks shared by several modules.
bool is_hermitian(const Eigen::MatrixXcd& m, double tol);
/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const Eigen::MatrixXcd& m);

/**
 * Left-to-right SVD factorization.
 *
 * At each cut keeps at most chi_max singular values and drops those below
 * trunc_tol * s_max (values below 1e-12 * s_max are always treated as zero).
 * The result is renormalized to unit norm.
 */
MatrixProductState mps_from_statevector(const StateVector& sv, std::size_t chi_max, double trunc_tol);

/// Contracts the chain with the tensor-network engine.
StateVector statevector_from_mps(const MatrixProductState& mps);

/// <psi|rho|psi>. Throws NumericalError if the imaginary part exceeds 1e-9.
double fidelity(const DensityMatrix& rho, const StateVector& psi);

/// <a|b>.
Complex inner_product(const StateVector& a, const StateVector& b);

/// |<a|b>| >= 1 - eps; insensitive to global phase.
bool equivalent(const StateVector& a, const StateVector& b, double eps);

/// sum_i p_i |psi_i><psi_i|. Probabilities must be nonnegative and sum to 1 within 1e-9.
DensityMatrix density_from_mixture(const std::vector<std::pair<double, StateVector>>& components);

}  // namespace qdq
