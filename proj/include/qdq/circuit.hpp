#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qdq {

using Complex = std::complex<double>;

enum class GateKind { X, Y, Z, H, T, CNOT, CUSTOM };

std::string_view to_string(GateKind kind);

/// Number of targets a named kind acts on (CUSTOM has no fixed arity).
std::size_t arity(GateKind kind);

/**
 * Canonical matrix of a named gate.
 *
 * X, Y, Z are the Pauli matrices, H = [[1,1],[1,-1]]/sqrt(2),
 * T = diag(1, e^{i pi/4}). CNOT is 4x4 in the basis |control target>.
 */
Eigen::MatrixXcd gate_matrix(GateKind kind);

/// Max-norm deviation of U^dagger U and U U^dagger from the identity is below tol.
bool validate_unitary(const Eigen::MatrixXcd& m, double tol);

/**
 * One gate application.
 *
 * The matrix acts on the targets in listed order: the first target is the
 * most significant bit of the matrix row/column index. For CNOT the first
 * target is the control.
 */
class Gate {
public:
    Gate(GateKind kind, std::vector<std::size_t> targets);
    static Gate custom(Eigen::MatrixXcd matrix, std::vector<std::size_t> targets, std::string name = "custom");

    GateKind kind() const noexcept { return kind_; }
    const std::vector<std::size_t>& targets() const noexcept { return targets_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Gate& a, const Gate& b) {
        return a.kind_ == b.kind_ && a.targets_ == b.targets_ && a.matrix_ == b.matrix_;
    }

private:
    Gate(GateKind kind, std::vector<std::size_t> targets, Eigen::MatrixXcd matrix, std::string name);

    GateKind kind_;
    std::vector<std::size_t> targets_;
    Eigen::MatrixXcd matrix_;
    std::string name_;
};

class Circuit {
public:
    explicit Circuit(std::size_t n_qubits);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }
    /// Empty means every qubit is measured, in index order.
    const std::vector<std::size_t>& measured_qubits() const noexcept { return measured_; }
    /// measured_qubits(), or 0..n-1 when none were listed.
    std::vector<std::size_t> effective_measured_qubits() const;

    Circuit& add(Gate gate);
    Circuit& add(GateKind kind, std::vector<std::size_t> targets) { return add(Gate(kind, std::move(targets))); }
    Circuit& measure(std::size_t qubit);

    friend bool operator==(const Circuit& a, const Circuit& b) {
        return a.n_qubits_ == b.n_qubits_ && a.gates_ == b.gates_ && a.measured_ == b.measured_;
    }

private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
    std::vector<std::size_t> measured_;
};

/**
 * Parses the line-oriented circuit format:
 *
 *     # comment
 *     qubits 3
 *     h 0
 *     cnot 0 1
 *     measure 2
 *
 * Mnemonics (x y z h t cnot measure qubits) are case-insensitive. Errors are
 * reported as ParseError with a 1-based line number.
 */
Circuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit. CUSTOM gates have no text form and raise DomainError.
std::string serialize_circuit(const Circuit& circuit);

inline constexpr std::size_t kMaxUnitaryQubits = 10;

/// Full 2^n x 2^n unitary of the circuit, gates applied in order. Refuses n > 10.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);

/// Dense embedding of a k-qubit operator on `targets` into n-qubit space.
Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op, const std::vector<std::size_t>& targets,
                                std::size_t n_qubits);

}  // namespace qdq
