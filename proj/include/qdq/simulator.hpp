#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdq/circuit.hpp"
#include "qdq/rng.hpp"
#include "qdq/state.hpp"

namespace qdq {

enum class Backend { StateVector, Mps };

std::string_view to_string(Backend backend);
/// "statevector" or "mps"; throws DomainError otherwise.
Backend parse_backend(std::string_view name);

inline constexpr std::size_t kMaxDenseQubits = 20;
inline constexpr std::size_t kMaxMpsQubits = 64;
inline constexpr std::size_t kMaxOutcomeBits = 20;

struct SimOptions {
    /// Defaults to 2^floor(n/2), which makes the MPS backend exact.
    std::optional<std::size_t> chi_max;
    double trunc_tol = 0.0;
};

std::size_t exact_chi(std::size_t n_qubits);

/**
 * Probabilities over the measured qubits. Bit i of the outcome (counting from
 * the most significant) is measured qubit qubits[i].
 */
class OutcomeDistribution {
public:
    OutcomeDistribution(std::vector<std::size_t> qubits, std::vector<double> probabilities);

    std::size_t n_bits() const noexcept { return qubits_.size(); }
    const std::vector<std::size_t>& qubits() const noexcept { return qubits_; }
    const std::vector<double>& probabilities() const noexcept { return probabilities_; }
    double operator[](std::size_t outcome) const { return probabilities_.at(outcome); }

private:
    std::vector<std::size_t> qubits_;
    std::vector<double> probabilities_;
};

struct SampleSet {
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t seed = 0;
    std::vector<std::size_t> qubits;
};

/// Outcome index rendered as n_bits characters, most significant first.
std::string to_bitstring(std::size_t outcome, std::size_t n_bits);

StateVector apply_gate_sv(const StateVector& sv, const Gate& gate);

/**
 * Applies a gate to an MPS. Two-qubit gates on non-neighbouring qubits are
 * routed with SWAPs and swapped back. The result is renormalized.
 */
MatrixProductState apply_gate_mps(const MatrixProductState& mps, const Gate& gate, std::size_t chi_max,
                                  double trunc_tol);

/// Runs the circuit from |0...0> on the dense backend.
StateVector run_statevector(const Circuit& circuit);
MatrixProductState run_mps(const Circuit& circuit, const SimOptions& opts = {});

/// Marginal distribution of `qubits` computed from amplitudes.
OutcomeDistribution marginal_distribution(const StateVector& sv, const std::vector<std::size_t>& qubits);
/// Same marginal computed directly on the MPS, without a dense vector.
OutcomeDistribution marginal_distribution(const MatrixProductState& mps, const std::vector<std::size_t>& qubits);

OutcomeDistribution strong_simulate(const Circuit& circuit, Backend backend, const SimOptions& opts = {});

/// Shot i draws from Rng::stream(seed, i).
SampleSet weak_simulate(const Circuit& circuit, Backend backend, std::uint64_t shots, std::uint64_t seed,
                        const SimOptions& opts = {});

struct MeasurementResult {
    int outcome;
    StateVector collapsed;
};

/// Standard-basis measurement of one qubit with collapse.
MeasurementResult measure_qubit(const StateVector& sv, std::size_t qubit, Rng& rng);

/// |<target|sv>|^2.
double state_closeness(const StateVector& sv, const StateVector& target);

}  // namespace qdq
