#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "qdq/rng.hpp"
#include "qdq/state.hpp"

namespace qdq {

/// Nonempty real or complex data vector with its Euclidean norm.
class ClassicalVector {
public:
    explicit ClassicalVector(std::vector<Complex> entries);
    explicit ClassicalVector(const std::vector<double>& entries);

    const std::vector<Complex>& entries() const noexcept { return entries_; }
    double norm() const noexcept { return norm_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<Complex> entries_;
    double norm_;
};

/// |bits>, e.g. "010" -> basis index 2. Throws DomainError for empty or non-binary input.
StateVector basis_encode(std::string_view bits);

/**
 * Amplitude encoding: amplitudes = x / ||x||. The length must be a power of
 * two. With normalize == false the input must already have unit norm.
 */
StateVector amplitude_encode(const ClassicalVector& x, bool normalize);

/// (|00> + |11>)/sqrt(2).
StateVector bell_pair();
/// (|0...0> + |1...1>)/sqrt(2), n >= 2.
StateVector ghz(std::size_t n);

struct DenseCodingResult {
    std::pair<int, int> sent_bits;
    std::pair<int, int> decoded_bits;
    bool success = false;
    double channel_fidelity = 1.0;  // <Phi+|pair|Phi+>
};

/**
 * Probabilities of each decoded message (index 2a' + b') when Alice encodes
 * (a, b) on qubit 0 of `pair` with X^a then Z^b and Bob measures in the Bell
 * basis (CNOT 0->1, H on qubit 0, then both qubits; a' = m1, b' = m0).
 */
std::array<double, 4> superdense_outcome_distribution(int a, int b, const DensityMatrix& pair);

/// Probability that (a, b) is decoded correctly.
double superdense_success_probability(int a, int b, const DensityMatrix& pair);

/// One protocol run with a sampled Bell measurement.
DenseCodingResult superdense_send(int a, int b, const DensityMatrix& pair, Rng& rng);

struct SuperdenseTrials {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_rate = 0.0;
    double analytic_success = 0.0;
    double standard_error = 0.0;  // sqrt(P(1-P)/trials) with the analytic P
};

/// `trials` independent runs; trial i uses Rng::stream(seed, i).
SuperdenseTrials superdense_trials(int a, int b, const DensityMatrix& pair, std::uint64_t trials, std::uint64_t seed);

/// 1/3 |0><0| + 2/3 |1><1|.
DensityMatrix mixed_state_demo();

}  // namespace qdq
