#include "qdq/protocols.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qdq/circuit.hpp"
#include "qdq/error.hpp"
#include "qdq/noise.hpp"

namespace qdq {

namespace {

void check_bit(int v, const char* name) {
    if (v != 0 && v != 1) throw DomainError(std::string(name) + " must be 0 or 1");
}

// Alice's encoding followed by Bob's Bell-basis rotation.
Eigen::MatrixXcd encode_and_rotate(int a, int b) {
    Circuit c(2);
    if (a) c.add(GateKind::X, {0});
    if (b) c.add(GateKind::Z, {0});
    c.add(GateKind::CNOT, {0, 1});
    c.add(GateKind::H, {0});
    return circuit_unitary(c);
}

// Standard-basis result (m0 m1) -> message index 2a' + b'.
std::size_t decode(std::size_t measured) {
    const std::size_t m0 = (measured >> 1) & 1u;
    const std::size_t m1 = measured & 1u;
    return (m1 << 1) | m0;
}

std::size_t sample_message(const std::array<double, 4>& dist, Rng& rng) {
    const double u = rng.uniform() * std::accumulate(dist.begin(), dist.end(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        acc += dist[i];
        if (u < acc) return i;
    }
    std::size_t last = 3;
    while (dist[last] == 0.0 && last > 0) --last;
    return last;
}

}  // namespace

ClassicalVector::ClassicalVector(std::vector<Complex> entries) : entries_(std::move(entries)), norm_(0.0) {
    if (entries_.empty()) throw DomainError("classical vector must be nonempty");
    double s = 0.0;
    for (const auto& v : entries_) s += std::norm(v);
    norm_ = std::sqrt(s);
}

ClassicalVector::ClassicalVector(const std::vector<double>& entries)
    : ClassicalVector(std::vector<Complex>(entries.begin(), entries.end())) {}

StateVector basis_encode(std::string_view bits) {
    if (bits.empty()) throw DomainError("basis encoding needs at least one bit");
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw DomainError("basis encoding accepts only '0' and '1'");
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    return StateVector::basis(bits.size(), index);
}

StateVector amplitude_encode(const ClassicalVector& x, bool normalize) {
    const std::size_t len = x.size();
    if (!std::has_single_bit(len) || len < 2) {
        throw DomainError("amplitude encoding needs a power-of-two length of at least 2, got " + std::to_string(len));
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(len));
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(len));
    for (std::size_t i = 0; i < len; ++i) amps[static_cast<Eigen::Index>(i)] = x.entries()[i];
    if (normalize) {
        if (!(x.norm() > 0.0)) throw DomainError("cannot normalize a zero vector");
        amps /= x.norm();
    } else if (std::abs(x.norm() - 1.0) > kInvariantTol) {
        throw DomainError("input is not normalized (norm " + std::to_string(x.norm()) + ")");
    }
    return StateVector(n, std::move(amps));
}

StateVector bell_pair() { return ghz(2); }

StateVector ghz(std::size_t n) {
    if (n < 2) throw DomainError("GHZ state needs at least two qubits");
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[0] = v[dim - 1] = 1.0 / std::numbers::sqrt2;
    return StateVector(n, std::move(v));
}

std::array<double, 4> superdense_outcome_distribution(int a, int b, const DensityMatrix& pair) {
    check_bit(a, "a");
    check_bit(b, "b");
    if (pair.n_qubits() != 2) throw DomainError("superdense coding needs a two-qubit pair");
    const Eigen::MatrixXcd u = encode_and_rotate(a, b);
    const Eigen::MatrixXcd rotated = u * pair.matrix() * u.adjoint();
    std::array<double, 4> out{};
    for (std::size_t m = 0; m < 4; ++m) out[decode(m)] = std::max(0.0, rotated(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)).real());
    // Divide out the rounding in the trace so a perfect pair gives exactly 1.
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& p : out) p /= total;
    return out;
}

double superdense_success_probability(int a, int b, const DensityMatrix& pair) {
    return superdense_outcome_distribution(a, b, pair)[static_cast<std::size_t>(2 * a + b)];
}

DenseCodingResult superdense_send(int a, int b, const DensityMatrix& pair, Rng& rng) {
    const std::size_t message = sample_message(superdense_outcome_distribution(a, b, pair), rng);
    DenseCodingResult r;
    r.sent_bits = {a, b};
    r.decoded_bits = {static_cast<int>(message >> 1), static_cast<int>(message & 1u)};
    r.success = r.sent_bits == r.decoded_bits;
    r.channel_fidelity = fidelity(pair, phi_plus());
    return r;
}

SuperdenseTrials superdense_trials(int a, int b, const DensityMatrix& pair, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("need at least one trial");
    const auto dist = superdense_outcome_distribution(a, b, pair);
    const auto wanted = static_cast<std::size_t>(2 * a + b);
    SuperdenseTrials out;
    out.trials = trials;
    out.analytic_success = dist[wanted];
    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng rng = Rng::stream(seed, i);
        if (sample_message(dist, rng) == wanted) ++out.successes;
    }
    out.success_rate = static_cast<double>(out.successes) / static_cast<double>(trials);
    out.standard_error = std::sqrt(out.analytic_success * (1.0 - out.analytic_success) / static_cast<double>(trials));
    return out;
}

DensityMatrix mixed_state_demo() {
    return density_from_mixture({{1.0 / 3.0, StateVector::basis(1, 0)}, {2.0 / 3.0, StateVector::basis(1, 1)}});
}

}  // namespace qdq
