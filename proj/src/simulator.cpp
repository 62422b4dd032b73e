#include "qdq/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

#include "qdq/error.hpp"
#include "qdq/linalg.hpp"

namespace qdq {

namespace {

std::size_t bit_mask(std::size_t qubit, std::size_t n) { return std::size_t{1} << (n - 1 - qubit); }

void check_targets(const Gate& gate, std::size_t n) {
    for (auto t : gate.targets()) {
        if (t >= n) {
            throw DomainError("gate target " + std::to_string(t) + " out of range for " + std::to_string(n) + " qubit(s)");
        }
    }
}

Tensor matrix_as_tensor(const Eigen::MatrixXcd& m, std::vector<std::string> labels) {
    std::vector<Complex> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    std::vector<std::size_t> dims(labels.size(), 2);
    return Tensor(std::move(labels), std::move(dims), std::move(data));
}

Eigen::MatrixXcd swap_matrix() {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(4, 4);
    s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1;
    return s;
}

std::string out_label(std::size_t site) { return "out" + std::to_string(site); }

// Single-site update: core_k <- G . core_k on the physical index.
void apply_one_site(std::vector<Tensor>& cores, std::size_t k, const Eigen::MatrixXcd& m) {
    const auto site = MatrixProductState::site_label(k);
    const Tensor g = matrix_as_tensor(m, {out_label(k), site});
    const Tensor updated = contract(g, cores[k]);  // (out, b_k, b_{k+1})
    cores[k] = transpose_relabel(updated, {MatrixProductState::bond_label(k), out_label(k),
                                           MatrixProductState::bond_label(k + 1)})
                   .renamed(out_label(k), site);
}

// Two-site update on neighbouring sites k, k+1. `first`/`second` are the gate's
// targets in matrix order and must be {k, k+1} in either orientation.
void apply_two_site(std::vector<Tensor>& cores, std::size_t k, std::size_t first, std::size_t second,
                    const Eigen::MatrixXcd& m, std::size_t chi_max, double trunc_tol) {
    const auto bl = MatrixProductState::bond_label(k);
    const auto bm = MatrixProductState::bond_label(k + 1);
    const auto br = MatrixProductState::bond_label(k + 2);
    const Tensor theta = contract(cores[k], cores[k + 1]);  // (b_k, q_k, q_{k+1}, b_{k+2})
    const Tensor g = matrix_as_tensor(m, {out_label(first), out_label(second), MatrixProductState::site_label(first),
                                          MatrixProductState::site_label(second)});
    const Tensor applied = transpose_relabel(contract(g, theta), {bl, out_label(k), out_label(k + 1), br});

    const std::size_t left = applied.dims()[0];
    const std::size_t right = applied.dims()[3];
    const auto rows = static_cast<Eigen::Index>(left * 2);
    const auto cols = static_cast<Eigen::Index>(2 * right);
    const Eigen::MatrixXcd block = Eigen::Map<const RowMajorMatrixXcd>(applied.data().data(), rows, cols);
    const TruncatedSvd svd = truncated_svd(block, chi_max, trunc_tol);
    const auto kept = static_cast<std::size_t>(svd.s.size());

    const RowMajorMatrixXcd u = svd.u;
    const RowMajorMatrixXcd sv = svd.s.cast<Complex>().asDiagonal() * svd.vh;
    cores[k] = Tensor({bl, MatrixProductState::site_label(k), bm}, {left, 2, kept},
                      std::vector<Complex>(u.data(), u.data() + u.size()));
    cores[k + 1] = Tensor({bm, MatrixProductState::site_label(k + 1), br}, {kept, 2, right},
                          std::vector<Complex>(sv.data(), sv.data() + sv.size()));
}

MatrixProductState renormalized(std::vector<Tensor> cores) {
    const double norm2 = mps_norm_squared(std::span<const Tensor>(cores));
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw NumericalError("MPS norm vanished during gate application");
    cores.back() = cores.back().scaled(1.0 / std::sqrt(norm2));
    return MatrixProductState(std::move(cores));
}

}  // namespace

std::string_view to_string(Backend backend) { return backend == Backend::StateVector ? "statevector" : "mps"; }

Backend parse_backend(std::string_view name) {
    if (name == "statevector" || name == "sv") return Backend::StateVector;
    if (name == "mps") return Backend::Mps;
    throw DomainError("unknown backend '" + std::string(name) + "' (expected statevector or mps)");
}

std::size_t exact_chi(std::size_t n_qubits) { return std::size_t{1} << (n_qubits / 2); }

OutcomeDistribution::OutcomeDistribution(std::vector<std::size_t> qubits, std::vector<double> probabilities)
    : qubits_(std::move(qubits)), probabilities_(std::move(probabilities)) {
    if (qubits_.empty()) throw InvariantViolation("distribution over zero bits");
    if (probabilities_.size() != (std::size_t{1} << qubits_.size())) {
        throw InvariantViolation("distribution length does not match its bit count");
    }
    double total = 0.0;
    for (auto& p : probabilities_) {
        if (!(p >= -1e-12)) throw InvariantViolation("negative outcome probability");
        p = std::max(p, 0.0);
        total += p;
    }
    if (std::abs(total - 1.0) > kInvariantTol) throw InvariantViolation("outcome probabilities do not sum to 1");
}

std::string to_bitstring(std::size_t outcome, std::size_t n_bits) {
    std::string s(n_bits, '0');
    for (std::size_t i = 0; i < n_bits; ++i)
        if ((outcome >> (n_bits - 1 - i)) & 1u) s[i] = '1';
    return s;
}

// --- State-vector backend ---

StateVector apply_gate_sv(const StateVector& sv, const Gate& gate) {
    const std::size_t n = sv.n_qubits();
    check_targets(gate, n);
    const auto& targets = gate.targets();
    const std::size_t k = targets.size();
    const std::size_t sub_dim = std::size_t{1} << k;

    std::vector<std::size_t> offsets(sub_dim, 0);  // offsets[s]: basis bits of sub-index s
    std::size_t target_mask = 0;
    for (std::size_t s = 0; s < sub_dim; ++s)
        for (std::size_t i = 0; i < k; ++i)
            if ((s >> (k - 1 - i)) & 1u) offsets[s] |= bit_mask(targets[i], n);
    for (auto t : targets) target_mask |= bit_mask(t, n);

    Eigen::VectorXcd out = sv.amplitudes();
    Eigen::VectorXcd local(static_cast<Eigen::Index>(sub_dim));
    const std::size_t dim = sv.dimension();
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & target_mask) continue;
        for (std::size_t s = 0; s < sub_dim; ++s) local[static_cast<Eigen::Index>(s)] = sv[base | offsets[s]];
        const Eigen::VectorXcd mixed = gate.matrix() * local;
        for (std::size_t s = 0; s < sub_dim; ++s) out[static_cast<Eigen::Index>(base | offsets[s])] = mixed[static_cast<Eigen::Index>(s)];
    }
    return StateVector(n, std::move(out));
}

StateVector run_statevector(const Circuit& circuit) {
    if (circuit.n_qubits() > kMaxDenseQubits) {
        throw ResourceLimit("state-vector backend limited to " + std::to_string(kMaxDenseQubits) + " qubits, got " +
                            std::to_string(circuit.n_qubits()));
    }
    StateVector sv = StateVector::zero(circuit.n_qubits());
    for (const auto& g : circuit.gates()) sv = apply_gate_sv(sv, g);
    return sv;
}

OutcomeDistribution marginal_distribution(const StateVector& sv, const std::vector<std::size_t>& qubits) {
    const std::size_t n = sv.n_qubits();
    for (auto q : qubits) if (q >= n) throw DomainError("measured qubit out of range");
    if (qubits.size() > kMaxOutcomeBits) throw ResourceLimit("distribution over more than 20 bits");
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    for (std::size_t x = 0; x < sv.dimension(); ++x) {
        std::size_t outcome = 0;
        for (auto q : qubits) outcome = (outcome << 1) | ((x & bit_mask(q, n)) ? 1u : 0u);
        probs[outcome] += std::norm(sv[x]);
    }
    return OutcomeDistribution(qubits, std::move(probs));
}

// --- MPS backend ---

MatrixProductState apply_gate_mps(const MatrixProductState& mps, const Gate& gate, std::size_t chi_max,
                                  double trunc_tol) {
    if (chi_max < 1) throw DomainError("chi_max must be at least 1");
    check_targets(gate, mps.n_qubits());
    std::vector<Tensor> cores = mps.cores();
    const auto& targets = gate.targets();

    if (targets.size() == 1) {
        apply_one_site(cores, targets[0], gate.matrix());
        return renormalized(std::move(cores));
    }
    if (targets.size() != 2) throw DomainError("MPS backend supports one- and two-qubit gates only");

    const std::size_t a = targets[0];
    const std::size_t b = targets[1];
    const std::size_t lo = std::min(a, b);
    const std::size_t hi = std::max(a, b);
    const Eigen::MatrixXcd swap = swap_matrix();
    // Walk the qubit at `hi` down to lo+1, apply, then walk it back.
    for (std::size_t s = hi; s > lo + 1; --s) apply_two_site(cores, s - 1, s - 1, s, swap, chi_max, trunc_tol);
    const std::size_t moved = lo + 1;
    if (a == lo) apply_two_site(cores, lo, lo, moved, gate.matrix(), chi_max, trunc_tol);
    else apply_two_site(cores, lo, moved, lo, gate.matrix(), chi_max, trunc_tol);
    for (std::size_t s = lo + 1; s < hi; ++s) apply_two_site(cores, s, s, s + 1, swap, chi_max, trunc_tol);
    return renormalized(std::move(cores));
}

MatrixProductState run_mps(const Circuit& circuit, const SimOptions& opts) {
    const std::size_t n = circuit.n_qubits();
    if (n > kMaxMpsQubits) {
        throw ResourceLimit("MPS backend limited to " + std::to_string(kMaxMpsQubits) + " qubits, got " +
                            std::to_string(n));
    }
    const std::size_t chi = opts.chi_max.value_or(exact_chi(n));
    MatrixProductState mps = MatrixProductState::zero(n);
    for (const auto& g : circuit.gates()) mps = apply_gate_mps(mps, g, chi, opts.trunc_tol);
    return mps;
}

OutcomeDistribution marginal_distribution(const MatrixProductState& mps, const std::vector<std::size_t>& qubits) {
    const std::size_t n = mps.n_qubits();
    const std::size_t m = qubits.size();
    if (m > kMaxOutcomeBits) throw ResourceLimit("distribution over more than 20 bits");
    std::vector<std::size_t> position(n, m);  // position in outcome order, m = unmeasured
    for (std::size_t i = 0; i < m; ++i) {
        if (qubits[i] >= n) throw DomainError("measured qubit out of range");
        position[qubits[i]] = i;
    }

    // Per-site slices A_p as (left x right) matrices.
    std::vector<std::array<Eigen::MatrixXcd, 2>> slices(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Tensor& core = mps.core(k);
        const auto l = static_cast<Eigen::Index>(core.dims()[0]);
        const auto r = static_cast<Eigen::Index>(core.dims()[2]);
        for (Eigen::Index p = 0; p < 2; ++p) {
            Eigen::MatrixXcd a(l, r);
            for (Eigen::Index i = 0; i < l; ++i)
                for (Eigen::Index j = 0; j < r; ++j) a(i, j) = core.data()[static_cast<std::size_t>((i * 2 + p) * r + j)];
            slices[k][static_cast<std::size_t>(p)] = std::move(a);
        }
    }

    std::vector<double> probs(std::size_t{1} << m, 0.0);
    // Depth-first over sites carrying the left environment sum A^dagger E A.
    std::function<void(std::size_t, const Eigen::MatrixXcd&, std::size_t)> descend =
        [&](std::size_t k, const Eigen::MatrixXcd& env, std::size_t outcome) {
            if (k == n) {
                probs[outcome] = env(0, 0).real();
                return;
            }
            const auto& [a0, a1] = slices[k];
            if (position[k] == m) {
                descend(k + 1, a0.adjoint() * env * a0 + a1.adjoint() * env * a1, outcome);
                return;
            }
            const std::size_t bit = std::size_t{1} << (m - 1 - position[k]);
            descend(k + 1, a0.adjoint() * env * a0, outcome);
            descend(k + 1, a1.adjoint() * env * a1, outcome | bit);
        };
    descend(0, Eigen::MatrixXcd::Ones(1, 1), 0);
    return OutcomeDistribution(qubits, std::move(probs));
}

// --- Strong / weak simulation ---

OutcomeDistribution strong_simulate(const Circuit& circuit, Backend backend, const SimOptions& opts) {
    const auto measured = circuit.effective_measured_qubits();
    if (measured.size() > kMaxOutcomeBits) {
        throw ResourceLimit("distribution over " + std::to_string(measured.size()) + " bits exceeds the " +
                            std::to_string(kMaxOutcomeBits) + "-bit limit");
    }
    if (backend == Backend::StateVector) return marginal_distribution(run_statevector(circuit), measured);
    return marginal_distribution(run_mps(circuit, opts), measured);
}

SampleSet weak_simulate(const Circuit& circuit, Backend backend, std::uint64_t shots, std::uint64_t seed,
                        const SimOptions& opts) {
    if (shots < 1) throw DomainError("weak simulation needs at least one shot");
    const OutcomeDistribution dist = strong_simulate(circuit, backend, opts);
    const auto& p = dist.probabilities();
    std::vector<double> cdf(p.size());
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) last_nonzero = i;

    SampleSet out;
    out.shots = shots;
    out.seed = seed;
    out.qubits = dist.qubits();
    std::vector<std::uint64_t> tally(p.size(), 0);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        Rng rng = Rng::stream(seed, shot);
        const double u = rng.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin());
        ++tally[idx];
    }
    for (std::size_t i = 0; i < tally.size(); ++i)
        if (tally[i] > 0) out.counts.emplace(to_bitstring(i, dist.n_bits()), tally[i]);
    return out;
}

// --- Measurement ---

MeasurementResult measure_qubit(const StateVector& sv, std::size_t qubit, Rng& rng) {
    const std::size_t n = sv.n_qubits();
    if (qubit >= n) throw DomainError("measured qubit out of range");
    const std::size_t mask = bit_mask(qubit, n);
    double p0 = 0.0, p1 = 0.0;
    for (std::size_t x = 0; x < sv.dimension(); ++x) (x & mask ? p1 : p0) += std::norm(sv[x]);
    const double total = p0 + p1;
    if (!(total > 0.0)) throw NumericalError("measurement marginal is all zero");

    int outcome;
    if (p1 <= 1e-15 * total) outcome = 0;
    else if (p0 <= 1e-15 * total) outcome = 1;
    else outcome = rng.uniform() < p0 / total ? 0 : 1;

    Eigen::VectorXcd amps = sv.amplitudes();
    for (std::size_t x = 0; x < sv.dimension(); ++x)
        if (((x & mask) != 0) != (outcome == 1)) amps[static_cast<Eigen::Index>(x)] = 0.0;
    return {outcome, StateVector::normalized(n, std::move(amps))};
}

double state_closeness(const StateVector& sv, const StateVector& target) {
    if (sv.n_qubits() != target.n_qubits()) throw DomainError("state closeness: qubit counts differ");
    return std::norm(inner_product(target, sv));
}

}  // namespace qdq
