#include "qdq/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdq/circuit.hpp"
#include "qdq/error.hpp"

namespace qdq {

namespace {

// Rounding allowance at the closed ends of the Werner/decay domains, e.g. a
// fidelity of I/4 that evaluates to 0.24999999999999997.
constexpr double kDomainSlack = 1e-12;

double clamp_to_domain(double value, double lo, double hi, const char* what) {
    if (!std::isfinite(value) || value < lo - kDomainSlack || value > hi + kDomainSlack) {
        throw DomainError(std::string(what) + " = " + std::to_string(value) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    }
    return std::clamp(value, lo, hi);
}

double param(const std::map<std::string, double>& params, const std::string& key, std::string_view channel) {
    auto it = params.find(key);
    if (it == params.end()) throw DomainError(std::string(channel) + " needs parameter '" + key + "'");
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
        throw DomainError(std::string(channel) + " parameter '" + key + "' must lie in [0, 1]");
    }
    return it->second;
}

Eigen::MatrixXcd bell_projector() {
    const Eigen::VectorXcd phi = phi_plus().amplitudes();
    return phi * phi.adjoint();
}

}  // namespace

KrausChannel::KrausChannel(std::string name, std::vector<Eigen::MatrixXcd> kraus_ops, std::map<std::string, double> params)
    : name_(std::move(name)), ops_(std::move(kraus_ops)), params_(std::move(params)) {
    if (ops_.empty()) throw DomainError("channel '" + name_ + "' has no Kraus operators");
    const Eigen::Index dim = ops_.front().rows();
    if (dim != 2 && dim != 4) throw DomainError("channel '" + name_ + "' must act on one or two qubits");
    for (const auto& k : ops_) {
        if (k.rows() != dim || k.cols() != dim) throw DomainError("channel '" + name_ + "' has mismatched operator sizes");
    }
    arity_ = dim == 2 ? 1 : 2;
    if (completeness_error() >= kInvariantTol) {
        throw InvariantViolation("channel '" + name_ + "' violates sum K^dagger K = I");
    }
}

double KrausChannel::completeness_error() const {
    const Eigen::Index dim = ops_.front().rows();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& k : ops_) sum.noalias() += k.adjoint() * k;
    return (sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

KrausChannel standard_channel(std::string_view name, const std::map<std::string, double>& params) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    const Eigen::MatrixXcd x = gate_matrix(GateKind::X);
    const Eigen::MatrixXcd y = gate_matrix(GateKind::Y);
    const Eigen::MatrixXcd z = gate_matrix(GateKind::Z);
    const std::string label(name);

    if (name == "amplitude_damping" || name == "phase_damping") {
        const double g = param(params, "gamma", name);
        Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(2, 2);
        Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2);
        k0(0, 0) = 1.0;
        k0(1, 1) = std::sqrt(1.0 - g);
        if (name == "amplitude_damping") k1(0, 1) = std::sqrt(g);
        else k1(1, 1) = std::sqrt(g);
        return KrausChannel(label, {k0, k1}, {{"gamma", g}});
    }
    if (name == "bit_flip" || name == "phase_flip") {
        const double f = param(params, "f", name);
        const Eigen::MatrixXcd& flip = name == "bit_flip" ? x : z;
        return KrausChannel(label, {std::sqrt(1.0 - f) * id, std::sqrt(f) * flip}, {{"f", f}});
    }
    if (name == "depolarizing") {
        const double q = param(params, "q", name);
        const double w = std::sqrt(q / 4.0);
        return KrausChannel(label, {std::sqrt(1.0 - 0.75 * q) * id, w * x, w * y, w * z}, {{"q", q}});
    }
    throw DomainError("unknown channel '" + label + "'");
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                            const std::vector<std::size_t>& targets) {
    if (targets.size() != channel.arity()) {
        throw DomainError("channel '" + channel.name() + "' acts on " + std::to_string(channel.arity()) +
                          " qubit(s), got " + std::to_string(targets.size()) + " target(s)");
    }
    const std::size_t n = rho.n_qubits();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= n) throw DomainError("channel target out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (targets[i] == targets[j]) throw DomainError("channel targets repeat");
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (const auto& k : channel.kraus_ops()) {
        const Eigen::MatrixXcd full = embed_operator(k, targets, n);
        out.noalias() += full * rho.matrix() * full.adjoint();
    }
    // Drop the rounding-level anti-Hermitian part.
    out = 0.5 * (out + out.adjoint());
    return DensityMatrix(n, std::move(out));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel, std::size_t target_qubit) {
    return apply_channel(rho, channel, std::vector<std::size_t>{target_qubit});
}

StateVector phi_plus() {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[0] = v[3] = 1.0 / std::numbers::sqrt2;
    return StateVector(2, std::move(v));
}

DensityMatrix werner_from_p(double p) {
    p = clamp_to_domain(p, 0.0, 1.0, "Werner weight p");
    return DensityMatrix(2, p * bell_projector() + ((1.0 - p) / 4.0) * Eigen::MatrixXcd::Identity(4, 4));
}

DensityMatrix werner_from_fidelity(double fidelity) {
    const double f = clamp_to_domain(fidelity, 0.25, 1.0, "Werner fidelity F");
    return DensityMatrix(2, ((4.0 * f - 1.0) / 3.0) * bell_projector() +
                                ((1.0 - f) / 3.0) * Eigen::MatrixXcd::Identity(4, 4));
}

double werner_fidelity_from_p(double p) { return (3.0 * clamp_to_domain(p, 0.0, 1.0, "Werner weight p") + 1.0) / 4.0; }

double werner_p_from_fidelity(double fidelity) {
    return (4.0 * clamp_to_domain(fidelity, 0.25, 1.0, "Werner fidelity F") - 1.0) / 3.0;
}

double decay_fidelity(double f_prev, double delta_t, double tau) {
    const double f = clamp_to_domain(f_prev, 0.25, 1.0, "fidelity");
    if (!(delta_t >= 0.0) || !std::isfinite(delta_t)) throw DomainError("decay interval must be nonnegative");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("decay constant tau must be positive");
    return 0.25 + (f - 0.25) * std::exp(-delta_t / tau);
}

}  // namespace qdq
