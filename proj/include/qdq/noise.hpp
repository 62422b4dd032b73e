#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qdq/state.hpp"

namespace qdq {

/// Kraus-form quantum channel on one or two qubits. Construction enforces sum K^dagger K = I within 1e-9.
class KrausChannel {
public:
    KrausChannel(std::string name, std::vector<Eigen::MatrixXcd> kraus_ops, std::map<std::string, double> params = {});

    const std::string& name() const noexcept { return name_; }
    const std::vector<Eigen::MatrixXcd>& kraus_ops() const noexcept { return ops_; }
    const std::map<std::string, double>& params() const noexcept { return params_; }
    std::size_t arity() const noexcept { return arity_; }

    /// max |sum K^dagger K - I|.
    double completeness_error() const;

private:
    std::string name_;
    std::vector<Eigen::MatrixXcd> ops_;
    std::map<std::string, double> params_;
    std::size_t arity_ = 1;
};

/**
 * Textbook single-qubit channels:
 *
 *   amplitude_damping {gamma}: K0 = diag(1, sqrt(1-g)), K1 = [[0, sqrt(g)], [0, 0]]
 *   phase_damping     {gamma}: K0 = diag(1, sqrt(1-g)), K1 = diag(0, sqrt(g))
 *   bit_flip          {f}:     sqrt(1-f) I, sqrt(f) X
 *   phase_flip        {f}:     sqrt(1-f) I, sqrt(f) Z
 *   depolarizing      {q}:     rho -> (1-q) rho + q I/2, as sqrt(1-3q/4) I, sqrt(q/4) {X, Y, Z}
 *
 * Every parameter must lie in [0, 1].
 */
KrausChannel standard_channel(std::string_view name, const std::map<std::string, double>& params);

/// sum_i K_i rho K_i^dagger on `targets` (identity elsewhere).
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel, const std::vector<std::size_t>& targets);
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel, std::size_t target_qubit);

/// (|00> + |11>)/sqrt(2).
StateVector phi_plus();

/// p |Phi+><Phi+| + (1-p)/4 I, p in [0, 1].
DensityMatrix werner_from_p(double p);

/// (4F-1)/3 |Phi+><Phi+| + (1-F)/3 I, F in [1/4, 1].
DensityMatrix werner_from_fidelity(double fidelity);

/// (3p+1)/4.
double werner_fidelity_from_p(double p);
/// (4F-1)/3.
double werner_p_from_fidelity(double fidelity);

struct DecayParams {
    double tau;
    double delta_t;
};

/// 1/4 + (F_prev - 1/4) exp(-delta_t/tau), F_prev in [1/4, 1], delta_t >= 0, tau > 0.
double decay_fidelity(double f_prev, double delta_t, double tau);
inline double decay_fidelity(double f_prev, const DecayParams& params) {
    return decay_fidelity(f_prev, params.delta_t, params.tau);
}

}  // namespace qdq
