#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdq/error.hpp"
#include "qdq/noise.hpp"
#include "qdq/protocols.hpp"
#include "qdq/simulator.hpp"

using namespace qdq;

namespace {

const double kH = 1.0 / std::numbers::sqrt2;

/**
 * Probability that Bob's Bell measurement returns the Bell state Alice
 * prepared for (a, b): <B_ab| (U_ab x I) rho (U_ab x I)^dagger |B_ab>, with
 * U_ab = Z^b X^a and |B_ab> = (U_ab x I)|Phi+>. Built from explicit
 * Kronecker products, independent of the library's circuit route.
 */
double bell_projection_oracle(int a, int b, const Eigen::MatrixXcd& rho) {
    Eigen::Matrix2cd x, z;
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    if (a) u = x * u;
    if (b) u = z * u;
    const Eigen::MatrixXcd full = Eigen::kroneckerProduct(u, Eigen::Matrix2cd::Identity()).eval();
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
    phi[0] = phi[3] = kH;
    const Eigen::VectorXcd target = full * phi;
    const Eigen::MatrixXcd encoded = full * rho * full.adjoint();
    return (target.adjoint() * encoded * target)(0, 0).real();
}

}  // namespace

TEST_SUITE("protocols") {
    TEST_CASE("basis_encode examples") {
        const auto zero = basis_encode("0");
        CHECK(zero[0] == Complex{1.0});
        CHECK(zero[1] == Complex{0.0});
        CHECK(basis_encode("11")[3] == Complex{1.0});
        const auto s = basis_encode("010");
        CHECK(s.n_qubits() == 3);
        CHECK(s[2] == Complex{1.0});
        CHECK(s.amplitudes().cwiseAbs().sum() == 1.0);
        CHECK_THROWS_AS(basis_encode(""), DomainError);
        CHECK_THROWS_AS(basis_encode("012"), DomainError);
    }

    TEST_CASE("basis_encode measured by strong simulation yields its bits") {
        std::mt19937_64 rng(91);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 1 + trial % 8;
            std::string bits;
            for (std::size_t i = 0; i < n; ++i) bits += (rng() & 1) ? '1' : '0';
            // Circuit route: X on every 1 bit.
            Circuit c(n);
            for (std::size_t i = 0; i < n; ++i)
                if (bits[i] == '1') c.add(GateKind::X, {i});
            const auto d = strong_simulate(c, Backend::StateVector);
            const std::size_t index = std::stoul(bits, nullptr, 2);
            REQUIRE(d[index] == 1.0);
            REQUIRE(equivalent(run_statevector(c), basis_encode(bits), 0.0));
            std::vector<std::size_t> all(n);
            for (std::size_t i = 0; i < n; ++i) all[i] = i;
            REQUIRE(marginal_distribution(basis_encode(bits), all)[index] == 1.0);
        }
    }

    TEST_CASE("amplitude_encode examples") {
        const auto s = amplitude_encode(ClassicalVector(std::vector<double>{0.6, 0.8}), false);
        CHECK(std::abs(std::norm(s[0]) - 0.36) < 1e-12);
        CHECK(std::abs(std::norm(s[1]) - 0.64) < 1e-12);
        const auto zero = amplitude_encode(ClassicalVector(std::vector<double>{1.0, 0.0}), false);
        CHECK(zero.amplitudes() == StateVector::zero(1).amplitudes());
        const auto uniform = amplitude_encode(ClassicalVector(std::vector<double>{1, 1, 1, 1}), true);
        CHECK(uniform.n_qubits() == 2);
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(std::norm(uniform[i]) - 0.25) < 1e-12);

        CHECK_THROWS_AS(amplitude_encode(ClassicalVector(std::vector<double>{1, 1, 1}), true), DomainError);
        CHECK_THROWS_AS(amplitude_encode(ClassicalVector(std::vector<double>{1.0}), true), DomainError);
        CHECK_THROWS_AS(amplitude_encode(ClassicalVector(std::vector<double>{1, 1}), false), DomainError);
        CHECK_THROWS_AS(amplitude_encode(ClassicalVector(std::vector<double>{0, 0}), true), DomainError);
        CHECK_THROWS_AS(ClassicalVector(std::vector<double>{}), DomainError);
    }

    TEST_CASE("amplitude_encode always yields a normalized state") {
        std::mt19937_64 rng(92);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t len = std::size_t{1} << (1 + trial % 6);
            std::vector<Complex> x(len);
            for (auto& v : x) v = oracle::random_complex(rng);
            const auto s = amplitude_encode(ClassicalVector(x), true);
            REQUIRE(std::abs(s.amplitudes().squaredNorm() - 1.0) < 1e-9);
            const double norm = ClassicalVector(x).norm();
            REQUIRE(std::abs(s[0] - x[0] / norm) < 1e-12);
        }
    }

    TEST_CASE("Bell and GHZ states") {
        const auto bell = bell_pair();
        CHECK(bell.n_qubits() == 2);
        CHECK(std::abs(bell[0] - kH) < 1e-15);
        CHECK(std::abs(bell[3] - kH) < 1e-15);
        CHECK(std::abs(bell[1]) + std::abs(bell[2]) == 0.0);
        const auto g = ghz(3);
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(g[i] - ((i == 0 || i == 7) ? kH : 0.0)) < 1e-15);
        CHECK(ghz(2).amplitudes() == bell.amplitudes());
        CHECK_THROWS_AS(ghz(1), DomainError);
        CHECK_THROWS_AS(ghz(0), DomainError);
    }

    TEST_CASE("superdense coding on a perfect pair succeeds for every message") {
        const auto pair = DensityMatrix::from_pure(bell_pair());
        Rng rng(93);
        for (int a : {0, 1})
            for (int b : {0, 1}) {
                const auto dist = superdense_outcome_distribution(a, b, pair);
                for (std::size_t m = 0; m < 4; ++m) CHECK(dist[m] == (m == static_cast<std::size_t>(2 * a + b) ? 1.0 : 0.0));
                CHECK(superdense_success_probability(a, b, pair) == 1.0);
                CHECK(std::abs(bell_projection_oracle(a, b, pair.matrix()) - 1.0) < 1e-12);
                for (int trial = 0; trial < 20; ++trial) {
                    const auto r = superdense_send(a, b, pair, rng);
                    CHECK(r.success);
                    CHECK(r.decoded_bits == std::pair<int, int>{a, b});
                    CHECK(r.sent_bits == std::pair<int, int>{a, b});
                    CHECK(std::abs(r.channel_fidelity - 1.0) < 1e-12);
                }
            }
    }

    TEST_CASE("noisy superdense success equals the pair fidelity") {
        for (double f : {0.25, 0.5, 0.7, 1.0}) {
            const auto pair = werner_from_fidelity(f);
            for (int a : {0, 1})
                for (int b : {0, 1}) {
                    CHECK(std::abs(superdense_success_probability(a, b, pair) - f) < 1e-12);
                    CHECK(std::abs(bell_projection_oracle(a, b, pair.matrix()) - f) < 1e-12);
                    const auto dist = superdense_outcome_distribution(a, b, pair);
                    double total = 0.0;
                    for (std::size_t m = 0; m < 4; ++m) {
                        total += dist[m];
                        if (m != static_cast<std::size_t>(2 * a + b)) CHECK(std::abs(dist[m] - (1.0 - f) / 3.0) < 1e-12);
                    }
                    CHECK(std::abs(total - 1.0) < 1e-12);
                }
        }
    }

    TEST_CASE("superdense decoding agrees with the Bell-projection oracle on random pairs") {
        std::mt19937_64 rng(94);
        for (int trial = 0; trial < 100; ++trial) {
            const DensityMatrix pair(2, oracle::random_density(rng, 4));
            for (int a : {0, 1})
                for (int b : {0, 1})
                    REQUIRE(std::abs(superdense_success_probability(a, b, pair) - bell_projection_oracle(a, b, pair.matrix())) < 1e-12);
        }
    }

    TEST_CASE("sampled superdense trials land within 3 standard errors") {
        const auto pair = werner_from_fidelity(0.7);
        for (int a : {0, 1})
            for (int b : {0, 1}) {
                const auto r = superdense_trials(a, b, pair, 100000, kDefaultSeed + static_cast<std::uint64_t>(2 * a + b));
                CHECK(std::abs(r.analytic_success - 0.7) < 1e-12);
                CHECK(std::abs(r.success_rate - 0.7) <= 3.0 * r.standard_error);
                CHECK(r.successes <= r.trials);
            }
        const auto again = superdense_trials(1, 1, pair, 5000, 3);
        CHECK(again.successes == superdense_trials(1, 1, pair, 5000, 3).successes);
    }

    TEST_CASE("superdense errors") {
        const auto pair = DensityMatrix::from_pure(bell_pair());
        Rng rng(1);
        CHECK_THROWS_AS(superdense_send(2, 0, pair, rng), DomainError);
        CHECK_THROWS_AS(superdense_send(0, -1, pair, rng), DomainError);
        CHECK_THROWS_AS(superdense_send(0, 0, DensityMatrix::from_pure(ghz(3)), rng), DomainError);
        CHECK_THROWS_AS(superdense_trials(0, 0, pair, 0, 1), DomainError);
    }

    TEST_CASE("mixed-state demo") {
        const auto rho = mixed_state_demo();
        CHECK(std::abs(rho.matrix().trace() - Complex{1.0}) < 1e-15);
        CHECK(std::abs(fidelity(rho, StateVector::basis(1, 1)) - 2.0 / 3.0) < 1e-12);
        Eigen::Matrix2cd printed;
        printed << 1.0 / 3.0, 0.0, 0.0, 2.0 / 3.0;
        CHECK((rho.matrix() - printed).cwiseAbs().maxCoeff() < 1e-15);
    }
}
