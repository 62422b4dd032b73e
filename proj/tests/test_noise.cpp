#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qdq/error.hpp"
#include "qdq/noise.hpp"

using namespace qdq;

namespace {

// 0.25 + 0.75 * exp(-1), evaluated with 50-digit arithmetic and rounded.
constexpr double kDecayOneTau = 0.52590958087858174;

Eigen::MatrixXcd bell_projector_oracle() {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(4, 4);
    p(0, 0) = p(0, 3) = p(3, 0) = p(3, 3) = 0.5;
    return p;
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

void check_density(const DensityMatrix& rho) {
    const auto& m = rho.matrix();
    REQUIRE((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE(std::abs(m.trace() - Complex{1.0}) < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-9);
}

double completeness(const std::vector<Eigen::MatrixXcd>& ops) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(ops[0].rows(), ops[0].cols());
    for (const auto& k : ops) sum += k.adjoint() * k;
    return (sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("noise") {
    TEST_CASE("werner_from_p examples") {
        CHECK(max_diff(werner_from_p(1.0).matrix(), bell_projector_oracle()) < 1e-15);
        CHECK(max_diff(werner_from_p(0.0).matrix(), Eigen::MatrixXcd::Identity(4, 4) / 4.0) < 1e-15);
        CHECK(std::abs(fidelity(werner_from_p(0.6), phi_plus()) - 0.7) < 1e-12);
        CHECK_THROWS_AS(werner_from_p(-0.1), DomainError);
        CHECK_THROWS_AS(werner_from_p(1.1), DomainError);
        CHECK_THROWS_AS(werner_from_p(std::nan("")), DomainError);
    }

    TEST_CASE("werner_from_fidelity examples") {
        CHECK(max_diff(werner_from_fidelity(1.0).matrix(), bell_projector_oracle()) < 1e-15);
        CHECK(max_diff(werner_from_fidelity(0.25).matrix(), Eigen::MatrixXcd::Identity(4, 4) / 4.0) < 1e-15);
        CHECK_THROWS_AS(werner_from_fidelity(0.2), DomainError);
        CHECK_THROWS_AS(werner_from_fidelity(1.01), DomainError);
    }

    TEST_CASE("Werner fidelity equals (3p+1)/4 on a 101-point grid and round-trips") {
        for (int i = 0; i <= 100; ++i) {
            const double p = i / 100.0;
            const auto rho = werner_from_p(p);
            check_density(rho);
            const double f = fidelity(rho, phi_plus());
            REQUIRE(std::abs(f - (3.0 * p + 1.0) / 4.0) < 1e-12);
            REQUIRE(std::abs(werner_fidelity_from_p(p) - f) < 1e-12);
            REQUIRE(std::abs(werner_p_from_fidelity(f) - p) < 1e-12);
            const auto back = werner_from_fidelity(f);
            REQUIRE(max_diff(back.matrix(), rho.matrix()) < 1e-12);
            REQUIRE(std::abs(back.matrix().trace() - Complex{1.0}) < 1e-12);
        }
    }

    TEST_CASE("decay examples") {
        for (double f : {0.25, 0.4, 0.9, 1.0}) CHECK(decay_fidelity(f, 0.0, 3.0) == f);
        for (double dt : {0.0, 0.1, 1.0, 50.0}) CHECK(std::abs(decay_fidelity(0.25, dt, 2.0) - 0.25) < 1e-15);
        CHECK(std::abs(decay_fidelity(1.0, 1.0, 1.0) - kDecayOneTau) < 1e-12);
        CHECK(std::abs(decay_fidelity(1.0, 7.5, 7.5) - kDecayOneTau) < 1e-12);
        CHECK(std::abs(decay_fidelity(1.0, DecayParams{2.0, 2.0}) - kDecayOneTau) < 1e-12);
        CHECK_THROWS_AS(decay_fidelity(0.9, -1.0, 1.0), DomainError);
        CHECK_THROWS_AS(decay_fidelity(0.9, 1.0, 0.0), DomainError);
        CHECK_THROWS_AS(decay_fidelity(0.1, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(decay_fidelity(1.5, 1.0, 1.0), DomainError);
    }

    TEST_CASE("decay composes over intervals") {
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> fid(0.25, 1.0), interval(0.0, 5.0), tau(0.1, 10.0);
        for (int trial = 0; trial < 2000; ++trial) {
            const double f = fid(rng), a = interval(rng), b = interval(rng), t = tau(rng);
            REQUIRE(std::abs(decay_fidelity(decay_fidelity(f, a, t), b, t) - decay_fidelity(f, a + b, t)) < 1e-12);
        }
    }

    TEST_CASE("decay strictly decreases toward 1/4") {
        std::mt19937_64 rng(72);
        std::uniform_real_distribution<double> fid(0.3, 1.0), tau(0.5, 5.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double f = fid(rng), t = tau(rng);
            double prev = f;
            for (int k = 1; k <= 20; ++k) {
                const double cur = decay_fidelity(f, 0.25 * k, t);
                REQUIRE(cur < prev);
                REQUIRE(cur > 0.25);
                prev = cur;
            }
            REQUIRE(std::abs(decay_fidelity(f, 100.0 * t, t) - 0.25) < 1e-12);
        }
    }

    TEST_CASE("standard channels are complete for every parameter") {
        for (const char* name : {"amplitude_damping", "phase_damping"})
            for (int i = 0; i <= 20; ++i) {
                const auto ch = standard_channel(name, {{"gamma", i / 20.0}});
                CHECK(completeness(ch.kraus_ops()) < 1e-12);
                CHECK(ch.completeness_error() < 1e-12);
            }
        for (const char* name : {"bit_flip", "phase_flip"})
            for (int i = 0; i <= 20; ++i) CHECK(completeness(standard_channel(name, {{"f", i / 20.0}}).kraus_ops()) < 1e-12);
        for (int i = 0; i <= 20; ++i) CHECK(completeness(standard_channel("depolarizing", {{"q", i / 20.0}}).kraus_ops()) < 1e-12);
    }

    TEST_CASE("channel construction errors") {
        CHECK_THROWS_AS(standard_channel("thermal", {{"gamma", 0.1}}), DomainError);
        CHECK_THROWS_AS(standard_channel("amplitude_damping", {{"gamma", 1.5}}), DomainError);
        CHECK_THROWS_AS(standard_channel("bit_flip", {{"gamma", 0.5}}), DomainError);
        CHECK_THROWS_AS(standard_channel("depolarizing", {{"q", -0.1}}), DomainError);
        CHECK_THROWS_AS(KrausChannel("broken", {Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)}),
                        InvariantViolation);
        CHECK_THROWS_AS(KrausChannel("empty", {}), DomainError);
        CHECK_THROWS_AS(KrausChannel("odd", {Eigen::MatrixXcd::Identity(3, 3)}), DomainError);
    }

    TEST_CASE("zero-strength channels are the identity") {
        std::mt19937_64 rng(73);
        const DensityMatrix rho(2, oracle::random_density(rng, 4));
        const std::vector<std::pair<const char*, std::map<std::string, double>>> channels{
            {"amplitude_damping", {{"gamma", 0.0}}},
            {"phase_damping", {{"gamma", 0.0}}},
            {"bit_flip", {{"f", 0.0}}},
            {"phase_flip", {{"f", 0.0}}},
            {"depolarizing", {{"q", 0.0}}}};
        for (const auto& [name, params] : channels)
            for (std::size_t q = 0; q < 2; ++q)
                CHECK(max_diff(apply_channel(rho, standard_channel(name, params), q).matrix(), rho.matrix()) < 1e-12);
    }

    TEST_CASE("channel action examples") {
        const auto one = DensityMatrix::from_pure(StateVector::basis(1, 1));
        const auto zero = DensityMatrix::from_pure(StateVector::basis(1, 0));
        CHECK(max_diff(apply_channel(one, standard_channel("amplitude_damping", {{"gamma", 1.0}}), 0).matrix(),
                       zero.matrix()) < 1e-12);
        CHECK(max_diff(apply_channel(zero, standard_channel("bit_flip", {{"f", 1.0}}), 0).matrix(), one.matrix()) < 1e-12);

        std::mt19937_64 rng(74);
        for (int trial = 0; trial < 50; ++trial) {
            const auto psi = oracle::random_state(rng, 1);
            const double q = (trial % 11) / 10.0;
            const auto out = apply_channel(DensityMatrix::from_pure(psi), standard_channel("depolarizing", {{"q", q}}), 0);
            CHECK(std::abs(fidelity(out, psi) - (1.0 - q / 2.0)) < 1e-12);
            // (1-q) rho + q I/2
            const Eigen::MatrixXcd expected = (1.0 - q) * DensityMatrix::from_pure(psi).matrix() + q * Eigen::Matrix2cd::Identity() / 2.0;
            CHECK(max_diff(out.matrix(), expected) < 1e-12);
        }
    }

    TEST_CASE("amplitude damping matches its closed form on random inputs") {
        std::mt19937_64 rng(75);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::MatrixXcd r = oracle::random_density(rng, 2);
            const double g = u(rng);
            Eigen::Matrix2cd expected;
            expected << r(0, 0) + g * r(1, 1), std::sqrt(1.0 - g) * r(0, 1), std::sqrt(1.0 - g) * r(1, 0), (1.0 - g) * r(1, 1);
            const auto out = apply_channel(DensityMatrix(1, r), standard_channel("amplitude_damping", {{"gamma", g}}), 0);
            REQUIRE(max_diff(out.matrix(), expected) < 1e-12);
        }
    }

    TEST_CASE("phase damping shrinks coherences by sqrt(1 - gamma)") {
        std::mt19937_64 rng(76);
        const Eigen::MatrixXcd r = oracle::random_density(rng, 2);
        const auto out = apply_channel(DensityMatrix(1, r), standard_channel("phase_damping", {{"gamma", 0.36}}), 0);
        CHECK(std::abs(out(0, 1) - 0.8 * r(0, 1)) < 1e-12);
        CHECK(std::abs(out(0, 0) - r(0, 0)) < 1e-12);
    }

    TEST_CASE("channels preserve density-matrix invariants on random inputs") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        static const char* names[] = {"amplitude_damping", "phase_damping", "bit_flip", "phase_flip", "depolarizing"};
        static const char* keys[] = {"gamma", "gamma", "f", "f", "q"};
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 1 + trial % 3;
            const DensityMatrix rho(n, oracle::random_density(rng, 1 << n));
            const int c = trial % 5;
            const auto ch = standard_channel(names[c], {{keys[c], u(rng)}});
            const auto out = apply_channel(rho, ch, static_cast<std::size_t>(trial) % n);
            check_density(out);
        }
    }

    TEST_CASE("two-qubit channels act on ordered targets") {
        std::mt19937_64 rng(78);
        for (int trial = 0; trial < 30; ++trial) {
            // A random unitary conjugation is a single-operator channel.
            const Eigen::MatrixXcd u = oracle::random_unitary(rng, 4);
            const KrausChannel ch("unitary", {u});
            CHECK(ch.arity() == 2);
            const DensityMatrix rho(3, oracle::random_density(rng, 8));
            const std::vector<std::size_t> targets{2, 0};
            const Eigen::MatrixXcd full = oracle::kron_embed(u, targets, 3);
            const auto out = apply_channel(rho, ch, targets);
            REQUIRE(max_diff(out.matrix(), full * rho.matrix() * full.adjoint()) < 1e-12);
            check_density(out);
        }
        const KrausChannel ch("id2", {Eigen::MatrixXcd::Identity(4, 4)});
        const DensityMatrix rho(2, Eigen::MatrixXcd::Identity(4, 4) / 4.0);
        CHECK_THROWS_AS(apply_channel(rho, ch, 0), DomainError);
        CHECK_THROWS_AS(apply_channel(rho, ch, {0, 0}), DomainError);
        CHECK_THROWS_AS(apply_channel(rho, ch, {0, 2}), DomainError);
    }
}
