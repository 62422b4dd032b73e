#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdq/error.hpp"
#include "qdq/tensor.hpp"

using namespace qdq;

namespace {

std::vector<Complex> matrix_data(const Eigen::MatrixXcd& m) {
    std::vector<Complex> out;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
}

// GHZ(3) as an open-boundary chain of three tensors.
std::vector<Tensor> ghz_network() {
    const double s = std::pow(0.5, 1.0 / 6.0);  // s^3 = 1/sqrt(2)
    Tensor a({"q0", "b1"}, {2, 2}, {s, 0.0, 0.0, s});
    Tensor b({"b1", "q1", "b2"}, {2, 2, 2}, {s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s});
    Tensor c({"b2", "q2"}, {2, 2}, {s, 0.0, 0.0, s});
    return {a, b, c};
}

}  // namespace

TEST_SUITE("tensor") {
    TEST_CASE("constructor enforces its invariants") {
        CHECK_NOTHROW(Tensor({"i"}, {2}, {1.0, 2.0}));
        CHECK_THROWS_AS(Tensor({"i"}, {2}, {1.0}), InvariantViolation);
        CHECK_THROWS_AS(Tensor({"i", "i"}, {2, 2}, std::vector<Complex>(4)), InvariantViolation);
        CHECK_THROWS_AS(Tensor({"i"}, {0}, {}), InvariantViolation);
        CHECK_THROWS_AS(Tensor({"i", "j"}, {2}, {1.0, 2.0}), InvariantViolation);
    }

    TEST_CASE("contracting D(i,k) with E(k,j) yields F(i,j)") {
        std::mt19937_64 rng(11);
        const auto d = oracle::random_matrix(rng, 2, 3);
        const auto e = oracle::random_matrix(rng, 3, 2);
        const Tensor f = contract(oracle::matrix_tensor(d, "i", "k"), oracle::matrix_tensor(e, "k", "j"));
        CHECK(f.labels() == std::vector<std::string>{"i", "j"});
        CHECK(f.dims() == std::vector<std::size_t>{2, 2});
        CHECK(oracle::max_abs_diff(f.data(), matrix_data(oracle::naive_matmul(d, e))) < 1e-12);
    }

    TEST_CASE("identity contraction returns the other operand") {
        std::mt19937_64 rng(12);
        const auto m = oracle::random_matrix(rng, 2, 5);
        const Tensor id = oracle::matrix_tensor(Eigen::MatrixXcd::Identity(2, 2), "i", "k");
        const Tensor out = contract(id, oracle::matrix_tensor(m, "k", "j"));
        CHECK(out.labels() == std::vector<std::string>{"i", "j"});
        CHECK(oracle::max_abs_diff(out.data(), matrix_data(m)) == 0.0);
    }

    TEST_CASE("matrix contraction matches the triple-loop product up to 16x16") {
        std::mt19937_64 rng(13);
        std::uniform_int_distribution<Eigen::Index> size(1, 16);
        for (int trial = 0; trial < 200; ++trial) {
            const auto r = size(rng), k = size(rng), c = size(rng);
            const auto a = oracle::random_matrix(rng, r, k);
            const auto b = oracle::random_matrix(rng, k, c);
            const Tensor out = contract(oracle::matrix_tensor(a, "r", "k"), oracle::matrix_tensor(b, "k", "c"));
            REQUIRE(oracle::max_abs_diff(out.data(), matrix_data(oracle::naive_matmul(a, b))) < 1e-12);
        }
    }

    TEST_CASE("contraction is bilinear") {
        std::mt19937_64 rng(14);
        for (int trial = 0; trial < 100; ++trial) {
            const auto net = oracle::random_network(rng, 2, 4);
            const Complex alpha = oracle::random_complex(rng);
            const Tensor lhs = contract(net[0].scaled(alpha), net[1]);
            const Tensor rhs = contract(net[0], net[1]).scaled(alpha);
            REQUIRE(oracle::max_abs_diff(lhs.data(), rhs.data()) < 1e-12);
            const Tensor lhs2 = contract(net[0], net[1].scaled(alpha));
            REQUIRE(oracle::max_abs_diff(lhs2.data(), rhs.data()) < 1e-12);
        }
    }

    TEST_CASE("contraction labels are free(a) followed by free(b)") {
        const Tensor a({"x", "k", "y"}, {2, 3, 2}, std::vector<Complex>(12, 1.0));
        const Tensor b({"z", "k"}, {4, 3}, std::vector<Complex>(12, 1.0));
        const Tensor out = contract(a, b);
        CHECK(out.labels() == std::vector<std::string>{"x", "y", "z"});
        CHECK(out.dims() == std::vector<std::size_t>{2, 2, 4});
        for (const auto& v : out.data()) CHECK(v == Complex{3.0, 0.0});
    }

    TEST_CASE("no shared labels gives the outer product") {
        const Tensor a({"i"}, {2}, {1.0, 2.0});
        const Tensor b({"j"}, {3}, {1.0, 10.0, 100.0});
        const Tensor out = contract(a, b);
        CHECK(out.data() == std::vector<Complex>{1.0, 10.0, 100.0, 2.0, 20.0, 200.0});
    }

    TEST_CASE("dimension mismatch on a shared label is an invalid contraction") {
        const Tensor a({"i", "k"}, {2, 3}, std::vector<Complex>(6));
        const Tensor b({"k", "j"}, {4, 2}, std::vector<Complex>(8));
        CHECK_THROWS_AS(contract(a, b), InvalidContraction);
    }

    TEST_CASE("transpose_relabel") {
        const Tensor m({"i", "j"}, {2, 3}, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
        SUBCASE("identity permutation") {
            const Tensor same = transpose_relabel(m, {"i", "j"});
            CHECK(same.labels() == m.labels());
            CHECK(same.data() == m.data());
        }
        SUBCASE("matrix transpose") {
            const Tensor t = transpose_relabel(m, {"j", "i"});
            CHECK(t.dims() == std::vector<std::size_t>{3, 2});
            CHECK(t.data() == std::vector<Complex>{1.0, 4.0, 2.0, 5.0, 3.0, 6.0});
        }
        SUBCASE("double transpose is bit-identical") {
            std::mt19937_64 rng(15);
            const auto net = oracle::random_network(rng, 3, 5);
            for (const auto& t : net) {
                std::vector<std::string> rev(t.labels().rbegin(), t.labels().rend());
                const Tensor back = transpose_relabel(transpose_relabel(t, rev), t.labels());
                CHECK(back.data() == t.data());
                CHECK(back.labels() == t.labels());
            }
        }
        SUBCASE("not a permutation") {
            CHECK_THROWS_AS(transpose_relabel(m, {"i"}), DomainError);
            CHECK_THROWS_AS(transpose_relabel(m, {"i", "k"}), DomainError);
            CHECK_THROWS_AS(transpose_relabel(m, {"i", "i"}), DomainError);
        }
    }

    TEST_CASE("plan for a single tensor is empty with zero cost") {
        const std::vector<Tensor> net{Tensor({"i"}, {3}, {1.0, 2.0, 3.0})};
        const auto plan = plan_contraction(net);
        CHECK(plan.steps.empty());
        CHECK(plan.cost_estimate == 0);
        const Tensor out = contract_network(net, plan);
        CHECK(out.data() == net[0].data());
        CHECK(out.labels() == net[0].labels());
    }

    TEST_CASE("greedy plan on a 2x100, 100x2, 2x100 chain contracts the first pair first") {
        const std::vector<Tensor> net{Tensor({"i", "j"}, {2, 100}, std::vector<Complex>(200, 1.0)),
                                      Tensor({"j", "k"}, {100, 2}, std::vector<Complex>(200, 1.0)),
                                      Tensor({"k", "l"}, {2, 100}, std::vector<Complex>(200, 1.0))};
        // Enumerate both orders by hand: (AB)C has intermediates 2x2 then
        // 2x100; A(BC) has 100x100 then 2x100.
        const std::uint64_t first_pair_cost = 2 * 2 + 2 * 100;
        const std::uint64_t second_pair_cost = 100 * 100 + 2 * 100;
        const auto plan = plan_contraction(net);
        REQUIRE(plan.steps.size() == 2);
        CHECK(plan.steps[0] == std::pair<std::size_t, std::size_t>{0, 1});
        CHECK(plan.cost_estimate == std::min(first_pair_cost, second_pair_cost));
        CHECK(plan_cost(net, plan) == plan.cost_estimate);
    }

    TEST_CASE("GHZ network contracts to the GHZ vector") {
        const auto net = ghz_network();
        const auto plan = plan_contraction(net);
        const Tensor out = contract_network(net, plan);
        CHECK(out.labels() == std::vector<std::string>{"q0", "q1", "q2"});
        const double h = 1.0 / std::numbers::sqrt2;
        for (std::size_t i = 0; i < 8; ++i) {
            const double expected = (i == 0 || i == 7) ? h : 0.0;
            CHECK(std::abs(out.data()[i] - expected) < 1e-12);
        }
        for (bool reversed : {false, true}) {
            const Tensor alt = contract_network(net, linear_plan(net, reversed));
            CHECK(oracle::max_abs_diff(alt.data(), out.data()) < 1e-12);
        }
    }

    TEST_CASE("plan independence on random networks against brute force") {
        std::mt19937_64 rng(16);
        std::uniform_int_distribution<std::size_t> count(2, 5);
        for (int trial = 0; trial < 40; ++trial) {
            const auto net = oracle::random_network(rng, count(rng), 3);
            const Tensor reference = oracle::brute_force_contract(net);
            const auto greedy = plan_contraction(net);
            CHECK(greedy.cost_estimate == plan_cost(net, greedy));
            for (const auto& plan : {greedy, linear_plan(net, false), linear_plan(net, true)}) {
                const Tensor out = contract_network(net, plan);
                REQUIRE(out.labels() == reference.labels());
                REQUIRE(oracle::max_abs_diff(out.data(), reference.data()) < 1e-10);
            }
        }
    }

    TEST_CASE("greedy plans are complete and report their replayed cost") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 50; ++trial) {
            const auto net = oracle::random_network(rng, 4, 6);
            const auto greedy = plan_contraction(net);
            CHECK(plan_cost(net, greedy) == greedy.cost_estimate);
            CHECK(greedy.steps.size() == net.size() - 1);
        }
    }

    TEST_CASE("invalid plans are rejected") {
        const auto net = ghz_network();
        CHECK_THROWS_AS(contract_network(net, ContractionPlan{{{0, 7}, {3, 2}}, 0}), InvalidPlan);
        CHECK_THROWS_AS(contract_network(net, ContractionPlan{{{0, 1}, {0, 2}}, 0}), InvalidPlan);
        CHECK_THROWS_AS(contract_network(net, ContractionPlan{{{0, 1}}, 0}), InvalidPlan);
        CHECK_THROWS_AS(contract_network(net, ContractionPlan{{{1, 1}, {3, 2}}, 0}), InvalidPlan);
        CHECK_THROWS_AS(contract_network(net, ContractionPlan{{{0, 1}, {3, 2}, {4, 4}}, 0}), InvalidPlan);
    }

    TEST_CASE("inconsistent networks are rejected") {
        const std::vector<Tensor> mismatch{Tensor({"i", "k"}, {2, 3}, std::vector<Complex>(6)),
                                           Tensor({"k"}, {2}, std::vector<Complex>(2))};
        CHECK_THROWS_AS(plan_contraction(mismatch), InvalidNetwork);
        const std::vector<Tensor> hyper{Tensor({"k"}, {2}, std::vector<Complex>(2)),
                                        Tensor({"k"}, {2}, std::vector<Complex>(2)),
                                        Tensor({"k"}, {2}, std::vector<Complex>(2))};
        CHECK_THROWS_AS(plan_contraction(hyper), InvalidNetwork);
        CHECK_THROWS_AS(plan_contraction(std::vector<Tensor>{}), InvalidNetwork);
    }
}
