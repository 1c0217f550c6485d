#include "test_support.hpp"

#include <algorithm>

using namespace qsim;
using namespace qsim::testing;

namespace {

std::size_t count_kind(const Circuit &c, GateKind kind) {
    return static_cast<std::size_t>(std::count_if(
        c.gates().begin(), c.gates().end(), [kind](const Gate &g) { return g.kind() == kind; }));
}

} // namespace

TEST_CASE("QFT gate counts") {
    for (int n = 1; n <= 20; ++n) {
        const auto qft = build_qft(n);
        const auto un = static_cast<std::size_t>(n);
        CHECK(count_kind(qft, GateKind::H) == un);
        CHECK(count_kind(qft, GateKind::CRK) == un * (un - 1) / 2);
        CHECK(qft.size() == un * (un + 1) / 2);
        CHECK(count_kind(build_qft(n, true), GateKind::SWAP) == un / 2);
    }
    const auto qft3 = build_qft(3);
    CHECK(qft3.gates().front() == Gate::h(2));
    CHECK(qft3.gates()[1] == Gate::crk(1, 2, 2));
    CHECK(qft3.gates()[2] == Gate::crk(0, 2, 3));
}

TEST_CASE("QFT with the swap layer reproduces the DFT of basis states") {
    std::mt19937_64 gen(4);
    for (int n = 1; n <= 8; ++n) {
        const auto qft = build_qft(n, true);
        std::uniform_int_distribution<Index> pick(0, pow2(n) - 1);
        for (int trial = 0; trial < 4; ++trial) {
            const Index x = pick(gen);
            const int p = std::min(n - 1, 2);
            check_close(run_distributed(qft, p, x).state, oracle::dft_reference(x, n), 1e-10);
        }
    }
}

TEST_CASE("universal circuit layout") {
    for (int n = 2; n <= 64; ++n) {
        const auto c = build_universal({n, {}});
        const auto un = static_cast<std::size_t>(n);
        CHECK(c.size() == 2 * un * un);
        CHECK(count_kind(c, GateKind::RK) == un * (un + 1));
        CHECK(count_kind(c, GateKind::CNOT) == un * (un - 1));
    }
    CHECK(build_universal({4, {}}).size() == 32);

    const auto fixed = build_universal({3, [](std::size_t) { return 4; }});
    for (const auto &g : fixed.gates()) {
        if (g.kind() == GateKind::RK) {
            CHECK(g.k() == 4);
        }
    }
    CHECK_THROWS_AS((void)build_universal({1, {}}), Error);
}

TEST_CASE("GHZ circuit") {
    const auto ghz = build_ghz(5);
    CHECK(ghz.size() == 5);
    const auto state = run_distributed(ghz, 2).state;
    CHECK(std::abs(std::norm(state[0]) - 0.5) < 1e-15);
    CHECK(std::abs(std::norm(state[31]) - 0.5) < 1e-15);
}

TEST_CASE("a circuit followed by its inverse is the identity") {
    std::mt19937_64 gen(12);
    for (int n = 2; n <= 8; ++n) {
        Circuit round_trip(n);
        const auto qft = build_qft(n, n % 2 == 0);
        for (const auto &g : qft.gates()) {
            round_trip.add(g);
        }
        const auto qft_inverse = inverse_circuit(qft);
        for (const auto &g : qft_inverse.gates()) {
            round_trip.add(g);
        }
        std::uniform_int_distribution<Index> pick(0, pow2(n) - 1);
        const Index x = pick(gen);
        oracle::DenseState expected(n, x);
        check_close(run_distributed(round_trip, 1, x).state, expected.amplitudes(), 1e-12);

        const auto random = random_circuit(gen, {n, 50, n - 1});
        Circuit both(n);
        for (const auto &g : random.gates()) {
            both.add(g);
        }
        const auto random_inverse = inverse_circuit(random);
        for (const auto &g : random_inverse.gates()) {
            both.add(g);
        }
        check_close(oracle_state(both, x), expected.amplitudes(), 1e-12);
    }
}

TEST_CASE("random unitaries are unitary") {
    std::mt19937_64 gen(8);
    for (std::size_t dim : {2U, 4U, 8U}) {
        const auto u = random_unitary(gen, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                Complex dot = 0.0;
                for (std::size_t r = 0; r < dim; ++r) {
                    dot += std::conj(u[r * dim + i]) * u[r * dim + j];
                }
                CHECK(std::abs(dot - Complex(i == j ? 1.0 : 0.0, 0.0)) < 1e-13);
            }
        }
    }
}

TEST_CASE("random circuits respect their options") {
    std::mt19937_64 gen(1);
    const auto c = random_circuit(gen, {6, 500, 3});
    CHECK(c.size() == 500);
    for (const auto &g : c.gates()) {
        if (g.kind() == GateKind::DENSE) {
            for (int q : g.qubits()) {
                CHECK(q < 3);
            }
        }
    }
    const auto no_dense = random_circuit(gen, {6, 500, 0});
    CHECK(std::none_of(no_dense.gates().begin(), no_dense.gates().end(),
                       [](const Gate &g) { return g.kind() == GateKind::DENSE; }));
}
