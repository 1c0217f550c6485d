#include "qsim/measure.hpp"

#include "test_support.hpp"

#include <algorithm>

using namespace qsim;
using namespace qsim::testing;

namespace {

/// Runs circuit on 2^p simulated ranks, evaluates fn on every rank and
/// checks that all ranks agree before returning rank 0's value.
template <typename Fn>
auto measure(const Circuit &circuit, int p, Fn fn) {
    using Result = decltype(fn(std::declval<const DistState &>()));
    std::vector<Result> results(pow2(p));
    run_simulated(p, [&](Transport &t) {
        DistState state(Topology(circuit.n_qubits(), p, t.rank()), t);
        state.apply_circuit(circuit);
        results[t.rank()] = fn(state);
    });
    for (const auto &r : results) {
        CHECK(r == results[0]);
    }
    return results[0];
}

Circuit bell() {
    Circuit c(2);
    c.add(Gate::h(0));
    c.add(Gate::cnot(0, 1));
    return c;
}

PauliSum random_pauli_sum(std::mt19937_64 &gen, int n, int n_terms) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> pauli(0, 3);
    PauliSum sum;
    for (int i = 0; i < n_terms; ++i) {
        PauliTerm term{coeff(gen), {}};
        for (int q = 0; q < n; ++q) {
            const int kind = pauli(gen);
            if (kind < 3) {
                term.factors[q] = static_cast<Pauli>(kind);
            }
        }
        sum.push_back(term);
    }
    return sum;
}

} // namespace

TEST_CASE("Pauli-sum text format") {
    const auto sum = parse_pauli_sum("# toy\n1 Z 0\n-0.5 X 0 Y 3\n2.0 I 1\n");
    REQUIRE(sum.size() == 3);
    CHECK(sum[1].coefficient == -0.5);
    CHECK(sum[1].factors == std::map<int, Pauli>{{0, Pauli::X}, {3, Pauli::Y}});
    CHECK(sum[2].factors.empty());
    CHECK(parse_pauli_sum(render_pauli_sum(sum)) == sum);
    CHECK_THROWS_AS((void)parse_pauli_sum("1 Q 0"), ParseError);
    CHECK_THROWS_AS((void)parse_pauli_sum("1 Z 0 X 0"), ParseError);
    CHECK_THROWS_AS((void)parse_pauli_sum("Z 0"), ParseError);
}

TEST_CASE("probability examples") {
    Circuit plus(1);
    plus.add(Gate::h(0));
    const std::vector<int> q0{0};
    const auto p_plus = measure(plus, 0, [&](const DistState &s) { return probability(s, q0); });
    CHECK(std::abs(p_plus[0] - 0.5) < 1e-15);
    CHECK(std::abs(p_plus[1] - 0.5) < 1e-15);

    const std::vector<int> both{0, 1};
    for (int p = 0; p <= 1; ++p) {
        const auto pb = measure(bell(), p, [&](const DistState &s) { return probability(s, both); });
        CHECK(std::abs(pb[0] - 0.5) < 1e-15);
        CHECK(pb[1] == 0.0);
        CHECK(pb[2] == 0.0);
        CHECK(std::abs(pb[3] - 0.5) < 1e-15);
    }

    const std::vector<int> ends{0, 7};
    const auto ghz = measure(build_ghz(8), 3, [&](const DistState &s) { return probability(s, ends); });
    CHECK(std::abs(ghz[0] - 0.5) < 1e-15);
    CHECK(std::abs(ghz[3] - 0.5) < 1e-15);
    CHECK(ghz[1] + ghz[2] == 0.0);

    SUBCASE("bit order follows the subset order") {
        Circuit c(3);
        c.add(Gate::x(2));
        const std::vector<int> order{2, 0};
        const auto dist = measure(c, 1, [&](const DistState &s) { return probability(s, order); });
        CHECK(dist == std::vector<double>{0.0, 1.0, 0.0, 0.0});
    }
    SUBCASE("marginals sum to one") {
        std::mt19937_64 gen(6);
        const auto c = random_circuit(gen, {9, 60, 6});
        const std::vector<int> subset{8, 1, 4};
        const auto dist = measure(c, 3, [&](const DistState &s) { return probability(s, subset); });
        double total = 0.0;
        for (double v : dist) {
            total += v;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("expectation value examples") {
    const PauliSum z0{{1.0, {{0, Pauli::Z}}}};
    CHECK(measure(Circuit(1), 0, [&](const DistState &s) { return expval_pauli_sum(s, z0); }) ==
          1.0);

    Circuit plus(1);
    plus.add(Gate::h(0));
    CHECK(std::abs(measure(plus, 0, [&](const DistState &s) { return expval_pauli_sum(s, z0); })) <
          1e-15);

    const PauliSum zz{{1.0, {{0, Pauli::Z}, {1, Pauli::Z}}}};
    const PauliSum xx{{1.0, {{0, Pauli::X}, {1, Pauli::X}}}};
    const PauliSum yy{{1.0, {{0, Pauli::Y}, {1, Pauli::Y}}}};
    for (int p = 0; p <= 1; ++p) {
        CHECK(std::abs(measure(bell(), p, [&](const DistState &s) { return expval_pauli_sum(s, zz); }) -
                       1.0) <= 1e-12);
        CHECK(std::abs(measure(bell(), p, [&](const DistState &s) { return expval_pauli_sum(s, xx); }) -
                       1.0) <= 1e-12);
        CHECK(std::abs(measure(bell(), p, [&](const DistState &s) { return expval_pauli_sum(s, yy); }) +
                       1.0) <= 1e-12);
    }
}

TEST_CASE("expectation values match the dense reference and ignore partitioning") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 8;
        const auto circuit = random_circuit(gen, {n, 40, 1});
        const auto terms = random_pauli_sum(gen, n, 20);
        oracle::DenseState dense(n);
        oracle::dense_apply(dense, circuit);
        const double expected = oracle::dense_expval(dense, terms);
        const double p0 =
            measure(circuit, 0, [&](const DistState &s) { return expval_pauli_sum(s, terms); });
        CHECK(std::abs(p0 - expected) <= 1e-10);
        const int p = std::min(n - 1, 3);
        const double pp =
            measure(circuit, p, [&](const DistState &s) { return expval_pauli_sum(s, terms); });
        CHECK(std::abs(pp - p0) <= 1e-12);
    }
}

TEST_CASE("expectation value requires a normalized state") {
    const PauliSum z0{{1.0, {{0, Pauli::Z}}}};
    run_simulated(0, [&](Transport &t) {
        DistState state(Topology(2, 0, 0), t);
        state.amplitudes()[1] = 1.0;
        CHECK_THROWS_AS((void)expval_pauli_sum(state, z0), Error);
    });
}

TEST_CASE("sampling") {
    SUBCASE("a basis state always yields its index") {
        Circuit c(5);
        c.add(Gate::x(1));
        c.add(Gate::x(4));
        const auto shots = measure(c, 2, [](const DistState &s) { return sample(s, 100, 5); });
        CHECK(std::all_of(shots.begin(), shots.end(), [](Index i) { return i == 18; }));
    }
    SUBCASE("Bell frequencies") {
        const auto shots = measure(bell(), 1, [](const DistState &s) { return sample(s, 100000, 42); });
        const auto zeros = std::count(shots.begin(), shots.end(), Index{0});
        const auto threes = std::count(shots.begin(), shots.end(), Index{3});
        CHECK(zeros + threes == 100000);
        CHECK(std::abs(static_cast<double>(zeros) / 100000.0 - 0.5) <= 0.01);
    }
    SUBCASE("fixed seed and rank count reproduce the shots") {
        std::mt19937_64 gen(1);
        const auto c = random_circuit(gen, {6, 30, 4});
        const auto a = measure(c, 2, [](const DistState &s) { return sample(s, 500, 9); });
        const auto b = measure(c, 2, [](const DistState &s) { return sample(s, 500, 9); });
        const auto other = measure(c, 2, [](const DistState &s) { return sample(s, 500, 10); });
        CHECK(a == b);
        CHECK(a != other);
    }
    SUBCASE("chi-square goodness of fit") {
        std::mt19937_64 gen(17);
        const auto c = random_circuit(gen, {4, 40, 2});
        const auto expected = oracle_state(c);
        constexpr std::size_t kShots = 20000;
        const auto shots = measure(c, 2, [](const DistState &s) { return sample(s, kShots, 3); });
        std::vector<double> counts(16, 0.0);
        for (Index i : shots) {
            counts.at(i) += 1.0;
        }
        double chi2 = 0.0;
        int bins = 0;
        for (std::size_t i = 0; i < 16; ++i) {
            const double e = std::norm(expected[i]) * kShots;
            if (e > 5.0) {
                chi2 += (counts[i] - e) * (counts[i] - e) / e;
                ++bins;
            }
        }
        REQUIRE(bins > 1);
        // 0.999 quantile of chi-square with 15 degrees of freedom.
        CHECK(chi2 < 37.7);
    }
    SUBCASE("zero shots is rejected") {
        run_simulated(0, [](Transport &t) {
            DistState state(Topology(1, 0, 0), t);
            CHECK_THROWS_AS((void)sample(state, 0, 1), Error);
        });
    }
}
