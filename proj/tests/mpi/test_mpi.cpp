// Runs under mpirun with 4 processes; every process checks its own share and
// the exit status is nonzero if any check fails on any rank.
#include "qsim/circuits.hpp"
#include "qsim/engine.hpp"
#include "qsim/measure.hpp"
#include "qsim/oracle.hpp"
#include "qsim/transport.hpp"

#include <cstdio>
#include <numeric>
#include <random>

using namespace qsim;

namespace {

int failures = 0;

void expect(bool ok, const char *what, Rank rank) {
    if (!ok) {
        std::fprintf(stderr, "rank %u: FAILED %s\n", rank, what);
        ++failures;
    }
}

} // namespace

int main() {
    if (!external_transport_available()) {
        std::fprintf(stderr, "built without the external transport\n");
        return 1;
    }
    constexpr int kLogRanks = 2;

    launch(TransportMode::External, kLogRanks, [](Transport &t) {
        const Rank me = t.rank();
        expect(t.size() == 4, "job size", me);

        std::vector<Complex> mine(1000, Complex(me, -static_cast<double>(me)));
        for (Rank bit = 1; bit < 4; bit <<= 1) {
            const auto theirs = t.exchange(me ^ bit, mine);
            const double r = static_cast<double>(me ^ bit);
            expect(theirs.size() == mine.size() && theirs.front() == Complex(r, -r) &&
                       theirs.back() == Complex(r, -r),
                   "pair exchange", me);
        }

        const std::vector<double> local{1.0, static_cast<double>(me)};
        const auto sum = t.allreduce_sum(local);
        expect(sum == std::vector<double>{4.0, 6.0}, "allreduce", me);

        const std::vector<Complex> one{Complex(me, 0.0)};
        const auto gathered = t.gather_to_root(one);
        if (me == 0) {
            expect(gathered.size() == 4 && gathered[3] == Complex(3.0, 0.0), "gather", me);
        } else {
            expect(gathered.empty(), "gather on non-root", me);
        }

        std::mt19937_64 gen(2718);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 4 + trial % 6;
            const auto circuit = random_circuit(gen, {n, 80, n - kLogRanks});
            DistState state(Topology(n, kLogRanks, me), t);
            state.apply_circuit(circuit);
            const auto full = gather_full_state(state);
            if (me == 0) {
                oracle::DenseState reference(n);
                oracle::dense_apply(reference, circuit);
                expect(oracle::max_abs_diff(full, reference.amplitudes()) <= 1e-12,
                       "engine matches oracle", me);
            }
            const PauliSum zz{{1.0, {{0, Pauli::Z}, {n - 1, Pauli::Z}}}};
            (void)expval_pauli_sum(state, zz);
        }
    });

    return failures == 0 ? 0 : 1;
}
