#include "qsim/topology.hpp"

#include <doctest.h>

using namespace qsim;

TEST_CASE("topology splits N qubits into L local and p rank qubits") {
    CHECK(Topology(4, 2, 0).local_qubits() == 2);
    CHECK(Topology(35, 7, 0).local_qubits() == 28);
    CHECK(Topology(4, 2, 3).n_ranks() == 4);
    CHECK(Topology(10, 2, 0).local_size() == 256);
}

TEST_CASE("topology rejects L < 1 and out-of-range ranks") {
    CHECK_THROWS_AS(Topology(4, 4, 0), Error);
    CHECK_THROWS_AS(Topology(4, 5, 0), Error);
    CHECK_THROWS_AS(Topology(4, 2, 4), Error);
    CHECK_THROWS_AS(Topology(0, 0, 0), Error);
    CHECK_THROWS_AS(Topology(4, -1, 0), Error);
    CHECK_NOTHROW(Topology(4, 3, 7));
}

TEST_CASE("locality classification") {
    const Topology t4(4, 2, 0);
    CHECK(t4.locality(1) == Locality{Local{1}});
    CHECK(t4.locality(3) == Locality{NonLocal{1}});
    CHECK(Topology(35, 7, 0).locality(28) == Locality{NonLocal{0}});
    CHECK(Topology(35, 7, 0).locality(27) == Locality{Local{27}});
    CHECK_THROWS_AS((void)t4.locality(4), Error);
    CHECK_THROWS_AS((void)t4.locality(-1), Error);

    SUBCASE("partition sizes are L and N - L") {
        for (int n = 1; n <= 12; ++n) {
            for (int p = 0; p < n; ++p) {
                const Topology t(n, p, 0);
                int local = 0;
                int non_local = 0;
                for (int q = 0; q < n; ++q) {
                    const auto loc = t.locality(q);
                    CHECK(std::holds_alternative<Local>(loc) == t.is_local(q));
                    (std::holds_alternative<Local>(loc) ? local : non_local) += 1;
                }
                CHECK(local == t.local_qubits());
                CHECK(non_local == p);
            }
        }
    }
}

TEST_CASE("pair_rank flips exactly the target's rank bit") {
    CHECK(Topology(4, 2, 0).pair_rank(3) == 2);
    CHECK(Topology(4, 2, 1).pair_rank(2) == 0);
    // D = 2^(34 - 25)
    CHECK(Topology(35, 10, 0).pair_distance(34) == 512);
    CHECK(Topology(35, 10, 0).pair_rank(34) == 512);
    CHECK_THROWS_AS((void)Topology(4, 2, 0).pair_rank(1), Error);

    SUBCASE("involution preserving all other rank bits") {
        for (int p = 1; p <= 6; ++p) {
            const int n = p + 3;
            for (Rank r = 0; r < (Rank{1} << p); ++r) {
                const Topology t(n, p, r);
                for (int q = t.local_qubits(); q < n; ++q) {
                    const Rank partner = t.pair_rank(q);
                    CHECK(t.with_rank(partner).pair_rank(q) == r);
                    CHECK((partner ^ r) == (Rank{1} << (q - t.local_qubits())));
                }
            }
        }
    }
}

TEST_CASE("global index decomposes as rank * 2^L + offset") {
    const Topology t(6, 2, 3);
    CHECK(t.global_index(0) == 48);
    CHECK(t.global_index(15) == 63);
    CHECK(t.rank_bit_value(5) == 1);
    CHECK(t.rank_bit_value(4) == 1);
    CHECK(Topology(6, 2, 2).rank_bit_value(4) == 0);
}

TEST_CASE("memory per rank") {
    CHECK(memory_bytes_per_rank(30, 0) == 17'179'869'184ULL);
    CHECK(memory_bytes_per_rank(30, 0) == (std::uint64_t{1} << 34));
    CHECK(memory_bytes_per_rank(40, 0) == (std::uint64_t{1} << 44));
    CHECK(memory_bytes_per_rank(10, 2) == 4096);
    CHECK(memory_bytes_per_rank(10, 2, true) == 8192);

    SUBCASE("per-rank bytes times rank count is invariant") {
        for (int n = 1; n <= 40; ++n) {
            for (int p = 0; p <= std::min(10, n - 1); ++p) {
                CHECK(memory_bytes_per_rank(n, p) * (std::uint64_t{1} << p) ==
                      memory_bytes_per_rank(n, 0));
            }
        }
    }
}
