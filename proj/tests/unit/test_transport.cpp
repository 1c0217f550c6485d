#include "qsim/sim_transport.hpp"

#include <doctest.h>

#include <atomic>
#include <mutex>
#include <numeric>

using namespace qsim;

TEST_CASE("two-rank exchange swaps buffers") {
    std::vector<std::vector<Complex>> received(2);
    run_simulated(1, [&](Transport &t) {
        const std::vector<Complex> mine{Complex{t.rank() == 0 ? 1.0 : 2.0, 0.5}};
        received[t.rank()] = t.exchange(1 - t.rank(), mine);
    });
    CHECK(received[0][0] == Complex{2.0, 0.5});
    CHECK(received[1][0] == Complex{1.0, 0.5});
}

TEST_CASE("exchanging twice restores the original buffer") {
    run_simulated(1, [](Transport &t) {
        std::vector<Complex> buffer(8);
        for (std::size_t i = 0; i < buffer.size(); ++i) {
            buffer[i] = Complex(static_cast<double>(i), static_cast<double>(t.rank()));
        }
        const auto original = buffer;
        buffer = t.exchange(1 - t.rank(), buffer);
        CHECK(buffer != original);
        buffer = t.exchange(1 - t.rank(), buffer);
        CHECK(buffer == original);
    });
}

TEST_CASE("concurrent disjoint pairs do not cross-talk") {
    // Pairs (0,2) and (1,3), each payload a distinct sentinel.
    std::vector<std::vector<Complex>> received(4);
    std::mutex mutex;
    run_simulated(2, [&](Transport &t) {
        const Rank partner = t.rank() ^ 2U;
        std::vector<Complex> sentinel(64, Complex(100.0 + t.rank(), -static_cast<double>(t.rank())));
        for (int round = 0; round < 20; ++round) {
            auto got = t.exchange(partner, sentinel);
            const std::lock_guard lock(mutex);
            received[t.rank()] = std::move(got);
        }
    });
    for (Rank r = 0; r < 4; ++r) {
        const Rank partner = r ^ 2U;
        for (const auto &value : received[r]) {
            CHECK(value == Complex(100.0 + partner, -static_cast<double>(partner)));
        }
    }
}

TEST_CASE("allreduce_sum") {
    SUBCASE("four ranks contributing 1.0") {
        run_simulated(2, [](Transport &t) {
            const std::vector<double> one{1.0};
            CHECK(t.allreduce_sum(one) == std::vector<double>{4.0});
        });
    }
    SUBCASE("single rank is the identity") {
        run_simulated(0, [](Transport &t) {
            const std::vector<double> v{0.1, 0.2};
            CHECK(t.allreduce_sum(v) == v);
        });
    }
    SUBCASE("bit-identical across repeats and equal to the fixed tree order") {
        // Values chosen so summation order changes the rounding.
        const std::vector<double> inputs{1e16, 1.0, -1e16, 1.0, 3.3, 1e-3, 7.7, -2.2};
        std::vector<double> expected_tree;
        {
            std::vector<std::vector<double>> parts;
            for (const double v : inputs) {
                parts.push_back({v});
            }
            expected_tree = tree_sum(parts);
        }
        // Tree: ((x0+x1)+(x2+x3)) + ((x4+x5)+(x6+x7))
        const double by_hand = ((inputs[0] + inputs[1]) + (inputs[2] + inputs[3])) +
                               ((inputs[4] + inputs[5]) + (inputs[6] + inputs[7]));
        CHECK(expected_tree[0] == by_hand);

        for (int repeat = 0; repeat < 5; ++repeat) {
            std::vector<double> results(8);
            run_simulated(3, [&](Transport &t) {
                const std::vector<double> mine{inputs[t.rank()]};
                results[t.rank()] = t.allreduce_sum(mine)[0];
            });
            for (const double r : results) {
                CHECK(r == by_hand);
            }
        }
    }
    SUBCASE("length mismatch is fatal") {
        CHECK_THROWS_AS(run_simulated(1,
                                      [](Transport &t) {
                                          const std::vector<double> v(1 + t.rank(), 1.0);
                                          (void)t.allreduce_sum(v);
                                      }),
                        TransportError);
    }
}

TEST_CASE("gather_to_root concatenates in rank order") {
    SUBCASE("two ranks") {
        std::vector<Complex> at_root;
        run_simulated(1, [&](Transport &t) {
            const std::vector<Complex> mine{Complex(t.rank() == 0 ? 1.0 : 2.0)};
            auto got = t.gather_to_root(mine);
            if (t.rank() == 0) {
                at_root = std::move(got);
            } else {
                CHECK(got.empty());
            }
        });
        CHECK(at_root == std::vector<Complex>{1.0, 2.0});
    }
    SUBCASE("single rank is the identity") {
        run_simulated(0, [](Transport &t) {
            const std::vector<Complex> v{1.0, 2.0, 3.0};
            CHECK(t.gather_to_root(v) == v);
        });
    }
}

TEST_CASE("statistics") {
    SUBCASE("zero before any operation") {
        run_simulated(1, [](Transport &t) {
            CHECK(t.stats().exchanges == 0);
            CHECK(t.stats().bytes_sent == 0);
            CHECK(t.stats().allreduces == 0);
            CHECK(t.stats().per_gate.empty());
        });
    }
    SUBCASE("one exchange of 2^L amplitudes counts 2^L * 16 bytes") {
        run_simulated(1, [](Transport &t) {
            t.set_gate_seq(7);
            const std::vector<Complex> slice(32);
            (void)t.exchange(1 - t.rank(), slice);
            CHECK(t.stats().exchanges == 1);
            CHECK(t.stats().bytes_sent == 32 * 16);
            CHECK(t.stats().per_gate.at(7) == GateTraffic{1, 512});
            REQUIRE(t.stats().exchange_log.size() == 1);
            CHECK(t.stats().exchange_log[0].partner == 1 - t.rank());
        });
    }
}

TEST_CASE("invalid and mismatched exchanges are fatal") {
    CHECK_THROWS_AS(run_simulated(1,
                                  [](Transport &t) {
                                      const std::vector<Complex> v(2);
                                      (void)t.exchange(t.rank(), v);
                                  }),
                    TransportError);
    CHECK_THROWS_AS(run_simulated(1,
                                  [](Transport &t) {
                                      const std::vector<Complex> v(2 + t.rank());
                                      (void)t.exchange(1 - t.rank(), v);
                                  }),
                    TransportError);
    SUBCASE("ranks disagreeing on the gate sequence") {
        CHECK_THROWS_AS(run_simulated(1,
                                      [](Transport &t) {
                                          t.set_gate_seq(t.rank());
                                          const std::vector<Complex> v(2);
                                          (void)t.exchange(1 - t.rank(), v);
                                      }),
                        TransportError);
    }
}

TEST_CASE("a failing rank unblocks its peers and its error is rethrown") {
    std::atomic<int> aborted{0};
    CHECK_THROWS_WITH(run_simulated(2,
                                    [&](Transport &t) {
                                        if (t.rank() == 3) {
                                            throw Error("rank 3 exploded");
                                        }
                                        try {
                                            const std::vector<double> v{1.0};
                                            (void)t.allreduce_sum(v);
                                        } catch (const RankAborted &) {
                                            ++aborted;
                                            throw;
                                        }
                                    }),
                      "rank 3 exploded");
    CHECK(aborted == 3);
}

TEST_CASE("transport mode selection") {
    CHECK(parse_transport_mode("simulated") == TransportMode::Simulated);
    CHECK(parse_transport_mode("external") == TransportMode::External);
    CHECK_THROWS_AS((void)parse_transport_mode("carrier-pigeon"), Error);
    CHECK(transport_mode_name(TransportMode::External) == "external");
}
