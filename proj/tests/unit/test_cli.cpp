#include "cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

using namespace qsim;
using namespace qsim::cli;

namespace {

std::string data_file(const std::string &name) {
    const char *dir = std::getenv("QSIM_TEST_DATA");
    REQUIRE(dir != nullptr);
    return std::string(dir) + "/" + name;
}

struct Captured {
    int code;
    std::string out;
    std::string err;
};

Captured run(const RunOptions &options) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cmd_run(options, out, err);
    return {code, out.str(), err.str()};
}

Captured verify(const VerifyOptions &options) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cmd_verify(options, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("run: Bell circuit") {
    const auto result = run({data_file("bell.qc"), 1, TransportMode::Simulated,
                             {"probs:0,1", "expval:" + data_file("toy_h.txt"), "state"}});
    REQUIRE(result.code == kOk);
    CHECK(result.out.find("00,0.500000000000") != std::string::npos);
    CHECK(result.out.find("11,0.500000000000") != std::string::npos);
    CHECK(result.out.find("01,") == std::string::npos);
    CHECK(result.err.empty());
}

TEST_CASE("run: output does not depend on the rank count") {
    const std::vector<std::string> outputs{"probs:0-3,11", "samples:200,7", "expval:" + data_file("toy_h.txt")};
    const auto p0 = run({data_file("ghz12.qc"), 0, TransportMode::Simulated, outputs});
    const auto p3 = run({data_file("ghz12.qc"), 3, TransportMode::Simulated, outputs});
    REQUIRE(p0.code == kOk);
    REQUIRE(p3.code == kOk);
    std::istringstream a(p0.out);
    std::istringstream b(p3.out);
    std::string la;
    std::string lb;
    // Sampling streams are fixed per rank count, so only compare up to the samples block.
    while (std::getline(a, la) && std::getline(b, lb) && la.rfind("# samples", 0) != 0) {
        CHECK(la == lb);
    }
}

TEST_CASE("run: error exit codes") {
    const auto malformed = run({data_file("malformed.qc"), 0, TransportMode::Simulated, {"state"}});
    CHECK(malformed.code == kParseError);
    CHECK(malformed.err.find("line 4") != std::string::npos);

    const auto dense = run({data_file("dense_high.qc"), 1, TransportMode::Simulated, {"state"}});
    CHECK(dense.code == kPlanError);
    CHECK_FALSE(dense.err.empty());
    CHECK(run({data_file("dense_high.qc"), 0, TransportMode::Simulated, {"state"}}).code == kOk);

    CHECK(run({data_file("missing.qc"), 0, TransportMode::Simulated, {"state"}}).code ==
          kParseError);
    CHECK(run({data_file("bell.qc"), 0, TransportMode::Simulated, {"histogram"}}).code !=
          kOk);
    CHECK(run({data_file("bell.qc"), 2, TransportMode::Simulated, {"state"}}).code != kOk);
}

TEST_CASE("qubit lists") {
    CHECK(parse_qubit_list("0-3,7") == std::vector<int>{0, 1, 2, 3, 7});
    CHECK(parse_qubit_list("5") == std::vector<int>{5});
    CHECK_THROWS_AS((void)parse_qubit_list("3-1"), ParseError);
    CHECK_THROWS_AS((void)parse_qubit_list("1,,2"), ParseError);
}

TEST_CASE("bench: communication columns") {
    for (int q = 0; q < 10; ++q) {
        const auto z = bench_point("Z", 10, 2, q, std::nullopt, 1);
        CHECK(z.exchanges == 0);
        CHECK(z.bytes == 0);
    }
    for (int q = 0; q < 20; ++q) {
        const auto x = bench_point("X", 20, 4, q, std::nullopt, 1);
        CHECK(x.exchanges == (q >= 16 ? 1U : 0U));
        CHECK(x.bytes == (q >= 16 ? (std::uint64_t{1} << 16) * 16 : 0U));
    }
    for (int c = 1; c < 20; ++c) {
        CHECK(bench_point("CNOT", 20, 4, 0, c, 1).exchanges == 0);
    }
    CHECK(bench_point("CNOT", 12, 2, 11, 1, 1).exchanges == 1);
    CHECK_THROWS_AS((void)bench_gate("TOFFOLI", 0, std::nullopt), Error);

    const auto row = bench_point("H", 8, 1, 7, std::nullopt, 3);
    const std::string csv = bench_csv_row(row);
    CHECK(csv.rfind("H,8,1,7,,", 0) == 0);
    CHECK(bench_csv_header() == "gate,N,p,q_T,q_C,wall_seconds,exchanges,bytes");

    std::ostringstream out;
    std::ostringstream err;
    BenchOptions options;
    options.gate = "CRK";
    options.n_qubits = 6;
    options.ranks_log2 = 1;
    options.reps = 1;
    REQUIRE(cmd_bench(options, out, err) == kOk);
    std::istringstream lines(out.str());
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
    }
    CHECK(rows == 1 + 6 * 5);
}

TEST_CASE("verify") {
    VerifyOptions quick;
    quick.n_circuits = 10;
    const auto pass = verify(quick);
    CHECK(pass.code == kOk);
    CHECK(pass.out.find("result: PASS") != std::string::npos);
    CHECK(verify(quick).out == pass.out);

    VerifyOptions faulty = quick;
    faulty.inject_fault = true;
    const auto fail = verify(faulty);
    CHECK(fail.code == kFailure);
    CHECK(fail.out.find("reproduction") != std::string::npos);
    CHECK(fail.out.find("H ") != std::string::npos);

    VerifyOptions none;
    none.n_circuits = 0;
    const auto empty = verify(none);
    CHECK(empty.code == kOk);
    CHECK(empty.out.find("comparisons=0") != std::string::npos);

    VerifyOptions bad;
    bad.max_qubits = 1;
    CHECK(verify(bad).code == kFailure);
}

TEST_CASE("verify with defaults passes") {
    const auto result = verify(VerifyOptions{});
    CHECK(result.code == kOk);
}
