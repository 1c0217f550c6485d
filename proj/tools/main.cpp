#include "cli.hpp"

#include "qsim/circuits.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace qsim;

int emit(const std::string &path, const std::function<int(std::ostream &)> &body) {
    if (path.empty()) {
        return body(std::cout);
    }
    std::ofstream file(path);
    if (!file) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return cli::kFailure;
    }
    return body(file);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qsim: distributed state-vector quantum circuit simulator"};
    app.require_subcommand(1);

    std::string transport_name;
    std::string out_path;
    int ranks_log2 = -1;
    std::uint64_t seed = 1;
    int reps = 5;
    app.add_option("--transport", transport_name, "simulated | external (default: $QSIM_TRANSPORT)")
        ->check(CLI::IsMember({"simulated", "external"}));
    app.add_option("--out", out_path, "Write results to this file instead of stdout");

    auto *run = app.add_subcommand("run", "Execute a circuit file and print measurements");
    cli::RunOptions run_options;
    run->add_option("circuit", run_options.circuit_file, "Circuit text file")->required();
    run->add_option("outputs", run_options.outputs,
                    "probs:<qubits> | expval:<pauli file> | samples:<shots,seed> | state");
    run->add_option("--ranks-log2,-p", ranks_log2, "log2 of the rank count");

    auto *bench = app.add_subcommand("bench", "Time one gate over a sweep of operand indices");
    cli::BenchOptions bench_options;
    std::string targets_text;
    std::string controls_text;
    bench->add_option("--gate", bench_options.gate, "X | Z | H | U1Q-general | CNOT | CRK | CU1Q-general")
        ->required();
    bench->add_option("--qubits,-n", bench_options.n_qubits)->required();
    bench->add_option("--ranks-log2,-p", ranks_log2);
    bench->add_option("--targets", targets_text, "e.g. 0-19 or 0,5,19 (default: all)");
    bench->add_option("--controls", controls_text, "controlled gates only (default: all)");
    bench->add_option("--reps", reps, "timed repetitions (median reported)")->check(CLI::PositiveNumber);

    auto *verify = app.add_subcommand("verify", "Compare the engine against the dense oracle");
    cli::VerifyOptions verify_options;
    verify->add_option("--seed", seed);
    verify->add_option("--max-qubits", verify_options.max_qubits);
    verify->add_option("--max-ranks-log2", verify_options.max_ranks_log2);
    verify->add_option("--circuits", verify_options.n_circuits);
    verify->add_option("--max-gates", verify_options.max_gates);
    verify->add_flag("--inject-fault", verify_options.inject_fault,
                     "Corrupt the engine (verifier self-test)");

    int n_qubits = 0;
    bool with_swaps = false;
    auto *qft = app.add_subcommand("qft", "Emit a QFT circuit");
    qft->add_option("qubits", n_qubits)->required();
    qft->add_flag("--swaps", with_swaps, "Append the bit-reversal SWAP layer");
    auto *universal = app.add_subcommand("universal", "Emit the 2N^2-gate universal circuit");
    universal->add_option("qubits", n_qubits)->required();
    auto *ghz = app.add_subcommand("ghz", "Emit a GHZ preparation circuit");
    ghz->add_option("qubits", n_qubits)->required();

    CLI11_PARSE(app, argc, argv);

    TransportMode transport = TransportMode::Simulated;
    try {
        transport = transport_name.empty() ? transport_mode_from_env()
                                           : parse_transport_mode(transport_name);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kParseError;
    }
    // With the external transport every rank runs this program; only rank 0 reports.
    const bool quiet = transport == TransportMode::External && external_rank() != 0;
    if (quiet) {
        out_path = "/dev/null";
    }

    if (*run) {
        run_options.transport = transport;
        run_options.ranks_log2 = ranks_log2;
        return emit(out_path, [&](std::ostream &out) { return cli::cmd_run(run_options, out, std::cerr); });
    }
    if (*bench) {
        try {
            bench_options.targets = targets_text.empty() ? std::vector<int>{}
                                                         : cli::parse_qubit_list(targets_text);
            bench_options.controls = controls_text.empty() ? std::vector<int>{}
                                                           : cli::parse_qubit_list(controls_text);
        } catch (const std::exception &e) {
            std::cerr << "parse error: " << e.what() << '\n';
            return cli::kParseError;
        }
        bench_options.ranks_log2 = ranks_log2;
        bench_options.reps = reps;
        bench_options.transport = transport;
        return emit(out_path, [&](std::ostream &out) { return cli::cmd_bench(bench_options, out, std::cerr); });
    }
    if (*verify) {
        verify_options.seed = seed;
        return emit(out_path, [&](std::ostream &out) { return cli::cmd_verify(verify_options, out, std::cerr); });
    }

    return emit(out_path, [&](std::ostream &out) {
        try {
            const Circuit circuit = *qft         ? build_qft(n_qubits, with_swaps)
                                    : *universal ? build_universal({n_qubits, {}})
                                                 : build_ghz(n_qubits);
            out << render_circuit(circuit);
            return static_cast<int>(cli::kOk);
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << '\n';
            return static_cast<int>(cli::kFailure);
        }
    });
}
