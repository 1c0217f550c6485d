#include "cli.hpp"

#include "qsim/circuits.hpp"
#include "qsim/engine.hpp"
#include "qsim/measure.hpp"
#include "qsim/oracle.hpp"
#include "qsim/sim_transport.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <variant>

namespace qsim::cli {

namespace {

std::string fixed(double value, int decimals = 12) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    std::string text = buffer;
    if (text.find_first_not_of("-0.") == std::string::npos) {
        text.erase(0, text.front() == '-' ? 1 : 0);  // no "-0.000..."
    }
    return text;
}

std::string sci(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3e", value);
    return buffer;
}

struct ProbsOutput {
    std::vector<int> subset;
};
struct ExpvalOutput {
    std::string path;
    PauliSum terms;
};
struct SamplesOutput {
    std::size_t shots;
    std::uint64_t seed;
};
struct StateOutput {};

using OutputSpec = std::variant<ProbsOutput, ExpvalOutput, SamplesOutput, StateOutput>;

OutputSpec parse_output(const std::string &spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "state" && arg.empty()) {
        return StateOutput{};
    }
    if (kind == "probs" && !arg.empty()) {
        return ProbsOutput{parse_qubit_list(arg)};
    }
    if (kind == "expval" && !arg.empty()) {
        return ExpvalOutput{arg, load_pauli_sum(arg)};
    }
    if (kind == "samples" && !arg.empty()) {
        const auto comma = arg.find(',');
        if (comma == std::string::npos) {
            throw ParseError(1, "samples output needs '<shots>,<seed>'");
        }
        const int shots = detail::parse_int(arg.substr(0, comma), 1);
        if (shots < 1) {
            throw ParseError(1, "samples: shots must be >= 1");
        }
        std::uint64_t seed = 0;
        const std::string seed_text = arg.substr(comma + 1);
        const auto [ptr, ec] =
            std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
        if (ec != std::errc{} || ptr != seed_text.data() + seed_text.size()) {
            throw ParseError(1, "samples: bad seed '" + seed_text + "'");
        }
        return SamplesOutput{static_cast<std::size_t>(shots), seed};
    }
    throw ParseError(1, "unknown output '" + spec +
                            "' (expected probs:<qubits>, expval:<file>, samples:<shots,seed>, "
                            "state)");
}

std::string bits_label(std::size_t entry, std::size_t width) {
    std::string label(width, '0');
    for (std::size_t j = 0; j < width; ++j) {
        if ((entry >> j) & 1U) {
            label[j] = '1';
        }
    }
    return label;
}

std::string render_output(const DistState &state, const OutputSpec &spec) {
    std::ostringstream text;
    const bool root = state.topology().rank() == 0;
    if (const auto *probs = std::get_if<ProbsOutput>(&spec)) {
        const auto table = probability(state, probs->subset);
        text << "# probs";
        for (std::size_t j = 0; j < probs->subset.size(); ++j) {
            text << (j == 0 ? " " : ",") << probs->subset[j];
        }
        text << "\nbits,probability\n";
        for (std::size_t b = 0; b < table.size(); ++b) {
            const std::string value = fixed(table[b]);
            if (value.find_first_not_of("0.") != std::string::npos) {
                text << bits_label(b, probs->subset.size()) << ',' << value << '\n';
            }
        }
    } else if (const auto *expval = std::get_if<ExpvalOutput>(&spec)) {
        const double value = expval_pauli_sum(state, expval->terms);
        text << "# expval " << expval->path << "\nexpval," << fixed(value) << '\n';
    } else if (const auto *samples = std::get_if<SamplesOutput>(&spec)) {
        const auto drawn = sample(state, samples->shots, samples->seed);
        text << "# samples " << samples->shots << ',' << samples->seed << "\nshot,index\n";
        for (std::size_t k = 0; k < drawn.size(); ++k) {
            text << k << ',' << drawn[k] << '\n';
        }
    } else {
        const auto full = gather_full_state(state);
        if (root) {
            text << "# state\nindex,re,im\n";
            for (std::size_t i = 0; i < full.size(); ++i) {
                text << i << ',' << fixed(full[i].real()) << ',' << fixed(full[i].imag())
                     << '\n';
            }
        }
    }
    return root ? text.str() : std::string{};
}

int resolve_ranks_log2(TransportMode mode, int requested) {
    if (mode == TransportMode::External && requested < 0) {
        return external_log_ranks();
    }
    return std::max(requested, 0);
}

template <typename F> int guarded(std::ostream &err, F &&body) {
    try {
        return body();
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const PlanError &e) {
        err << "plan error: " << e.what() << '\n';
        return kPlanError;
    } catch (const TransportError &e) {
        err << "transport error: " << e.what() << '\n';
        return kTransportError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace

std::vector<int> parse_qubit_list(const std::string &text) {
    std::vector<int> qubits;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        const std::string item = text.substr(pos, end - pos);
        pos = end + 1;
        if (item.empty()) {
            throw ParseError(1, "empty entry in qubit list '" + text + "'");
        }
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            qubits.push_back(detail::parse_int(item, 1));
        } else {
            const int lo = detail::parse_int(item.substr(0, dash), 1);
            const int hi = detail::parse_int(item.substr(dash + 1), 1);
            if (lo > hi) {
                throw ParseError(1, "descending range '" + item + "'");
            }
            for (int q = lo; q <= hi; ++q) {
                qubits.push_back(q);
            }
        }
    }
    return qubits;
}

int cmd_run(const RunOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        Circuit circuit = [&] {
            try {
                return load_circuit(options.circuit_file);
            } catch (const ParseError &) {
                throw;
            } catch (const Error &e) {
                throw ParseError(0, e.what());
            }
        }();
        std::vector<OutputSpec> specs;
        for (const auto &spec : options.outputs) {
            specs.push_back(parse_output(spec));
        }
        const int p = resolve_ranks_log2(options.transport, options.ranks_log2);

        std::string report;
        std::mutex report_mutex;
        launch(options.transport, p, [&](Transport &transport) {
            const Topology topology(circuit.n_qubits(), p, transport.rank());
            DistState state(topology, transport);
            state.apply_circuit(circuit);
            std::string text;
            for (const auto &spec : specs) {
                text += render_output(state, spec);
            }
            if (transport.rank() == 0) {
                const std::lock_guard lock(report_mutex);
                report = std::move(text);
            }
        });
        out << report;
        return static_cast<int>(kOk);
    });
}

const std::vector<std::string> &bench_gates() {
    static const std::vector<std::string> gates{"X",   "Z",           "H",
                                                "U1Q-general", "CNOT", "CRK",
                                                "CU1Q-general"};
    return gates;
}

bool bench_gate_is_controlled(const std::string &gate) {
    return gate == "CNOT" || gate == "CRK" || gate == "CU1Q-general";
}

Gate bench_gate(const std::string &gate, int target, std::optional<int> control) {
    const Matrix2 pauli_x{0.0, 1.0, 1.0, 0.0};
    if (bench_gate_is_controlled(gate)) {
        if (!control) {
            throw Error(gate + " needs a control qubit");
        }
        if (gate == "CNOT") {
            return Gate::cnot(*control, target);
        }
        if (gate == "CRK") {
            return Gate::crk(*control, target, 2);
        }
        return Gate::cu1q(*control, target, pauli_x);
    }
    if (gate == "X") {
        return Gate::x(target);
    }
    if (gate == "Z") {
        return Gate::z(target);
    }
    if (gate == "H") {
        return Gate::h(target);
    }
    if (gate == "U1Q-general") {
        // Pauli-X payload through the dense 2x2 path.
        return Gate::u1q(target, pauli_x);
    }
    throw ParseError(1, "unknown bench gate '" + gate + "'");
}

BenchRow bench_point(const std::string &gate_name_text, int n_qubits, int ranks_log2, int target,
                     std::optional<int> control, int reps, TransportMode transport_mode) {
    if (reps < 1) {
        throw Error("bench: reps must be >= 1");
    }
    const Gate gate = bench_gate(gate_name_text, target, control);
    BenchRow row{gate_name_text, n_qubits, ranks_log2, target, control, 0.0, 0, 0};
    std::mutex row_mutex;

    launch(transport_mode, ranks_log2, [&](Transport &transport) {
        const Topology topology(n_qubits, ranks_log2, transport.rank());
        DistState state(topology, transport);
        const double token = 0.0;
        const auto barrier = [&] { (void)transport.allreduce_sum(std::span(&token, 1)); };

        const std::uint64_t warmup_seq = state.gate_count();
        state.apply_gate(gate);
        const auto &per_gate = transport.stats().per_gate;
        const auto traffic = per_gate.contains(warmup_seq) ? per_gate.at(warmup_seq)
                                                           : GateTraffic{};

        std::vector<double> times;
        for (int r = 0; r < reps; ++r) {
            barrier();
            const auto start = std::chrono::steady_clock::now();
            state.apply_gate(gate);
            barrier();
            times.push_back(
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        std::sort(times.begin(), times.end());
        const double median = reps % 2 == 1
                                  ? times[static_cast<std::size_t>(reps / 2)]
                                  : 0.5 * (times[static_cast<std::size_t>(reps / 2 - 1)] +
                                           times[static_cast<std::size_t>(reps / 2)]);

        std::vector<double> counters(2 * topology.n_ranks(), 0.0);
        counters[2 * topology.rank()] = static_cast<double>(traffic.exchanges);
        counters[2 * topology.rank() + 1] = static_cast<double>(traffic.bytes_sent);
        counters = transport.allreduce_sum(counters);

        if (transport.rank() == 0) {
            const std::lock_guard lock(row_mutex);
            row.wall_seconds = median;
            for (Rank r = 0; r < topology.n_ranks(); ++r) {
                row.exchanges = std::max(row.exchanges, static_cast<std::uint64_t>(counters[2 * r]));
                row.bytes = std::max(row.bytes, static_cast<std::uint64_t>(counters[2 * r + 1]));
            }
        }
    });
    return row;
}

std::string bench_csv_header() { return "gate,N,p,q_T,q_C,wall_seconds,exchanges,bytes"; }

std::string bench_csv_row(const BenchRow &row) {
    char seconds[32];
    std::snprintf(seconds, sizeof(seconds), "%.6e", row.wall_seconds);
    std::ostringstream line;
    line << row.gate << ',' << row.n_qubits << ',' << row.ranks_log2 << ',' << row.target << ','
         << (row.control ? std::to_string(*row.control) : std::string{}) << ',' << seconds << ','
         << row.exchanges << ',' << row.bytes;
    return line.str();
}

int cmd_bench(const BenchOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto &known = bench_gates();
        if (std::find(known.begin(), known.end(), options.gate) == known.end()) {
            throw ParseError(1, "unknown bench gate '" + options.gate + "'");
        }
        const int p = resolve_ranks_log2(options.transport, options.ranks_log2);
        const Topology topology(options.n_qubits, p, 0);

        const auto all_qubits = [&] {
            std::vector<int> q(static_cast<std::size_t>(options.n_qubits));
            std::iota(q.begin(), q.end(), 0);
            return q;
        };
        const auto targets = options.targets.empty() ? all_qubits() : options.targets;
        const bool controlled = bench_gate_is_controlled(options.gate);
        const auto controls = options.controls.empty() ? all_qubits() : options.controls;
        for (const auto &list : {targets, controls}) {
            for (const int q : list) {
                if (q < 0 || q >= options.n_qubits) {
                    throw ParseError(1, "sweep qubit " + std::to_string(q) + " outside [0, " +
                                            std::to_string(options.n_qubits) + ")");
                }
            }
        }

        out << bench_csv_header() << '\n';
        for (const int t : targets) {
            if (!controlled) {
                out << bench_csv_row(bench_point(options.gate, options.n_qubits, p, t,
                                                 std::nullopt, options.reps, options.transport))
                    << '\n';
                continue;
            }
            for (const int c : controls) {
                if (c == t) {
                    continue;
                }
                out << bench_csv_row(bench_point(options.gate, options.n_qubits, p, t, c,
                                                 options.reps, options.transport))
                    << '\n';
            }
        }
        return static_cast<int>(kOk);
    });
}

namespace {

std::vector<Complex> run_engine(const Circuit &circuit, int p, EngineOptions engine_options) {
    std::vector<Complex> gathered;
    run_simulated(p, [&](Transport &transport) {
        const Topology topology(circuit.n_qubits(), p, transport.rank());
        DistState state(topology, transport, engine_options);
        state.apply_circuit(circuit);
        auto full = gather_full_state(state);
        if (transport.rank() == 0) {
            gathered = std::move(full);
        }
    });
    return gathered;
}

/// Max deviation between engine and oracle; infinity if the engine throws.
double deviation(const Circuit &circuit, int p, const EngineOptions &engine_options) {
    oracle::DenseState reference(circuit.n_qubits());
    oracle::dense_apply(reference, circuit);
    try {
        return oracle::max_abs_diff(run_engine(circuit, p, engine_options),
                                    reference.amplitudes());
    } catch (const Error &) {
        return std::numeric_limits<double>::infinity();
    }
}

/// Greedily drops gates while the mismatch persists.
Circuit minimize(const Circuit &failing, int p, const EngineOptions &engine_options,
                 double tolerance) {
    std::vector<Gate> gates = failing.gates();
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (std::size_t i = 0; i < gates.size(); ++i) {
            Circuit candidate(failing.n_qubits());
            for (std::size_t j = 0; j < gates.size(); ++j) {
                if (j != i) {
                    candidate.add(gates[j]);
                }
            }
            if (!(deviation(candidate, p, engine_options) <= tolerance)) {
                gates = candidate.gates();
                shrunk = true;
                break;
            }
        }
    }
    Circuit minimal(failing.n_qubits());
    for (auto &gate : gates) {
        minimal.add(std::move(gate));
    }
    return minimal;
}

} // namespace

int cmd_verify(const VerifyOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        if (options.max_qubits < 2 || options.max_qubits > oracle::kMaxDenseQubits) {
            throw Error("verify: max qubits must be in [2, " +
                        std::to_string(oracle::kMaxDenseQubits) + "]");
        }
        if (options.max_ranks_log2 < 0 || options.n_circuits < 0 || options.max_gates < 1) {
            throw Error("verify: negative rank count, circuit count or empty gate budget");
        }
        const EngineOptions engine_options{options.inject_fault};

        out << "verify seed=" << options.seed << " circuits=" << options.n_circuits
            << " max_qubits=" << options.max_qubits
            << " max_ranks_log2=" << options.max_ranks_log2 << " max_gates=" << options.max_gates
            << " tolerance=" << sci(options.tolerance) << '\n';

        std::size_t comparisons = 0;
        double worst = 0.0;
        for (int c = 0; c < options.n_circuits; ++c) {
            std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                              static_cast<std::uint32_t>(options.seed >> 32),
                              static_cast<std::uint32_t>(c)};
            std::mt19937_64 gen(seq);
            std::uniform_int_distribution<int> pick_n(2, options.max_qubits);
            const int n = pick_n(gen);
            std::uniform_int_distribution<std::size_t> pick_len(1, options.max_gates);
            const int top_p = std::min(options.max_ranks_log2, n - 1);
            const Circuit circuit =
                random_circuit(gen, {n, pick_len(gen), n - top_p});

            oracle::DenseState reference(n);
            oracle::dense_apply(reference, circuit);

            double circuit_worst = 0.0;
            for (int p = 0; p <= top_p; ++p) {
                double dev = std::numeric_limits<double>::infinity();
                try {
                    dev = oracle::max_abs_diff(run_engine(circuit, p, engine_options),
                                               reference.amplitudes());
                } catch (const Error &) {
                }
                ++comparisons;
                circuit_worst = std::max(circuit_worst, dev);
                if (!(dev <= options.tolerance)) {
                    const Circuit minimal = minimize(circuit, p, engine_options, options.tolerance);
                    out << "circuit " << c << ": N=" << n << " gates=" << circuit.size()
                        << " p=" << p << " deviation=" << sci(dev) << " MISMATCH\n"
                        << "reproduction (seed=" << options.seed << " circuit=" << c
                        << " p=" << p << " deviation="
                        << sci(deviation(minimal, p, engine_options)) << "):\n"
                        << render_circuit(minimal) << "result: FAIL\n";
                    return static_cast<int>(kFailure);
                }
            }
            worst = std::max(worst, circuit_worst);
            out << "circuit " << c << ": N=" << n << " gates=" << circuit.size() << " p=0.."
                << top_p << " max_deviation=" << sci(circuit_worst) << '\n';
        }
        out << "comparisons=" << comparisons << " max_deviation=" << sci(worst) << '\n'
            << "result: PASS\n";
        return static_cast<int>(kOk);
    });
}

} // namespace qsim::cli
