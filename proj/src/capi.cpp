#include "qsim/capi.h"

#include "qsim/circuit.hpp"
#include "qsim/engine.hpp"
#include "qsim/measure.hpp"

#include <cstring>
#include <mutex>
#include <string>

struct qsim_device {
    int wires;
    int ranks_log2;
    qsim::TransportMode mode;
};

namespace {

constexpr const char *kSupportedGates = "X Y Z H S T RZ RK U1Q CNOT CRK CU1Q SWAP DENSE";

void report(char *err, std::size_t err_len, const std::string &message) {
    if (err == nullptr || err_len == 0) {
        return;
    }
    const std::size_t n = std::min(err_len - 1, message.size());
    std::memcpy(err, message.data(), n);
    err[n] = '\0';
}

std::vector<double> measure(const qsim::DistState &state, std::string_view spec) {
    const auto newline = spec.find('\n');
    const auto head = qsim::detail::tokenize_line(spec.substr(0, newline));
    if (head.empty()) {
        throw qsim::ParseError(1, "empty measurement");
    }
    if (head[0] == "expval") {
        if (head.size() != 1) {
            throw qsim::ParseError(1, "expval takes its Pauli sum on the following lines");
        }
        const auto body = newline == std::string_view::npos ? std::string_view{}
                                                            : spec.substr(newline + 1);
        const auto terms = qsim::parse_pauli_sum(body);
        return {qsim::expval_pauli_sum(state, terms)};
    }
    if (head[0] == "probs") {
        std::vector<int> subset;
        for (std::size_t i = 1; i < head.size(); ++i) {
            subset.push_back(qsim::detail::parse_int(head[i], 1));
        }
        return qsim::probability(state, subset);
    }
    if (head[0] == "sample") {
        if (head.size() != 3) {
            throw qsim::ParseError(1, "expected 'sample <shots> <seed>'");
        }
        const int shots = qsim::detail::parse_int(head[1], 1);
        if (shots < 1) {
            throw qsim::ParseError(1, "shots must be >= 1");
        }
        const auto seed = static_cast<std::uint64_t>(std::stoull(std::string(head[2])));
        const auto indices = qsim::sample(state, static_cast<std::size_t>(shots), seed);
        return {indices.begin(), indices.end()};
    }
    throw qsim::ParseError(1, "unknown measurement '" + std::string(head[0]) +
                                  "' (expected expval, probs or sample)");
}

} // namespace

extern "C" {

int qsim_device_open(int wires, int ranks_log2, const char *transport, qsim_device **out,
                     char *err, size_t err_len) {
    if (out == nullptr) {
        report(err, err_len, "output handle pointer is null");
        return QSIM_ERR_ARGUMENT;
    }
    *out = nullptr;
    try {
        const qsim::Topology topology(wires, ranks_log2, 0);
        const auto mode = transport == nullptr ? qsim::transport_mode_from_env()
                                                : qsim::parse_transport_mode(transport);
        if (mode == qsim::TransportMode::External && !qsim::external_transport_available()) {
            report(err, err_len, "external transport is not available in this build");
            return QSIM_ERR_TRANSPORT;
        }
        *out = new qsim_device{topology.n_qubits(), topology.log_ranks(), mode};
        return QSIM_OK;
    } catch (const std::exception &e) {
        report(err, err_len, e.what());
        return QSIM_ERR_ARGUMENT;
    }
}

void qsim_device_close(qsim_device *device) { delete device; }

int qsim_run_tape(qsim_device *device, const char *gates, const char *measurement, double *out,
                  size_t out_len, size_t *written, char *err, size_t err_len) {
    if (device == nullptr || gates == nullptr || measurement == nullptr) {
        report(err, err_len, "null argument");
        return QSIM_ERR_ARGUMENT;
    }
    if (written != nullptr) {
        *written = 0;
    }
    try {
        qsim::Circuit circuit = [&] {
            try {
                return qsim::parse_circuit("qubits " + std::to_string(device->wires) + "\n" +
                                           gates);
            } catch (const qsim::ParseError &e) {
                const std::string what = e.what();
                if (what.find("unknown gate") != std::string::npos) {
                    // Line numbers shift by one for the synthesized header.
                    throw qsim::ParseError(e.line() - 1, "unsupported gate; supported: " +
                                                             std::string(kSupportedGates));
                }
                throw qsim::ParseError(e.line() - 1,
                                       what.substr(what.find(": ") + 2));
            }
        }();

        std::vector<double> result;
        std::mutex result_mutex;
        qsim::launch(device->mode, device->ranks_log2, [&](qsim::Transport &transport) {
            const qsim::Topology topology(device->wires, device->ranks_log2, transport.rank());
            qsim::DistState state(topology, transport);
            state.apply_circuit(circuit);
            auto values = measure(state, measurement);
            if (transport.rank() == 0) {
                const std::lock_guard lock(result_mutex);
                result = std::move(values);
            }
        });

        if (result.size() > out_len || (out == nullptr && !result.empty())) {
            report(err, err_len, "output buffer holds " + std::to_string(out_len) + " values, " +
                                     std::to_string(result.size()) + " needed");
            if (written != nullptr) {
                *written = result.size();
            }
            return QSIM_ERR_BUFFER;
        }
        std::copy(result.begin(), result.end(), out);
        if (written != nullptr) {
            *written = result.size();
        }
        return QSIM_OK;
    } catch (const qsim::ParseError &e) {
        report(err, err_len, e.what());
        return QSIM_ERR_PARSE;
    } catch (const qsim::PlanError &e) {
        report(err, err_len, e.what());
        return QSIM_ERR_PLAN;
    } catch (const qsim::TransportError &e) {
        report(err, err_len, e.what());
        return QSIM_ERR_TRANSPORT;
    } catch (const std::exception &e) {
        report(err, err_len, e.what());
        return QSIM_ERR_ARGUMENT;
    }
}

const char *qsim_supported_gates(void) { return kSupportedGates; }

} // extern "C"
