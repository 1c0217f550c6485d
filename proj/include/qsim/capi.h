#ifndef QSIM_CAPI_H
#define QSIM_CAPI_H

/*
 * C entry points for scripting-language bindings.
 *
 * A device fixes the wire count, the rank partitioning and the transport.
 * Every qsim_run_tape call starts from |0...0>, applies the gate lines in
 * order and evaluates one measurement:
 *
 *   "expval\n<pauli-sum lines>"   -> 1 value
 *   "probs <q0> <q1> ..."         -> 2^k values
 *   "sample <shots> <seed>"       -> shots values (basis indices)
 *
 * Gate lines use the circuit text format without the `qubits` header.
 * Functions return 0 on success and a nonzero code on failure, with a
 * message copied into err (if non-null).
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qsim_device qsim_device;

enum {
    QSIM_OK = 0,
    QSIM_ERR_ARGUMENT = 1,
    QSIM_ERR_PARSE = 2,
    QSIM_ERR_PLAN = 3,
    QSIM_ERR_TRANSPORT = 4,
    QSIM_ERR_BUFFER = 5,
};

/* transport: "simulated", "external", or NULL to read QSIM_TRANSPORT. */
int qsim_device_open(int wires, int ranks_log2, const char *transport, qsim_device **out,
                     char *err, size_t err_len);

void qsim_device_close(qsim_device *device);

int qsim_run_tape(qsim_device *device, const char *gates, const char *measurement,
                  double *out, size_t out_len, size_t *written, char *err, size_t err_len);

/* Space-separated list of gate names the tape accepts. */
const char *qsim_supported_gates(void);

#ifdef __cplusplus
}
#endif

#endif
