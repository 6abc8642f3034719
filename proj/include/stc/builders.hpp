// Circuit synthesis: parity, population count, binary array sum,
// synaptic stack memory, repeater, and the hardware-restricted
// population-count tree.
//
// All builders are pure: identical arguments yield identical circuits,
// including neuron id assignment. Input ports are programmed neurons
// with empty schedules so callers can drive them by injection or
// splice; outputs are readout neurons.
#pragma once

#include <string>
#include <vector>

#include "stc/circuit.hpp"
#include "stc/profile.hpp"

namespace stc {

enum class ParityMode : uint8_t {
  EvenDetector, // spikes when the input has an even number of ones
  OddDetector,  // spikes on odd counts; silent when idle
};

// Two-level parity over n inputs. Latency 2, initiation interval 1.
// Level 1 holds floor(n/2) neurons with thresholds 1, 3, 5, ...; the
// detector combines the halved count with a delayed copy of the raw
// input sum.
Circuit build_parity(int64_t n, ParityMode mode);

// Three-level binary population count of l inputs: count layer with
// thresholds 0..l-1, a one-hot layer (at most one spike, exactly one
// for counts >= 1), and ceil(log2(l+1)) binary output bits.
// Latency 3, initiation interval 1.
Circuit build_popc_tc(int64_t l);

// Adds n unsigned l-bit numbers. Output bit k is produced by its own
// parity-style sub-circuit operating in fixed-point scale 2^(k-1);
// subtracting 1 from each scaled level-1 threshold turns the strict
// comparison into >= on the dyadic grid, which keeps the carry
// accounting exact. Addend-major input ports, little-endian output
// ports of width l + ceil(log2 n). Latency 2.
Circuit build_sum_tc(int64_t n, int64_t l);

struct SumOptions {
  // Per-addend value bounds; level-1 layers are trimmed to the widths
  // those bounds can ever drive. Empty means unbounded l-bit addends
  // with n level-1 neurons per output bit.
  std::vector<uint64_t> addend_max;
  // When > 0, any synapse weight above the cap is emitted as parallel
  // synapses summing to the same value.
  int64_t weight_cap = 0;
  // Output bits above this width are omitted (0 = derive from bounds).
  int64_t output_width = 0;
};

Circuit build_sum_bounded(int64_t n, int64_t l, const SumOptions& options);

// One-synapse pattern memory. The pattern is stored in the weight of
// the trigger synapse starting at bit s_pr-2; the neuron replays it one
// bit per timestep through leak-2 doubling and top-bit self-inhibition.
// A trigger at t yields spikes at { t+i : pattern[i-1] == '1' } and may
// be re-armed every len(pattern) steps.
Circuit build_stack(const std::string& pattern, const HardwareProfile& profile);

// Emits each bit of an r-bit input sequence r times. Input bits are
// presented on consecutive steps starting at first_t0 (and every r*r
// steps after); the output holds bit i for steps
// first_t0 + delta + (i-1)*r .. first_t0 + delta + i*r - 1 with the
// reported constant delta. Recurrent; initiation interval r*r.
Circuit build_repeater(int64_t r, const HardwareProfile& profile,
                       Timestep first_t0 = 0);

// Generalized repeater: seq_len input bits, each held for `repeats`
// steps. Streaming period seq_len * repeats.
Circuit build_repeater_rect(int64_t seq_len, int64_t repeats,
                            const HardwareProfile& profile,
                            Timestep first_t0 = 0);

// Population count of m inputs under the full hardware profile.
// Requires m <= 2^(s_pr-2). Splits the input into chunks counted by
// build_popc_tc and sums the partial counts in an arity-wide tree of
// build_sum_bounded stages, padding ragged slots with constant-zero
// addends; chunk size is the largest value <= min(f_in, f_out) whose
// fully legalized composition validates cleanly. When no chunk size
// yields a legal sum tree (wide additions need in-degree 2l+2, which
// tight fan-in caps cannot meet), falls back to a column-counter tree
// that reduces per-exponent wire bags with popc circuits of bounded
// group size until one wire per bit position remains. Both paths are
// exact, profile-legal, delay-uniform and fully pipelined (II = 1).
// Output width ceil(log2(m+1)), little-endian.
Circuit build_popc_restricted(int64_t m, const HardwareProfile& profile,
                              int64_t arity = 2);

// Width of the binary representation of v (>= 1).
int64_t bit_width(uint64_t v);

} // namespace stc
