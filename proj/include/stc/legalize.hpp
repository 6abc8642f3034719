// Fan-out legalization and delay retiming for feedforward fragments.
#pragma once

#include "stc/circuit.hpp"
#include "stc/network.hpp"
#include "stc/profile.hpp"

namespace stc {

struct LegalizeResult {
  Network net;
  int64_t added_latency = 0; // uniform shift applied to every output
  int64_t output_depth = 0;  // final arrival depth of the output ports
};

// Inserts relay trees behind every neuron whose out-degree exceeds
// f_out and re-pads all synaptic delays so that each neuron keeps a
// single arrival depth; mixed-depth fan-in is padded up to the longest
// path. Long slacks are realized as relay chains so no synapse exceeds
// m_delay. Semantics are preserved up to the reported uniform latency
// shift. The network must be feedforward.
LegalizeResult legalize_fanout(const Network& net,
                               const HardwareProfile& profile);

// Circuit-level wrapper: legalizes the net and bumps the latency.
Circuit legalize_fanout(const Circuit& circuit, const HardwareProfile& profile);

// Depth of the relay tree a source with `targets` consumers needs under
// branching limit f_out (0 when no tree is required).
int64_t relay_tree_depth(uint64_t targets, int64_t f_out);

} // namespace stc
