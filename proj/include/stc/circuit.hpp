// Synthesized network fragments with ports and timing metadata.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stc/network.hpp"
#include "stc/profile.hpp"

namespace stc {

struct CircuitCounts {
  uint64_t neurons = 0;          // everything, ports included
  uint64_t internal_neurons = 0; // neurons minus input ports
  uint64_t synapses = 0;
  uint32_t max_in_degree = 0;
  uint32_t max_out_degree = 0;
  int64_t max_delay = 0;
};

// Semantic role -> neuron id. Every input and output port has exactly
// one role.
using PortMap = std::map<std::string, NeuronId>;

struct Circuit {
  Network net; // ordered ports live in net.input_ports / net.output_ports
  int64_t latency = 0;             // input spike to matching output spike
  int64_t initiation_interval = 1; // spacing between independent evaluations
  int64_t scale = 1;               // power-of-two fixed-point weight scale
  bool feedforward = true;
  PortMap roles;
  std::string detail; // free-form builder notes (strategy, parameters)

  CircuitCounts counts() const;

  const std::vector<NeuronId>& inputs() const { return net.input_ports; }
  const std::vector<NeuronId>& outputs() const { return net.output_ports; }
};

// Per-neuron arrival depth of a feedforward circuit. Fails if any two
// input->neuron paths disagree, i.e. the circuit is not delay-uniform,
// or if a cycle is found. Neurons unreachable from the inputs get the
// depth of their programmed source (0).
std::vector<int64_t> arrival_depths(const Network& net);

struct Wiring {
  // a-output index -> b-input index; must be injective on b's inputs.
  std::vector<std::pair<size_t, size_t>> pairs;
  // b-input indices explicitly allowed to dangle as constant zero.
  std::vector<size_t> constant_zero;
};

// Splices b onto a by replacing each wired b-input port neuron with the
// matching a-output neuron. Unwired b-inputs are an error unless listed
// as constant zero. Latency adds when both parts are feedforward and
// the wiring covers every b input.
Circuit compose(const Circuit& a, const Circuit& b, const Wiring& wiring);

// Appends `src` into `dst`, returning the id offset of the copy.
NeuronId merge_networks(Network& dst, const Network& src);

// Removes neurons with no synapses that are not ports. Returns the
// old-id -> new-id map; dropped neurons map to kDroppedNeuron.
inline constexpr NeuronId kDroppedNeuron = static_cast<NeuronId>(-1);
std::vector<NeuronId> drop_disconnected(Network& net);

} // namespace stc
