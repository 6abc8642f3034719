// Spiking network description: neurons, synapses, ports.
//
// The model is a labeled digraph. Each neuron carries a threshold T, a
// leak multiplier m, a bias b, a reset mode and a kind. Each synapse is
// (pre, post, delay, weight). Multi-edges between the same neuron pair
// are allowed. Dynamics live in sim.hpp.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stc {

using NeuronId = uint32_t;
using Timestep = int64_t;

enum class ResetMode : uint8_t {
  ToZero, // current is cleared after a spike
  None,   // current survives a spike
};

enum class NeuronKind : uint8_t {
  Regular,
  Programmed, // spikes follow the schedule, membrane dynamics ignored
  Readout,    // regular dynamics, externally observable
};

struct NeuronSpec {
  int64_t threshold = 0;
  int64_t leak = 0; // multiplier applied to the previous current
  int64_t bias = 0;
  ResetMode reset = ResetMode::ToZero;
  NeuronKind kind = NeuronKind::Regular;
  std::vector<Timestep> schedule; // sorted spike times, Programmed only
};

struct SynapseSpec {
  NeuronId pre = 0;
  NeuronId post = 0;
  int64_t delay = 0; // extra timesteps on top of the 1-step hop
  int64_t weight = 0;
};

struct Network {
  std::vector<NeuronSpec> neurons;
  std::vector<SynapseSpec> synapses;
  std::vector<NeuronId> input_ports;
  std::vector<NeuronId> output_ports;

  NeuronId add_neuron(NeuronSpec spec);
  // Throws std::invalid_argument if an endpoint does not exist or the
  // delay is negative.
  void add_synapse(NeuronId pre, NeuronId post, int64_t delay, int64_t weight);

  size_t size() const { return neurons.size(); }
  bool valid_id(NeuronId id) const { return id < neurons.size(); }

  std::vector<uint32_t> in_degrees() const;
  std::vector<uint32_t> out_degrees() const;
  int64_t max_delay() const;
};

} // namespace stc
