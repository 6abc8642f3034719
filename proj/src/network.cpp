#include "stc/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace stc {

NeuronId Network::add_neuron(NeuronSpec spec) {
  neurons.push_back(std::move(spec));
  return static_cast<NeuronId>(neurons.size() - 1);
}

void Network::add_synapse(NeuronId pre, NeuronId post, int64_t delay,
                          int64_t weight) {
  if (!valid_id(pre) || !valid_id(post))
    throw std::invalid_argument("synapse endpoint references unknown neuron");
  if (delay < 0)
    throw std::invalid_argument("synapse delay must be non-negative");
  synapses.push_back({pre, post, delay, weight});
}

std::vector<uint32_t> Network::in_degrees() const {
  std::vector<uint32_t> deg(neurons.size(), 0);
  for (const auto& s : synapses) deg[s.post]++;
  return deg;
}

std::vector<uint32_t> Network::out_degrees() const {
  std::vector<uint32_t> deg(neurons.size(), 0);
  for (const auto& s : synapses) deg[s.pre]++;
  return deg;
}

int64_t Network::max_delay() const {
  int64_t d = 0;
  for (const auto& s : synapses) d = std::max(d, s.delay);
  return d;
}

} // namespace stc
