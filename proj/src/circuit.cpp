#include "stc/circuit.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace stc {

CircuitCounts Circuit::counts() const {
  CircuitCounts c;
  c.neurons = net.size();
  c.internal_neurons = net.size() - net.input_ports.size();
  c.synapses = net.synapses.size();
  for (uint32_t d : net.in_degrees()) c.max_in_degree = std::max(c.max_in_degree, d);
  for (uint32_t d : net.out_degrees()) c.max_out_degree = std::max(c.max_out_degree, d);
  c.max_delay = net.max_delay();
  return c;
}

std::vector<int64_t> arrival_depths(const Network& net) {
  const size_t n = net.size();
  std::vector<uint32_t> remaining(n, 0);
  for (const auto& s : net.synapses) remaining[s.post]++;

  // Kahn order over synapses; every neuron must settle to one arrival.
  std::vector<int64_t> depth(n, -1);
  std::queue<NeuronId> ready;
  for (NeuronId id = 0; id < n; ++id) {
    if (remaining[id] == 0) {
      depth[id] = 0;
      ready.push(id);
    }
  }
  std::vector<std::vector<uint32_t>> outgoing(n);
  for (uint32_t i = 0; i < net.synapses.size(); ++i)
    outgoing[net.synapses[i].pre].push_back(i);

  std::vector<uint32_t> seen(n, 0);
  size_t settled = ready.size();
  std::vector<int64_t> pending(n, -1);
  while (!ready.empty()) {
    const NeuronId id = ready.front();
    ready.pop();
    for (uint32_t si : outgoing[id]) {
      const auto& s = net.synapses[si];
      const int64_t arrive = depth[id] + 1 + s.delay;
      if (pending[s.post] == -1) {
        pending[s.post] = arrive;
      } else if (pending[s.post] != arrive) {
        throw std::logic_error("path delays disagree at neuron " +
                               std::to_string(s.post));
      }
      seen[s.post]++;
      if (seen[s.post] == remaining[s.post]) {
        depth[s.post] = pending[s.post];
        ready.push(s.post);
        settled++;
      }
    }
  }
  if (settled != n) throw std::logic_error("network is not feedforward");
  return depth;
}

NeuronId merge_networks(Network& dst, const Network& src) {
  const NeuronId offset = static_cast<NeuronId>(dst.size());
  for (const auto& spec : src.neurons) dst.neurons.push_back(spec);
  for (const auto& s : src.synapses)
    dst.synapses.push_back({s.pre + offset, s.post + offset, s.delay, s.weight});
  return offset;
}

std::vector<NeuronId> drop_disconnected(Network& net) {
  std::vector<uint8_t> keep(net.size(), 0);
  for (const auto& s : net.synapses) {
    keep[s.pre] = 1;
    keep[s.post] = 1;
  }
  for (NeuronId id : net.input_ports) keep[id] = 1;
  for (NeuronId id : net.output_ports) keep[id] = 1;

  std::vector<NeuronId> remap(net.size(), kDroppedNeuron);
  Network out;
  for (NeuronId id = 0; id < net.size(); ++id) {
    if (!keep[id]) continue;
    remap[id] = out.add_neuron(net.neurons[id]);
  }
  for (const auto& s : net.synapses)
    out.synapses.push_back({remap[s.pre], remap[s.post], s.delay, s.weight});
  for (NeuronId id : net.input_ports) out.input_ports.push_back(remap[id]);
  for (NeuronId id : net.output_ports) out.output_ports.push_back(remap[id]);
  net = std::move(out);
  return remap;
}

Circuit compose(const Circuit& a, const Circuit& b, const Wiring& wiring) {
  std::vector<uint8_t> covered(b.inputs().size(), 0);
  for (const auto& [ai, bi] : wiring.pairs) {
    if (ai >= a.outputs().size() || bi >= b.inputs().size())
      throw std::invalid_argument("compose: wiring index out of range");
    if (covered[bi]) throw std::invalid_argument("compose: duplicate b input");
    covered[bi] = 1;
  }
  for (size_t bi : wiring.constant_zero) {
    if (bi >= b.inputs().size())
      throw std::invalid_argument("compose: constant-zero index out of range");
    if (covered[bi]) throw std::invalid_argument("compose: duplicate b input");
    covered[bi] = 1;
  }
  for (size_t bi = 0; bi < covered.size(); ++bi)
    if (!covered[bi])
      throw std::invalid_argument("compose: b input " + std::to_string(bi) +
                                  " left dangling");

  Circuit out;
  out.net = a.net;
  const NeuronId offset = merge_networks(out.net, b.net);

  // Redirect synapses leaving wired b input ports to a's output neurons
  // and silence the spliced port placeholders.
  std::vector<NeuronId> redirect(out.net.size(), 0);
  for (NeuronId id = 0; id < out.net.size(); ++id) redirect[id] = id;
  for (const auto& [ai, bi] : wiring.pairs)
    redirect[b.inputs()[bi] + offset] = a.outputs()[ai];
  for (auto& s : out.net.synapses) s.pre = redirect[s.pre];
  for (const auto& [ai, bi] : wiring.pairs) {
    (void)ai;
    auto& spec = out.net.neurons[b.inputs()[bi] + offset];
    spec.kind = NeuronKind::Programmed;
    spec.schedule.clear();
  }
  // Consumed a outputs stop being observable ports.
  for (const auto& [ai, bi] : wiring.pairs) {
    (void)bi;
    auto& spec = out.net.neurons[a.outputs()[ai]];
    if (spec.kind == NeuronKind::Readout) spec.kind = NeuronKind::Regular;
  }

  out.net.input_ports = a.inputs();
  out.net.output_ports.clear();
  for (NeuronId id : b.outputs()) out.net.output_ports.push_back(id + offset);

  // Every surviving wiring is complete (dangling inputs were rejected),
  // so feedforward latencies add.
  out.feedforward = a.feedforward && b.feedforward;
  out.latency = out.feedforward ? a.latency + b.latency
                                : std::max(a.latency, b.latency);
  out.initiation_interval =
      std::max(a.initiation_interval, b.initiation_interval);
  out.scale = std::max(a.scale, b.scale);
  for (const auto& [role, id] : a.roles) out.roles["a." + role] = id;
  for (const auto& [role, id] : b.roles) out.roles["b." + role] = id + offset;
  return out;
}

} // namespace stc
