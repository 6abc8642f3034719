#include "stc/legalize.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>

namespace stc {

namespace {

NeuronSpec relay_spec() {
  NeuronSpec r;
  r.threshold = 0;
  r.leak = 0;
  r.bias = 0;
  r.reset = ResetMode::ToZero;
  r.kind = NeuronKind::Regular;
  return r;
}

// Longest-path arrival per neuron; also the retiming schedule. Sources
// sit at depth 0. Throws on cycles.
std::vector<int64_t> longest_arrivals(const Network& net) {
  const size_t n = net.size();
  std::vector<std::vector<uint32_t>> outgoing(n);
  std::vector<uint32_t> remaining(n, 0);
  for (uint32_t i = 0; i < net.synapses.size(); ++i) {
    outgoing[net.synapses[i].pre].push_back(i);
    remaining[net.synapses[i].post]++;
  }
  std::vector<int64_t> depth(n, 0);
  std::queue<NeuronId> ready;
  size_t settled = 0;
  for (NeuronId id = 0; id < n; ++id)
    if (remaining[id] == 0) {
      ready.push(id);
      settled++;
    }
  while (!ready.empty()) {
    const NeuronId id = ready.front();
    ready.pop();
    for (uint32_t si : outgoing[id]) {
      const auto& s = net.synapses[si];
      depth[s.post] = std::max(depth[s.post], depth[id] + 1 + s.delay);
      if (--remaining[s.post] == 0) {
        ready.push(s.post);
        settled++;
      }
    }
  }
  if (settled != n)
    throw std::invalid_argument("legalize: network must be feedforward");
  return depth;
}

// Splits a total lag over enough hops that no hop exceeds 1 + m_delay.
std::vector<int64_t> split_lag(int64_t lag, int64_t m_delay) {
  const int64_t cap = 1 + m_delay;
  const int64_t hops = (lag + cap - 1) / cap;
  std::vector<int64_t> parts;
  int64_t remaining = lag;
  for (int64_t i = 0; i < hops; ++i) {
    const int64_t left = hops - 1 - i;
    const int64_t take = std::min(cap, remaining - left);
    parts.push_back(take);
    remaining -= take;
  }
  return parts;
}

} // namespace

int64_t relay_tree_depth(uint64_t targets, int64_t f_out) {
  if (targets <= static_cast<uint64_t>(f_out)) return 0;
  // One root relay feeding levels of branching <= f_out down to the
  // leaf relays, each of which drives <= f_out original synapses.
  const uint64_t leaves = (targets + f_out - 1) / f_out;
  int64_t depth = 1;
  uint64_t width = 1;
  while (width < leaves) {
    width *= f_out;
    depth++;
  }
  return depth;
}

LegalizeResult legalize_fanout(const Network& net,
                               const HardwareProfile& profile) {
  profile.check();
  const auto depth = longest_arrivals(net);
  const size_t n = net.size();

  const auto out_deg = net.out_degrees();
  std::vector<int64_t> tree_depth(n, 0);
  for (NeuronId id = 0; id < n; ++id)
    tree_depth[id] = relay_tree_depth(out_deg[id], profile.f_out);

  // Retimed schedule: every neuron gets one arrival, relay trees and
  // hop minimums respected. Mixed-depth fan-in is padded to the max.
  std::vector<std::vector<uint32_t>> outgoing(n);
  for (uint32_t i = 0; i < net.synapses.size(); ++i)
    outgoing[net.synapses[i].pre].push_back(i);
  std::vector<int64_t> arrive(n, 0);
  {
    std::vector<NeuronId> order(n);
    for (NeuronId id = 0; id < n; ++id) order[id] = id;
    std::sort(order.begin(), order.end(),
              [&](NeuronId a, NeuronId b) { return depth[a] < depth[b]; });
    for (NeuronId id : order)
      for (uint32_t si : outgoing[id]) {
        const auto& s = net.synapses[si];
        // the original delay is a minimum lag, never shortened
        arrive[s.post] = std::max(
            arrive[s.post], arrive[id] + tree_depth[id] + 1 + s.delay);
      }
  }

  LegalizeResult result;
  Network& out = result.net;
  out.neurons = net.neurons;
  out.input_ports = net.input_ports;
  out.output_ports = net.output_ports;

  // Physical relay trees; leaf_of[id] lists the leaves serving id's
  // original synapses in groups of f_out.
  std::vector<std::vector<NeuronId>> leaf_of(n);
  for (NeuronId id = 0; id < n; ++id) {
    if (tree_depth[id] == 0) continue;
    const uint64_t leaves_needed =
        (out_deg[id] + profile.f_out - 1) / profile.f_out;
    std::vector<NeuronId> level{out.add_neuron(relay_spec())};
    out.synapses.push_back({id, level[0], 0, 1});
    for (int64_t lvl = 1; lvl < tree_depth[id]; ++lvl) {
      const bool last = lvl == tree_depth[id] - 1;
      const uint64_t want =
          last ? leaves_needed
               : std::min<uint64_t>(leaves_needed,
                                    level.size() * profile.f_out);
      std::vector<NeuronId> next;
      for (uint64_t i = 0; i < want; ++i) {
        const NeuronId r = out.add_neuron(relay_spec());
        out.synapses.push_back({level[i % level.size()], r, 0, 1});
        next.push_back(r);
      }
      level = std::move(next);
    }
    leaf_of[id] = std::move(level);
  }

  // Re-emit the original synapses with padded delays, splitting over
  // relay chains whenever the slack exceeds m_delay.
  auto emit = [&](NeuronId from, NeuronId to, int64_t lag, int64_t weight) {
    assert(lag >= 1);
    const auto parts = split_lag(lag, profile.m_delay);
    NeuronId cur = from;
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
      const NeuronId r = out.add_neuron(relay_spec());
      out.synapses.push_back({cur, r, parts[i] - 1, 1});
      cur = r;
    }
    out.synapses.push_back({cur, to, parts.back() - 1, weight});
  };

  std::vector<uint32_t> used(n, 0);
  for (NeuronId id = 0; id < n; ++id) {
    for (uint32_t si : outgoing[id]) {
      const auto& s = net.synapses[si];
      const int64_t lag = arrive[s.post] - arrive[id];
      if (tree_depth[id] == 0) {
        emit(id, s.post, lag, s.weight);
      } else {
        const NeuronId leaf = leaf_of[id][used[id] / profile.f_out];
        used[id]++;
        emit(leaf, s.post, lag - tree_depth[id], s.weight);
      }
    }
  }

  // Outputs must stay mutually aligned; pad laggards with relay chains
  // that take over the port (and its readout marking).
  int64_t out_depth = 0;
  for (NeuronId o : net.output_ports)
    out_depth = std::max(out_depth, arrive[o]);
  for (auto& o : out.output_ports) {
    const int64_t lag = out_depth - arrive[o];
    if (lag == 0) continue;
    NeuronSpec pad = relay_spec();
    pad.kind = out.neurons[o].kind == NeuronKind::Programmed
                   ? NeuronKind::Programmed
                   : out.neurons[o].kind;
    if (pad.kind == NeuronKind::Programmed) continue; // constant stays put
    if (out.neurons[o].kind == NeuronKind::Readout)
      out.neurons[o].kind = NeuronKind::Regular;
    const NeuronId tail = out.add_neuron(pad);
    emit(o, tail, lag, 1);
    o = tail;
  }

  int64_t old_depth = 0;
  for (NeuronId o : net.output_ports) old_depth = std::max(old_depth, depth[o]);
  result.added_latency = out_depth - old_depth;
  result.output_depth = out_depth;
  return result;
}

Circuit legalize_fanout(const Circuit& circuit, const HardwareProfile& profile) {
  if (!circuit.feedforward)
    throw std::invalid_argument("legalize_fanout requires a feedforward circuit");
  auto legal = legalize_fanout(circuit.net, profile);
  Circuit out = circuit;
  out.net = std::move(legal.net);
  out.latency += legal.added_latency;
  return out;
}

} // namespace stc
