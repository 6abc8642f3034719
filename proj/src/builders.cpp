#include "stc/builders.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>

#include "stc/legalize.hpp"

namespace stc {

namespace {

constexpr NeuronId kUnwired = static_cast<NeuronId>(-1);

NeuronSpec input_port() {
  NeuronSpec s;
  s.kind = NeuronKind::Programmed;
  return s;
}

NeuronSpec gate(int64_t threshold, int64_t bias = 0) {
  NeuronSpec s;
  s.threshold = threshold;
  s.bias = bias;
  return s;
}

NeuronSpec readout(int64_t threshold, int64_t bias = 0) {
  NeuronSpec s = gate(threshold, bias);
  s.kind = NeuronKind::Readout;
  return s;
}

// Copies `part` into dst, wiring part's input ports to the given driver
// neurons. kUnwired drivers leave the programmed placeholder silent.
// Returns part's output ids relocated into dst.
std::vector<NeuronId> splice(Network& dst, const Circuit& part,
                             const std::vector<NeuronId>& drivers) {
  if (drivers.size() != part.inputs().size())
    throw std::invalid_argument("splice: driver count mismatch");
  const NeuronId offset = merge_networks(dst, part.net);
  std::vector<std::pair<NeuronId, NeuronId>> redirects;
  for (size_t i = 0; i < drivers.size(); ++i) {
    if (drivers[i] == kUnwired) continue;
    redirects.emplace_back(part.inputs()[i] + offset, drivers[i]);
  }
  if (!redirects.empty()) {
    std::map<NeuronId, NeuronId> m(redirects.begin(), redirects.end());
    for (size_t i = dst.synapses.size() - part.net.synapses.size();
         i < dst.synapses.size(); ++i) {
      auto it = m.find(dst.synapses[i].pre);
      if (it != m.end()) dst.synapses[i].pre = it->second;
    }
  }
  std::vector<NeuronId> outs;
  for (NeuronId o : part.outputs()) {
    outs.push_back(o + offset);
    auto& spec = dst.neurons[o + offset];
    if (spec.kind == NeuronKind::Readout) spec.kind = NeuronKind::Regular;
  }
  return outs;
}

} // namespace

int64_t bit_width(uint64_t v) {
  int64_t w = 1;
  while (v >> w) w++;
  return w;
}

Circuit build_parity(int64_t n, ParityMode mode) {
  if (n < 1) throw std::invalid_argument("parity: n must be >= 1");

  Circuit c;
  Network& net = c.net;
  std::vector<NeuronId> in(n);
  for (int64_t i = 0; i < n; ++i) {
    in[i] = net.add_neuron(input_port());
    c.roles["in[" + std::to_string(i) + "]"] = in[i];
  }
  net.input_ports = in;

  const int64_t half = n / 2;
  std::vector<NeuronId> level1(half);
  for (int64_t j = 1; j <= half; ++j) {
    level1[j - 1] = net.add_neuron(gate(2 * j - 1));
    for (NeuronId src : in) net.add_synapse(src, level1[j - 1], 0, 1);
  }

  const bool even = mode == ParityMode::EvenDetector;
  const NeuronId out = net.add_neuron(readout(0, even ? 1 : 0));
  for (NeuronId y : level1) net.add_synapse(y, out, 0, even ? 2 : -2);
  for (NeuronId src : in) net.add_synapse(src, out, 1, even ? -1 : 1);
  net.output_ports = {out};
  c.roles["out"] = out;

  c.latency = 2;
  c.initiation_interval = 1;
  c.detail = even ? "parity(even)" : "parity(odd)";
  return c;
}

Circuit build_popc_tc(int64_t l) {
  if (l < 1) throw std::invalid_argument("popc: l must be >= 1");

  Circuit c;
  Network& net = c.net;
  std::vector<NeuronId> in(l);
  for (int64_t i = 0; i < l; ++i) {
    in[i] = net.add_neuron(input_port());
    c.roles["in[" + std::to_string(i) + "]"] = in[i];
  }
  net.input_ports = in;

  // Count layer: neuron j spikes iff at least j inputs fired.
  std::vector<NeuronId> count(l);
  for (int64_t j = 1; j <= l; ++j) {
    count[j - 1] = net.add_neuron(gate(j - 1));
    for (NeuronId src : in) net.add_synapse(src, count[j - 1], 0, 1);
  }

  // One-hot layer: only the highest firing count neuron survives.
  std::vector<NeuronId> onehot(l);
  for (int64_t j = 1; j <= l; ++j) {
    onehot[j - 1] = net.add_neuron(gate(0));
    net.add_synapse(count[j - 1], onehot[j - 1], 0, 1);
    for (int64_t k = j + 1; k <= l; ++k)
      net.add_synapse(count[k - 1], onehot[j - 1], 0, -1);
  }

  const int64_t bits = bit_width(static_cast<uint64_t>(l));
  std::vector<NeuronId> out(bits);
  for (int64_t b = 0; b < bits; ++b) {
    out[b] = net.add_neuron(readout(0));
    c.roles["bit[" + std::to_string(b) + "]"] = out[b];
  }
  for (int64_t v = 1; v <= l; ++v)
    for (int64_t b = 0; b < bits; ++b)
      if ((v >> b) & 1) net.add_synapse(onehot[v - 1], out[b], 0, 1);
  net.output_ports = out;

  c.latency = 3;
  c.initiation_interval = 1;
  c.detail = "popc_tc";
  return c;
}

Circuit build_sum_bounded(int64_t n, int64_t l, const SumOptions& options) {
  if (n < 2) throw std::invalid_argument("sum: need at least two addends");
  if (l < 1) throw std::invalid_argument("sum: addend width must be >= 1");
  if (!options.addend_max.empty() &&
      static_cast<int64_t>(options.addend_max.size()) != n)
    throw std::invalid_argument("sum: bound count mismatch");

  std::vector<uint64_t> vmax(n, (uint64_t{1} << l) - 1);
  if (!options.addend_max.empty()) vmax = options.addend_max;
  uint64_t total = 0;
  for (uint64_t v : vmax) total += v;

  const int64_t width_full = l + bit_width(static_cast<uint64_t>(n) - 1);
  int64_t width = options.addend_max.empty() ? width_full : bit_width(total);
  if (options.output_width > 0) width = std::min(width, options.output_width);

  Circuit c;
  Network& net = c.net;
  std::vector<std::vector<NeuronId>> in(n, std::vector<NeuronId>(l));
  for (int64_t j = 0; j < n; ++j)
    for (int64_t i = 0; i < l; ++i) {
      in[j][i] = net.add_neuron(input_port());
      c.roles["in[" + std::to_string(j) + "][" + std::to_string(i) + "]"] =
          in[j][i];
    }
  for (int64_t j = 0; j < n; ++j)
    for (int64_t i = 0; i < l; ++i) net.input_ports.push_back(in[j][i]);

  // Emits w as one synapse, or as parallel synapses under the cap.
  auto add_weighted = [&](NeuronId pre, NeuronId post, int64_t delay,
                          int64_t w) {
    const int64_t cap = options.weight_cap;
    if (cap <= 0 || std::abs(w) <= cap) {
      net.add_synapse(pre, post, delay, w);
      return;
    }
    const int64_t mag = std::abs(w);
    const int64_t parts = (mag + cap - 1) / cap;
    int64_t left = mag;
    for (int64_t p = 0; p < parts; ++p) {
      const int64_t take = std::min(cap, left - (parts - 1 - p));
      net.add_synapse(pre, post, delay, w < 0 ? -take : take);
      left -= take;
    }
  };

  std::vector<NeuronId> out;
  for (int64_t k = 1; k <= width; ++k) {
    const int64_t scale = int64_t{1} << (k - 1);
    const int64_t active = std::min(k, l);

    // Largest scaled current the bounded addends can drive.
    uint64_t smax = 0;
    for (uint64_t v : vmax)
      smax += std::min(v, (uint64_t{1} << active) - 1);
    const int64_t qmax = static_cast<int64_t>(smax / scale);
    const int64_t level1_width =
        options.addend_max.empty() ? n : std::min<int64_t>(n, (qmax + 1) / 2);

    std::vector<NeuronId> level1(level1_width);
    for (int64_t j = 1; j <= level1_width; ++j) {
      level1[j - 1] = net.add_neuron(gate((2 * j - 1) * scale - 1));
      for (int64_t a = 0; a < n; ++a)
        for (int64_t i = 1; i <= active; ++i)
          net.add_synapse(in[a][i - 1], level1[j - 1], 0, int64_t{1} << (i - 1));
    }

    const NeuronId z = net.add_neuron(readout(0));
    for (NeuronId y : level1) add_weighted(y, z, 0, int64_t{1} << k);
    for (int64_t a = 0; a < n; ++a)
      for (int64_t i = 1; i <= active; ++i)
        net.add_synapse(in[a][i - 1], z, 1, -(int64_t{1} << (i - 1)));
    out.push_back(z);
    c.roles["bit[" + std::to_string(k - 1) + "]"] = z;
  }
  net.output_ports = out;

  c.latency = 2;
  c.initiation_interval = 1;
  c.scale = int64_t{1} << (width - 1);
  c.detail = "sum_tc";
  return c;
}

Circuit build_sum_tc(int64_t n, int64_t l) {
  return build_sum_bounded(n, l, {});
}

Circuit build_stack(const std::string& pattern, const HardwareProfile& profile) {
  profile.check();
  const int64_t len = static_cast<int64_t>(pattern.size());
  if (len < 1 || len > profile.s_pr - 2)
    throw std::invalid_argument("stack: pattern length must be in [1, s_pr-2]");
  int64_t weight = 0;
  for (int64_t i = 1; i <= len; ++i) {
    const char bit = pattern[i - 1];
    if (bit != '0' && bit != '1')
      throw std::invalid_argument("stack: pattern must be a bit-string");
    if (bit == '1') weight += int64_t{1} << (profile.s_pr - 1 - i);
  }

  Circuit c;
  Network& net = c.net;
  const NeuronId trigger = net.add_neuron(input_port());

  NeuronSpec mem;
  mem.threshold = (int64_t{1} << (profile.s_pr - 2)) - 1;
  mem.leak = 2;
  mem.reset = ResetMode::None;
  mem.kind = NeuronKind::Readout;
  const NeuronId cell = net.add_neuron(mem);
  net.add_synapse(cell, cell, 0, -(int64_t{1} << (profile.s_pr - 1)));
  net.add_synapse(trigger, cell, 0, weight);

  net.input_ports = {trigger};
  net.output_ports = {cell};
  c.roles["trigger"] = trigger;
  c.roles["out"] = cell;
  c.latency = 1;
  c.initiation_interval = len;
  c.feedforward = false;
  c.detail = "stack(" + pattern + ")";
  return c;
}

Circuit build_repeater_rect(int64_t seq_len, int64_t repeats,
                            const HardwareProfile& profile, Timestep first_t0) {
  profile.check();
  if (seq_len < 2 || repeats < 2)
    throw std::invalid_argument("repeater: factors must be >= 2");
  if (first_t0 < 0)
    throw std::invalid_argument("repeater: start must be >= 0");

  Circuit c;
  Network& net = c.net;
  const NeuronId in = net.add_neuron(input_port());

  // Slot latches hold the incoming bits. A slot samples the input only
  // when its strobe fires, so bit j lands in slot j; window latches
  // open the gates for `repeats` steps each; the phase ring marks
  // window boundaries.
  std::vector<NeuronId> slot(seq_len), window(seq_len), advance(seq_len);
  std::vector<NeuronId> strobe(seq_len);
  for (int64_t j = 0; j < seq_len; ++j) {
    slot[j] = net.add_neuron(gate(1));
    net.add_synapse(slot[j], slot[j], 0, 2);
    net.add_synapse(in, slot[j], 0, 1);
  }
  for (int64_t j = 0; j < seq_len; ++j) strobe[j] = net.add_neuron(gate(0));
  for (int64_t j = 0; j < seq_len; ++j) {
    net.add_synapse(strobe[j], strobe[(j + 1) % seq_len], 0, 1);
    net.add_synapse(strobe[j], slot[j], 0, 1);
  }
  for (int64_t j = 0; j < seq_len; ++j) {
    window[j] = net.add_neuron(gate(0));
    net.add_synapse(window[j], window[j], 0, 1);
  }
  std::vector<NeuronId> phase(repeats);
  for (int64_t i = 0; i < repeats; ++i) phase[i] = net.add_neuron(gate(0));
  for (int64_t i = 0; i < repeats; ++i)
    net.add_synapse(phase[i], phase[(i + 1) % repeats], 0, 1);

  for (int64_t j = 0; j < seq_len; ++j) {
    advance[j] = net.add_neuron(gate(1));
    net.add_synapse(window[j], advance[j], 0, 1);
    net.add_synapse(phase[0], advance[j], 0, 1);
    // A window's closing trigger clears its slot, kills the window and
    // opens the next one.
    net.add_synapse(advance[j], slot[j], 0, -2);
    net.add_synapse(advance[j], window[j], 0, -1);
    net.add_synapse(advance[j], window[(j + 1) % seq_len], 0, 1);
  }

  const NeuronId out = net.add_neuron(readout(0));
  for (int64_t j = 0; j < seq_len; ++j) {
    const NeuronId g = net.add_neuron(gate(1));
    net.add_synapse(slot[j], g, 0, 1);
    net.add_synapse(window[j], g, 0, 1);
    net.add_synapse(g, out, 0, 1);
  }

  // Boot: open window 1, stand in for the first strobe pulse (the ring
  // starts at strobe 2) and launch the phase token so it reaches
  // phase[0] at first_t0 + repeats - 1. Long boot delays are split over
  // relays to respect m_delay.
  NeuronSpec boot_spec = input_port();
  boot_spec.schedule = {first_t0};
  const NeuronId boot = net.add_neuron(boot_spec);
  net.add_synapse(boot, window[0], 0, 1);
  net.add_synapse(boot, slot[0], 0, 1);
  net.add_synapse(boot, strobe[1], 0, 1);
  NeuronId src = boot;
  int64_t lag = repeats - 1;
  while (lag - 1 > profile.m_delay) {
    const NeuronId relay = net.add_neuron(gate(0));
    net.add_synapse(src, relay, profile.m_delay, 1);
    src = relay;
    lag -= profile.m_delay + 1;
  }
  net.add_synapse(src, phase[0], lag - 1, 1);

  net.input_ports = {in};
  net.output_ports = {out};
  c.roles["in"] = in;
  c.roles["out"] = out;
  c.roles["boot"] = boot;
  c.latency = 3; // reported delta
  c.initiation_interval = seq_len * repeats;
  c.feedforward = false;
  std::ostringstream os;
  os << "repeater(" << seq_len << "x" << repeats << ")";
  c.detail = os.str();
  return c;
}

Circuit build_repeater(int64_t r, const HardwareProfile& profile,
                       Timestep first_t0) {
  return build_repeater_rect(r, r, profile, first_t0);
}

namespace {

struct TreeBuild {
  Network net;
  std::vector<NeuronId> inputs;
  std::vector<NeuronId> outputs; // little-endian bits
  int64_t scale = 1;
  std::string detail;
};

// Chunked strategy: popc circuits of width l0 followed by an arity-wide
// tree of bounded sum stages. Zero-padded slots keep every stage full.
TreeBuild build_chunked(int64_t m, int64_t l0, int64_t arity,
                        const HardwareProfile& profile) {
  TreeBuild tb;
  Network& net = tb.net;
  for (int64_t i = 0; i < m; ++i) tb.inputs.push_back(net.add_neuron(input_port()));

  struct Addend {
    std::vector<NeuronId> bits; // little-endian, may be shorter than stage width
    uint64_t max_value = 0;
  };

  std::vector<Addend> level;
  for (int64_t at = 0; at < m; at += l0) {
    const int64_t take = std::min(l0, m - at);
    Circuit popc = build_popc_tc(take);
    std::vector<NeuronId> drivers(tb.inputs.begin() + at,
                                  tb.inputs.begin() + at + take);
    Addend a;
    a.bits = splice(net, popc, drivers);
    a.max_value = static_cast<uint64_t>(take);
    level.push_back(std::move(a));
  }

  int64_t stages = 0;
  while (level.size() > 1) {
    int64_t width = 0;
    for (const auto& a : level)
      width = std::max<int64_t>(width, static_cast<int64_t>(a.bits.size()));

    std::vector<Addend> next;
    for (size_t at = 0; at < level.size(); at += arity) {
      const size_t take = std::min<size_t>(arity, level.size() - at);
      SumOptions opt;
      opt.weight_cap = profile.weight_max();
      for (size_t j = 0; j < take; ++j)
        opt.addend_max.push_back(level[at + j].max_value);
      for (size_t j = take; j < static_cast<size_t>(arity); ++j)
        opt.addend_max.push_back(0); // constant-zero padding slot
      Circuit sum = build_sum_bounded(arity, width, opt);

      std::vector<NeuronId> drivers(arity * width, kUnwired);
      for (size_t j = 0; j < take; ++j)
        for (size_t i = 0; i < level[at + j].bits.size(); ++i)
          drivers[j * width + i] = level[at + j].bits[i];

      Addend a;
      a.bits = splice(net, sum, drivers);
      for (size_t j = 0; j < take; ++j) a.max_value += level[at + j].max_value;
      tb.scale = std::max(tb.scale, sum.scale);
      next.push_back(std::move(a));
    }
    level = std::move(next);
    stages++;
  }

  tb.outputs = level.front().bits;
  std::ostringstream os;
  os << "popc_restricted(chunked l0=" << l0 << " arity=" << arity
     << " stages=" << stages << ")";
  tb.detail = os.str();
  return tb;
}

// Threshold counter over weighted wires: spikes carrying place values
// sum to a count in [0, value_cap]; emits its binary representation.
// All degrees stay within max(#wires, value_cap).
std::vector<NeuronId> weighted_counter(
    Network& net, const std::vector<std::pair<NeuronId, int64_t>>& wires,
    int64_t value_cap) {
  std::vector<NeuronId> count(value_cap);
  for (int64_t j = 1; j <= value_cap; ++j) {
    count[j - 1] = net.add_neuron(gate(j - 1));
    for (const auto& [id, w] : wires) net.add_synapse(id, count[j - 1], 0, w);
  }
  std::vector<NeuronId> onehot(value_cap);
  for (int64_t j = 1; j <= value_cap; ++j) {
    onehot[j - 1] = net.add_neuron(gate(0));
    net.add_synapse(count[j - 1], onehot[j - 1], 0, 1);
    for (int64_t v = j + 1; v <= value_cap; ++v)
      net.add_synapse(count[v - 1], onehot[j - 1], 0, -1);
  }
  const int64_t bits = bit_width(static_cast<uint64_t>(value_cap));
  std::vector<NeuronId> out(bits);
  for (int64_t b = 0; b < bits; ++b) out[b] = net.add_neuron(gate(0));
  for (int64_t v = 1; v <= value_cap; ++v)
    for (int64_t b = 0; b < bits; ++b)
      if ((v >> b) & 1) net.add_synapse(onehot[v - 1], out[b], 0, 1);
  return out;
}

// Column-counter strategy: per-exponent wire bags are reduced with
// weighted counter windows until one wire per bit position remains.
// A window spans consecutive columns while its worst-case value fits
// the degree cap, so carry ripple resolves several columns per round.
TreeBuild build_columns(int64_t m, int64_t cap) {
  TreeBuild tb;
  Network& net = tb.net;
  for (int64_t i = 0; i < m; ++i) tb.inputs.push_back(net.add_neuron(input_port()));

  std::map<int64_t, std::vector<NeuronId>> columns;
  columns[0] = tb.inputs;

  int64_t rounds = 0;
  auto busy = [&]() {
    for (const auto& [e, wires] : columns)
      if (wires.size() > 1) return true;
    return false;
  };
  while (busy()) {
    if (++rounds > 10000)
      throw std::logic_error("column reduction failed to converge");
    std::map<int64_t, std::vector<NeuronId>> next;

    std::vector<std::pair<NeuronId, int64_t>> window; // wire, weight
    int64_t window_base = 0, window_value = 0;
    auto flush = [&]() {
      if (window.empty()) return;
      if (window.size() == 1) {
        next[window_base].push_back(window.front().first);
      } else {
        const auto bits = weighted_counter(net, window, window_value);
        for (size_t b = 0; b < bits.size(); ++b)
          next[window_base + static_cast<int64_t>(b)].push_back(bits[b]);
      }
      window.clear();
      window_value = 0;
    };

    for (const auto& [e, wires] : columns) {
      if (wires.size() <= 1 && window.empty()) {
        for (NeuronId id : wires) next[e].push_back(id);
        continue;
      }
      for (NeuronId id : wires) {
        bool fits = false;
        int64_t weight = 1;
        if (!window.empty() && e - window_base < 8) {
          weight = int64_t{1} << (e - window_base);
          fits = window_value + weight <= cap &&
                 static_cast<int64_t>(window.size()) < cap;
        }
        if (!fits) {
          flush();
          window_base = e;
          weight = 1;
        }
        window.emplace_back(id, weight);
        window_value += weight;
      }
    }
    flush();
    columns = std::move(next);
  }

  const int64_t width = bit_width(static_cast<uint64_t>(m));
  for (int64_t e = 0; e < width; ++e) {
    auto it = columns.find(e);
    if (it != columns.end() && !it->second.empty()) {
      tb.outputs.push_back(it->second.front());
    } else {
      tb.outputs.push_back(net.add_neuron(input_port())); // constant zero bit
    }
  }
  std::ostringstream os;
  os << "popc_restricted(columns cap=" << cap << " rounds=" << rounds << ")";
  tb.detail = os.str();
  return tb;
}

Circuit finish_tree(TreeBuild&& tb, const HardwareProfile& profile) {
  Network& net = tb.net;
  net.input_ports = tb.inputs;
  net.output_ports = tb.outputs;
  for (NeuronId o : tb.outputs) {
    if (net.neurons[o].kind == NeuronKind::Regular)
      net.neurons[o].kind = NeuronKind::Readout;
  }
  drop_disconnected(net); // spliced port placeholders

  auto legal = legalize_fanout(net, profile);
  Circuit c;
  c.net = std::move(legal.net);
  c.latency = legal.output_depth;
  c.initiation_interval = 1;
  c.scale = tb.scale;
  c.detail = tb.detail;
  for (size_t b = 0; b < c.net.output_ports.size(); ++b)
    c.roles["bit[" + std::to_string(b) + "]"] = c.net.output_ports[b];
  for (size_t i = 0; i < c.net.input_ports.size(); ++i)
    c.roles["in[" + std::to_string(i) + "]"] = c.net.input_ports[i];
  return c;
}

} // namespace

Circuit build_popc_restricted(int64_t m, const HardwareProfile& profile,
                              int64_t arity) {
  profile.check();
  if (arity < 2) throw std::invalid_argument("popc_restricted: arity must be >= 2");
  if (m < 2) throw std::invalid_argument("popc_restricted: m must be >= 2");
  if (m > profile.popc_capacity())
    throw std::invalid_argument(
        "popc_restricted: m exceeds weight-precision capacity 2^(s_pr-2)");

  const int64_t cap = std::min(profile.f_in, profile.f_out);

  for (int64_t l0 = std::min<int64_t>(cap, m); l0 >= 2; --l0) {
    Circuit c = finish_tree(build_chunked(m, l0, arity, profile), profile);
    if (validate(c.net, profile).empty()) return c;
  }

  if (cap >= 2) {
    Circuit c = finish_tree(build_columns(m, cap), profile);
    if (validate(c.net, profile).empty()) return c;
  }
  throw std::invalid_argument(
      "popc_restricted: profile too tight, no legal decomposition found");
}

} // namespace stc
