#include "stc/serialize.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace stc {

namespace {

const char* kind_token(NeuronKind k) {
  switch (k) {
    case NeuronKind::Regular: return "reg";
    case NeuronKind::Programmed: return "prog";
    case NeuronKind::Readout: return "out";
  }
  return "reg";
}

NeuronKind kind_from(const std::string& s) {
  if (s == "reg") return NeuronKind::Regular;
  if (s == "prog") return NeuronKind::Programmed;
  if (s == "out") return NeuronKind::Readout;
  throw ParseError("unknown neuron kind: " + s);
}

std::vector<NeuronId> parse_ports(std::istringstream& is) {
  std::vector<NeuronId> ids;
  uint64_t id;
  while (is >> id) ids.push_back(static_cast<NeuronId>(id));
  return ids;
}

} // namespace

std::string to_text(const Network& net) {
  std::ostringstream os;
  for (NeuronId id = 0; id < net.size(); ++id) {
    const auto& n = net.neurons[id];
    os << "N " << id << ' ' << n.threshold << ' ' << n.leak << ' ' << n.bias
       << ' ' << (n.reset == ResetMode::ToZero ? 'Z' : 'N') << ' '
       << kind_token(n.kind) << '\n';
  }
  for (const auto& s : net.synapses)
    os << "S " << s.pre << ' ' << s.post << ' ' << s.delay << ' ' << s.weight
       << '\n';
  for (NeuronId id = 0; id < net.size(); ++id) {
    const auto& n = net.neurons[id];
    if (n.kind != NeuronKind::Programmed || n.schedule.empty()) continue;
    os << "P " << id << ' ';
    for (size_t i = 0; i < n.schedule.size(); ++i)
      os << (i ? "," : "") << n.schedule[i];
    os << '\n';
  }
  if (!net.input_ports.empty()) {
    os << "IN";
    for (NeuronId id : net.input_ports) os << ' ' << id;
    os << '\n';
  }
  if (!net.output_ports.empty()) {
    os << "OUT";
    for (NeuronId id : net.output_ports) os << ' ' << id;
    os << '\n';
  }
  return os.str();
}

namespace {

// Shared by network and circuit parsing; circuit-only lines are handed
// to `extra`, which returns false to reject them.
Network parse_network(const std::string& text,
                      const std::function<bool(const std::string&,
                                               std::istringstream&)>& extra) {
  Network net;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string tag;
    is >> tag;
    try {
      if (tag == "N") {
        uint64_t id;
        NeuronSpec spec;
        std::string reset, kind;
        if (!(is >> id >> spec.threshold >> spec.leak >> spec.bias >> reset >>
              kind))
          throw ParseError("malformed N line");
        if (id != net.size()) throw ParseError("neuron ids must be dense");
        if (reset == "Z")
          spec.reset = ResetMode::ToZero;
        else if (reset == "N")
          spec.reset = ResetMode::None;
        else
          throw ParseError("unknown reset mode: " + reset);
        spec.kind = kind_from(kind);
        net.add_neuron(std::move(spec));
      } else if (tag == "S") {
        uint64_t pre, post;
        int64_t delay, weight;
        if (!(is >> pre >> post >> delay >> weight))
          throw ParseError("malformed S line");
        net.add_synapse(static_cast<NeuronId>(pre),
                        static_cast<NeuronId>(post), delay, weight);
      } else if (tag == "P") {
        uint64_t id;
        std::string times;
        if (!(is >> id >> times)) throw ParseError("malformed P line");
        if (id >= net.size()) throw ParseError("schedule for unknown neuron");
        auto& spec = net.neurons[id];
        if (spec.kind != NeuronKind::Programmed)
          throw ParseError("schedule on a non-programmed neuron");
        std::istringstream ts(times);
        std::string tok;
        while (std::getline(ts, tok, ','))
          spec.schedule.push_back(std::stoll(tok));
      } else if (tag == "IN") {
        net.input_ports = parse_ports(is);
      } else if (tag == "OUT") {
        net.output_ports = parse_ports(is);
      } else if (!extra || !extra(tag, is)) {
        throw ParseError("unknown record tag: " + tag);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (NeuronId id : net.input_ports)
    if (!net.valid_id(id)) throw ParseError("input port id out of range");
  for (NeuronId id : net.output_ports)
    if (!net.valid_id(id)) throw ParseError("output port id out of range");
  return net;
}

} // namespace

Network network_from_text(const std::string& text) {
  return parse_network(text, nullptr);
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream os;
  os << to_text(circuit.net);
  for (const auto& [role, id] : circuit.roles)
    os << "PORTMAP " << role << ' ' << id << '\n';
  os << "META latency=" << circuit.latency
     << " ii=" << circuit.initiation_interval << " scale=" << circuit.scale
     << " feedforward=" << (circuit.feedforward ? 1 : 0) << '\n';
  return os.str();
}

Circuit circuit_from_text(const std::string& text) {
  Circuit c;
  c.net = parse_network(text, [&](const std::string& tag,
                                  std::istringstream& is) {
    if (tag == "PORTMAP") {
      std::string role;
      uint64_t id;
      if (!(is >> role >> id)) throw ParseError("malformed PORTMAP line");
      c.roles[role] = static_cast<NeuronId>(id);
      return true;
    }
    if (tag == "META") {
      std::string kv;
      while (is >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("malformed META entry");
        const std::string key = kv.substr(0, eq);
        const int64_t value = std::stoll(kv.substr(eq + 1));
        if (key == "latency") c.latency = value;
        else if (key == "ii") c.initiation_interval = value;
        else if (key == "scale") c.scale = value;
        else if (key == "feedforward") c.feedforward = value != 0;
        else throw ParseError("unknown META key: " + key);
      }
      return true;
    }
    return false;
  });
  return c;
}

std::string to_text(const HardwareProfile& profile) {
  std::ostringstream os;
  os << "s_pr=" << profile.s_pr << '\n'
     << "n_pr=" << profile.n_pr << '\n'
     << "m_delay=" << profile.m_delay << '\n'
     << "f_in=" << profile.f_in << '\n'
     << "f_out=" << profile.f_out << '\n';
  return os.str();
}

HardwareProfile profile_from_text(const std::string& text) {
  HardwareProfile p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("profile lines must be key=value");
    const std::string key = line.substr(0, eq);
    int64_t value;
    try {
      value = std::stoll(line.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("bad profile value for " + key);
    }
    if (key == "s_pr") p.s_pr = value;
    else if (key == "n_pr") p.n_pr = value;
    else if (key == "m_delay") p.m_delay = value;
    else if (key == "f_in") p.f_in = value;
    else if (key == "f_out") p.f_out = value;
    else throw ParseError("unknown profile key: " + key);
  }
  p.check();
  return p;
}

HardwareProfile load_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open profile file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return profile_from_text(ss.str());
}

} // namespace stc
