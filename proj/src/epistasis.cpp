#include "stc/epistasis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stc/builders.hpp"
#include "stc/legalize.hpp"
#include "stc/serialize.hpp"

namespace stc::epistasis {

using stc::ParseError;

namespace {

NeuronSpec port_spec() {
  NeuronSpec s;
  s.kind = NeuronKind::Programmed;
  return s;
}

NeuronSpec relay_spec() {
  NeuronSpec s;
  s.threshold = 0;
  return s;
}

} // namespace

GenotypeDataset load_dataset(const std::string& text) {
  GenotypeDataset ds;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    std::vector<int> row;
    std::istringstream ls(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      try {
        size_t used = 0;
        const int v = std::stoi(cell, &used);
        while (used < cell.size() && std::isspace(cell[used])) used++;
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (lineno == 1 && ds.genotypes.empty()) continue; // header
      throw ParseError("dataset line " + std::to_string(lineno) +
                       ": non-numeric cell");
    }
    if (row.size() < 3)
      throw ParseError("dataset line " + std::to_string(lineno) +
                       ": need at least two SNPs and a class column");
    const int klass = row.back();
    row.pop_back();
    if (klass != 0 && klass != 1)
      throw ParseError("dataset line " + std::to_string(lineno) +
                       ": class must be 0 or 1");
    for (int g : row)
      if (g < 0 || g > 2)
        throw ParseError("dataset line " + std::to_string(lineno) +
                         ": genotype out of range");
    if (!ds.genotypes.empty() && row.size() != ds.genotypes[0].size())
      throw ParseError("dataset line " + std::to_string(lineno) +
                       ": ragged row");
    ds.genotypes.push_back(std::move(row));
    ds.cls.push_back(klass);
  }
  if (ds.genotypes.empty()) throw ParseError("dataset is empty");
  ds.samples = static_cast<int64_t>(ds.genotypes.size());
  ds.snps = static_cast<int64_t>(ds.genotypes[0].size());
  return ds;
}

GenotypeDataset load_dataset_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open dataset file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_dataset(ss.str());
}

std::string one_hot(int genotype) {
  switch (genotype) {
    case 0: return "100";
    case 1: return "010";
    case 2: return "001";
  }
  throw std::invalid_argument("genotype must be 0, 1 or 2");
}

BinarizedSplit binarize(const GenotypeDataset& ds) {
  BinarizedSplit split;
  for (int i = 0; i < ds.samples; ++i)
    split.members[ds.cls[i] ? 1 : 0].push_back(i);
  return split;
}

namespace {

int64_t pow3(int e) {
  int64_t v = 1;
  while (e-- > 0) v *= 3;
  return v;
}

std::vector<std::vector<int>> snp_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int j = from; j < n; ++j) {
      cur.push_back(j);
      self(self, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Fan-out tree from `source` to `targets`, one leaf synapse per target
// carrying the target's weight. Returns the tree depth (0 = direct).
int64_t spread(Network& net, NeuronId source,
               const std::vector<std::pair<NeuronId, int64_t>>& targets,
               int64_t f_out) {
  const int64_t depth = relay_tree_depth(targets.size(), f_out);
  std::vector<NeuronId> level{source};
  for (int64_t lvl = 0; lvl < depth; ++lvl) {
    const bool last = lvl == depth - 1;
    const uint64_t leaves = (targets.size() + f_out - 1) / f_out;
    const uint64_t want =
        last ? leaves : std::min<uint64_t>(leaves, level.size() * f_out);
    std::vector<NeuronId> next;
    for (uint64_t i = 0; i < want; ++i) {
      const NeuronId r = net.add_neuron(relay_spec());
      net.add_synapse(level[i % level.size()], r, 0, 1);
      next.push_back(r);
    }
    level = std::move(next);
  }
  for (size_t i = 0; i < targets.size(); ++i) {
    const NeuronId from =
        depth == 0 ? source : level[i / static_cast<size_t>(f_out)];
    net.add_synapse(from, targets[i].first, 0, targets[i].second);
  }
  return depth;
}

// Merge tree over sources (at most one active at a time); returns the
// root and writes the uniform depth.
NeuronId or_tree(Network& net, std::vector<NeuronId> level, int64_t f_in,
                 int64_t* depth_out) {
  int64_t depth = 0;
  do {
    std::vector<NeuronId> next;
    for (size_t at = 0; at < level.size(); at += f_in) {
      const size_t take = std::min<size_t>(f_in, level.size() - at);
      const NeuronId r = net.add_neuron(relay_spec());
      for (size_t i = 0; i < take; ++i)
        net.add_synapse(level[at + i], r, 0, 1);
      next.push_back(r);
    }
    level = std::move(next);
    depth++;
  } while (level.size() > 1);
  *depth_out = depth;
  return level.front();
}

// Relay chain delivering `source` spikes to `target` with the given
// total lag, honoring m_delay.
void lag_link(Network& net, NeuronId source, NeuronId target, int64_t lag,
              int64_t weight, int64_t m_delay) {
  NeuronId cur = source;
  while (lag - 1 > m_delay) {
    const NeuronId r = net.add_neuron(relay_spec());
    net.add_synapse(cur, r, m_delay, 1);
    cur = r;
    lag -= m_delay + 1;
  }
  net.add_synapse(cur, target, lag - 1, weight);
}

} // namespace

SynthesizedHalf synthesize(const GenotypeDataset& ds,
                           const std::vector<int>& samples, int k,
                           const HardwareProfile& profile) {
  profile.check();
  if (k != 2 && k != 3) throw std::invalid_argument("epistasis: k in {2,3}");
  if (ds.snps < 2) throw std::invalid_argument("epistasis: need >= 2 SNPs");
  const int64_t m = static_cast<int64_t>(samples.size());
  if (m < 1) throw std::invalid_argument("epistasis: empty sample set");
  if (m > profile.popc_capacity())
    throw std::invalid_argument("epistasis: sample count exceeds capacity");
  if (profile.s_pr < 5)
    throw std::invalid_argument("epistasis: s_pr too small for 3-bit patterns");

  const int n = static_cast<int>(ds.snps);
  SynthesizedHalf half;
  Network& net = half.net;
  half.sample_count = m;

  // Trigger ports, one per (role, SNP); stacks one per (role, SNP,
  // sample). Role 0 is the slowest tuple position.
  std::vector<std::vector<NeuronId>> trigger(k, std::vector<NeuronId>(n));
  for (int r = 0; r < k; ++r)
    for (int j = 0; j < n; ++j) trigger[r][j] = net.add_neuron(port_spec());

  NeuronSpec cell_spec;
  cell_spec.threshold = (int64_t{1} << (profile.s_pr - 2)) - 1;
  cell_spec.leak = 2;
  cell_spec.reset = ResetMode::None;

  auto pattern_weight = [&](int genotype) {
    const std::string bits = one_hot(genotype);
    int64_t w = 0;
    for (int64_t i = 1; i <= 3; ++i)
      if (bits[i - 1] == '1') w += int64_t{1} << (profile.s_pr - 1 - i);
    return w;
  };

  // stacks[r][i][j]: role r, sample i, SNP j
  std::vector<std::vector<std::vector<NeuronId>>> stacks(
      k, std::vector<std::vector<NeuronId>>(m, std::vector<NeuronId>(n)));
  for (int r = 0; r < k; ++r)
    for (int64_t i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const NeuronId cell = net.add_neuron(cell_spec);
        net.add_synapse(cell, cell, 0,
                        -(int64_t{1} << (profile.s_pr - 1)));
        stacks[r][i][j] = cell;
      }

  int64_t trig_depth = 0;
  for (int r = 0; r < k; ++r)
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<NeuronId, int64_t>> targets;
      for (int64_t i = 0; i < m; ++i)
        targets.emplace_back(stacks[r][i][j],
                             pattern_weight(ds.genotypes[samples[i]][j]));
      trig_depth = spread(net, trigger[r][j], targets, profile.f_out);
    }

  // Per sample: one merge root per role, repeaters expanding the slower
  // roles, a lag-matched direct path for the fastest, and the AND.
  int64_t or_depth = 0;
  std::vector<std::vector<NeuronId>> roots(k, std::vector<NeuronId>(m));
  for (int r = 0; r < k; ++r)
    for (int64_t i = 0; i < m; ++i)
      roots[r][i] = or_tree(net, stacks[r][i], profile.f_in, &or_depth);

  // First bits reach the merge roots at seq_start; repeater clocks are
  // booted against that phase.
  const Timestep seq_start = trig_depth + 1 + or_depth;
  std::vector<NeuronId> and_neurons(m);
  for (int64_t i = 0; i < m; ++i) {
    NeuronSpec and_spec;
    and_spec.threshold = k - 1;
    and_neurons[i] = net.add_neuron(and_spec);

    for (int r = 0; r < k - 1; ++r) {
      const int64_t repeats = pow3(k - 1 - r);
      Circuit rep = build_repeater_rect(3, repeats, profile, seq_start);
      const size_t first_syn = net.synapses.size();
      const NeuronId offset = merge_networks(net, rep.net);
      const NeuronId in_port = rep.inputs()[0] + offset;
      for (size_t s = first_syn; s < net.synapses.size(); ++s)
        if (net.synapses[s].pre == in_port)
          net.synapses[s].pre = roots[r][i];
      net.add_synapse(rep.outputs()[0] + offset, and_neurons[i], 0, 1);
      net.neurons[rep.outputs()[0] + offset].kind = NeuronKind::Regular;
    }
    // Both paths meet the AND with a fire-to-fire lag of 4 from the
    // merge roots.
    lag_link(net, roots[k - 1][i], and_neurons[i], 4, 1, profile.m_delay);
  }

  // Counting tree over the AND layer.
  std::vector<NeuronId> readout;
  int64_t tree_latency = 0;
  if (m == 1) {
    NeuronSpec bit = relay_spec();
    bit.kind = NeuronKind::Readout;
    const NeuronId b = net.add_neuron(bit);
    net.add_synapse(and_neurons[0], b, 0, 1);
    readout = {b};
    tree_latency = 1;
  } else {
    Circuit tree = build_popc_restricted(m, profile);
    const size_t first_syn = net.synapses.size();
    const NeuronId offset = merge_networks(net, tree.net);
    std::map<NeuronId, NeuronId> redirect;
    for (int64_t i = 0; i < m; ++i)
      redirect[tree.inputs()[i] + offset] = and_neurons[i];
    for (size_t s = first_syn; s < net.synapses.size(); ++s) {
      auto it = redirect.find(net.synapses[s].pre);
      if (it != redirect.end()) net.synapses[s].pre = it->second;
    }
    for (NeuronId o : tree.outputs()) readout.push_back(o + offset);
    tree_latency = tree.latency;
  }

  net.output_ports = readout;
  for (int r = 0; r < k; ++r)
    for (int j = 0; j < n; ++j) net.input_ports.push_back(trigger[r][j]);
  const auto remap = drop_disconnected(net);
  half.readout_bits.clear();
  for (NeuronId o : readout) half.readout_bits.push_back(remap[o]);
  half.tree_latency = tree_latency;

  Schedule& sched = half.schedule;
  sched.k = k;
  sched.block_len = pow3(k);
  sched.tuples = snp_subsets(n, k);

  // Block p starts at 3^k * p; tuple position r is re-triggered 3^r
  // times at spacing 3^(k-r) so the AND layer walks genotype tuples in
  // lexicographic order, slowest position first.
  auto trig_port = [&](int r, int j) { return remap[trigger[r][j]]; };
  for (size_t p = 0; p < sched.tuples.size(); ++p) {
    const Timestep base = static_cast<Timestep>(p) * sched.block_len;
    for (int r = 0; r < k; ++r) {
      const int64_t times = pow3(r);
      const int64_t spacing = pow3(k - r);
      for (int64_t c = 0; c < times; ++c)
        sched.injections[base + c * spacing].push_back(
            trig_port(r, sched.tuples[p][r]));
    }
  }

  sched.first_readout = seq_start + 4 + tree_latency;
  sched.horizon = sched.first_readout +
                  sched.block_len * static_cast<Timestep>(sched.tuples.size());
  return half;
}

std::vector<std::vector<uint64_t>> decode_readout(
    const SpikeTrace& trace, const Schedule& schedule,
    const std::vector<NeuronId>& readout_bits) {
  const size_t tuples = schedule.tuples.size();
  std::vector<std::vector<uint64_t>> counts(
      tuples, std::vector<uint64_t>(schedule.block_len, 0));

  for (size_t b = 0; b < readout_bits.size(); ++b) {
    const NeuronId id = readout_bits[b];
    if (id >= trace.recorded.size() || !trace.recorded[id])
      throw IntegrityError("readout neuron was not recorded");
    for (Timestep t : trace.spikes[id]) {
      if (t < schedule.first_readout || t >= schedule.horizon)
        throw IntegrityError("readout spike outside the schedule at t=" +
                             std::to_string(t));
      const Timestep rel = t - schedule.first_readout;
      counts[rel / schedule.block_len][rel % schedule.block_len] +=
          uint64_t{1} << b;
    }
  }
  return counts;
}

namespace {

std::vector<int> entry_tuple(int k, int64_t entry) {
  std::vector<int> tuple(k);
  for (int r = k - 1; r >= 0; --r) {
    tuple[r] = static_cast<int>(entry % 3);
    entry /= 3;
  }
  return tuple;
}

} // namespace

DetectionResult run_detection(const GenotypeDataset& ds, int k,
                              const HardwareProfile& profile) {
  const auto split = binarize(ds);
  DetectionResult result;

  // Tables skeleton in subset order, zero-filled.
  const auto tuples = snp_subsets(static_cast<int>(ds.snps), k);
  for (const auto& snps : tuples) {
    ContingencyTable t;
    t.snps = snps;
    for (int64_t e = 0; e < pow3(k); ++e) {
      t.cases[entry_tuple(k, e)] = 0;
      t.controls[entry_tuple(k, e)] = 0;
    }
    result.tables.push_back(std::move(t));
  }

  for (int klass = 0; klass < 2; ++klass) {
    const auto& rows = split.members[klass];
    if (rows.empty()) continue;

    // Shard sample sets beyond the stack capacity and sum the tables.
    const int64_t cap = profile.popc_capacity();
    for (size_t at = 0; at < rows.size(); at += cap) {
      const size_t take = std::min<size_t>(cap, rows.size() - at);
      std::vector<int> shard(rows.begin() + at, rows.begin() + at + take);

      auto half = synthesize(ds, shard, k, profile);
      RunOptions opts;
      opts.trace = TraceMode::ReadoutsOnly;
      auto run_result =
          run(half.net, half.schedule.horizon, half.schedule.injections, opts);
      const auto counts =
          decode_readout(run_result.trace, half.schedule, half.readout_bits);

      for (size_t p = 0; p < counts.size(); ++p)
        for (int64_t e = 0; e < half.schedule.block_len; ++e) {
          if (counts[p][e] == 0) continue;
          auto& table = result.tables[p];
          auto& cell = klass ? table.cases[entry_tuple(k, e)]
                             : table.controls[entry_tuple(k, e)];
          cell += counts[p][e];
        }

      result.metrics.timesteps += half.schedule.horizon;
      result.metrics.fill_latency =
          std::max(result.metrics.fill_latency, half.schedule.first_readout);
      result.metrics.neurons += half.net.size();
      result.metrics.synapses += half.net.synapses.size();
      result.metrics.spikes += run_result.metrics.total_spikes;
      result.metrics.runs++;
    }
  }
  return result;
}

double chi_square(const ContingencyTable& table) {
  uint64_t case_total = 0, control_total = 0;
  for (const auto& [t, c] : table.cases) case_total += c;
  for (const auto& [t, c] : table.controls) control_total += c;
  const double grand = static_cast<double>(case_total + control_total);
  if (grand == 0) return 0.0;

  double score = 0.0;
  for (const auto& [tuple, cases] : table.cases) {
    const uint64_t controls = table.controls.at(tuple);
    const double col = static_cast<double>(cases + controls);
    for (int row = 0; row < 2; ++row) {
      const double row_total =
          row ? static_cast<double>(case_total) : static_cast<double>(control_total);
      const double expected = row_total * col / grand;
      if (expected == 0.0) continue;
      const double observed =
          row ? static_cast<double>(cases) : static_cast<double>(controls);
      score += (observed - expected) * (observed - expected) / expected;
    }
  }
  return score;
}

std::string tables_to_csv(const std::vector<ContingencyTable>& tables,
                          bool with_chi2) {
  std::ostringstream os;
  if (!tables.empty()) {
    const size_t k = tables.front().snps.size();
    for (size_t i = 0; i < k; ++i) os << "snp" << i << ',';
    for (size_t i = 0; i < k; ++i) os << "g" << i << ',';
    os << "cases,controls";
    if (with_chi2) os << ",chi2";
    os << '\n';
  }
  for (const auto& table : tables) {
    const double chi2 = with_chi2 ? chi_square(table) : 0.0;
    for (const auto& [tuple, cases] : table.cases) {
      for (int s : table.snps) os << s << ',';
      for (int g : tuple) os << g << ',';
      os << cases << ',' << table.controls.at(tuple);
      if (with_chi2) os << ',' << chi2;
      os << '\n';
    }
  }
  return os.str();
}

std::string metrics_to_json(const DetectionMetrics& metrics,
                            const HardwareProfile& profile) {
  std::ostringstream os;
  os << "{\n"
     << "  \"timesteps\": " << metrics.timesteps << ",\n"
     << "  \"fill_latency\": " << metrics.fill_latency << ",\n"
     << "  \"neurons\": " << metrics.neurons << ",\n"
     << "  \"synapses\": " << metrics.synapses << ",\n"
     << "  \"spikes\": " << metrics.spikes << ",\n"
     << "  \"runs\": " << metrics.runs << ",\n"
     << "  \"profile\": {\"s_pr\": " << profile.s_pr
     << ", \"n_pr\": " << profile.n_pr << ", \"m_delay\": " << profile.m_delay
     << ", \"f_in\": " << profile.f_in << ", \"f_out\": " << profile.f_out
     << "}\n}\n";
  return os.str();
}

} // namespace stc::epistasis
