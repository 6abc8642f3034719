#include "stc/verify.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "stc/builders.hpp"
#include "stc/epistasis.hpp"
#include "stc/oracle.hpp"

namespace stc::verify {

namespace {

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += b ? '1' : '0';
  return s;
}

std::vector<int> random_bits(std::mt19937_64& rng, size_t n) {
  std::vector<int> bits(n);
  for (auto& b : bits) b = static_cast<int>(rng() & 1);
  return bits;
}

} // namespace

std::string SweepResult::describe() const {
  std::ostringstream os;
  if (ok()) {
    os << "pass (" << cases << " cases)";
  } else {
    os << "FAIL after " << cases << " cases: input=" << failure->input
       << " expected=" << failure->expected << " actual=" << failure->actual;
  }
  return os.str();
}

std::vector<int> evaluate(const Circuit& circuit, const std::vector<int>& bits) {
  if (bits.size() != circuit.inputs().size())
    throw std::invalid_argument("evaluate: input width mismatch");
  InjectionSchedule inj;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) inj[0].push_back(circuit.inputs()[i]);
  RunOptions opts;
  opts.trace = TraceMode::All;
  const auto result = run(circuit.net, circuit.latency + 1, inj, opts);
  std::vector<int> out(circuit.outputs().size(), 0);
  for (size_t i = 0; i < out.size(); ++i) {
    const auto& spikes = result.trace.spikes[circuit.outputs()[i]];
    out[i] = std::binary_search(spikes.begin(), spikes.end(),
                                circuit.latency)
                 ? 1
                 : 0;
  }
  return out;
}

std::vector<std::vector<int>> evaluate_stream(
    const Circuit& circuit, const std::vector<std::vector<int>>& inputs) {
  InjectionSchedule inj;
  for (size_t t = 0; t < inputs.size(); ++t) {
    if (inputs[t].size() != circuit.inputs().size())
      throw std::invalid_argument("evaluate_stream: input width mismatch");
    for (size_t i = 0; i < inputs[t].size(); ++i)
      if (inputs[t][i])
        inj[static_cast<Timestep>(t)].push_back(circuit.inputs()[i]);
  }
  const Timestep horizon =
      circuit.latency + static_cast<Timestep>(inputs.size()) + 1;
  const auto result = run(circuit.net, horizon, inj, {});
  std::vector<std::vector<int>> outs(
      inputs.size(), std::vector<int>(circuit.outputs().size(), 0));
  for (size_t t = 0; t < inputs.size(); ++t)
    for (size_t i = 0; i < circuit.outputs().size(); ++i) {
      const auto& spikes = result.trace.spikes[circuit.outputs()[i]];
      const Timestep at = circuit.latency + static_cast<Timestep>(t);
      outs[t][i] =
          std::binary_search(spikes.begin(), spikes.end(), at) ? 1 : 0;
    }
  return outs;
}

uint64_t decode_binary(const std::vector<int>& bits) {
  uint64_t v = 0;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) v |= uint64_t{1} << i;
  return v;
}

Circuit corrupt(Circuit circuit, uint64_t synapse_seed) {
  if (circuit.net.synapses.empty()) return circuit;
  std::mt19937_64 rng(synapse_seed);
  auto& syn = circuit.net.synapses[rng() % circuit.net.synapses.size()];
  syn.weight += 1;
  return circuit;
}

namespace {

// Exhaustive then random sweep over single-output-decode circuits.
template <typename BuildFn, typename OracleFn>
SweepResult sweep_bits(BuildFn&& build, OracleFn&& expect,
                       int64_t max_exhaustive,
                       const std::vector<int64_t>& random_sizes,
                       uint64_t random_cases, uint64_t seed,
                       const FaultInjection& fault) {
  SweepResult result;
  auto check = [&](const Circuit& circuit, const std::vector<int>& bits) {
    const auto out = evaluate(circuit, bits);
    const auto want = expect(bits, circuit);
    result.cases++;
    if (out != want && !result.failure) {
      result.failure = {bits_to_string(bits), bits_to_string(want),
                        bits_to_string(out)};
    }
    return !result.failure;
  };

  for (int64_t n = 1; n <= max_exhaustive; ++n) {
    Circuit circuit = build(n);
    if (fault.enabled) circuit = corrupt(circuit, fault.synapse_seed);
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
      std::vector<int> bits(n);
      for (int64_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1;
      if (!check(circuit, bits)) return result;
    }
  }
  std::mt19937_64 rng(seed);
  for (int64_t n : random_sizes) {
    Circuit circuit = build(n);
    if (fault.enabled) circuit = corrupt(circuit, fault.synapse_seed);
    for (uint64_t c = 0; c < random_cases; ++c)
      if (!check(circuit, random_bits(rng, n))) return result;
  }
  return result;
}

} // namespace

SweepResult sweep_parity(int64_t max_exhaustive_n,
                         const std::vector<int64_t>& random_sizes,
                         uint64_t random_cases, uint64_t seed,
                         const FaultInjection& fault) {
  SweepResult even = sweep_bits(
      [](int64_t n) { return build_parity(n, ParityMode::EvenDetector); },
      [](const std::vector<int>& bits, const Circuit&) {
        return std::vector<int>{oracle::parity_ref(bits) == 0 ? 1 : 0};
      },
      max_exhaustive_n, random_sizes, random_cases, seed, fault);
  if (!even.ok()) return even;
  SweepResult odd = sweep_bits(
      [](int64_t n) { return build_parity(n, ParityMode::OddDetector); },
      [](const std::vector<int>& bits, const Circuit&) {
        return std::vector<int>{oracle::parity_ref(bits)};
      },
      max_exhaustive_n, random_sizes, random_cases, seed + 1, fault);
  odd.cases += even.cases;
  return odd;
}

namespace {

std::vector<int> encode_binary(uint64_t v, size_t width) {
  std::vector<int> bits(width, 0);
  for (size_t i = 0; i < width; ++i) bits[i] = (v >> i) & 1;
  return bits;
}

} // namespace

SweepResult sweep_popc(int64_t max_exhaustive_l,
                       const std::vector<int64_t>& random_sizes,
                       uint64_t random_cases, uint64_t seed,
                       const FaultInjection& fault) {
  return sweep_bits(
      [](int64_t l) { return build_popc_tc(l); },
      [](const std::vector<int>& bits, const Circuit& circuit) {
        return encode_binary(oracle::popcount_ref(bits),
                             circuit.outputs().size());
      },
      max_exhaustive_l, random_sizes, random_cases, seed, fault);
}

SweepResult sweep_sum(int64_t max_n, int64_t max_l, uint64_t random_cases,
                      uint64_t seed, const FaultInjection& fault) {
  SweepResult result;
  auto check = [&](const Circuit& circuit, int64_t n, int64_t l,
                   const std::vector<uint64_t>& addends) {
    std::vector<int> bits;
    for (uint64_t a : addends)
      for (int64_t i = 0; i < l; ++i) bits.push_back((a >> i) & 1);
    const auto out = evaluate(circuit, bits);
    const uint64_t got = decode_binary(out);
    const uint64_t want = oracle::sum_ref(addends);
    result.cases++;
    if (got != want && !result.failure) {
      std::ostringstream in;
      for (size_t i = 0; i < addends.size(); ++i)
        in << (i ? "+" : "") << addends[i];
      result.failure = {in.str(), std::to_string(want), std::to_string(got)};
    }
    (void)n;
    return !result.failure;
  };

  // Exhaustive over every addend combination for small shapes.
  for (int64_t n = 2; n <= max_n; ++n)
    for (int64_t l = 1; l <= max_l; ++l) {
      Circuit circuit = build_sum_tc(n, l);
      if (fault.enabled) circuit = corrupt(circuit, fault.synapse_seed);
      const uint64_t top = uint64_t{1} << l;
      std::vector<uint64_t> addends(n, 0);
      while (true) {
        if (!check(circuit, n, l, addends)) return result;
        int64_t pos = 0;
        while (pos < n && ++addends[pos] == top) addends[pos++] = 0;
        if (pos == n) break;
      }
    }

  std::mt19937_64 rng(seed);
  for (uint64_t c = 0; c < random_cases; ++c) {
    const int64_t n = 2 + static_cast<int64_t>(rng() % 7);  // 2..8
    const int64_t l = 1 + static_cast<int64_t>(rng() % 12); // 1..12
    Circuit circuit = build_sum_tc(n, l);
    if (fault.enabled) circuit = corrupt(circuit, fault.synapse_seed);
    std::vector<uint64_t> addends(n);
    for (auto& a : addends) a = rng() % (uint64_t{1} << l);
    if (!check(circuit, n, l, addends)) return result;
  }
  return result;
}

SweepResult sweep_stack(const HardwareProfile& profile, uint64_t random_cases,
                        uint64_t seed) {
  SweepResult result;
  auto check = [&](const std::string& pattern,
                   const std::vector<int64_t>& triggers) {
    Circuit circuit = build_stack(pattern, profile);
    InjectionSchedule inj;
    for (int64_t t : triggers) inj[t].push_back(circuit.inputs()[0]);
    const int64_t len = static_cast<int64_t>(pattern.size());
    const Timestep horizon = triggers.back() + len + 2;
    const auto r = run(circuit.net, horizon, inj, {});
    const auto& spikes = r.trace.spikes[circuit.outputs()[0]];
    const std::set<int64_t> got(spikes.begin(), spikes.end());
    const auto want = oracle::replay_ref(pattern, triggers);
    result.cases++;
    if (got != want && !result.failure) {
      auto fmt = [](const std::set<int64_t>& s) {
        std::ostringstream os;
        for (int64_t t : s) os << t << ' ';
        return os.str();
      };
      result.failure = {pattern, fmt(want), fmt(got)};
    }
    return !result.failure;
  };

  // All 3-bit patterns, single and double trigger.
  for (int mask = 0; mask < 8; ++mask) {
    std::string p;
    for (int i = 2; i >= 0; --i) p += ((mask >> i) & 1) ? '1' : '0';
    if (!check(p, {0})) return result;
    if (!check(p, {0, 5})) return result;
  }

  std::mt19937_64 rng(seed);
  for (uint64_t c = 0; c < random_cases; ++c) {
    const int64_t len = 1 + static_cast<int64_t>(rng() % (profile.s_pr - 2));
    std::string p;
    for (int64_t i = 0; i < len; ++i) p += (rng() & 1) ? '1' : '0';
    std::vector<int64_t> triggers{0};
    if (rng() & 1) triggers.push_back(len + static_cast<int64_t>(rng() % 4));
    if (!check(p, triggers)) return result;
  }
  return result;
}

SweepResult sweep_repeater(const HardwareProfile& profile,
                           const std::vector<int64_t>& factors) {
  SweepResult result;
  for (int64_t r : factors) {
    Circuit circuit = build_repeater(r, profile);
    const NeuronId in = circuit.inputs()[0];
    const NeuronId out = circuit.outputs()[0];
    const int64_t period = r * r;

    // All 2^r sequences, streamed three times back to back.
    for (uint64_t mask = 0; mask < (uint64_t{1} << r); ++mask) {
      std::vector<int> bits(r);
      for (int64_t i = 0; i < r; ++i) bits[i] = (mask >> i) & 1;

      InjectionSchedule inj;
      std::vector<int> expected;
      for (int rep = 0; rep < 3; ++rep) {
        for (int64_t i = 0; i < r; ++i)
          if (bits[i]) inj[rep * period + i].push_back(in);
        const auto expansion = oracle::repeat_ref(bits, r);
        expected.insert(expected.end(), expansion.begin(), expansion.end());
      }
      const Timestep horizon = 3 * period + circuit.latency + 1;
      const auto run_result = run(circuit.net, horizon, inj, {});
      const auto& spikes = run_result.trace.spikes[out];

      std::vector<int> got(3 * period, 0);
      bool stray = false;
      for (Timestep t : spikes) {
        const Timestep rel = t - circuit.latency;
        if (rel < 0 || rel >= 3 * period)
          stray = true;
        else
          got[rel] = 1;
      }
      result.cases++;
      if ((stray || got != expected) && !result.failure) {
        result.failure = {std::to_string(r) + ":" + bits_to_string(bits),
                          bits_to_string(expected), bits_to_string(got)};
        return result;
      }
    }
  }
  return result;
}

SweepResult sweep_popc_restricted(const HardwareProfile& profile,
                                  const std::vector<int64_t>& sizes,
                                  uint64_t random_cases, uint64_t seed) {
  SweepResult result;
  std::mt19937_64 rng(seed);
  for (int64_t m : sizes) {
    Circuit circuit = build_popc_restricted(m, profile);
    for (uint64_t c = 0; c < random_cases; ++c) {
      const auto bits = random_bits(rng, m);
      const auto out = evaluate(circuit, bits);
      const uint64_t got = decode_binary(out);
      const uint64_t want = oracle::popcount_ref(bits);
      result.cases++;
      if (got != want && !result.failure) {
        result.failure = {"m=" + std::to_string(m), std::to_string(want),
                          std::to_string(got)};
        return result;
      }
    }
  }
  return result;
}

SweepResult sweep_epistasis(int64_t max_samples, int64_t max_snps, int k,
                            const HardwareProfile& profile, uint64_t datasets,
                            uint64_t seed) {
  SweepResult result;
  std::mt19937_64 rng(seed);
  for (uint64_t d = 0; d < datasets; ++d) {
    epistasis::GenotypeDataset ds;
    ds.samples = 2 + static_cast<int64_t>(rng() % (max_samples - 1));
    ds.snps = 2 + static_cast<int64_t>(rng() % (max_snps - 1));
    for (int64_t i = 0; i < ds.samples; ++i) {
      std::vector<int> row(ds.snps);
      for (auto& g : row) g = static_cast<int>(rng() % 3);
      ds.genotypes.push_back(std::move(row));
      ds.cls.push_back(static_cast<int>(rng() & 1));
    }

    const auto got = epistasis::run_detection(ds, k, profile);
    const auto want = oracle::contingency_ref(ds.view(), k);
    result.cases++;
    if (got.tables.size() != want.size()) {
      result.failure = {"dataset " + std::to_string(d), "table count",
                        "mismatch"};
      return result;
    }
    for (size_t t = 0; t < want.size(); ++t) {
      if (got.tables[t].snps != want[t].snps ||
          got.tables[t].cases != want[t].cases ||
          got.tables[t].controls != want[t].controls) {
        std::ostringstream os;
        os << "dataset " << d << " M=" << ds.samples << " N=" << ds.snps
           << " table " << t;
        result.failure = {os.str(), "oracle tables", "decoded tables"};
        return result;
      }
    }
  }
  return result;
}

} // namespace stc::verify
