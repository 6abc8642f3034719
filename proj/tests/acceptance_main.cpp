// Acceptance suite: one line per criterion, non-zero exit on any
// failure. Tolerances are exact equality unless stated on the line.
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "stc/builders.hpp"
#include "stc/epistasis.hpp"
#include "stc/legalize.hpp"
#include "stc/oracle.hpp"
#include "stc/sim.hpp"
#include "stc/verify.hpp"

using namespace stc;

namespace {

struct Criterion {
  int id;
  const char* name;
  bool (*fn)(std::string& detail);
};

// 1. Parity: exhaustive n in 1..12 plus 1000 random cases for n in
// {64, 256}, both detector modes, read at latency 2.
bool c1_parity(std::string& detail) {
  const auto r = verify::sweep_parity(12, {64, 256}, 500, 42);
  detail = r.describe();
  return r.ok();
}

// 2. POPC: exhaustive l in 1..10, random l in {32, 64}; the one-hot
// layer fires at most once per evaluation, exactly once iff count >= 1.
bool c2_popc(std::string& detail) {
  const auto r = verify::sweep_popc(10, {32, 64}, 500, 43);
  detail = r.describe();
  if (!r.ok()) return false;

  std::mt19937_64 rng(44);
  for (int64_t l : {6, 9, 32}) {
    Circuit c = build_popc_tc(l);
    std::vector<NeuronId> onehot;
    for (int64_t j = 0; j < l; ++j)
      onehot.push_back(static_cast<NeuronId>(2 * l + j));
    for (int t = 0; t < 200; ++t) {
      std::vector<int> bits(l);
      for (auto& b : bits) b = static_cast<int>(rng() & 1);
      InjectionSchedule inj;
      for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) inj[0].push_back(c.inputs()[i]);
      const auto run_result = run(c.net, 4, inj, {});
      int fired = 0;
      for (NeuronId id : onehot)
        fired += run_result.trace.spikes[id].empty() ? 0 : 1;
      const int count = static_cast<int>(oracle::popcount_ref(bits));
      if (fired != (count >= 1 ? 1 : 0)) {
        detail = "one-hot invariant violated at l=" + std::to_string(l);
        return false;
      }
    }
  }
  detail += ", one-hot invariant held";
  return true;
}

// 3. Binary sum: exhaustive n in {2,3,4} x l in {1..4}; 1000 random
// cases over n in {2..8}, l in {1..12}; read at latency 2. This is the
// certification of the strict-threshold / floor resolution.
bool c3_sum(std::string& detail) {
  const auto r = verify::sweep_sum(4, 4, 1000, 45);
  detail = r.describe();
  return r.ok();
}

// 4. Restricted POPC over the profile grid: exact counts, clean
// validation, log-depth latency growth (pinned: <= 10 extra timesteps
// per doubling) and II = 1 over 100 consecutive random vectors.
bool c4_restricted(std::string& detail) {
  std::mt19937_64 rng(46);
  std::ostringstream os;
  for (int64_t f : {8, 16, 32}) {
    HardwareProfile p{16, 16, 4, f, f};
    int64_t prev_latency = -1;
    for (int64_t m : {16, 64, 256, 1024, 4096}) {
      Circuit c = build_popc_restricted(m, p);
      if (!validate(c.net, p).empty()) {
        detail = "validation not empty at f=" + std::to_string(f) +
                 " m=" + std::to_string(m);
        return false;
      }
      if (prev_latency >= 0 && c.latency - prev_latency > 2 * 10) {
        // two doublings between grid points
        detail = "latency jump too large at f=" + std::to_string(f) +
                 " m=" + std::to_string(m);
        return false;
      }
      prev_latency = c.latency;

      const int evals = m <= 256 ? 20 : 5;
      for (int t = 0; t < evals; ++t) {
        std::vector<int> bits(m);
        for (auto& b : bits) b = static_cast<int>(rng() & 1);
        const auto out = verify::evaluate(c, bits);
        if (verify::decode_binary(out) != oracle::popcount_ref(bits)) {
          detail = "count mismatch at f=" + std::to_string(f) +
                   " m=" + std::to_string(m);
          return false;
        }
      }
      if (m == 256) {
        // streaming: 100 independent vectors on consecutive timesteps
        std::vector<std::vector<int>> inputs;
        for (int t = 0; t < 100; ++t) {
          std::vector<int> v(m);
          for (auto& b : v) b = static_cast<int>(rng() & 1);
          inputs.push_back(std::move(v));
        }
        const auto outs = verify::evaluate_stream(c, inputs);
        for (size_t t = 0; t < inputs.size(); ++t)
          if (verify::decode_binary(outs[t]) !=
              oracle::popcount_ref(inputs[t])) {
            detail = "II=1 streaming mismatch at f=" + std::to_string(f);
            return false;
          }
      }
    }
    os << "f=" << f << " ok; ";
  }
  detail = os.str() + "grid exact, legal, log-depth, II=1";
  return true;
}

// 5. Capacity bound: m = 2^(s_pr-2) accepted and correct,
// m = 2^(s_pr-2)+1 rejected.
bool c5_capacity(std::string& detail) {
  HardwareProfile p{9, 16, 4, 16, 16}; // capacity 128
  try {
    Circuit c = build_popc_restricted(128, p);
    if (!validate(c.net, p).empty()) {
      detail = "boundary circuit not profile-legal";
      return false;
    }
    std::vector<int> bits(128, 1);
    if (verify::decode_binary(verify::evaluate(c, bits)) != 128) {
      detail = "boundary circuit miscounts";
      return false;
    }
  } catch (const std::exception& e) {
    detail = std::string("boundary m rejected: ") + e.what();
    return false;
  }
  try {
    build_popc_restricted(129, p);
    detail = "m = capacity+1 was accepted";
    return false;
  } catch (const std::invalid_argument&) {
  }
  try {
    HardwareProfile p10{10, 16, 4, 16, 16};
    build_popc_restricted(257, p10);
    detail = "257 under s_pr=10 was accepted";
    return false;
  } catch (const std::invalid_argument&) {
  }
  detail = "128 accepted under s_pr=9, 129 and 257/s_pr=10 rejected";
  return true;
}

// 6. Stack replay: all 3-bit patterns plus 200 random patterns up to
// s_pr-2 bits, with double-trigger replays.
bool c6_stack(std::string& detail) {
  HardwareProfile p8{8, 16, 4, 16, 16};
  const auto small = verify::sweep_stack(p8, 0, 47);
  if (!small.ok()) {
    detail = small.describe();
    return false;
  }
  HardwareProfile p16{16, 16, 4, 16, 16};
  const auto wide = verify::sweep_stack(p16, 200, 48);
  detail = wide.describe();
  if (!wide.ok()) return false;
  detail = "all 3-bit and 200 random patterns replay exactly";
  return true;
}

// 7. Repeater: all 2^r inputs for r in {2,3,4} (delta constant at 3),
// streaming three sequences at period r^2; includes 010 -> 000111000.
bool c7_repeater(std::string& detail) {
  HardwareProfile p{16, 16, 4, 16, 16};
  for (int64_t r : {2, 3, 4}) {
    Circuit c = build_repeater(r, p);
    if (c.latency != 3) {
      detail = "delta is not 3 for r=" + std::to_string(r);
      return false;
    }
  }
  const auto r = verify::sweep_repeater(p, {2, 3, 4});
  detail = r.describe();
  if (!r.ok()) return false;

  Circuit c3 = build_repeater(3, p);
  InjectionSchedule inj{{1, {c3.inputs()[0]}}}; // 010
  const auto run_result = run(c3.net, 13, inj, {});
  const auto& spikes = run_result.trace.spikes[c3.outputs()[0]];
  if (std::vector<Timestep>(spikes.begin(), spikes.end()) !=
      std::vector<Timestep>{6, 7, 8}) {
    detail = "worked example 010 -> 000111000 failed";
    return false;
  }
  detail += ", worked example reproduced";
  return true;
}

// 8. Epistasis end to end: 20 random k=2 datasets (M in 16..256, N in
// 6..24) and 5 k=3 datasets (M <= 64, N <= 8); decoded tables equal the
// brute-force oracle and conserve class sizes.
bool c8_epistasis(std::string& detail) {
  HardwareProfile p{16, 16, 4, 16, 16};
  std::mt19937_64 rng(49);
  for (int d = 0; d < 20; ++d) {
    epistasis::GenotypeDataset ds;
    ds.samples = 16 + static_cast<int64_t>(rng() % 241);
    ds.snps = 6 + static_cast<int64_t>(rng() % 19);
    for (int64_t i = 0; i < ds.samples; ++i) {
      std::vector<int> row(ds.snps);
      for (auto& g : row) g = static_cast<int>(rng() % 3);
      ds.genotypes.push_back(std::move(row));
      ds.cls.push_back(static_cast<int>(rng() & 1));
    }
    const auto got = epistasis::run_detection(ds, 2, p);
    const auto want = oracle::contingency_ref(ds.view(), 2);
    uint64_t cases = 0, controls = 0;
    for (int c : ds.cls) (c ? cases : controls)++;
    for (size_t t = 0; t < want.size(); ++t) {
      if (got.tables[t].cases != want[t].cases ||
          got.tables[t].controls != want[t].controls) {
        detail = "k=2 mismatch on dataset " + std::to_string(d);
        return false;
      }
      uint64_t cs = 0, ct = 0;
      for (const auto& [tu, c] : got.tables[t].cases) cs += c;
      for (const auto& [tu, c] : got.tables[t].controls) ct += c;
      if (cs != cases || ct != controls) {
        detail = "conservation violated on dataset " + std::to_string(d);
        return false;
      }
    }
  }
  for (int d = 0; d < 5; ++d) {
    epistasis::GenotypeDataset ds;
    ds.samples = 8 + static_cast<int64_t>(rng() % 57);
    ds.snps = 4 + static_cast<int64_t>(rng() % 5);
    for (int64_t i = 0; i < ds.samples; ++i) {
      std::vector<int> row(ds.snps);
      for (auto& g : row) g = static_cast<int>(rng() % 3);
      ds.genotypes.push_back(std::move(row));
      ds.cls.push_back(static_cast<int>(rng() & 1));
    }
    const auto got = epistasis::run_detection(ds, 3, p);
    const auto want = oracle::contingency_ref(ds.view(), 3);
    for (size_t t = 0; t < want.size(); ++t)
      if (got.tables[t].cases != want[t].cases ||
          got.tables[t].controls != want[t].controls) {
        detail = "k=3 mismatch on dataset " + std::to_string(d);
        return false;
      }
  }
  detail = "20 k=2 + 5 k=3 datasets exact with conservation";
  return true;
}

// 9. Throughput: run length is exactly 3^k * C(N,k) + fill latency and
// every post-fill timestep decodes exactly one table entry.
bool c9_throughput(std::string& detail) {
  HardwareProfile p{16, 16, 4, 16, 16};
  std::mt19937_64 rng(50);
  epistasis::GenotypeDataset ds;
  ds.samples = 32;
  ds.snps = 8;
  for (int64_t i = 0; i < ds.samples; ++i) {
    std::vector<int> row(ds.snps);
    for (auto& g : row) g = static_cast<int>(rng() % 3);
    ds.genotypes.push_back(std::move(row));
    ds.cls.push_back(static_cast<int>(rng() & 1));
  }
  const auto split = epistasis::binarize(ds);
  for (int klass = 0; klass < 2; ++klass) {
    const auto half = epistasis::synthesize(ds, split.members[klass], 2, p);
    const int64_t combos = 28; // C(8,2)
    if (half.schedule.horizon !=
        half.schedule.first_readout + 9 * combos) {
      detail = "run length formula violated";
      return false;
    }
    RunOptions opts;
    opts.trace = TraceMode::ReadoutsOnly;
    const auto rr =
        run(half.net, half.schedule.horizon, half.schedule.injections, opts);
    // each post-fill timestep maps to exactly one (tuple, entry) slot
    const auto counts =
        epistasis::decode_readout(rr.trace, half.schedule, half.readout_bits);
    int64_t slots = 0;
    for (const auto& per_tuple : counts)
      slots += static_cast<int64_t>(per_tuple.size());
    if (slots != 9 * combos ||
        slots != half.schedule.horizon - half.schedule.first_readout) {
      detail = "schedule does not decode one entry per timestep";
      return false;
    }
  }
  detail = "horizon = 3^k*C(N,k) + fill; one entry per timestep after fill";
  return true;
}

// 10. Complexity envelopes: over doublings of m the fitted constants
// for neurons/m, synapses/(m log^3 m) and spikes/(m log m) vary by
// less than 2x across the top three doublings; synthesized epistasis
// halves scale as Theta(mN) neurons; parity and popc closed-form
// counts hold exactly.
bool c10_envelopes(std::string& detail) {
  HardwareProfile p{16, 16, 4, 16, 16};
  std::vector<double> rn, rs, re;
  for (int64_t m : {1024, 2048, 4096}) {
    Circuit c = build_popc_restricted(m, p);
    const auto counts = c.counts();
    const double lg = std::log2(static_cast<double>(m));
    rn.push_back(static_cast<double>(counts.neurons) / m);
    rs.push_back(static_cast<double>(counts.synapses) / (m * lg * lg * lg));
    InjectionSchedule inj;
    for (NeuronId id : c.inputs()) inj[0].push_back(id);
    const auto rr = run(c.net, c.latency + 1, inj, {});
    re.push_back(static_cast<double>(rr.metrics.total_spikes) / (m * lg));
  }
  auto spread = [](const std::vector<double>& v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return hi / lo;
  };
  if (spread(rn) >= 2 || spread(rs) >= 2 || spread(re) >= 2) {
    std::ostringstream os;
    os << "restricted-popc ratio spread too wide: neurons " << spread(rn)
       << ", synapses " << spread(rs) << ", spikes " << spread(re);
    detail = os.str();
    return false;
  }

  // epistasis space: neurons / (m*N) bounded over a doubling sweep
  std::mt19937_64 rng(51);
  std::vector<double> rmn;
  for (const auto& [m, n] : std::vector<std::pair<int64_t, int64_t>>{
           {16, 6}, {32, 12}, {64, 24}}) {
    epistasis::GenotypeDataset ds;
    ds.samples = m;
    ds.snps = n;
    for (int64_t i = 0; i < m; ++i) {
      std::vector<int> row(n);
      for (auto& g : row) g = static_cast<int>(rng() % 3);
      ds.genotypes.push_back(std::move(row));
      ds.cls.push_back(i % 2);
    }
    const auto split = epistasis::binarize(ds);
    const auto half = epistasis::synthesize(ds, split.members[1], 2, p);
    rmn.push_back(static_cast<double>(half.net.size()) /
                  (static_cast<double>(split.members[1].size()) * n));
  }
  if (spread(rmn) >= 2) {
    detail = "epistasis neurons not Theta(mN): spread " +
             std::to_string(spread(rmn));
    return false;
  }

  // closed forms
  for (int64_t n : {5, 12, 64}) {
    Circuit c = build_parity(n, ParityMode::EvenDetector);
    if (c.counts().internal_neurons != static_cast<uint64_t>(n / 2 + 1) ||
        c.counts().synapses != static_cast<uint64_t>(n * (n / 2) + n / 2 + n)) {
      detail = "parity closed-form counts broken";
      return false;
    }
  }
  for (int64_t l : {5, 10, 33}) {
    Circuit c = build_popc_tc(l);
    uint64_t syn = static_cast<uint64_t>(l * l + l + l * (l - 1) / 2);
    for (int64_t v = 1; v <= l; ++v)
      syn += static_cast<uint64_t>(__builtin_popcountll(v));
    if (c.counts().internal_neurons !=
            static_cast<uint64_t>(2 * l + bit_width(static_cast<uint64_t>(l))) ||
        c.counts().synapses != syn) {
      detail = "popc closed-form counts broken";
      return false;
    }
  }
  std::ostringstream os;
  os << "ratio spreads: neurons " << spread(rn) << ", synapses " << spread(rs)
     << ", spikes " << spread(re) << ", epistasis mN " << spread(rmn)
     << "; closed forms exact";
  detail = os.str();
  return true;
}

const Criterion kCriteria[] = {
    {1, "parity equivalence (exhaustive n<=12, random n in {64,256})", c1_parity},
    {2, "popc equivalence + one-hot invariant", c2_popc},
    {3, "binary-sum equivalence (strict-threshold certification)", c3_sum},
    {4, "restricted popc grid: exact, legal, log-depth, II=1", c4_restricted},
    {5, "capacity bound m <= 2^(s_pr-2)", c5_capacity},
    {6, "stack replay incl. double triggers", c6_stack},
    {7, "repeater expansion, delta=3, streaming", c7_repeater},
    {8, "epistasis end-to-end vs oracle", c8_epistasis},
    {9, "throughput: one entry per timestep after fill", c9_throughput},
    {10, "complexity envelopes and closed forms", c10_envelopes},
};

} // namespace

int main() {
  int failures = 0;
  for (const auto& c : kCriteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("criterion %2d %s  %s [%" PRId64 " ms] - %s\n", c.id,
                ok ? "PASS" : "FAIL", c.name, static_cast<int64_t>(ms),
                detail.c_str());
    if (!ok) failures++;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
