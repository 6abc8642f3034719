// Exact synchronous simulator for the discrete-time spiking model.
//
// Update rule, evaluated once per timestep for every non-programmed
// neuron j:
//
//   u_j(t+1) = leak_j * u_j(t) + bias_j + sum_k w_kj * x_k(t - d_kj)
//
// A neuron spikes at t iff u_j(t) is strictly greater than its
// threshold; on a spike the stored current becomes 0 under
// ResetMode::ToZero and is left untouched under ResetMode::None. A
// synapse with delay d carries a spike fired at time s into the target
// current at time s + 1 + d; there is no same-step propagation.
// Programmed neurons spike exactly per their schedule. Injected spikes
// behave like programmed spikes at the current step.
//
// State at t+1 depends only on state and spikes at times <= t, so the
// per-step evaluation order of neurons is irrelevant, and identical
// (network, injections, horizon) triples produce bit-identical traces.
// All accumulation is overflow-checked; a range violation is a hard
// failure, never a silent wraparound.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stc/network.hpp"
#include "stc/profile.hpp"

namespace stc {

class SimError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SpikeTrace {
  // spikes[id] is the sorted list of spike times for recorded neurons.
  std::vector<std::vector<Timestep>> spikes;
  std::vector<uint8_t> recorded; // 1 where spikes[] is populated
};

struct RunMetrics {
  Timestep timesteps = 0;
  uint64_t total_spikes = 0;
  std::vector<uint64_t> per_neuron_spikes;
  int64_t max_abs_current = 0;
  uint32_t max_in_degree = 0;
  uint32_t max_out_degree = 0;
  int64_t max_delay = 0;
};

enum class TraceMode : uint8_t { All, ReadoutsOnly, None };

struct RunOptions {
  TraceMode trace = TraceMode::All;
  // Membrane currents in force at t = 0, keyed by neuron id.
  std::map<NeuronId, int64_t> initial_currents;
};

using InjectionSchedule = std::map<Timestep, std::vector<NeuronId>>;

// Stepwise engine. Construction computes the spike set of t = 0 from
// initial currents and programmed schedules; each step() consumes the
// current spike set plus injections and advances one timestep.
class Simulator {
public:
  explicit Simulator(const Network& net, RunOptions opts = {});

  Timestep now() const { return t_; }
  const std::vector<NeuronId>& spiking_now() const { return spikes_now_; }
  int64_t current(NeuronId id) const;
  void set_current(NeuronId id, int64_t value); // adjusts state at now()

  // Advances to t+1 and returns the neurons spiking there. Injected ids
  // spike at the *current* step before propagation.
  const std::vector<NeuronId>& step(std::span<const NeuronId> injected = {});

  const SpikeTrace& trace() const { return trace_; }
  RunMetrics metrics() const;

private:
  void evaluate_initial();
  void record(const std::vector<NeuronId>& spikes);

  const Network& net_;
  RunOptions opts_;
  Timestep t_ = 0;

  // flat synapse arrays grouped by presynaptic neuron
  std::vector<uint32_t> syn_begin_;
  std::vector<SynapseSpec> syn_sorted_;

  std::vector<int64_t> u_;
  std::vector<uint8_t> u_nonzero_;
  std::vector<NeuronId> nonzero_list_;
  std::vector<NeuronId> always_active_; // bias-driven or negative threshold
  std::vector<size_t> sched_cursor_;
  std::vector<NeuronId> programmed_;

  // delivery calendar, ring-buffered by (t mod window)
  std::vector<std::vector<std::pair<NeuronId, int64_t>>> calendar_;
  size_t window_ = 0;

  std::vector<NeuronId> spikes_now_;
  std::vector<uint32_t> mark_;
  uint32_t epoch_ = 0;

  SpikeTrace trace_;
  std::vector<uint64_t> spike_counts_;
  uint64_t total_spikes_ = 0;
  int64_t max_abs_u_ = 0;
};

struct RunResult {
  SpikeTrace trace;
  RunMetrics metrics;
};

// Runs `horizon` timesteps (t = 0 .. horizon-1). Injection times beyond
// the horizon are rejected, as are unknown neuron ids. Step failures
// carry the offending timestep in the message.
RunResult run(const Network& net, Timestep horizon,
              const InjectionSchedule& injections = {}, RunOptions opts = {});

RangeCheck dynamic_range_check(const RunMetrics& metrics,
                               const HardwareProfile& profile);

} // namespace stc
