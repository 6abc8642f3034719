#include "stc/sim.hpp"

#include <algorithm>
#include <stdexcept>

#include "stc/checked.hpp"

namespace stc {

Simulator::Simulator(const Network& net, RunOptions opts)
    : net_(net), opts_(std::move(opts)) {
  const size_t n = net_.size();

  // Group synapses by presynaptic neuron for O(1) fanout walks.
  std::vector<uint32_t> counts(n + 1, 0);
  for (const auto& s : net_.synapses) counts[s.pre + 1]++;
  syn_begin_.assign(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) syn_begin_[i] = syn_begin_[i - 1] + counts[i];
  syn_sorted_.resize(net_.synapses.size());
  {
    std::vector<uint32_t> cursor(syn_begin_.begin(), syn_begin_.end() - 1);
    for (const auto& s : net_.synapses) syn_sorted_[cursor[s.pre]++] = s;
  }

  window_ = static_cast<size_t>(net_.max_delay()) + 2;
  calendar_.assign(window_, {});

  u_.assign(n, 0);
  u_nonzero_.assign(n, 0);
  mark_.assign(n, 0);
  sched_cursor_.assign(n, 0);
  spike_counts_.assign(n, 0);

  trace_.recorded.assign(n, 0);
  trace_.spikes.assign(n, {});
  for (NeuronId id = 0; id < n; ++id) {
    const auto& spec = net_.neurons[id];
    switch (opts_.trace) {
      case TraceMode::All: trace_.recorded[id] = 1; break;
      case TraceMode::ReadoutsOnly:
        trace_.recorded[id] = spec.kind == NeuronKind::Readout ? 1 : 0;
        break;
      case TraceMode::None: break;
    }
    if (spec.kind == NeuronKind::Programmed) {
      programmed_.push_back(id);
    } else if (spec.bias != 0 || spec.threshold < 0) {
      always_active_.push_back(id);
    }
  }

  for (const auto& [id, value] : opts_.initial_currents) {
    if (!net_.valid_id(id))
      throw SimError("initial current references unknown neuron");
    u_[id] = value;
    if (value != 0 && !u_nonzero_[id]) {
      u_nonzero_[id] = 1;
      nonzero_list_.push_back(id);
    }
    max_abs_u_ = std::max(max_abs_u_, std::abs(value));
  }

  evaluate_initial();
}

void Simulator::evaluate_initial() {
  // Spike set of t = 0: initial currents above threshold plus schedules.
  for (NeuronId id = 0; id < net_.size(); ++id) {
    const auto& spec = net_.neurons[id];
    if (spec.kind == NeuronKind::Programmed) {
      if (!spec.schedule.empty() && spec.schedule.front() == 0) {
        spikes_now_.push_back(id);
        sched_cursor_[id] = 1;
      }
    } else if (u_[id] > spec.threshold) {
      spikes_now_.push_back(id);
    }
  }
  std::sort(spikes_now_.begin(), spikes_now_.end());
}

int64_t Simulator::current(NeuronId id) const {
  if (!net_.valid_id(id)) throw SimError("unknown neuron id");
  return u_[id];
}

void Simulator::set_current(NeuronId id, int64_t value) {
  if (!net_.valid_id(id)) throw SimError("unknown neuron id");
  u_[id] = value;
  if (value != 0 && !u_nonzero_[id]) {
    u_nonzero_[id] = 1;
    nonzero_list_.push_back(id);
  }
  const auto& spec = net_.neurons[id];
  if (spec.kind != NeuronKind::Programmed) {
    const bool spiking = value > spec.threshold;
    auto it = std::lower_bound(spikes_now_.begin(), spikes_now_.end(), id);
    const bool listed = it != spikes_now_.end() && *it == id;
    if (spiking && !listed) spikes_now_.insert(it, id);
    if (!spiking && listed) spikes_now_.erase(it);
  }
}

void Simulator::record(const std::vector<NeuronId>& spikes) {
  for (NeuronId id : spikes) {
    spike_counts_[id]++;
    total_spikes_++;
    if (trace_.recorded[id]) trace_.spikes[id].push_back(t_);
  }
}

const std::vector<NeuronId>& Simulator::step(std::span<const NeuronId> injected) {
  // Merge injections into the current spike set.
  std::vector<NeuronId> fired = spikes_now_;
  if (!injected.empty()) {
    for (NeuronId id : injected) {
      if (!net_.valid_id(id)) throw SimError("injected spike for unknown neuron");
      fired.push_back(id);
    }
    std::sort(fired.begin(), fired.end());
    fired.erase(std::unique(fired.begin(), fired.end()), fired.end());
  }
  record(fired);

  // Propagate along outgoing synapses and apply resets.
  for (NeuronId id : fired) {
    for (uint32_t i = syn_begin_[id]; i < syn_begin_[id + 1]; ++i) {
      const auto& s = syn_sorted_[i];
      if (net_.neurons[s.post].kind == NeuronKind::Programmed) continue;
      const size_t slot = static_cast<size_t>((t_ + 1 + s.delay) % window_);
      calendar_[slot].emplace_back(s.post, s.weight);
    }
    const auto& spec = net_.neurons[id];
    if (spec.kind != NeuronKind::Programmed &&
        spec.reset == ResetMode::ToZero) {
      u_[id] = 0;
    }
  }

  // Collect the neurons whose current can change at t+1.
  epoch_++;
  std::vector<NeuronId> active;
  auto touch = [&](NeuronId id) {
    if (mark_[id] != epoch_) {
      mark_[id] = epoch_;
      active.push_back(id);
    }
  };
  const size_t slot = static_cast<size_t>((t_ + 1) % window_);
  for (const auto& [post, w] : calendar_[slot]) {
    (void)w;
    touch(post);
  }
  for (NeuronId id : nonzero_list_)
    if (u_nonzero_[id]) touch(id);
  for (NeuronId id : always_active_) touch(id);

  std::vector<NeuronId> next;
  try {
    for (NeuronId id : active) {
      const auto& spec = net_.neurons[id];
      if (spec.kind == NeuronKind::Programmed) continue;
      int64_t v = checked_mul(spec.leak, u_[id]);
      v = checked_add(v, spec.bias);
      u_[id] = v;
    }
    for (const auto& [post, w] : calendar_[slot]) {
      u_[post] = checked_add(u_[post], w);
    }
  } catch (const OverflowError& e) {
    throw OverflowError(std::string(e.what()) + " at timestep " +
                        std::to_string(t_ + 1));
  }
  calendar_[slot].clear();

  // Refresh the nonzero set and determine dynamic spikes at t+1.
  std::vector<NeuronId> keep;
  keep.reserve(nonzero_list_.size());
  for (NeuronId id : nonzero_list_) {
    if (mark_[id] != epoch_) {
      if (u_nonzero_[id]) keep.push_back(id);
      continue;
    }
    u_nonzero_[id] = 0;
  }
  for (NeuronId id : active) {
    if (net_.neurons[id].kind == NeuronKind::Programmed) continue;
    const int64_t v = u_[id];
    if (v != 0) {
      u_nonzero_[id] = 1;
      keep.push_back(id);
      const int64_t a = v < 0 ? -v : v;
      if (a > max_abs_u_) max_abs_u_ = a;
    } else {
      u_nonzero_[id] = 0;
    }
    if (v > net_.neurons[id].threshold) next.push_back(id);
  }
  nonzero_list_ = std::move(keep);

  // Programmed spikes at t+1.
  for (NeuronId id : programmed_) {
    const auto& sched = net_.neurons[id].schedule;
    size_t& cur = sched_cursor_[id];
    while (cur < sched.size() && sched[cur] < t_ + 1) cur++;
    if (cur < sched.size() && sched[cur] == t_ + 1) {
      next.push_back(id);
      cur++;
    }
  }

  std::sort(next.begin(), next.end());
  t_ += 1;
  spikes_now_ = std::move(next);
  return spikes_now_;
}

RunMetrics Simulator::metrics() const {
  RunMetrics m;
  m.timesteps = t_;
  m.total_spikes = total_spikes_;
  m.per_neuron_spikes = spike_counts_;
  m.max_abs_current = max_abs_u_;
  const auto in_deg = net_.in_degrees();
  const auto out_deg = net_.out_degrees();
  for (uint32_t d : in_deg) m.max_in_degree = std::max(m.max_in_degree, d);
  for (uint32_t d : out_deg) m.max_out_degree = std::max(m.max_out_degree, d);
  m.max_delay = net_.max_delay();
  return m;
}

RunResult run(const Network& net, Timestep horizon,
              const InjectionSchedule& injections, RunOptions opts) {
  if (horizon < 1) throw SimError("run horizon must be >= 1");
  for (const auto& [t, ids] : injections) {
    if (t < 0 || t >= horizon)
      throw SimError("injection outside run horizon");
    for (NeuronId id : ids)
      if (!net.valid_id(id)) throw SimError("injection for unknown neuron");
  }

  Simulator sim(net, std::move(opts));
  static const std::vector<NeuronId> kNone;
  for (Timestep t = 0; t < horizon; ++t) {
    auto it = injections.find(t);
    const auto& inj = it == injections.end() ? kNone : it->second;
    try {
      sim.step(std::span<const NeuronId>(inj.data(), inj.size()));
    } catch (const OverflowError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimError(std::string(e.what()) + " at timestep " +
                     std::to_string(t));
    }
  }

  RunResult result;
  result.metrics = sim.metrics();
  // The final step computed the spike set of t = horizon; it is not part
  // of the recorded window, so the trace holds exactly `horizon` steps.
  result.trace = sim.trace();
  return result;
}

RangeCheck dynamic_range_check(const RunMetrics& metrics,
                               const HardwareProfile& profile) {
  return {metrics.max_abs_current, profile.current_limit()};
}

} // namespace stc
