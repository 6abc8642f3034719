#include "stc/profile.hpp"

#include <sstream>
#include <stdexcept>

namespace stc {

void HardwareProfile::check() const {
  if (s_pr < 5) throw std::invalid_argument("profile: s_pr must be >= 5");
  if (s_pr > n_pr) throw std::invalid_argument("profile: s_pr must be <= n_pr");
  if (n_pr > 62) throw std::invalid_argument("profile: n_pr too large");
  if (m_delay < 1 || f_in < 1 || f_out < 1)
    throw std::invalid_argument("profile: all limits must be >= 1");
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::InDegree:
      os << "neuron " << index << " in-degree " << value << " > " << limit;
      break;
    case ViolationKind::OutDegree:
      os << "neuron " << index << " out-degree " << value << " > " << limit;
      break;
    case ViolationKind::WeightRange:
      os << "synapse " << index << " weight " << value << " outside signed range";
      break;
    case ViolationKind::DelayRange:
      os << "synapse " << index << " delay " << value << " > " << limit;
      break;
    case ViolationKind::ThresholdRange:
      os << "neuron " << index << " |threshold| " << value << " >= " << limit + 1;
      break;
    case ViolationKind::BiasRange:
      os << "neuron " << index << " |bias| " << value << " >= " << limit + 1;
      break;
  }
  return os.str();
}

std::string ViolationReport::describe() const {
  std::ostringstream os;
  for (const auto& v : items) os << v.describe() << '\n';
  return os.str();
}

ViolationReport validate(const Network& net, const HardwareProfile& profile) {
  profile.check();
  ViolationReport report;
  const int64_t cur_lim = profile.current_limit();

  const auto in_deg = net.in_degrees();
  const auto out_deg = net.out_degrees();
  for (NeuronId id = 0; id < net.size(); ++id) {
    const auto& n = net.neurons[id];
    if (in_deg[id] > profile.f_in)
      report.items.push_back(
          {ViolationKind::InDegree, id, in_deg[id], profile.f_in});
    if (out_deg[id] > profile.f_out)
      report.items.push_back(
          {ViolationKind::OutDegree, id, out_deg[id], profile.f_out});
    if (n.threshold > cur_lim || n.threshold < -cur_lim)
      report.items.push_back(
          {ViolationKind::ThresholdRange, id, n.threshold, cur_lim});
    if (n.bias > cur_lim || n.bias < -cur_lim)
      report.items.push_back({ViolationKind::BiasRange, id, n.bias, cur_lim});
  }

  for (uint32_t i = 0; i < net.synapses.size(); ++i) {
    const auto& s = net.synapses[i];
    if (s.weight < profile.weight_min() || s.weight > profile.weight_max())
      report.items.push_back(
          {ViolationKind::WeightRange, i, s.weight, profile.weight_max()});
    if (s.delay > profile.m_delay)
      report.items.push_back(
          {ViolationKind::DelayRange, i, s.delay, profile.m_delay});
  }
  return report;
}

} // namespace stc
