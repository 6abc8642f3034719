// Hardware implementability limits and the static legality check.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stc/network.hpp"

namespace stc {

// Limits of a target platform. Weights are signed s_pr-bit integers,
// currents and thresholds signed n_pr-bit integers.
struct HardwareProfile {
  int64_t s_pr = 16;    // synaptic weight precision, bits
  int64_t n_pr = 16;    // current / threshold precision, bits
  int64_t m_delay = 4;  // maximum synaptic delay
  int64_t f_in = 16;    // maximum in-degree
  int64_t f_out = 16;   // maximum out-degree

  // Signed two's-complement ranges. The lower bound is inclusive, so
  // -2^(s_pr-1) is a representable weight while +2^(s_pr-1) is not.
  int64_t weight_min() const { return -(int64_t{1} << (s_pr - 1)); }
  int64_t weight_max() const { return (int64_t{1} << (s_pr - 1)) - 1; }
  int64_t current_limit() const { return (int64_t{1} << (n_pr - 1)) - 1; }

  // s_pr >= 5, s_pr <= n_pr, everything >= 1.
  void check() const;

  // Largest input count the weight-scaled counting circuits support.
  int64_t popc_capacity() const { return int64_t{1} << (s_pr - 2); }
};

enum class ViolationKind : uint8_t {
  InDegree,
  OutDegree,
  WeightRange,
  DelayRange,
  ThresholdRange,
  BiasRange,
};

struct Violation {
  ViolationKind kind;
  uint32_t index;   // neuron id or synapse index depending on kind
  int64_t value;    // offending quantity
  int64_t limit;
  std::string describe() const;
};

struct ViolationReport {
  std::vector<Violation> items;
  bool empty() const { return items.empty(); }
  std::string describe() const;
};

// Lists every neuron whose degree or parameters exceed the profile and
// every synapse whose weight or delay is out of range. An empty report
// means the network is profile-legal.
ViolationReport validate(const Network& net, const HardwareProfile& profile);

// Outcome of a dynamic range check over a finished run.
struct RangeCheck {
  int64_t max_abs_current = 0;
  int64_t limit = 0;
  bool ok() const { return max_abs_current <= limit; }
};

} // namespace stc
