// Differential verification sweeps shared by the CLI and the test
// suites: drive a built circuit over exhaustive or seeded-random inputs
// and compare decoded outputs against the oracle module.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stc/circuit.hpp"
#include "stc/profile.hpp"
#include "stc/sim.hpp"

namespace stc::verify {

struct Counterexample {
  std::string input;
  std::string expected;
  std::string actual;
};

struct SweepResult {
  uint64_t cases = 0;
  std::optional<Counterexample> failure;
  bool ok() const { return !failure.has_value(); }
  std::string describe() const;
};

// Runs one evaluation of a feedforward circuit: injects the given input
// bits at t = 0 and reports which outputs spiked at t = latency.
std::vector<int> evaluate(const Circuit& circuit, const std::vector<int>& bits);

// Streams one input vector per timestep and reads outputs at offsets
// latency + i; checks II = 1 pipelining.
std::vector<std::vector<int>> evaluate_stream(
    const Circuit& circuit, const std::vector<std::vector<int>>& inputs);

uint64_t decode_binary(const std::vector<int>& bits); // little-endian

struct FaultInjection {
  bool enabled = false;
  uint64_t synapse_seed = 0; // picks the synapse to corrupt
};

SweepResult sweep_parity(int64_t max_exhaustive_n,
                         const std::vector<int64_t>& random_sizes,
                         uint64_t random_cases, uint64_t seed,
                         const FaultInjection& fault = {});
SweepResult sweep_popc(int64_t max_exhaustive_l,
                       const std::vector<int64_t>& random_sizes,
                       uint64_t random_cases, uint64_t seed,
                       const FaultInjection& fault = {});
SweepResult sweep_sum(int64_t max_n, int64_t max_l, uint64_t random_cases,
                      uint64_t seed, const FaultInjection& fault = {});
SweepResult sweep_stack(const HardwareProfile& profile, uint64_t random_cases,
                        uint64_t seed);
SweepResult sweep_repeater(const HardwareProfile& profile,
                           const std::vector<int64_t>& factors);
SweepResult sweep_popc_restricted(const HardwareProfile& profile,
                                  const std::vector<int64_t>& sizes,
                                  uint64_t random_cases, uint64_t seed);
SweepResult sweep_epistasis(int64_t max_samples, int64_t max_snps, int k,
                            const HardwareProfile& profile, uint64_t datasets,
                            uint64_t seed);

// Applies the fault hook: bumps one synapse weight by +1.
Circuit corrupt(Circuit circuit, uint64_t synapse_seed);

} // namespace stc::verify
