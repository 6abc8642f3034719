// Exhaustive epistasis detection on a spiking substrate.
//
// The dataset is embedded in stack synapses (one per role, SNP and
// sample). For each SNP tuple the schedule triggers the selected
// stacks; repeaters expand the slower positions so the per-sample AND
// layer walks all 3^k genotype tuples in lexicographic order, one per
// timestep. A hardware-restricted population-count tree counts the AND
// spikes and the readout bits are decoded on the fly into contingency
// tables. Cases and controls run as separately synthesized networks.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stc/circuit.hpp"
#include "stc/network.hpp"
#include "stc/oracle.hpp"
#include "stc/profile.hpp"
#include "stc/sim.hpp"

namespace stc::epistasis {

using oracle::ContingencyTable;

class IntegrityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GenotypeDataset {
  int64_t samples = 0; // M
  int64_t snps = 0;    // N
  std::vector<std::vector<int>> genotypes; // entries in {0,1,2}
  std::vector<int> cls;                    // 0 control, 1 case

  oracle::DatasetView view() const { return {genotypes, cls}; }
};

// Comma-separated rows, N genotype columns then the class column; an
// optional non-numeric header line is skipped.
GenotypeDataset load_dataset(const std::string& text);
GenotypeDataset load_dataset_file(const std::string& path);

// 3-bit masked one-hot form: 0 -> "100", 1 -> "010", 2 -> "001".
std::string one_hot(int genotype);

struct BinarizedSplit {
  // Row indices per class; [0] controls, [1] cases.
  std::array<std::vector<int>, 2> members;
};

BinarizedSplit binarize(const GenotypeDataset& ds);

struct Schedule {
  int k = 2;
  int64_t block_len = 9; // 3^k
  std::vector<std::vector<int>> tuples; // SNP subsets, lexicographic
  InjectionSchedule injections;
  Timestep first_readout = 0; // pipeline fill latency
  Timestep horizon = 0;       // first_readout + block_len * #tuples
};

struct SynthesizedHalf {
  Network net;
  Schedule schedule;
  std::vector<NeuronId> readout_bits; // little-endian count bits
  int64_t sample_count = 0;
  int64_t tree_latency = 0;
};

// Builds the network and trigger timetable for one class half over the
// given sample rows. Requires 1 <= samples.size() <= 2^(s_pr-2).
SynthesizedHalf synthesize(const GenotypeDataset& ds,
                           const std::vector<int>& samples, int k,
                           const HardwareProfile& profile);

// Binary-decodes the count bits at every scheduled readout step.
// Result[tuple_index][entry] is the decoded count; a readout spike at a
// non-scheduled time raises IntegrityError.
std::vector<std::vector<uint64_t>> decode_readout(
    const SpikeTrace& trace, const Schedule& schedule,
    const std::vector<NeuronId>& readout_bits);

struct DetectionMetrics {
  Timestep timesteps = 0;     // summed over class runs and shards
  Timestep fill_latency = 0;  // per-run pipeline fill (max over runs)
  uint64_t neurons = 0;
  uint64_t synapses = 0;
  uint64_t spikes = 0;
  int64_t runs = 0;
};

struct DetectionResult {
  std::vector<ContingencyTable> tables;
  DetectionMetrics metrics;
};

// Full pipeline: binarize, synthesize per class (sharding sample sets
// larger than the stack capacity), simulate, decode and merge.
DetectionResult run_detection(const GenotypeDataset& ds, int k,
                              const HardwareProfile& profile);

// Pearson chi-square over the 2 x 3^k table; cells with zero expected
// count contribute zero.
double chi_square(const ContingencyTable& table);

// One row per cell: snp ids, genotype tuple, cases, controls[, chi2].
std::string tables_to_csv(const std::vector<ContingencyTable>& tables,
                          bool with_chi2);

std::string metrics_to_json(const DetectionMetrics& metrics,
                            const HardwareProfile& profile);

} // namespace stc::epistasis
