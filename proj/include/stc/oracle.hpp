// Brute-force reference implementations for differential testing.
// Nothing here touches the spiking machinery.
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace stc::oracle {

// XOR fold; empty input is even.
int parity_ref(const std::vector<int>& bits);

uint64_t popcount_ref(const std::vector<int>& bits);

// Exact sum; throws on overflow rather than wrapping.
uint64_t sum_ref(const std::vector<uint64_t>& values);

// Each bit repeated r times.
std::vector<int> repeat_ref(const std::vector<int>& bits, int64_t r);

// Expected stack output: spikes at trigger + i for each set pattern bit
// (1-indexed), over every trigger time.
std::set<int64_t> replay_ref(const std::string& pattern,
                             const std::vector<int64_t>& trigger_times);

// Case/control counts per genotype tuple for every k-subset of SNPs.
struct ContingencyTable {
  std::vector<int> snps;                       // ascending indices
  std::map<std::vector<int>, uint64_t> cases;  // genotype tuple -> count
  std::map<std::vector<int>, uint64_t> controls;
};

struct DatasetView {
  // genotypes[i][j] in {0,1,2}; cls[i] in {0,1}
  std::vector<std::vector<int>> genotypes;
  std::vector<int> cls;
};

std::vector<ContingencyTable> contingency_ref(const DatasetView& ds, int k);

} // namespace stc::oracle
