#include "stc/oracle.hpp"

#include <stdexcept>

#include "stc/checked.hpp"

namespace stc::oracle {

int parity_ref(const std::vector<int>& bits) {
  int p = 0;
  for (int b : bits) p ^= (b & 1);
  return p;
}

uint64_t popcount_ref(const std::vector<int>& bits) {
  uint64_t c = 0;
  for (int b : bits) c += (b & 1);
  return c;
}

uint64_t sum_ref(const std::vector<uint64_t>& values) {
  uint64_t total = 0;
  for (uint64_t v : values) {
    if (total + v < total) throw OverflowError("sum_ref overflow");
    total += v;
  }
  return total;
}

std::vector<int> repeat_ref(const std::vector<int>& bits, int64_t r) {
  std::vector<int> out;
  out.reserve(bits.size() * r);
  for (int b : bits)
    for (int64_t i = 0; i < r; ++i) out.push_back(b);
  return out;
}

std::set<int64_t> replay_ref(const std::string& pattern,
                             const std::vector<int64_t>& trigger_times) {
  std::set<int64_t> spikes;
  for (int64_t t : trigger_times)
    for (size_t i = 1; i <= pattern.size(); ++i)
      if (pattern[i - 1] == '1') spikes.insert(t + static_cast<int64_t>(i));
  return spikes;
}

namespace {

void subsets(int n, int k, std::vector<int>& cur,
             std::vector<std::vector<int>>& out, int from) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int j = from; j < n; ++j) {
    cur.push_back(j);
    subsets(n, k, cur, out, j + 1);
    cur.pop_back();
  }
}

} // namespace

std::vector<ContingencyTable> contingency_ref(const DatasetView& ds, int k) {
  if (k < 2 || k > 3) throw std::invalid_argument("contingency_ref: k in {2,3}");
  const int m = static_cast<int>(ds.genotypes.size());
  const int n = m == 0 ? 0 : static_cast<int>(ds.genotypes[0].size());
  for (const auto& row : ds.genotypes)
    for (int g : row)
      if (g < 0 || g > 2)
        throw std::invalid_argument("contingency_ref: genotype out of range");

  std::vector<std::vector<int>> snp_sets;
  std::vector<int> cur;
  subsets(n, k, cur, snp_sets, 0);

  // All genotype tuples in lexicographic order, so every table carries
  // the full 3^k key set even when counts are zero.
  std::vector<std::vector<int>> tuples{{}};
  for (int i = 0; i < k; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& t : tuples)
      for (int g = 0; g < 3; ++g) {
        auto e = t;
        e.push_back(g);
        next.push_back(std::move(e));
      }
    tuples = std::move(next);
  }

  std::vector<ContingencyTable> tables;
  for (const auto& snps : snp_sets) {
    ContingencyTable table;
    table.snps = snps;
    for (const auto& t : tuples) {
      table.cases[t] = 0;
      table.controls[t] = 0;
    }
    for (int i = 0; i < m; ++i) {
      std::vector<int> t(k);
      for (int j = 0; j < k; ++j) t[j] = ds.genotypes[i][snps[j]];
      if (ds.cls[i])
        table.cases[t]++;
      else
        table.controls[t]++;
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

} // namespace stc::oracle
