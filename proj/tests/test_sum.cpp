#include <doctest.h>
#include <random>

#include "stc/builders.hpp"
#include "stc/oracle.hpp"
#include "stc/sim.hpp"
#include "stc/verify.hpp"

using namespace stc;

namespace {

std::vector<int> addend_bits(const std::vector<uint64_t>& addends, int64_t l) {
  std::vector<int> bits;
  for (uint64_t a : addends)
    for (int64_t i = 0; i < l; ++i) bits.push_back((a >> i) & 1);
  return bits;
}

} // namespace

TEST_SUITE("sum") {

TEST_CASE("spec examples") {
  {
    Circuit c = build_sum_tc(2, 1);
    const auto out = verify::evaluate(c, addend_bits({1, 1}, 1));
    CHECK(verify::decode_binary(out) == 2);
    CHECK(c.latency == 2);
    CHECK(c.outputs().size() == 2);
  }
  {
    Circuit c = build_sum_tc(3, 2);
    const auto out = verify::evaluate(c, addend_bits({3, 3, 3}, 2));
    CHECK(verify::decode_binary(out) == 9);
  }
  {
    Circuit c = build_sum_tc(4, 3);
    const auto out = verify::evaluate(c, addend_bits({0, 0, 0, 0}, 3));
    CHECK(verify::decode_binary(out) == 0);
  }
}

TEST_CASE("fixed-point scale reported") {
  Circuit c = build_sum_tc(3, 2);
  // output width 2 + ceil(log2 3) = 4, scale 2^(4-1)
  CHECK(c.outputs().size() == 4);
  CHECK(c.scale == 8);
}

TEST_CASE("exhaustive differential n <= 4, l <= 4") {
  const auto result = verify::sweep_sum(4, 4, 0, 1);
  INFO(result.describe());
  CHECK(result.ok());
  CHECK(result.cases > 70000); // every addend combination
}

TEST_CASE("random differential n <= 8, l <= 12") {
  const auto result = verify::sweep_sum(0, 0, 500, 42);
  INFO(result.describe());
  CHECK(result.ok());
}

TEST_CASE("silent when idle, pipelined at II = 1") {
  Circuit c = build_sum_tc(3, 3);
  std::mt19937_64 rng(4);
  std::vector<std::vector<int>> inputs;
  std::vector<uint64_t> sums;
  for (int t = 0; t < 30; ++t) {
    std::vector<uint64_t> addends(3);
    for (auto& a : addends) a = rng() % 8;
    sums.push_back(oracle::sum_ref(addends));
    inputs.push_back(addend_bits(addends, 3));
  }
  const auto outs = verify::evaluate_stream(c, inputs);
  for (size_t t = 0; t < inputs.size(); ++t)
    CHECK(verify::decode_binary(outs[t]) == sums[t]);

  // No spikes at all on an idle run.
  const auto idle = run(c.net, 6, {});
  CHECK(idle.metrics.total_spikes == 0);
}

TEST_CASE("bounded variant trims level-1 widths and splits weights") {
  SumOptions opt;
  opt.addend_max = {4, 4};
  opt.weight_cap = 15;
  Circuit c = build_sum_bounded(2, 3, opt);
  // sums of two addends bounded by 4 need 4 bits
  CHECK(c.outputs().size() == 4);
  for (const auto& s : c.net.synapses) CHECK(std::abs(s.weight) <= 15);
  for (uint64_t a = 0; a <= 4; ++a)
    for (uint64_t b = 0; b <= 4; ++b) {
      const auto out = verify::evaluate(c, addend_bits({a, b}, 3));
      CHECK(verify::decode_binary(out) == a + b);
    }
}

TEST_CASE("zero-bound addends never contribute") {
  SumOptions opt;
  opt.addend_max = {7, 0};
  Circuit c = build_sum_bounded(2, 3, opt);
  for (uint64_t a = 0; a <= 7; ++a) {
    const auto out = verify::evaluate(c, addend_bits({a, 0}, 3));
    CHECK(verify::decode_binary(out) == a);
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(build_sum_tc(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_sum_tc(2, 0), std::invalid_argument);
}

TEST_CASE("path delays are uniform") {
  Circuit c = build_sum_tc(3, 4);
  const auto depth = arrival_depths(c.net);
  for (NeuronId o : c.outputs()) CHECK(depth[o] == 2);
}

} // TEST_SUITE
