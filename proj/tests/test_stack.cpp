#include <doctest.h>

#include <set>

#include "stc/builders.hpp"
#include "stc/oracle.hpp"
#include "stc/sim.hpp"
#include "stc/verify.hpp"

using namespace stc;

namespace {

const HardwareProfile kP8{8, 16, 4, 16, 16};

std::set<int64_t> replay(const Circuit& c, const std::vector<int64_t>& triggers,
                         Timestep horizon) {
  InjectionSchedule inj;
  for (int64_t t : triggers) inj[t].push_back(c.inputs()[0]);
  const auto r = run(c.net, horizon, inj, {});
  const auto& spikes = r.trace.spikes[c.outputs()[0]];
  return {spikes.begin(), spikes.end()};
}

} // namespace

TEST_SUITE("stack") {

TEST_CASE("spec examples") {
  {
    Circuit c = build_stack("010", kP8);
    // weight is the pattern at the second-most-significant bits
    bool found = false;
    for (const auto& s : c.net.synapses)
      if (s.weight == 32) found = true;
    CHECK(found);
    CHECK(replay(c, {0}, 6) == std::set<int64_t>{2});
  }
  {
    Circuit c = build_stack("000", kP8);
    CHECK(replay(c, {0}, 6).empty());
  }
  {
    Circuit c = build_stack("111111", kP8);
    CHECK(replay(c, {0, 6}, 16) ==
          oracle::replay_ref("111111", {0, 6}));
  }
}

TEST_CASE("all 3-bit patterns with single and double triggers") {
  const auto result = verify::sweep_stack(kP8, 0, 1);
  INFO(result.describe());
  CHECK(result.ok());
}

TEST_CASE("random patterns up to capacity") {
  HardwareProfile p16{16, 16, 4, 16, 16};
  const auto result = verify::sweep_stack(p16, 200, 42);
  INFO(result.describe());
  CHECK(result.ok());
}

TEST_CASE("capacity limit") {
  CHECK_THROWS_AS(build_stack("1111111", kP8), std::invalid_argument);
  CHECK_THROWS_AS(build_stack("", kP8), std::invalid_argument);
  CHECK_NOTHROW(build_stack("111111", kP8));
}

TEST_CASE("stack is profile-legal including the boundary self-weight") {
  Circuit c = build_stack("101", kP8);
  HardwareProfile p = kP8;
  p.n_pr = 8;
  CHECK(validate(c.net, p).empty());
  // the self-synapse sits exactly at the signed minimum
  bool boundary = false;
  for (const auto& s : c.net.synapses)
    if (s.weight == -128) boundary = true;
  CHECK(boundary);
}

TEST_CASE("dynamic range within n_pr = s_pr") {
  Circuit c = build_stack("111111", kP8);
  InjectionSchedule inj{{0, {c.inputs()[0]}}};
  const auto r = run(c.net, 10, inj, {});
  HardwareProfile p = kP8;
  p.n_pr = 8;
  CHECK(dynamic_range_check(r.metrics, p).ok());
}

TEST_CASE("reported metadata") {
  Circuit c = build_stack("0110", HardwareProfile{9, 16, 4, 16, 16});
  CHECK(c.latency == 1);
  CHECK(c.initiation_interval == 4);
  CHECK(!c.feedforward);
}

} // TEST_SUITE
