#include <doctest.h>

#include "stc/builders.hpp"
#include "stc/oracle.hpp"
#include "stc/sim.hpp"
#include "stc/verify.hpp"

using namespace stc;

namespace {

const HardwareProfile kProfile{16, 16, 4, 16, 16};

// Output bits over [delta, delta + steps) relative to first_t0 = 0.
std::vector<int> expand(const Circuit& c, const std::vector<int>& bits,
                        int64_t steps) {
  InjectionSchedule inj;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) inj[static_cast<Timestep>(i)].push_back(c.inputs()[0]);
  const auto r = run(c.net, c.latency + steps + 1, inj, {});
  std::vector<int> out(steps, 0);
  for (Timestep t : r.trace.spikes[c.outputs()[0]]) {
    const Timestep rel = t - c.latency;
    REQUIRE(rel >= 0);
    REQUIRE(rel < steps);
    out[rel] = 1;
  }
  return out;
}

} // namespace

TEST_SUITE("repeater") {

TEST_CASE("paper worked example: 010 expands to 000111000") {
  Circuit c = build_repeater(3, kProfile);
  CHECK(c.latency == 3);
  CHECK(c.initiation_interval == 9);
  CHECK(expand(c, {0, 1, 0}, 9) ==
        std::vector<int>{0, 0, 0, 1, 1, 1, 0, 0, 0});
}

TEST_CASE("silent input stays silent") {
  Circuit c = build_repeater(3, kProfile);
  const auto r = run(c.net, 15, {}, {});
  CHECK(r.trace.spikes[c.outputs()[0]].empty());
}

TEST_CASE("all inputs for r in {2,3,4} with triple streaming") {
  const auto result = verify::sweep_repeater(kProfile, {2, 3, 4});
  INFO(result.describe());
  CHECK(result.ok());
}

TEST_CASE("spec example: r=4 streaming two sequences") {
  Circuit c = build_repeater(4, kProfile);
  InjectionSchedule inj;
  const std::vector<int> first{1, 0, 1, 1}, second{0, 1, 1, 0};
  for (int i = 0; i < 4; ++i) {
    if (first[i]) inj[i].push_back(c.inputs()[0]);
    if (second[i]) inj[16 + i].push_back(c.inputs()[0]);
  }
  const auto r = run(c.net, 40, inj, {});
  std::vector<int> got(32, 0);
  for (Timestep t : r.trace.spikes[c.outputs()[0]]) {
    const Timestep rel = t - c.latency;
    REQUIRE(rel >= 0);
    REQUIRE(rel < 32);
    got[rel] = 1;
  }
  std::vector<int> want = oracle::repeat_ref(first, 4);
  const auto tail = oracle::repeat_ref(second, 4);
  want.insert(want.end(), tail.begin(), tail.end());
  CHECK(got == want);
}

TEST_CASE("rectangular repeater expands 3 bits nine times each") {
  Circuit c = build_repeater_rect(3, 9, kProfile);
  CHECK(c.initiation_interval == 27);
  const auto got = expand(c, {0, 1, 1}, 27);
  CHECK(got == oracle::repeat_ref({0, 1, 1}, 9));
}

TEST_CASE("space stays linear in r") {
  for (int64_t r : {2, 4, 8, 16}) {
    Circuit c = build_repeater(r, kProfile);
    CHECK(c.counts().neurons <= static_cast<uint64_t>(7 * r + 8));
    CHECK(c.counts().synapses <= static_cast<uint64_t>(14 * r + 8));
  }
}

TEST_CASE("profile legality, including long boot delays") {
  // repeats - 2 > m_delay forces a relay chain on the boot path
  Circuit c = build_repeater_rect(3, 9, kProfile);
  CHECK(validate(c.net, kProfile).empty());
  HardwareProfile tight = kProfile;
  tight.m_delay = 1;
  Circuit c2 = build_repeater_rect(3, 9, tight);
  CHECK(validate(c2.net, tight).empty());
  const auto got = [&] {
    InjectionSchedule inj;
    inj[1].push_back(c2.inputs()[0]);
    const auto r = run(c2.net, 32, inj, {});
    return r.trace.spikes[c2.outputs()[0]];
  }();
  // bit 2 of 010 held for steps [3+9, 3+17]
  std::vector<Timestep> want;
  for (Timestep t = 12 + c2.latency - 3; t < 12 + c2.latency - 3 + 9; ++t)
    want.push_back(t);
  CHECK(got == want);
}

TEST_CASE("r=2 is well defined") {
  Circuit c = build_repeater(2, kProfile);
  CHECK(expand(c, {1, 0}, 4) == std::vector<int>{1, 1, 0, 0});
  CHECK(expand(c, {0, 1}, 4) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(build_repeater(1, kProfile), std::invalid_argument);
  CHECK_THROWS_AS(build_repeater_rect(3, 1, kProfile), std::invalid_argument);
}

} // TEST_SUITE
