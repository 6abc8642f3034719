#include <doctest.h>
#include <random>

#include "stc/builders.hpp"
#include "stc/serialize.hpp"

using namespace stc;

TEST_SUITE("serialize") {

TEST_CASE("network text round-trip is stable") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    Network net;
    const size_t n = 2 + rng() % 10;
    for (size_t i = 0; i < n; ++i) {
      NeuronSpec spec;
      spec.threshold = static_cast<int64_t>(rng() % 201) - 100;
      spec.leak = static_cast<int64_t>(rng() % 3);
      spec.bias = static_cast<int64_t>(rng() % 11) - 5;
      spec.reset = (rng() & 1) ? ResetMode::ToZero : ResetMode::None;
      switch (rng() % 3) {
        case 0: spec.kind = NeuronKind::Regular; break;
        case 1:
          spec.kind = NeuronKind::Programmed;
          for (Timestep s = 0, at = 0; s < 3; ++s)
            spec.schedule.push_back(at += 1 + rng() % 5);
          break;
        default: spec.kind = NeuronKind::Readout; break;
      }
      net.add_neuron(spec);
    }
    const size_t syn = rng() % 15;
    for (size_t i = 0; i < syn; ++i)
      net.add_synapse(rng() % n, rng() % n, rng() % 5,
                      static_cast<int64_t>(rng() % 501) - 250);
    net.input_ports = {0};
    net.output_ports = {static_cast<NeuronId>(n - 1)};

    const std::string text = to_text(net);
    const Network parsed = network_from_text(text);
    CHECK(to_text(parsed) == text);
  }
}

TEST_CASE("circuit text carries ports, roles and meta") {
  Circuit c = build_parity(4, ParityMode::OddDetector);
  const std::string text = to_text(c);
  const Circuit parsed = circuit_from_text(text);
  CHECK(parsed.latency == 2);
  CHECK(parsed.initiation_interval == 1);
  CHECK(parsed.scale == 1);
  CHECK(parsed.roles == c.roles);
  CHECK(parsed.net.input_ports == c.net.input_ports);
  CHECK(parsed.net.output_ports == c.net.output_ports);
  CHECK(to_text(parsed) == text);
}

TEST_CASE("profile round-trip and validation") {
  HardwareProfile p{9, 12, 3, 7, 5};
  const auto back = profile_from_text(to_text(p));
  CHECK(back.s_pr == 9);
  CHECK(back.n_pr == 12);
  CHECK(back.m_delay == 3);
  CHECK(back.f_in == 7);
  CHECK(back.f_out == 5);

  CHECK_THROWS_AS(profile_from_text("s_pr=4\n"), std::invalid_argument);
  CHECK_THROWS_AS(profile_from_text("bogus=1\n"), ParseError);
  CHECK_THROWS_AS(profile_from_text("s_pr\n"), ParseError);
}

TEST_CASE("malformed network lines are rejected") {
  CHECK_THROWS_AS(network_from_text("N 0 0\n"), ParseError);
  CHECK_THROWS_AS(network_from_text("X 0\n"), ParseError);
  CHECK_THROWS_AS(network_from_text("N 5 0 0 0 Z reg\n"), ParseError);
  CHECK_THROWS_AS(
      network_from_text("N 0 0 0 0 Z reg\nS 0 3 0 1\n"), ParseError);
  CHECK_THROWS_AS(
      network_from_text("N 0 0 0 0 Z reg\nP 0 1,2\n"), ParseError);
}

TEST_CASE("programmed schedules survive the round trip") {
  Network net;
  NeuronSpec in;
  in.kind = NeuronKind::Programmed;
  in.schedule = {0, 4, 9};
  net.add_neuron(in);
  const Network parsed = network_from_text(to_text(net));
  CHECK(parsed.neurons[0].schedule == std::vector<Timestep>{0, 4, 9});
}

} // TEST_SUITE
