// Command-line front door: build, describe and simulate circuits, run
// differential verification sweeps, execute epistasis detection and
// emit benchmark tables.
//
// Exit codes: 0 success, 1 verification or integrity failure, 2 usage
// or configuration error.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "stc/builders.hpp"
#include "stc/epistasis.hpp"
#include "stc/legalize.hpp"
#include "stc/oracle.hpp"
#include "stc/serialize.hpp"
#include "stc/sim.hpp"
#include "stc/verify.hpp"

namespace {

using namespace stc;

struct CircuitArgs {
  std::string kind;
  int64_t n = 8;
  int64_t l = 8;
  int64_t m = 64;
  int64_t r = 3;
  int64_t arity = 2;
  std::string mode = "even";
  std::string pattern = "010";
};

Circuit build_from_args(const CircuitArgs& a, const HardwareProfile& profile) {
  if (a.kind == "parity")
    return build_parity(a.n, a.mode == "odd" ? ParityMode::OddDetector
                                             : ParityMode::EvenDetector);
  if (a.kind == "popc") return build_popc_tc(a.l);
  if (a.kind == "sum") return build_sum_tc(a.n, a.l);
  if (a.kind == "stack") return build_stack(a.pattern, profile);
  if (a.kind == "repeater") return build_repeater(a.r, profile);
  if (a.kind == "popc-restricted")
    return build_popc_restricted(a.m, profile, a.arity);
  throw CLI::ValidationError("--circuit", "unknown circuit kind: " + a.kind);
}

void add_circuit_options(CLI::App* cmd, CircuitArgs& a) {
  cmd->add_option("--circuit", a.kind,
                  "parity|popc|sum|stack|repeater|popc-restricted")
      ->required();
  cmd->add_option("--n", a.n, "input count (parity) / addend count (sum)");
  cmd->add_option("--l", a.l, "input count (popc) / addend width (sum)");
  cmd->add_option("--m", a.m, "input count (popc-restricted)");
  cmd->add_option("--r", a.r, "repetition factor (repeater)");
  cmd->add_option("--arity", a.arity, "sum-tree arity (popc-restricted)");
  cmd->add_option("--mode", a.mode, "parity detector: even|odd");
  cmd->add_option("--pattern", a.pattern, "stack bit pattern");
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(path);
  if (!f) throw CLI::ValidationError("--out", "cannot open " + path);
  f << content;
}

std::string describe_text(const Circuit& c) {
  const auto counts = c.counts();
  std::ostringstream os;
  os << "neurons=" << counts.internal_neurons << " synapses=" << counts.synapses
     << " latency=" << c.latency << " ii=" << c.initiation_interval
     << " scale=" << c.scale << " max_in=" << counts.max_in_degree
     << " max_out=" << counts.max_out_degree
     << " max_delay=" << counts.max_delay;
  if (!c.detail.empty()) os << " [" << c.detail << "]";
  os << '\n';
  return os.str();
}

int run_verify(const std::string& kind, const HardwareProfile& profile,
               uint64_t seed, bool inject_fault) {
  verify::FaultInjection fault;
  fault.enabled = inject_fault;
  fault.synapse_seed = seed;

  bool all_ok = true;
  auto report = [&](const std::string& name, const verify::SweepResult& r) {
    std::cout << name << ": " << r.describe() << '\n';
    all_ok = all_ok && r.ok();
  };

  if (kind == "parity" || kind == "all")
    report("parity", verify::sweep_parity(12, {64, 256}, 250, seed, fault));
  if (kind == "popc" || kind == "all")
    report("popc", verify::sweep_popc(10, {32, 64}, 250, seed, fault));
  if (kind == "sum" || kind == "all")
    report("sum", verify::sweep_sum(4, 4, 500, seed, fault));
  if (kind == "stack" || kind == "all")
    report("stack", verify::sweep_stack(profile, 200, seed));
  if (kind == "repeater" || kind == "all")
    report("repeater", verify::sweep_repeater(profile, {2, 3, 4}));
  if (kind == "popc-restricted" || kind == "all")
    report("popc-restricted",
           verify::sweep_popc_restricted(profile, {16, 64, 256, 1024}, 50, seed));
  if (kind == "epistasis" || kind == "all")
    report("epistasis", verify::sweep_epistasis(48, 10, 2, profile, 5, seed));
  return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiketc: spiking threshold-circuit simulator and compiler"};
  app.require_subcommand(1);
  app.fallthrough(); // allow --profile after the subcommand

  std::string profile_path;
  app.add_option("--profile", profile_path,
                 "hardware profile file (key=value lines)")
      ->envname("SPIKETC_PROFILE");

  CircuitArgs describe_args;
  auto* describe = app.add_subcommand("describe", "print circuit counts");
  add_circuit_options(describe, describe_args);
  std::string describe_save;
  describe->add_option("--save", describe_save, "write the circuit text");

  CircuitArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "run one evaluation");
  add_circuit_options(simulate, sim_args);
  std::string sim_input;
  simulate->add_option("--input", sim_input, "input bit-string")->required();

  auto* verify_cmd = app.add_subcommand("verify", "differential sweeps");
  std::string verify_kind = "all";
  uint64_t seed = 42;
  bool inject_fault = false;
  verify_cmd->add_option("--circuit", verify_kind,
                         "circuit kind or 'all' (default)");
  verify_cmd->add_option("--seed", seed, "sweep seed (default 42)");
  verify_cmd->add_flag("--inject-fault", inject_fault,
                       "corrupt one synapse weight (must fail)");

  auto* epi = app.add_subcommand("epistasis", "exhaustive detection run");
  std::string dataset_path, out_path, metrics_path;
  int order = 2;
  bool with_chi2 = false;
  epi->add_option("--dataset", dataset_path, "genotype CSV")->required();
  epi->add_option("--order", order, "interaction order k (2 or 3)");
  epi->add_option("--out", out_path, "tables CSV path (default stdout)");
  epi->add_option("--metrics", metrics_path, "metrics JSON path");
  epi->add_flag("--chi2", with_chi2, "append a chi-square column");

  auto* bench = app.add_subcommand("bench", "size sweeps with ratio columns");
  std::string bench_kind = "popc-restricted";
  std::string bench_sizes = "64,128,256,512,1024";
  std::string bench_format = "text";
  bench->add_option("--circuit", bench_kind, "parity|popc|popc-restricted");
  bench->add_option("--sizes", bench_sizes, "comma-separated sizes");
  bench->add_option("--format", bench_format, "csv|text");
  std::string bench_out;
  bench->add_option("--out", bench_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    HardwareProfile profile;
    if (!profile_path.empty()) profile = load_profile(profile_path);
    profile.check();

    if (describe->parsed()) {
      const Circuit c = build_from_args(describe_args, profile);
      std::cout << describe_text(c);
      if (!describe_save.empty()) write_out(describe_save, to_text(c));
      return 0;
    }

    if (simulate->parsed()) {
      const Circuit c = build_from_args(sim_args, profile);
      if (!c.feedforward) {
        std::cerr << "simulate drives feedforward circuits only; "
                     "stack/repeater are exercised via verify\n";
        return 2;
      }
      std::vector<int> bits;
      for (char ch : sim_input) bits.push_back(ch == '1' ? 1 : 0);
      const auto out = verify::evaluate(c, bits);
      std::cout << "input " << sim_input << " -> outputs at t=" << c.latency
                << ": ";
      for (int b : out) std::cout << (b ? '1' : '0');
      std::cout << " (value " << verify::decode_binary(out) << ")\n";
      return 0;
    }

    if (verify_cmd->parsed())
      return run_verify(verify_kind, profile, seed, inject_fault);

    if (epi->parsed()) {
      if (order != 2 && order != 3) {
        std::cerr << "--order must be 2 or 3\n";
        return 2;
      }
      const auto ds = epistasis::load_dataset_file(dataset_path);
      const auto result = epistasis::run_detection(ds, order, profile);
      write_out(out_path, epistasis::tables_to_csv(result.tables, with_chi2));
      if (!metrics_path.empty())
        write_out(metrics_path,
                  epistasis::metrics_to_json(result.metrics, profile));
      return 0;
    }

    if (bench->parsed()) {
      std::vector<int64_t> sizes;
      std::stringstream ss(bench_sizes);
      std::string tok;
      while (std::getline(ss, tok, ',')) sizes.push_back(std::stoll(tok));

      const bool csv = bench_format == "csv";
      std::ostringstream os;
      os << (csv ? "size,neurons,synapses,latency,spikes,syn_ratio\n"
                 : "size neurons synapses latency spikes syn_ratio\n");
      for (int64_t size : sizes) {
        Circuit c;
        if (bench_kind == "parity")
          c = build_parity(size, ParityMode::OddDetector);
        else if (bench_kind == "popc")
          c = build_popc_tc(size);
        else if (bench_kind == "popc-restricted")
          c = build_popc_restricted(size, profile);
        else
          throw CLI::ValidationError("--circuit", "unknown bench kind");

        // one all-ones evaluation for the spike column
        InjectionSchedule inj;
        for (NeuronId id : c.inputs()) inj[0].push_back(id);
        const auto r = run(c.net, c.latency + 1, inj, {});
        const auto counts = c.counts();
        const double lg = std::max(1.0, std::log2(static_cast<double>(size)));
        const double ratio =
            static_cast<double>(counts.synapses) / (size * lg * lg * lg);
        const char sep = csv ? ',' : ' ';
        os << size << sep << counts.internal_neurons << sep << counts.synapses
           << sep << c.latency << sep << r.metrics.total_spikes << sep
           << ratio << '\n';
      }
      write_out(bench_out, os.str());
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const epistasis::IntegrityError& e) {
    std::cerr << "integrity failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
