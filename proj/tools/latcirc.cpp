#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "latcirc/error.hpp"
#include "latcirc/mealy.hpp"
#include "latcirc/random.hpp"
#include "latcirc/realize.hpp"
#include "latcirc/rewrite.hpp"
#include "latcirc/semantics.hpp"
#include "latcirc/synthesis.hpp"

using namespace latcirc;

namespace {

struct RunConfig {
  std::string lattice_path, interp_path;
  std::size_t ticks = 8;
  std::uint64_t equiv_budget = kDefaultEquivBudget;
  std::size_t derivative_budget = 4096;
  std::uint64_t seed = 1;
  std::string emit_trace;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

InterpretedSignature load_interp(const RunConfig& cfg) {
  if (cfg.interp_path.empty()) {
    if (!cfg.lattice_path.empty())
      throw Error(ErrorCode::Io, "--lattice needs --interp (the built-in gates are Belnap)");
    return builtin_belnap();
  }
  LatticePtr l = std::make_shared<const Lattice>(
      cfg.lattice_path.empty() ? belnap_lattice() : parse_lattice(read_file(cfg.lattice_path)));
  return parse_interpretation(read_file(cfg.interp_path), l);
}

Circuit load_circuit(const std::string& path, const InterpretedSignature& is) {
  return parse_circuit(read_file(path), is.sig);
}

std::string tuple_words(const Interpretation& I, std::span<const Elem> t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += I.symbol_of(t[i]);
  }
  return s;
}

std::string word_text(const Interpretation& I, const std::vector<Tuple>& w) {
  std::string s;
  for (const auto& t : w) s += " (" + tuple_words(I, t) + ")";
  return s;
}

int cmd_sim(const RunConfig& cfg, const std::string& circuit, const std::string& input, const std::string& output) {
  auto is = load_interp(cfg);
  Circuit c = load_circuit(circuit, is);
  Waveform in{c->in, {}};
  if (!input.empty()) in = parse_waveform(read_file(input), *is.interp, c->in);
  std::string text = print_waveform(simulate(c, *is.interp, in, cfg.ticks), *is.interp);
  if (output.empty())
    std::cout << text;
  else
    write_file(output, text);
  return 0;
}

int cmd_reduce(const RunConfig& cfg, const std::string& circuit, const std::string& input) {
  auto is = load_interp(cfg);
  const Interpretation& I = *is.interp;
  Circuit c = load_circuit(circuit, is);
  if (c->in) {
    if (input.empty())
      throw Error(ErrorCode::WidthMismatch, "circuit has " + std::to_string(c->in) +
                                                " inputs; close it with --input <waveform>");
    c = seq(waveform_circuit(I, parse_waveform(read_file(input), I, c->in)), c);
  }
  StreamReduction r = reduce_stream(c, I, cfg.ticks);
  std::string line;
  for (const auto& t : r.output.ticks) {
    if (!line.empty()) line += ' ';
    line += tuple_words(I, t);
  }
  std::cout << line << "\n";
  if (!cfg.emit_trace.empty()) write_file(cfg.emit_trace, print_trace(r.trace));
  return 0;
}

int cmd_to_mealy(const RunConfig& cfg, const std::string& circuit, const std::string& format) {
  auto is = load_interp(cfg);
  IMealyMachine a = circuit_to_mealy(load_circuit(circuit, is), *is.interp);
  if (format == "imealy") {
    if (a.s + a.m > 8)
      throw Error(ErrorCode::BudgetExceeded, "imealy output tabulates V^" + std::to_string(a.s + a.m) +
                                                 "; use --format mealy");
    std::cout << print_imealy(a, *is.interp);
  } else {
    std::cout << print_mealy(explore(a), *is.interp);
  }
  return 0;
}

int cmd_from_mealy(const RunConfig& cfg, const std::string& path) {
  auto is = load_interp(cfg);
  std::string text = read_file(path);
  std::istringstream probe(text);
  std::string first;
  while (std::getline(probe, first)) {
    auto h = first.find('#');
    if (h != std::string::npos) first.resize(h);
    if (first.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  IMealyMachine a;
  if (first.find("imealy") != std::string::npos) {
    a = parse_imealy(text, *is.interp);
  } else {
    // An opaque machine goes through synthesis to get a state encoding.
    a = synthesize(spec_of(parse_mealy(text, *is.interp)), cfg.derivative_budget);
  }
  std::cout << print_circuit(mealy_to_circuit(a, *is.interp)) << "\n";
  return 0;
}

int cmd_synth(const RunConfig& cfg, const std::string& path, const std::string& emit) {
  auto is = load_interp(cfg);
  StreamSpec f = parse_spec(read_file(path), *is.interp);
  IMealyMachine a = synthesize(f, cfg.derivative_budget);
  if (emit == "circuit")
    std::cout << print_circuit(mealy_to_circuit(a, *is.interp)) << "\n";
  else
    std::cout << print_imealy(a, *is.interp);
  return 0;
}

int cmd_equiv(const RunConfig& cfg, const std::string& p1, const std::string& p2, const std::string& method) {
  auto is = load_interp(cfg);
  const Interpretation& I = *is.interp;
  Circuit a = load_circuit(p1, is), b = load_circuit(p2, is);
  if (a->in != b->in || a->out != b->out)
    throw Error(ErrorCode::ArityMismatch, "interfaces differ: " + std::to_string(a->in) + "→" +
                                              std::to_string(a->out) + " vs " + std::to_string(b->in) +
                                              "→" + std::to_string(b->out));
  std::optional<BisimVerdict> bis;
  std::optional<BoundedVerdict> bnd;
  if (method == "bisim" || method == "both")
    bis = bisimilar(explore(circuit_to_mealy(a, I)), explore(circuit_to_mealy(b, I)));
  if (method == "bounded" || method == "both") {
    try {
      bnd = extensional_equiv_bounded(a, b, I, cfg.equiv_budget);
    } catch (const Error& e) {
      if (method == "bounded" || e.code() != ErrorCode::BudgetExceeded) throw;
    }
  }
  if (bis && bnd && bis->bisimilar != bnd->equivalent)
    throw Error(ErrorCode::VerdictMismatch, "bounded and bisimulation checks disagree");
  if (bis) {
    if (bis->bisimilar)
      std::cout << "EQUIV\n";
    else
      std::cout << "DIFFER @ word" << word_text(I, *bis->counterexample) << "\n";
  } else if (bnd->equivalent) {
    std::cout << "EQUIV\n";
  } else {
    std::vector<Tuple> w(bnd->counterexample->ticks.begin(),
                         bnd->counterexample->ticks.begin() + static_cast<std::ptrdiff_t>(bnd->tick + 1));
    std::cout << "DIFFER @ word" << word_text(I, w) << "\n";
  }
  return 0;
}

int cmd_check_interp(RunConfig cfg, const std::string& path) {
  cfg.interp_path = path;
  auto is = load_interp(cfg);
  const Interpretation& I = *is.interp;
  const Lattice& l = I.lattice();
  std::cout << "lattice: " << l.size() << " elements, chain steps " << l.chain_steps() << "\n";
  std::cout << "gates:";
  for (const auto& g : I.signature().gates) std::cout << " " << g.name << "/" << g.arity;
  std::cout << "\nmonotone and bottom-preserving: yes\n";
  try {
    const Gadgets& g = find_gadgets(I);
    std::cout << "functionally complete: yes (uses";
    for (const auto& p : g.primitives) std::cout << " " << p;
    std::cout << ")\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotFunctionallyComplete) throw;
    std::cout << "functionally complete: no (" << e.what() << ")\n";
  }
  return 0;
}

int cmd_dot(const RunConfig& cfg, const std::string& path) {
  auto is = load_interp(cfg);
  std::cout << to_dot(load_circuit(path, is));
  return 0;
}

// Property runs over seeded random circuits; prints a summary line.
int cmd_fuzz(const RunConfig& cfg, std::size_t count) {
  auto is = load_interp(cfg);
  const Interpretation& I = *is.interp;
  std::mt19937_64 rng(cfg.seed);
  std::size_t failures = 0;
  for (std::size_t k = 0; k < count; ++k) {
    RandomCircuitLimits lim;
    lim.inputs = 0;
    lim.outputs = 1 + k % 2;
    Circuit c = random_circuit(rng, I, lim);
    const Waveform none{0, {}};
    const Waveform sim = simulate(c, I, none, cfg.ticks);
    bool ok = reduce_stream(c, I, cfg.ticks).output == sim;
    ok = ok && output_stream(circuit_to_mealy(c, I), none, cfg.ticks) == sim;
    if (!ok) {
      ++failures;
      std::cout << "mismatch: " << print_circuit(c) << "\n";
    }
  }
  std::cout << "fuzz: " << count << " cases, " << failures << " mismatches\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice-valued sequential circuits"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--lattice", cfg.lattice_path, "Lattice definition file")->check(CLI::ExistingFile);
  app.add_option("--interp", cfg.interp_path, "Interpretation file")->check(CLI::ExistingFile);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--budget", cfg.equiv_budget, "Waveform budget for bounded equivalence");
  app.add_option("--derivative-budget", cfg.derivative_budget, "Maximum number of stream derivatives");

  std::string circuit, circuit2, input, output, path;
  std::string method = "both", emit = "mealy", format = "mealy";
  std::size_t count = 100;

  auto* sim = app.add_subcommand("sim", "Simulate a circuit on an input waveform");
  sim->add_option("circuit", circuit)->required();
  sim->add_option("--input", input, "Input waveform file");
  sim->add_option("--ticks", cfg.ticks);
  sim->add_option("-o,--output", output, "Write the output waveform here");

  auto* reduce = app.add_subcommand("reduce", "Compute a closed circuit's stream by rewriting");
  reduce->add_option("circuit", circuit)->required();
  reduce->add_option("--input", input, "Waveform closing the circuit's inputs");
  reduce->add_option("--ticks", cfg.ticks);
  reduce->add_option("--emit-trace", cfg.emit_trace, "Write the reduction trace here");

  auto* to_mealy = app.add_subcommand("to-mealy", "Translate a circuit into a Mealy machine");
  to_mealy->add_option("circuit", circuit)->required();
  to_mealy->add_option("--format", format)->check(CLI::IsMember({"mealy", "imealy"}));

  auto* from_mealy = app.add_subcommand("from-mealy", "Build a circuit from a Mealy machine");
  from_mealy->add_option("machine", path)->required();

  auto* synth = app.add_subcommand("synth", "Synthesize a machine or circuit from a stream spec");
  synth->add_option("spec", path)->required();
  synth->add_option("--emit", emit)->check(CLI::IsMember({"mealy", "circuit"}));

  auto* equiv = app.add_subcommand("equiv", "Decide extensional equivalence of two circuits");
  equiv->add_option("a", circuit)->required();
  equiv->add_option("b", circuit2)->required();
  equiv->add_option("--method", method)->check(CLI::IsMember({"bounded", "bisim", "both"}));

  auto* check = app.add_subcommand("check-interp", "Validate an interpretation file");
  check->add_option("interp", path)->required();

  auto* dot = app.add_subcommand("dot", "Print a circuit as a Graphviz graph");
  dot->add_option("circuit", circuit)->required();

  auto* fuzz = app.add_subcommand("fuzz", "");
  fuzz->group("");
  fuzz->add_option("--count", count);
  fuzz->add_option("--ticks", cfg.ticks);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) return cmd_sim(cfg, circuit, input, output);
    if (*reduce) return cmd_reduce(cfg, circuit, input);
    if (*to_mealy) return cmd_to_mealy(cfg, circuit, format);
    if (*from_mealy) return cmd_from_mealy(cfg, path);
    if (*synth) return cmd_synth(cfg, path, emit);
    if (*equiv) return cmd_equiv(cfg, circuit, circuit2, method);
    if (*check) return cmd_check_interp(cfg, path);
    if (*dot) return cmd_dot(cfg, circuit);
    if (*fuzz) return cmd_fuzz(cfg, count);
  } catch (const Error& e) {
    std::cout.flush();
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 2;
}
