#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latcirc/circuit.hpp"
#include "latcirc/realize.hpp"

namespace latcirc {

/// Finite machine with opaque states over the full alphabets V^m → V^n.
/// Inputs are numbered by their TupleSpace index.
struct MealyMachine {
  LatticePtr lattice;
  std::size_t m = 0, n = 0;
  std::vector<std::string> states;
  std::size_t initial = 0;
  std::vector<std::size_t> next;  // [state * letters + input]
  std::vector<Elem> outputs;      // [(state * letters + input) * n + j]

  std::size_t letters() const;
  std::size_t size() const { return states.size(); }
  std::size_t T(std::size_t s, std::size_t a) const { return next[s * letters() + a]; }
  std::span<const Elem> O(std::size_t s, std::size_t a) const {
    return {outputs.data() + (s * letters() + a) * n, n};
  }
};

using StepFn = std::function<void(std::span<const Elem> state, std::span<const Elem> in,
                                  std::span<Elem> next, std::span<Elem> out)>;

/// Machine whose state space is V^s and whose T, O are monotone functions.
struct IMealyMachine {
  LatticePtr lattice;
  std::size_t m = 0, s = 0, n = 0;
  Tuple initial;
  StepFn step;
  // Present when T and O are known as least extensions of samples.
  std::optional<SampledFunction> T_samples, O_samples;

  std::pair<Tuple, Tuple> apply(std::span<const Elem> state, std::span<const Elem> in) const;
};

IMealyMachine imealy_from_samples(LatticePtr lattice, std::size_t m, std::size_t n, Tuple initial,
                                  SampledFunction T, SampledFunction O);

/// Tables over V^{s+m}; guarded against huge state spaces.
std::pair<FunctionTable, FunctionTable> tabulate(const IMealyMachine& a);

Waveform output_stream(const MealyMachine& a, const Waveform& input, std::size_t ticks);
Waveform output_stream(const IMealyMachine& a, const Waveform& input, std::size_t ticks);

/// Reachable part of an I-machine as an opaque machine; labels are the
/// state tuples. Throws BudgetExceeded past max_states.
MealyMachine explore(const IMealyMachine& a, std::size_t max_states = 1u << 16);

struct BisimVerdict {
  bool bisimilar = true;
  std::vector<std::pair<std::size_t, std::size_t>> relation;
  std::optional<std::vector<Tuple>> counterexample;  // input word
};

BisimVerdict bisimilar(const MealyMachine& a, const MealyMachine& b);

MealyMachine reachable(const MealyMachine& a);
/// Quotient by bisimilarity of the reachable part, states renumbered in
/// breadth-first order from the initial state.
MealyMachine minimize(const MealyMachine& a);

IMealyMachine cascade(const IMealyMachine& a, const IMealyMachine& b);
IMealyMachine direct(const IMealyMachine& a, const IMealyMachine& b);
IMealyMachine copy_machine(LatticePtr l, std::size_t n);
IMealyMachine discard_machine(LatticePtr l, std::size_t n);
IMealyMachine identity_machine(LatticePtr l, std::size_t n);
/// A : n+m → n becomes m → n, outputting fix(s)(x).
IMealyMachine conway(const IMealyMachine& a, std::size_t n);
/// A : x+m → x+n with the first x outputs fed back to the first x inputs.
IMealyMachine trace_machine(std::size_t x, const IMealyMachine& a);

IMealyMachine circuit_to_mealy(const Circuit& c, const Interpretation& interp);

/// trace_s( seq(par(registers of s0, id m), Δ, par(⟪T⟫, ⟪O⟫)) )
Circuit mealy_to_circuit(const IMealyMachine& a, const Interpretation& interp);

/// `mealy m= n=` and `imealy m= s= n=` text formats.
MealyMachine parse_mealy(std::string_view text, const Interpretation& interp);
std::string print_mealy(const MealyMachine& a, const Interpretation& interp);
IMealyMachine parse_imealy(std::string_view text, const Interpretation& interp);
/// Needs sampled tables; otherwise tabulates and keeps the irreducible points.
std::string print_imealy(const IMealyMachine& a, const Interpretation& interp);

}  // namespace latcirc
