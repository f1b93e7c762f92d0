#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latcirc/circuit.hpp"

namespace latcirc {

struct NetNode {
  Kind kind;
  std::size_t gate = 0;  // index into Netlist::tables for gates
  std::vector<std::size_t> ins;
  std::vector<std::size_t> outs;
  std::size_t slot = SIZE_MAX;  // state slot for Delay, Value and Top
};

/// Executable form of a circuit. Slots are numbered in node order, which is
/// the left-to-right order of the generators in the term.
class Netlist {
 public:
  std::size_t inputs() const { return graph_inputs_.size(); }
  std::size_t outputs() const { return graph_outputs_.size(); }
  std::size_t slots() const { return initial_.size(); }
  std::size_t wires() const { return wires_; }
  const Tuple& initial_state() const { return initial_; }
  const std::vector<NetNode>& nodes() const { return nodes_; }
  const Lattice& lattice() const { return *lattice_; }

  /// One clock tick: resolves the wires to the least fixed point, then
  /// writes the next state and the outputs.
  void step(std::span<const Elem> state, std::span<const Elem> input, std::span<Elem> next,
            std::span<Elem> output) const;
  std::pair<Tuple, Tuple> step(std::span<const Elem> state, std::span<const Elem> input) const;

  /// Wire values of the last resolution; for tests of fixpoint minimality.
  Tuple resolve(std::span<const Elem> state, std::span<const Elem> input) const;

 private:
  friend Netlist compile(const Circuit&, const Interpretation&);

  LatticePtr lattice_;
  std::vector<FunctionTable> tables_;
  std::vector<NetNode> nodes_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> graph_inputs_, graph_outputs_;
  std::size_t wires_ = 0;
  Tuple initial_;
};

Netlist compile(const Circuit& c, const Interpretation& interp);

/// Runs `ticks` ticks; inputs past the end of the waveform are bottom.
Waveform simulate(const Netlist& net, const Waveform& input, std::size_t ticks);
Waveform simulate(const Circuit& c, const Interpretation& interp, const Waveform& input,
                  std::size_t ticks);

struct BoundedVerdict {
  bool equivalent = true;
  std::size_t length = 0;  // waveform length checked
  std::optional<Waveform> counterexample;
  std::size_t tick = 0;    // first disagreeing tick
  Tuple left, right;       // outputs at that tick
};

inline constexpr std::uint64_t kDefaultEquivBudget = std::uint64_t{1} << 20;

/// Compares outputs on every input waveform of length |V|^n + 1, n the larger
/// delay count. Waveforms are tried by increasing length, then in
/// lexicographic order, so the counterexample is the first such waveform.
BoundedVerdict extensional_equiv_bounded(const Circuit& c1, const Circuit& c2,
                                         const Interpretation& interp,
                                         std::uint64_t budget = kDefaultEquivBudget);

}  // namespace latcirc
