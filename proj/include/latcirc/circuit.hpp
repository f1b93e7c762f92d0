#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "latcirc/lattice.hpp"
#include "latcirc/signature.hpp"

namespace latcirc {

enum class Kind { Value, Bot, Top, Gate, Fork, Join, Stub, Delay, Id, Swap, Seq, Par, Trace };

struct Node;
using Circuit = std::shared_ptr<const Node>;

/// Immutable term node. Build through the factory functions below, which
/// check arities; subterms are shared freely.
struct Node {
  Kind kind;
  std::string symbol;   // Value and Gate
  std::size_t width;    // Id width, Gate arity, Trace feedback width
  Circuit a, b;         // Seq/Par operands; Trace body in a
  std::size_t in, out;

  std::size_t delays = 0;
  std::size_t values = 0;  // Value and Top nodes
  std::size_t gates = 0;
  std::size_t traces = 0;
  std::size_t size = 1;
};

Circuit val(std::string symbol);
Circuit bot();
Circuit top();
Circuit gate(std::string symbol, std::size_t arity);
/// The fork generator 1→2.
Circuit dup();
Circuit join();
Circuit stub();
Circuit delay();
Circuit id(std::size_t n);
Circuit swap();

/// Throw ArityMismatch on incompatible operands.
Circuit seq(Circuit f, Circuit g);
Circuit par(Circuit f, Circuit g);
Circuit trace(std::size_t x, Circuit f);

/// Left-nested folds. seq_all needs at least one term; par_all of nothing is id0.
Circuit seq_all(const std::vector<Circuit>& cs);
Circuit par_all(const std::vector<Circuit>& cs);
Circuit par_n(const Circuit& c, std::size_t n);

bool structurally_equal(const Circuit& x, const Circuit& y);

/// Element as a 0→1 generator: bot, top or the value symbol.
Circuit value_node(const Interpretation& interp, Elem e);
/// The element a 0→1 value generator denotes.
Elem value_node_elem(const Interpretation& interp, const Node& n);
bool is_value_generator(const Node& n);

/// seq(par(v, delay), join): emits v first, then its delayed input.
Circuit register_of(Circuit head);
Circuit register_of(const Interpretation& interp, Elem v);

/// Recognizes register_of shapes; returns the head generator or null.
Circuit register_head(const Circuit& c);

struct Waveform {
  std::size_t width = 0;
  std::vector<Tuple> ticks;
  bool operator==(const Waveform&) const = default;
};

/// Closed circuit 0→width emitting the waveform, then bottom forever.
Circuit waveform_circuit(const Interpretation& interp, const Waveform& w);

Circuit diagonal(std::size_t n);
Circuit discard(std::size_t n);
/// a+b → b+a
Circuit block_swap(std::size_t a, std::size_t b);
/// Wiring n→n sending input i to output target[i], built from adjacent swaps.
Circuit permutation(const std::vector<std::size_t>& target);
/// True for terms built only from id, swap, seq and par.
bool is_wiring(const Circuit& c);
/// For a wiring term, out[j] = index of the input feeding output j.
std::vector<std::size_t> wiring_map(const Circuit& c);

enum class Level { Combinational, Temporal, Sequential };

struct Classification {
  Level level;
  bool closed;
  bool passive;
};

Classification classify(const Circuit& c);
std::string classification_name(const Classification& k);

Circuit parse_circuit(std::string_view text, const Signature& sig);
std::string print_circuit(const Circuit& c);

/// Flattened netlist view of a term. Wires joined by trace feedback are
/// merged; primitive nodes appear in left-to-right term order.
struct GraphNode {
  Kind kind;
  std::string symbol;
  std::vector<std::size_t> ins;
  std::vector<std::size_t> outs;
};

struct Graph {
  std::size_t wires = 0;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;
  std::vector<GraphNode> nodes;
};

Graph flatten(const Circuit& c);
std::string to_dot(const Circuit& c);

Waveform parse_waveform(std::string_view text, const Interpretation& interp, std::size_t width);
std::string print_waveform(const Waveform& w, const Interpretation& interp);

}  // namespace latcirc
