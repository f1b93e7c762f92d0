#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "latcirc/error.hpp"
#include "latcirc/mealy.hpp"
#include "latcirc/realize.hpp"

namespace latcirc {

/// Stream function given by an opaque machine, started in `state`.
struct BlackBox {
  MealyMachine machine;
  std::size_t state = 0;
};

/// Output at tick i is table_i applied to the inputs of the last `window`
/// ticks (oldest first, ⊥ before tick 0). table_i is prefix[i] for i < p,
/// then period[(i - p) mod r]. Each table maps V^{m·window} → V^n.
struct PrefixPeriodic {
  std::size_t window = 1;
  std::vector<SampledFunction> prefix, period;
  // Residual position: the next tick's table index and the inputs of the
  // last window-1 ticks.
  std::size_t pos = 0;
  Tuple history;
};

struct StreamSpec {
  LatticePtr lattice;
  std::size_t m = 0, n = 0;
  std::variant<BlackBox, PrefixPeriodic> body;
};

StreamSpec spec_of(const MealyMachine& a);
StreamSpec prefix_periodic(LatticePtr lattice, std::size_t m, std::size_t n, std::size_t window,
                           std::vector<SampledFunction> prefix, std::vector<SampledFunction> period);

Tuple initial_output(const StreamSpec& f, std::span<const Elem> a);
StreamSpec functional_derivative(const StreamSpec& f, std::span<const Elem> a);
/// Outputs of the spec on a finite input (padded with ⊥).
Waveform spec_stream(const StreamSpec& f, const Waveform& input, std::size_t ticks);

/// Derivative closure, minimized; states s0, s1, … in breadth-first order.
/// Throws DerivativeBudgetExceeded past `budget` distinct residuals.
MealyMachine minimal_mealy(const StreamSpec& f, std::size_t budget = 4096);

struct StateOrder {
  MealyMachine machine;
  std::vector<std::vector<bool>> leq;  // leq[s][t]: s ⪯ t
};

/// Greatest order-simulation. Throws NotAPartialOrder if two distinct states
/// are related both ways.
StateOrder state_order(const MealyMachine& a);

struct StateAssignment {
  MealyMachine machine;
  std::size_t r = 0;
  std::vector<Tuple> code;  // code[s][j] = ⊤ iff s_j ⪯ s
};

StateAssignment state_assignment(const StateOrder& order);

struct CircuitFunctionVerdict {
  bool ok = true;
  std::optional<ErrorCode> code;
  std::string reason;
};

CircuitFunctionVerdict check_circuit_function(const StreamSpec& f, const Interpretation& interp,
                                              std::size_t budget = 4096);

/// (γ(S), γ(s0), T′, O′) with T′, O′ the least extensions of the encoded tables.
IMealyMachine synthesize(const StreamSpec& f, std::size_t budget = 4096);
Circuit spec_to_circuit(const StreamSpec& f, const Interpretation& interp, std::size_t budget = 4096);

/// `spec m= n= [window=]` followed by `blackbox:` and a mealy machine, or by
/// `prefix:` / `period:` sections of `tick:` tables with lines `(window) -> (out)`.
StreamSpec parse_spec(std::string_view text, const Interpretation& interp, std::size_t max_window = 4);

}  // namespace latcirc
