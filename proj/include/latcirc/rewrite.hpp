#pragma once

#include <string>
#include <vector>

#include "latcirc/circuit.hpp"

namespace latcirc {

/// Path of child indices from the root; 0 is the first operand (and the
/// body of a trace), 1 the second.
using Locus = std::vector<std::size_t>;

std::string format_locus(const Locus& l);
const Circuit& subterm_at(const Circuit& c, const Locus& l);
Circuit replace_at(const Circuit& c, const Locus& l, Circuit replacement);

struct ReductionStep {
  std::string rule;
  Circuit before;  // subterm at the locus
  Circuit after;
  Locus locus;
  Circuit term;    // whole term after the step
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  void append(const ReductionTrace& other) {
    steps.insert(steps.end(), other.steps.begin(), other.steps.end());
  }
};

/// Line-oriented rendering: `step k: <rule> @ <locus>` then the term.
std::string print_trace(const ReductionTrace& t);

/// trace_{x+d}( seq(par(id x, delay^d, values, id m), core) )
struct TraceDelayForm {
  Circuit core;  // passive combinational, (x+d+k+m) → (x+d+n)
  std::size_t x = 0, d = 0, k = 0, m = 0, n = 0;
  Tuple init_values;  // k entries
};

Circuit to_circuit(const TraceDelayForm& form, const Interpretation& interp);

struct FormResult {
  TraceDelayForm form;
  ReductionTrace trace;
};

/// Structural compilation into global trace-delay form; each hoist is
/// recorded under the STMC law that justifies it.
FormResult to_trace_delay_form(const Circuit& c, const Interpretation& interp);

enum class Axiom { Fork, Join, Stub, Gate, Timelessness, Disconnect, Unobservable, Streaming };

std::string axiom_name(Axiom a);
const std::vector<Axiom>& all_axioms();

/// Rewrites the left-hand side of `rule` found exactly at `locus`.
/// Throws PatternMismatch when it is not there.
Circuit apply_axiom(const Circuit& c, Axiom rule, const Locus& locus, const Interpretation& interp);

/// Every locus where the rule's left-hand side matches, in pre-order.
std::vector<Locus> find_redexes(const Circuit& c, Axiom rule);

/// seq(par(reg(h1), ..., reg(hm)), f) for passive combinational f becomes
/// seq(par(seq(par(h1..hm), f), seq(f, delay^n)), join_n).
Circuit generalised_streaming(const Circuit& f, const std::vector<Circuit>& heads);
/// Same, taking the left-hand side as a single term.
Circuit generalised_streaming(const Circuit& lhs);

/// n parallel joins taking (a1..an, b1..bn) to (a1⊔b1, ..., an⊔bn).
Circuit join_n(std::size_t n);

/// trace(x, f) = seq(Δm, par(trace(x, seq(f, par(Δx, discard n))), id m), f, par(discard x, id n))
Circuit unfold(const Circuit& c);

/// Replaces trace(x, f), f combinational, by its iterate F^c followed by a
/// discard of the feedback outputs; c = x × chain_steps(V) + extra.
Circuit instant_feedback(const Circuit& c, const Interpretation& interp,
                         std::size_t extra_iterations = 0);

/// Evaluates a combinational term on one tick (values emit their element).
Tuple eval_combinational(const Circuit& c, const Interpretation& interp,
                         std::span<const Elem> in);

struct ProductivityResult {
  Tuple values;            // tick-0 outputs
  Circuit residual;        // closed circuit producing ticks 1, 2, ...
  TraceDelayForm residual_form;
  ReductionTrace trace;
};

ProductivityResult productivity_step(const Circuit& closed, const Interpretation& interp);
ProductivityResult productivity_step(const TraceDelayForm& closed, const Interpretation& interp);

struct StreamReduction {
  Waveform output;
  ReductionTrace trace;
};

StreamReduction reduce_stream(const Circuit& closed, const Interpretation& interp,
                              std::size_t ticks);

}  // namespace latcirc
