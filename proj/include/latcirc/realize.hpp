#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latcirc/circuit.hpp"

namespace latcirc {

/// Monotone function given by sample points; evaluates to the join of the
/// outputs of all samples below the argument (⊥ when there are none).
struct SampledFunction {
  std::size_t in_width = 0;
  std::size_t out_width = 0;
  std::vector<std::pair<Tuple, Tuple>> samples;

  Tuple eval(const Lattice& l, std::span<const Elem> x) const;
  void eval_into(const Lattice& l, std::span<const Elem> x, std::span<Elem> out) const;
  FunctionTable tabulate(const Lattice& l) const;
};

/// Least monotone extension of a finite sample map. Throws
/// SamplesNotMonotone naming two offending points.
SampledFunction monotone_extension(const Lattice& l, std::size_t in_width, std::size_t out_width,
                                   std::vector<std::pair<Tuple, Tuple>> samples);

/// The points of a total monotone table that are not already the join of
/// the values below them; their least extension is the table again.
SampledFunction irreducible_samples(const Lattice& l, const FunctionTable& table);

/// Building blocks of the threshold normal form, found by search.
struct Gadgets {
  std::vector<Circuit> detector;  // per element v≠⊥: 1→1, ⊤ when x ⊒ v, else ⊥
  std::vector<Circuit> guard;     // per element v≠⊥: 1→1, ⊤ ↦ v and ⊥ ↦ ⊥
  Circuit conj;                   // 2→1 on {⊥,⊤}: ⊤ iff both are ⊤
  std::vector<std::string> primitives;  // what the search needed
};

/// Searches gate compositions over the interpretation (plus the structural
/// join and ⊥); memoized per interpretation. Throws NotFunctionallyComplete.
const Gadgets& find_gadgets(const Interpretation& interp);

/// Combinational term computing ⊔_p guard_{F(p)}(δ_p(x)) over the samples.
/// A sample at ⊥ becomes a value generator, which only holds in the instant;
/// without allow_values the term is passive and F(⊥) ≠ ⊥ is NotRealizable.
Circuit realize_sampled(const Interpretation& interp, const SampledFunction& f, bool allow_values = false);
/// Table evaluated in one instant; may use value generators for F(⊥).
Circuit realize_monotone(const Interpretation& interp, const FunctionTable& table);

}  // namespace latcirc
