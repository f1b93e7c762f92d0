#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "latcirc/lattice.hpp"

namespace latcirc {

struct GateDecl {
  std::string name;
  std::size_t arity = 0;
  bool operator==(const GateDecl&) const = default;
};

/// Σ: value symbols and gate symbols with arities.
struct Signature {
  std::vector<std::string> values;
  std::vector<GateDecl> gates;

  std::optional<std::size_t> find_value(std::string_view name) const;
  std::optional<std::size_t> find_gate(std::string_view name) const;
  bool operator==(const Signature&) const = default;
};

/// Unvalidated interpretation as read from a file or assembled in code.
struct RawInterpretation {
  LatticePtr lattice;
  std::vector<std::pair<std::string, Elem>> value_map;
  std::vector<std::pair<std::string, FunctionTable>> gate_tables;
};

class Interpretation;
using InterpretationPtr = std::shared_ptr<const Interpretation>;

/// A validated interpretation of a signature in a finite lattice.
class Interpretation {
 public:
  const Signature& signature() const { return sig_; }
  const Lattice& lattice() const { return *lattice_; }
  const LatticePtr& lattice_ptr() const { return lattice_; }

  /// Element denoted by a value symbol; throws UnknownValue.
  Elem value(std::string_view symbol) const;
  /// Table of a gate; throws UnknownGate.
  const FunctionTable& gate(std::string_view symbol) const;
  const FunctionTable& gate(std::size_t index) const { return tables_.at(index); }
  Elem apply(std::size_t gate_index, std::span<const Elem> in) const;

  /// Waveform alphabet: value symbols plus B and T for bottom and top.
  std::optional<Elem> element_of(std::string_view symbol) const;
  std::string symbol_of(Elem e) const;

 private:
  friend Interpretation validate_interpretation(const Signature&, const RawInterpretation&);

  Signature sig_;
  LatticePtr lattice_;
  std::vector<Elem> values_;
  std::vector<FunctionTable> tables_;
};

/// Errors: ValueMapNotBijective, GateNotMonotone, GateNotBottomPreserving,
/// ArityMismatch, UnknownGate, UnknownValue.
Interpretation validate_interpretation(const Signature& sig, const RawInterpretation& raw);

struct InterpretedSignature {
  Signature sig;
  InterpretationPtr interp;
};

/// Σ⋆ = ({t, f}, {AND/2, OR/2, NOT/1}) with the Belnap truth tables.
InterpretedSignature builtin_belnap();

/// Parses the interpretation file format against the given lattice:
///
///   values: t, f
///   gates: AND/2, NOT/1
///   map:
///     t -> t
///   table AND:
///     B,t -> B
InterpretedSignature parse_interpretation(std::string_view text, LatticePtr lattice);

}  // namespace latcirc
