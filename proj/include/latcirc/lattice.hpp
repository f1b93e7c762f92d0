#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace latcirc {

/// Dense index of a lattice element.
using Elem = std::uint16_t;
using Tuple = std::vector<Elem>;

/// A finite lattice with interned elements and precomputed operation tables.
///
/// Instances only come out of validation, so every object satisfies the
/// lattice laws. Element indices are dense in [0, size()).
class Lattice {
 public:
  static constexpr std::size_t kMaxElements = 256;

  std::size_t size() const { return names_.size(); }
  const std::string& name(Elem e) const { return names_.at(e); }
  std::optional<Elem> find(std::string_view name) const;

  bool leq(Elem a, Elem b) const { return leq_[a * size() + b]; }
  bool less(Elem a, Elem b) const { return a != b && leq(a, b); }
  Elem join(Elem a, Elem b) const { return join_[a * size() + b]; }
  Elem meet(Elem a, Elem b) const { return meet_[a * size() + b]; }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }

  /// Number of covering steps on the longest chain.
  std::size_t chain_steps() const { return chain_steps_; }

  const std::vector<Elem>& upper_covers(Elem a) const { return upper_covers_.at(a); }
  const std::vector<Elem>& lower_covers(Elem a) const { return lower_covers_.at(a); }

  /// Covering pairs (a, b) with a ⋖ b, sorted.
  std::vector<std::pair<Elem, Elem>> covering_pairs() const;

  bool operator==(const Lattice&) const = default;

 private:
  friend Lattice validate_lattice(std::vector<std::string>, const std::vector<bool>&);

  std::vector<std::string> names_;
  std::vector<bool> leq_;
  std::vector<Elem> join_;
  std::vector<Elem> meet_;
  std::vector<std::vector<Elem>> upper_covers_;
  std::vector<std::vector<Elem>> lower_covers_;
  Elem bottom_ = 0;
  Elem top_ = 0;
  std::size_t chain_steps_ = 0;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// Builds a lattice from a full order table (row-major, leq[a*n+b] means a ≤ b).
/// Throws Error with NotAPoset, NoBottom, NoTop, NoLub or NoGlb.
Lattice validate_lattice(std::vector<std::string> elements, const std::vector<bool>& leq);

/// Builds a lattice from generating pairs a < b; the order is their
/// reflexive-transitive closure.
Lattice lattice_from_covers(std::vector<std::string> elements,
                            const std::vector<std::pair<std::string, std::string>>& less_pairs);

/// Parses the lattice definition file format:
///   elements: a, b, c
///   a < b
/// with `#` comments.
Lattice parse_lattice(std::string_view text);

/// The four-point Belnap lattice. Elements are interned in the order
/// B (⊥), t, f, T (⊤).
Lattice belnap_lattice();

/// V^width with the pointwise order. Tuples are never materialized in bulk;
/// index() / tuple() give a mixed-radix encoding with the first coordinate
/// most significant, so index order is lexicographic in element order.
class TupleSpace {
 public:
  TupleSpace(const Lattice& base, std::size_t width) : base_(&base), width_(width) {}

  const Lattice& base() const { return *base_; }
  std::size_t width() const { return width_; }

  /// |V|^width, or nullopt when it does not fit in 64 bits.
  std::optional<std::uint64_t> cardinality() const;

  bool leq(std::span<const Elem> a, std::span<const Elem> b) const;
  Tuple join(std::span<const Elem> a, std::span<const Elem> b) const;
  Tuple meet(std::span<const Elem> a, std::span<const Elem> b) const;
  Tuple bottom() const { return Tuple(width_, base_->bottom()); }
  Tuple top() const { return Tuple(width_, base_->top()); }
  std::size_t chain_steps() const { return width_ * base_->chain_steps(); }

  std::uint64_t index(std::span<const Elem> t) const;
  Tuple tuple(std::uint64_t index) const;
  void tuple_into(std::uint64_t index, std::span<Elem> out) const;

 private:
  const Lattice* base_;
  std::size_t width_;
};

/// Explicit function table V^in_width → V^out_width, rows indexed by
/// TupleSpace::index of the input.
struct FunctionTable {
  std::size_t in_width = 0;
  std::size_t out_width = 0;
  std::vector<Elem> cells;

  std::span<const Elem> row(std::uint64_t index) const {
    return {cells.data() + index * out_width, out_width};
  }
  std::span<Elem> row(std::uint64_t index) {
    return {cells.data() + index * out_width, out_width};
  }
  std::uint64_t rows() const { return out_width == 0 ? 0 : cells.size() / out_width; }

  bool operator==(const FunctionTable&) const = default;
};

using VectorFunction = std::function<void(std::span<const Elem> in, std::span<Elem> out)>;

/// Tabulates f over all of V^in_width.
FunctionTable tabulate(const Lattice& lattice, std::size_t in_width, std::size_t out_width,
                       const VectorFunction& f);

struct MonotoneVerdict {
  bool monotone = true;
  /// On failure, a pair x ⊑ y with f(x) ⋢ f(y).
  std::optional<std::pair<Tuple, Tuple>> witness;
};

/// Checks x ⊑ y ⇒ f(x) ⊑ f(y). Only covering pairs of the product order are
/// scanned, which suffices on a finite poset; the first failing pair in index
/// order is reported.
MonotoneVerdict check_monotone(const Lattice& lattice, const FunctionTable& table);

struct KleeneResult {
  Tuple value;
  /// Number of strictly increasing iterates before stabilization.
  std::size_t iterations = 0;
};

/// Least fixed point of a monotone endofunction on V^width by iteration from
/// the bottom tuple. Exits on stabilization and gives up after
/// chain_steps + 1 applications with NonConvergence.
KleeneResult kleene_fixpoint(const TupleSpace& space,
                             const std::function<Tuple(std::span<const Elem>)>& f);

std::string format_tuple(const Lattice& lattice, std::span<const Elem> t);

}  // namespace latcirc
