#include "latcirc/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "latcirc/error.hpp"
#include "text_util.hpp"

namespace latcirc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAPoset: return "NotAPoset";
    case ErrorCode::NoLub: return "NoLub";
    case ErrorCode::NoGlb: return "NoGlb";
    case ErrorCode::NoBottom: return "NoBottom";
    case ErrorCode::NoTop: return "NoTop";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ValueMapNotBijective: return "ValueMapNotBijective";
    case ErrorCode::GateNotMonotone: return "GateNotMonotone";
    case ErrorCode::GateNotBottomPreserving: return "GateNotBottomPreserving";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnknownValue: return "UnknownValue";
    case ErrorCode::UnknownGate: return "UnknownGate";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::NotCombinational: return "NotCombinational";
    case ErrorCode::NotATrace: return "NotATrace";
    case ErrorCode::NotCombinationalCore: return "NotCombinationalCore";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::DerivativeBudgetExceeded: return "DerivativeBudgetExceeded";
    case ErrorCode::SamplesNotMonotone: return "SamplesNotMonotone";
    case ErrorCode::NotFunctionallyComplete: return "NotFunctionallyComplete";
    case ErrorCode::NotAPartialOrder: return "NotAPartialOrder";
    case ErrorCode::VerdictMismatch: return "VerdictMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::optional<Elem> Lattice::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Elem>(i);
  return std::nullopt;
}

std::vector<std::pair<Elem, Elem>> Lattice::covering_pairs() const {
  std::vector<std::pair<Elem, Elem>> out;
  for (std::size_t a = 0; a < size(); ++a)
    for (Elem b : upper_covers_[a]) out.emplace_back(static_cast<Elem>(a), b);
  return out;
}

Lattice validate_lattice(std::vector<std::string> elements, const std::vector<bool>& leq) {
  const std::size_t n = elements.size();
  if (n == 0) throw Error(ErrorCode::NotAPoset, "lattice has no elements");
  if (n > Lattice::kMaxElements)
    throw Error(ErrorCode::NotAPoset, "lattice has more than 256 elements");
  if (leq.size() != n * n) throw Error(ErrorCode::NotAPoset, "order table is not total");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (elements[i] == elements[j])
        throw Error(ErrorCode::NotAPoset, "duplicate element '" + elements[i] + "'");

  auto le = [&](std::size_t a, std::size_t b) { return static_cast<bool>(leq[a * n + b]); };
  for (std::size_t a = 0; a < n; ++a)
    if (!le(a, a)) throw Error(ErrorCode::NotAPoset, "not reflexive at " + elements[a]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && le(a, b) && le(b, a))
        throw Error(ErrorCode::NotAPoset,
                    "not antisymmetric: " + elements[a] + ", " + elements[b]);
      if (!le(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (le(b, c) && !le(a, c))
          throw Error(ErrorCode::NotAPoset, "not transitive: " + elements[a] + " <= " +
                                                elements[b] + " <= " + elements[c]);
    }

  Lattice l;
  l.names_ = std::move(elements);
  l.leq_ = leq;

  auto find_extreme = [&](bool least) -> std::optional<Elem> {
    for (std::size_t a = 0; a < n; ++a) {
      bool ok = true;
      for (std::size_t b = 0; b < n && ok; ++b) ok = least ? le(a, b) : le(b, a);
      if (ok) return static_cast<Elem>(a);
    }
    return std::nullopt;
  };
  auto bot = find_extreme(true);
  if (!bot) throw Error(ErrorCode::NoBottom, "no least element");
  auto top = find_extreme(false);
  if (!top) throw Error(ErrorCode::NoTop, "no greatest element");
  l.bottom_ = *bot;
  l.top_ = *top;

  l.join_.assign(n * n, 0);
  l.meet_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::optional<Elem> lub, glb;
      for (std::size_t u = 0; u < n && !lub; ++u) {
        if (!le(a, u) || !le(b, u)) continue;
        bool least = true;
        for (std::size_t w = 0; w < n && least; ++w)
          if (le(a, w) && le(b, w)) least = le(u, w);
        if (least) lub = static_cast<Elem>(u);
      }
      for (std::size_t u = 0; u < n && !glb; ++u) {
        if (!le(u, a) || !le(u, b)) continue;
        bool greatest = true;
        for (std::size_t w = 0; w < n && greatest; ++w)
          if (le(w, a) && le(w, b)) greatest = le(w, u);
        if (greatest) glb = static_cast<Elem>(u);
      }
      if (!lub)
        throw Error(ErrorCode::NoLub, "no least upper bound of " + l.names_[a] + ", " + l.names_[b]);
      if (!glb)
        throw Error(ErrorCode::NoGlb,
                    "no greatest lower bound of " + l.names_[a] + ", " + l.names_[b]);
      l.join_[a * n + b] = *lub;
      l.meet_[a * n + b] = *glb;
    }

  l.upper_covers_.assign(n, {});
  l.lower_covers_.assign(n, {});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !le(a, b)) continue;
      bool cover = true;
      for (std::size_t c = 0; c < n && cover; ++c)
        if (c != a && c != b && le(a, c) && le(c, b)) cover = false;
      if (cover) {
        l.upper_covers_[a].push_back(static_cast<Elem>(b));
        l.lower_covers_[b].push_back(static_cast<Elem>(a));
      }
    }

  // Longest path in the covering DAG; elements sorted by down-set size are a
  // topological order.
  std::vector<std::size_t> order(n), below(n, 0), height(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    order[a] = a;
    for (std::size_t b = 0; b < n; ++b) below[a] += le(b, a);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return below[x] < below[y]; });
  for (std::size_t a : order)
    for (Elem c : l.lower_covers_[a]) height[a] = std::max(height[a], height[c] + 1);
  l.chain_steps_ = *std::max_element(height.begin(), height.end());
  return l;
}

Lattice lattice_from_covers(std::vector<std::string> elements,
                            const std::vector<std::pair<std::string, std::string>>& less_pairs) {
  const std::size_t n = elements.size();
  auto index_of = [&](const std::string& s) -> std::size_t {
    for (std::size_t i = 0; i < n; ++i)
      if (elements[i] == s) return i;
    throw Error(ErrorCode::NotAPoset, "unknown element '" + s + "'");
  };
  std::vector<bool> leq(n * n, false);
  for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = true;
  for (const auto& [a, b] : less_pairs) leq[index_of(a) * n + index_of(b)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k * n + j]) leq[i * n + j] = true;
  return validate_lattice(std::move(elements), leq);
}

Lattice parse_lattice(std::string_view text) {
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t line_no = 0;
  for (const std::string& raw : detail::split_lines(text)) {
    ++line_no;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.rfind("elements:", 0) == 0) {
      for (auto& e : detail::split(line.substr(9), ',')) {
        std::string name = detail::trim(e);
        if (!name.empty()) elements.push_back(name);
      }
      continue;
    }
    auto lt = line.find('<');
    if (lt == std::string::npos)
      throw Error(ErrorCode::SyntaxError,
                  "lattice file line " + std::to_string(line_no) + ": expected 'a < b'");
    pairs.emplace_back(detail::trim(line.substr(0, lt)), detail::trim(line.substr(lt + 1)));
  }
  return lattice_from_covers(std::move(elements), pairs);
}

Lattice belnap_lattice() {
  return lattice_from_covers({"B", "t", "f", "T"},
                             {{"B", "t"}, {"B", "f"}, {"t", "T"}, {"f", "T"}});
}

std::optional<std::uint64_t> TupleSpace::cardinality() const {
  std::uint64_t card = 1;
  const std::uint64_t base = base_->size();
  for (std::size_t i = 0; i < width_; ++i) {
    if (card > UINT64_MAX / base) return std::nullopt;
    card *= base;
  }
  return card;
}

bool TupleSpace::leq(std::span<const Elem> a, std::span<const Elem> b) const {
  for (std::size_t i = 0; i < width_; ++i)
    if (!base_->leq(a[i], b[i])) return false;
  return true;
}

Tuple TupleSpace::join(std::span<const Elem> a, std::span<const Elem> b) const {
  Tuple out(width_);
  for (std::size_t i = 0; i < width_; ++i) out[i] = base_->join(a[i], b[i]);
  return out;
}

Tuple TupleSpace::meet(std::span<const Elem> a, std::span<const Elem> b) const {
  Tuple out(width_);
  for (std::size_t i = 0; i < width_; ++i) out[i] = base_->meet(a[i], b[i]);
  return out;
}

std::uint64_t TupleSpace::index(std::span<const Elem> t) const {
  std::uint64_t idx = 0;
  const std::uint64_t base = base_->size();
  for (std::size_t i = 0; i < width_; ++i) idx = idx * base + t[i];
  return idx;
}

Tuple TupleSpace::tuple(std::uint64_t index) const {
  Tuple out(width_);
  tuple_into(index, out);
  return out;
}

void TupleSpace::tuple_into(std::uint64_t index, std::span<Elem> out) const {
  const std::uint64_t base = base_->size();
  for (std::size_t i = width_; i-- > 0;) {
    out[i] = static_cast<Elem>(index % base);
    index /= base;
  }
}

FunctionTable tabulate(const Lattice& lattice, std::size_t in_width, std::size_t out_width,
                       const VectorFunction& f) {
  TupleSpace dom(lattice, in_width);
  auto card = dom.cardinality();
  if (!card || *card > (std::uint64_t{1} << 26))
    throw Error(ErrorCode::BudgetExceeded, "table over V^" + std::to_string(in_width) +
                                               " is too large to materialize");
  FunctionTable t{in_width, out_width, std::vector<Elem>(*card * out_width)};
  Tuple x(in_width);
  for (std::uint64_t i = 0; i < *card; ++i) {
    dom.tuple_into(i, x);
    f(x, t.row(i));
  }
  return t;
}

MonotoneVerdict check_monotone(const Lattice& lattice, const FunctionTable& table) {
  TupleSpace dom(lattice, table.in_width);
  TupleSpace cod(lattice, table.out_width);
  const std::uint64_t rows = *dom.cardinality();
  Tuple x(table.in_width);
  for (std::uint64_t i = 0; i < rows; ++i) {
    dom.tuple_into(i, x);
    for (std::size_t c = 0; c < table.in_width; ++c) {
      for (Elem up : lattice.upper_covers(x[c])) {
        Tuple y = x;
        y[c] = up;
        if (!cod.leq(table.row(i), table.row(dom.index(y)))) {
          return {false, std::make_pair(x, y)};
        }
      }
    }
  }
  return {};
}

KleeneResult kleene_fixpoint(const TupleSpace& space,
                             const std::function<Tuple(std::span<const Elem>)>& f) {
  Tuple current = space.bottom();
  std::vector<Tuple> trace{current};
  const std::size_t cap = space.chain_steps() + 1;
  for (std::size_t it = 1; it <= cap; ++it) {
    Tuple next = f(current);
    if (next == current) return {std::move(current), it - 1};
    bool ascending = space.leq(current, next);
    trace.push_back(next);
    current = std::move(next);
    if (!ascending) break;
  }
  std::ostringstream msg;
  msg << "iteration did not stabilize (non-monotone function?); trace:";
  for (const auto& t : trace) msg << ' ' << format_tuple(space.base(), t);
  throw Error(ErrorCode::NonConvergence, msg.str());
}

std::string format_tuple(const Lattice& lattice, std::span<const Elem> t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += lattice.name(t[i]);
  }
  return out + ")";
}

}  // namespace latcirc
