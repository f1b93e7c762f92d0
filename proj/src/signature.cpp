#include "latcirc/signature.hpp"

#include <algorithm>
#include <set>

#include "latcirc/error.hpp"
#include "text_util.hpp"

namespace latcirc {

std::optional<std::size_t> Signature::find_value(std::string_view name) const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Signature::find_gate(std::string_view name) const {
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (gates[i].name == name) return i;
  return std::nullopt;
}

Elem Interpretation::value(std::string_view symbol) const {
  auto i = sig_.find_value(symbol);
  if (!i) throw Error(ErrorCode::UnknownValue, "unknown value symbol '" + std::string(symbol) + "'");
  return values_[*i];
}

const FunctionTable& Interpretation::gate(std::string_view symbol) const {
  auto i = sig_.find_gate(symbol);
  if (!i) throw Error(ErrorCode::UnknownGate, "unknown gate '" + std::string(symbol) + "'");
  return tables_[*i];
}

Elem Interpretation::apply(std::size_t gate_index, std::span<const Elem> in) const {
  TupleSpace dom(*lattice_, in.size());
  return tables_[gate_index].row(dom.index(in))[0];
}

std::optional<Elem> Interpretation::element_of(std::string_view symbol) const {
  if (symbol == "B") return lattice_->bottom();
  if (symbol == "T") return lattice_->top();
  if (auto i = sig_.find_value(symbol)) return values_[*i];
  return std::nullopt;
}

std::string Interpretation::symbol_of(Elem e) const {
  if (e == lattice_->bottom()) return "B";
  if (e == lattice_->top()) return "T";
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] == e) return sig_.values[i];
  return lattice_->name(e);
}

Interpretation validate_interpretation(const Signature& sig, const RawInterpretation& raw) {
  if (!raw.lattice) throw Error(ErrorCode::NotAPoset, "interpretation has no lattice");
  const Lattice& lat = *raw.lattice;

  std::set<std::string> seen;
  for (const auto& v : sig.values)
    if (!seen.insert(v).second || v == "B" || v == "T")
      throw Error(ErrorCode::ValueMapNotBijective, "value symbol '" + v + "' is not unique");
  for (const auto& g : sig.gates)
    if (!seen.insert(g.name).second)
      throw Error(ErrorCode::UnknownGate, "gate symbol '" + g.name + "' is not unique");

  Interpretation out;
  out.sig_ = sig;
  out.lattice_ = raw.lattice;

  // value_map must be a bijection Σ_values → V ∖ {⊥, ⊤}.
  std::set<Elem> image;
  out.values_.assign(sig.values.size(), lat.bottom());
  std::vector<bool> assigned(sig.values.size(), false);
  for (const auto& [sym, e] : raw.value_map) {
    auto i = sig.find_value(sym);
    if (!i) throw Error(ErrorCode::UnknownValue, "map assigns unknown value '" + sym + "'");
    if (e >= lat.size()) throw Error(ErrorCode::UnknownValue, "map target out of range for '" + sym + "'");
    if (assigned[*i])
      throw Error(ErrorCode::ValueMapNotBijective, "value '" + sym + "' mapped twice");
    if (e == lat.bottom() || e == lat.top())
      throw Error(ErrorCode::ValueMapNotBijective, "value '" + sym + "' mapped to bottom or top");
    if (!image.insert(e).second)
      throw Error(ErrorCode::ValueMapNotBijective, "element " + lat.name(e) + " has two value symbols");
    assigned[*i] = true;
    out.values_[*i] = e;
  }
  for (std::size_t i = 0; i < sig.values.size(); ++i)
    if (!assigned[i])
      throw Error(ErrorCode::ValueMapNotBijective, "value '" + sig.values[i] + "' is unmapped");
  for (std::size_t e = 0; e < lat.size(); ++e)
    if (e != lat.bottom() && e != lat.top() && !image.count(static_cast<Elem>(e)))
      throw Error(ErrorCode::ValueMapNotBijective,
                  "element " + lat.name(static_cast<Elem>(e)) + " has no value symbol");

  out.tables_.assign(sig.gates.size(), FunctionTable{});
  std::vector<bool> have(sig.gates.size(), false);
  for (const auto& [name, table] : raw.gate_tables) {
    auto i = sig.find_gate(name);
    if (!i) throw Error(ErrorCode::UnknownGate, "table for unknown gate '" + name + "'");
    out.tables_[*i] = table;
    have[*i] = true;
  }
  for (std::size_t i = 0; i < sig.gates.size(); ++i) {
    const GateDecl& g = sig.gates[i];
    if (!have[i]) throw Error(ErrorCode::UnknownGate, "gate '" + g.name + "' has no table");
    if (g.arity == 0)
      throw Error(ErrorCode::ArityMismatch, "gate '" + g.name + "' has arity 0; use bot instead");
    const FunctionTable& t = out.tables_[i];
    auto rows = TupleSpace(lat, g.arity).cardinality();
    if (t.in_width != g.arity || t.out_width != 1 || !rows || t.cells.size() != *rows)
      throw Error(ErrorCode::ArityMismatch,
                  "table of gate '" + g.name + "' does not match arity " + std::to_string(g.arity));
    for (Elem c : t.cells)
      if (c >= lat.size())
        throw Error(ErrorCode::UnknownValue, "table of gate '" + g.name + "' has an out-of-range entry");
    if (t.cells[0] != lat.bottom())
      throw Error(ErrorCode::GateNotBottomPreserving,
                  "gate '" + g.name + "' maps the all-bottom input to " + out.symbol_of(t.cells[0]));
    auto verdict = check_monotone(lat, t);
    if (!verdict.monotone) {
      const auto& [x, y] = *verdict.witness;
      throw Error(ErrorCode::GateNotMonotone, "gate '" + g.name + "' is not monotone: " +
                                                  format_tuple(lat, x) + " <= " +
                                                  format_tuple(lat, y));
    }
  }
  return out;
}

namespace {

const char* kBelnapInterp = R"(
values: t, f
gates: AND/2, OR/2, NOT/1
map:
  t -> t
  f -> f
table AND:
  B,B -> B
  B,f -> f
  B,t -> B
  B,T -> f
  f,B -> f
  f,f -> f
  f,t -> f
  f,T -> f
  t,B -> B
  t,f -> f
  t,t -> t
  t,T -> T
  T,B -> f
  T,f -> f
  T,t -> T
  T,T -> T
table OR:
  B,B -> B
  B,f -> B
  B,t -> t
  B,T -> t
  f,B -> B
  f,f -> f
  f,t -> t
  f,T -> T
  t,B -> t
  t,f -> t
  t,t -> t
  t,T -> t
  T,B -> t
  T,f -> T
  T,t -> t
  T,T -> T
table NOT:
  B -> B
  f -> t
  t -> f
  T -> T
)";

std::string where(std::size_t line) { return "interpretation line " + std::to_string(line) + ": "; }

}  // namespace

InterpretedSignature builtin_belnap() {
  static const InterpretedSignature cached =
      parse_interpretation(kBelnapInterp, std::make_shared<const Lattice>(belnap_lattice()));
  return cached;
}

InterpretedSignature parse_interpretation(std::string_view text, LatticePtr lattice) {
  Signature sig;
  RawInterpretation raw;
  raw.lattice = lattice;
  const Lattice& lat = *lattice;

  enum class Section { None, Map, Table } section = Section::None;
  std::size_t table_gate = 0;
  std::vector<std::vector<bool>> filled;
  std::vector<FunctionTable> tables;

  auto elem_of_symbol = [&](const std::string& s, std::size_t line) -> Elem {
    if (s == "B") return lat.bottom();
    if (s == "T") return lat.top();
    for (std::size_t i = 0; i < raw.value_map.size(); ++i)
      if (raw.value_map[i].first == s) return raw.value_map[i].second;
    throw Error(ErrorCode::UnknownValue, where(line) + "unknown symbol '" + s + "'");
  };

  std::size_t line_no = 0;
  for (const std::string& rawline : detail::split_lines(text)) {
    ++line_no;
    std::string line = detail::trim(detail::strip_comment(rawline));
    if (line.empty()) continue;
    if (line.rfind("values:", 0) == 0) {
      for (auto& v : detail::split(line.substr(7), ',')) {
        auto s = detail::trim(v);
        if (!s.empty()) sig.values.push_back(s);
      }
      section = Section::None;
    } else if (line.rfind("gates:", 0) == 0) {
      for (auto& g : detail::split(line.substr(6), ',')) {
        auto s = detail::trim(g);
        if (s.empty()) continue;
        auto slash = s.find('/');
        if (slash == std::string::npos)
          throw Error(ErrorCode::SyntaxError, where(line_no) + "expected NAME/arity, got '" + s + "'");
        std::size_t arity = 0;
        try {
          arity = std::stoul(s.substr(slash + 1));
        } catch (...) {
          throw Error(ErrorCode::SyntaxError, where(line_no) + "bad arity in '" + s + "'");
        }
        sig.gates.push_back({detail::trim(s.substr(0, slash)), arity});
      }
      section = Section::None;
    } else if (line == "map:") {
      section = Section::Map;
    } else if (line.rfind("table ", 0) == 0 && line.back() == ':') {
      std::string name = detail::trim(line.substr(6, line.size() - 7));
      auto gi = sig.find_gate(name);
      if (!gi) throw Error(ErrorCode::UnknownGate, where(line_no) + "table for undeclared gate '" + name + "'");
      if (tables.empty()) {
        tables.resize(sig.gates.size());
        filled.resize(sig.gates.size());
      }
      table_gate = *gi;
      const std::size_t arity = sig.gates[table_gate].arity;
      auto rows = TupleSpace(lat, arity).cardinality();
      if (!rows || *rows > (1u << 20))
        throw Error(ErrorCode::BudgetExceeded, where(line_no) + "gate table too large");
      tables[table_gate] = FunctionTable{arity, 1, std::vector<Elem>(*rows, lat.bottom())};
      filled[table_gate].assign(*rows, false);
      section = Section::Table;
    } else {
      auto arrow = line.find("->");
      if (arrow == std::string::npos || section == Section::None)
        throw Error(ErrorCode::SyntaxError, where(line_no) + "unexpected '" + line + "'");
      std::string lhs = detail::trim(line.substr(0, arrow));
      std::string rhs = detail::trim(line.substr(arrow + 2));
      if (section == Section::Map) {
        auto e = lat.find(rhs);
        if (!e) throw Error(ErrorCode::UnknownValue, where(line_no) + "unknown lattice element '" + rhs + "'");
        raw.value_map.emplace_back(lhs, *e);
      } else {
        const std::size_t arity = sig.gates[table_gate].arity;
        Tuple in;
        for (auto& a : detail::split(lhs, ',')) in.push_back(elem_of_symbol(detail::trim(a), line_no));
        if (in.size() != arity)
          throw Error(ErrorCode::ArityMismatch, where(line_no) + "row has " + std::to_string(in.size()) +
                                                    " inputs, gate arity is " + std::to_string(arity));
        auto idx = TupleSpace(lat, arity).index(in);
        tables[table_gate].row(idx)[0] = elem_of_symbol(rhs, line_no);
        filled[table_gate][idx] = true;
      }
    }
  }

  for (std::size_t g = 0; g < tables.size(); ++g) {
    if (filled[g].empty()) continue;
    if (std::find(filled[g].begin(), filled[g].end(), false) != filled[g].end())
      throw Error(ErrorCode::SyntaxError, "table of gate '" + sig.gates[g].name + "' is incomplete");
    raw.gate_tables.emplace_back(sig.gates[g].name, std::move(tables[g]));
  }
  auto interp = std::make_shared<const Interpretation>(validate_interpretation(sig, raw));
  return {sig, interp};
}

}  // namespace latcirc
