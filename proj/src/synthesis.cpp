#include "latcirc/synthesis.hpp"

#include <map>

#include "format_util.hpp"

namespace latcirc {

namespace {

using detail::content_lines;
using detail::parse_header;
using detail::parse_tuple;

const SampledFunction& table_at(const PrefixPeriodic& p, std::size_t pos) {
  if (pos < p.prefix.size()) return p.prefix[pos];
  return p.period[(pos - p.prefix.size()) % p.period.size()];
}

std::size_t advance(const PrefixPeriodic& p, std::size_t pos) {
  ++pos;
  if (pos >= p.prefix.size() + p.period.size()) pos = p.prefix.size() + (pos - p.prefix.size()) % p.period.size();
  return pos;
}

// Residual identity: machine state, or table position with remembered inputs.
using SpecKey = std::pair<std::size_t, Tuple>;

SpecKey key_of(const StreamSpec& f) {
  if (auto* b = std::get_if<BlackBox>(&f.body)) return {b->state, {}};
  const auto& p = std::get<PrefixPeriodic>(f.body);
  return {p.pos, p.history};
}

}  // namespace

StreamSpec spec_of(const MealyMachine& a) {
  return StreamSpec{a.lattice, a.m, a.n, BlackBox{a, a.initial}};
}

StreamSpec prefix_periodic(LatticePtr lattice, std::size_t m, std::size_t n, std::size_t window,
                           std::vector<SampledFunction> prefix, std::vector<SampledFunction> period) {
  if (window == 0) throw Error(ErrorCode::WidthMismatch, "window must be at least one tick");
  if (period.empty()) throw Error(ErrorCode::WidthMismatch, "period must have at least one table");
  for (const auto* part : {&prefix, &period})
    for (const auto& t : *part)
      if (t.in_width != m * window || t.out_width != n)
        throw Error(ErrorCode::WidthMismatch, "tick table should map " + std::to_string(m * window) +
                                                  " inputs to " + std::to_string(n) + " outputs");
  PrefixPeriodic p;
  p.window = window;
  p.prefix = std::move(prefix);
  p.period = std::move(period);
  p.history.assign(m * (window - 1), lattice->bottom());
  return StreamSpec{std::move(lattice), m, n, std::move(p)};
}

Tuple initial_output(const StreamSpec& f, std::span<const Elem> a) {
  if (a.size() != f.m) throw Error(ErrorCode::WidthMismatch, "input letter has the wrong width");
  if (auto* b = std::get_if<BlackBox>(&f.body)) {
    auto o = b->machine.O(b->state, TupleSpace(*f.lattice, f.m).index(a));
    return Tuple(o.begin(), o.end());
  }
  const auto& p = std::get<PrefixPeriodic>(f.body);
  Tuple w = p.history;
  w.insert(w.end(), a.begin(), a.end());
  return table_at(p, p.pos).eval(*f.lattice, w);
}

StreamSpec functional_derivative(const StreamSpec& f, std::span<const Elem> a) {
  if (a.size() != f.m) throw Error(ErrorCode::WidthMismatch, "input letter has the wrong width");
  StreamSpec g = f;
  if (auto* b = std::get_if<BlackBox>(&g.body)) {
    b->state = b->machine.T(b->state, TupleSpace(*f.lattice, f.m).index(a));
    return g;
  }
  auto& p = std::get<PrefixPeriodic>(g.body);
  p.pos = advance(p, p.pos);
  if (!p.history.empty()) {
    p.history.erase(p.history.begin(), p.history.begin() + static_cast<std::ptrdiff_t>(f.m));
    p.history.insert(p.history.end(), a.begin(), a.end());
  }
  return g;
}

Waveform spec_stream(const StreamSpec& f, const Waveform& input, std::size_t ticks) {
  Waveform out{f.n, {}};
  StreamSpec cur = f;
  const Tuple pad(f.m, f.lattice->bottom());
  for (std::size_t t = 0; t < ticks; ++t) {
    const Tuple& x = t < input.ticks.size() ? input.ticks[t] : pad;
    out.ticks.push_back(initial_output(cur, x));
    cur = functional_derivative(cur, x);
  }
  return out;
}

MealyMachine minimal_mealy(const StreamSpec& f, std::size_t budget) {
  const Lattice& l = *f.lattice;
  TupleSpace in_space(l, f.m);
  MealyMachine a;
  a.lattice = f.lattice;
  a.m = f.m;
  a.n = f.n;
  const std::size_t letters = a.letters();
  std::map<SpecKey, std::size_t> index;
  std::vector<StreamSpec> residuals{f};
  index[key_of(f)] = 0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    for (std::size_t letter = 0; letter < letters; ++letter) {
      Tuple x = in_space.tuple(letter);
      Tuple o = initial_output(residuals[i], x);
      StreamSpec d = functional_derivative(residuals[i], x);
      auto [it, fresh] = index.emplace(key_of(d), residuals.size());
      if (fresh) {
        if (residuals.size() >= budget)
          throw Error(ErrorCode::DerivativeBudgetExceeded,
                      "more than " + std::to_string(budget) + " distinct stream derivatives");
        residuals.push_back(std::move(d));
      }
      a.next.push_back(it->second);
      a.outputs.insert(a.outputs.end(), o.begin(), o.end());
    }
    a.states.push_back("");
  }
  a.initial = 0;
  MealyMachine m = minimize(a);
  for (std::size_t s = 0; s < m.size(); ++s) m.states[s] = "s" + std::to_string(s);
  return m;
}

StateOrder state_order(const MealyMachine& a) {
  const Lattice& l = *a.lattice;
  const std::size_t N = a.size(), letters = a.letters();
  std::vector<std::vector<bool>> R(N, std::vector<bool>(N, true));
  for (std::size_t s = 0; s < N; ++s)
    for (std::size_t t = 0; t < N; ++t)
      for (std::size_t x = 0; x < letters && R[s][t]; ++x) {
        auto o = a.O(s, x), p = a.O(t, x);
        for (std::size_t j = 0; j < a.n; ++j)
          if (!l.leq(o[j], p[j])) {
            R[s][t] = false;
            break;
          }
      }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < N; ++s)
      for (std::size_t t = 0; t < N; ++t) {
        if (!R[s][t]) continue;
        for (std::size_t x = 0; x < letters; ++x)
          if (!R[a.T(s, x)][a.T(t, x)]) {
            R[s][t] = false;
            changed = true;
            break;
          }
      }
  }
  for (std::size_t s = 0; s < N; ++s)
    for (std::size_t t = s + 1; t < N; ++t)
      if (R[s][t] && R[t][s])
        throw Error(ErrorCode::NotAPartialOrder,
                    "states " + a.states[s] + " and " + a.states[t] + " are related both ways");
  return {a, std::move(R)};
}

StateAssignment state_assignment(const StateOrder& order) {
  const Lattice& l = *order.machine.lattice;
  StateAssignment g;
  g.machine = order.machine;
  g.r = order.machine.size();
  for (std::size_t s = 0; s < g.r; ++s) {
    Tuple c(g.r, l.bottom());
    for (std::size_t j = 0; j < g.r; ++j)
      if (order.leq[j][s]) c[j] = l.top();
    g.code.push_back(std::move(c));
  }
  return g;
}

namespace {

std::pair<std::vector<std::pair<Tuple, Tuple>>, std::vector<std::pair<Tuple, Tuple>>> encoded_samples(
    const StateAssignment& g) {
  const MealyMachine& a = g.machine;
  TupleSpace in_space(*a.lattice, a.m);
  std::vector<std::pair<Tuple, Tuple>> T, O;
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t x = 0; x < a.letters(); ++x) {
      Tuple p = g.code[s];
      Tuple in = in_space.tuple(x);
      p.insert(p.end(), in.begin(), in.end());
      auto o = a.O(s, x);
      T.emplace_back(p, g.code[a.T(s, x)]);
      O.emplace_back(std::move(p), Tuple(o.begin(), o.end()));
    }
  return {std::move(T), std::move(O)};
}

}  // namespace

IMealyMachine synthesize(const StreamSpec& f, std::size_t budget) {
  if (auto* p = std::get_if<PrefixPeriodic>(&f.body))
    for (const auto* part : {&p->prefix, &p->period})
      for (const auto& t : *part) monotone_extension(*f.lattice, t.in_width, t.out_width, t.samples);
  StateAssignment g = state_assignment(state_order(minimal_mealy(f, budget)));
  auto [T, O] = encoded_samples(g);
  const Lattice& l = *f.lattice;
  const std::size_t w = g.r + f.m;
  return imealy_from_samples(f.lattice, f.m, f.n, g.code[g.machine.initial],
                             monotone_extension(l, w, g.r, std::move(T)),
                             monotone_extension(l, w, f.n, std::move(O)));
}

Circuit spec_to_circuit(const StreamSpec& f, const Interpretation& interp, std::size_t budget) {
  return mealy_to_circuit(synthesize(f, budget), interp);
}

CircuitFunctionVerdict check_circuit_function(const StreamSpec& f, const Interpretation& interp,
                                              std::size_t budget) {
  CircuitFunctionVerdict v;
  try {
    IMealyMachine a = synthesize(f, budget);
    realize_sampled(interp, *a.T_samples);
    realize_sampled(interp, *a.O_samples);
  } catch (const Error& e) {
    v.ok = false;
    v.code = e.code();
    v.reason = std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return v;
}

StreamSpec parse_spec(std::string_view text, const Interpretation& interp, std::size_t max_window) {
  auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::SyntaxError, "empty spec file");
  auto h = parse_header(lines[0].second, "spec");
  if (!h.count("m") || !h.count("n")) throw Error(ErrorCode::SyntaxError, "header needs m= and n=");
  const std::size_t m = h["m"], n = h["n"];
  const std::size_t window = h.count("window") ? h["window"] : 1;
  if (window == 0 || window > max_window)
    throw Error(ErrorCode::BudgetExceeded, "window of " + std::to_string(window) + " ticks exceeds the limit of " +
                                               std::to_string(max_window));
  if (lines.size() > 1 && lines[1].second == "blackbox:") {
    // The machine is everything after the marker line.
    std::size_t offset = 0;
    for (std::size_t k = 0; k <= lines[1].first - 1; ++k) {
      offset = text.find('\n', offset);
      if (offset == std::string_view::npos) break;
      ++offset;
    }
    MealyMachine a = parse_mealy(offset == std::string_view::npos ? "" : text.substr(offset), interp);
    if (a.m != m || a.n != n) throw Error(ErrorCode::WidthMismatch, "machine interface differs from the spec header");
    return spec_of(a);
  }
  const Lattice& l = interp.lattice();
  std::vector<SampledFunction> prefix, period;
  std::vector<SampledFunction>* section = nullptr;
  std::vector<std::vector<std::pair<Tuple, Tuple>>> pending;
  auto flush = [&] {
    if (section && !pending.empty())
      for (auto& s : pending) section->push_back(monotone_extension(l, m * window, n, std::move(s)));
    pending.clear();
  };
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [no, line] = lines[k];
    if (line == "prefix:" || line == "period:") {
      flush();
      section = line == "prefix:" ? &prefix : &period;
    } else if (line == "tick:") {
      if (!section) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(no) + ": tick: outside prefix:/period:");
      pending.emplace_back();
    } else {
      auto arrow = line.find("->");
      if (pending.empty() || arrow == std::string::npos)
        throw Error(ErrorCode::SyntaxError, "line " + std::to_string(no) + ": expected '(window) -> (out)' under tick:");
      pending.back().emplace_back(parse_tuple(line.substr(0, arrow), interp, m * window, no),
                                  parse_tuple(line.substr(arrow + 2), interp, n, no));
    }
  }
  flush();
  if (period.empty()) throw Error(ErrorCode::SyntaxError, "spec needs a period: section with at least one tick:");
  return prefix_periodic(interp.lattice_ptr(), m, n, window, std::move(prefix), std::move(period));
}

}  // namespace latcirc
