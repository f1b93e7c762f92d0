#include "latcirc/mealy.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "latcirc/error.hpp"
#include "format_util.hpp"

namespace latcirc {

using detail::content_lines;
using detail::parse_header;
using detail::parse_tuple;
using detail::tuple_text;

namespace {

std::size_t alphabet(const Lattice& l, std::size_t width) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < width; ++i) {
    n *= l.size();
    if (n > (1u << 20)) throw Error(ErrorCode::BudgetExceeded, "input alphabet too large");
  }
  return n;
}

IMealyMachine stateless(LatticePtr l, std::size_t m, std::size_t n,
                        std::function<void(std::span<const Elem>, std::span<Elem>)> f) {
  IMealyMachine a;
  a.lattice = std::move(l);
  a.m = m;
  a.n = n;
  a.step = [f = std::move(f)](std::span<const Elem>, std::span<const Elem> in, std::span<Elem>,
                              std::span<Elem> out) { f(in, out); };
  return a;
}

IMealyMachine one_register(LatticePtr l, Elem init, bool holds_input) {
  IMealyMachine a;
  const Elem bottom = l->bottom();
  a.lattice = std::move(l);
  a.m = holds_input ? 1 : 0;
  a.s = 1;
  a.n = 1;
  a.initial = {init};
  a.step = [holds_input, bottom](std::span<const Elem> st, std::span<const Elem> in,
                                 std::span<Elem> next, std::span<Elem> out) {
    out[0] = st[0];
    next[0] = holds_input ? in[0] : bottom;
  };
  return a;
}

}  // namespace

std::size_t MealyMachine::letters() const { return alphabet(*lattice, m); }

std::pair<Tuple, Tuple> IMealyMachine::apply(std::span<const Elem> state, std::span<const Elem> in) const {
  Tuple next(s), out(n);
  step(state, in, next, out);
  return {std::move(next), std::move(out)};
}

IMealyMachine imealy_from_samples(LatticePtr lattice, std::size_t m, std::size_t n, Tuple initial,
                                  SampledFunction T, SampledFunction O) {
  const std::size_t s = initial.size();
  if (T.in_width != s + m || T.out_width != s || O.in_width != s + m || O.out_width != n)
    throw Error(ErrorCode::WidthMismatch, "sample tables do not fit the machine's widths");
  IMealyMachine a;
  a.lattice = lattice;
  a.m = m;
  a.s = s;
  a.n = n;
  a.initial = std::move(initial);
  a.T_samples = std::move(T);
  a.O_samples = std::move(O);
  a.step = [lat = lattice, t = *a.T_samples, o = *a.O_samples](std::span<const Elem> st, std::span<const Elem> in,
                                                 std::span<Elem> next, std::span<Elem> out) {
    Tuple x(st.begin(), st.end());
    x.insert(x.end(), in.begin(), in.end());
    t.eval_into(*lat, x, next);
    o.eval_into(*lat, x, out);
  };
  return a;
}

std::pair<FunctionTable, FunctionTable> tabulate(const IMealyMachine& a) {
  const Lattice& l = *a.lattice;
  Tuple scratch_next(a.s), scratch_out(a.n);
  FunctionTable T = tabulate(l, a.s + a.m, a.s, [&](std::span<const Elem> x, std::span<Elem> out) {
    a.step(x.first(a.s), x.subspan(a.s), out, scratch_out);
  });
  FunctionTable O = tabulate(l, a.s + a.m, a.n, [&](std::span<const Elem> x, std::span<Elem> out) {
    a.step(x.first(a.s), x.subspan(a.s), scratch_next, out);
  });
  return {std::move(T), std::move(O)};
}

Waveform output_stream(const MealyMachine& a, const Waveform& input, std::size_t ticks) {
  if (!input.ticks.empty() && input.width != a.m)
    throw Error(ErrorCode::WidthMismatch, "machine takes " + std::to_string(a.m) + " inputs");
  TupleSpace in_space(*a.lattice, a.m);
  Waveform out{a.n, {}};
  std::size_t s = a.initial;
  const Tuple pad(a.m, a.lattice->bottom());
  for (std::size_t t = 0; t < ticks; ++t) {
    const Tuple& x = t < input.ticks.size() ? input.ticks[t] : pad;
    const std::size_t letter = in_space.index(x);
    auto o = a.O(s, letter);
    out.ticks.emplace_back(o.begin(), o.end());
    s = a.T(s, letter);
  }
  return out;
}

Waveform output_stream(const IMealyMachine& a, const Waveform& input, std::size_t ticks) {
  if (!input.ticks.empty() && input.width != a.m)
    throw Error(ErrorCode::WidthMismatch, "machine takes " + std::to_string(a.m) + " inputs");
  Waveform out{a.n, {}};
  Tuple state = a.initial, next(a.s), o(a.n);
  const Tuple pad(a.m, a.lattice->bottom());
  for (std::size_t t = 0; t < ticks; ++t) {
    const Tuple& x = t < input.ticks.size() ? input.ticks[t] : pad;
    a.step(state, x, next, o);
    out.ticks.push_back(o);
    std::swap(state, next);
  }
  return out;
}

MealyMachine explore(const IMealyMachine& a, std::size_t max_states) {
  const Lattice& l = *a.lattice;
  MealyMachine out;
  out.lattice = a.lattice;
  out.m = a.m;
  out.n = a.n;
  const std::size_t letters = alphabet(l, a.m);
  TupleSpace in_space(l, a.m);
  std::map<Tuple, std::size_t> index;
  std::vector<Tuple> states{a.initial};
  index[a.initial] = 0;
  Tuple x(a.m), next(a.s), o(a.n);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t letter = 0; letter < letters; ++letter) {
      in_space.tuple_into(letter, x);
      a.step(states[i], x, next, o);
      auto [it, fresh] = index.emplace(next, states.size());
      if (fresh) {
        if (states.size() >= max_states)
          throw Error(ErrorCode::BudgetExceeded,
                      "more than " + std::to_string(max_states) + " reachable states");
        states.push_back(next);
      }
      out.next.push_back(it->second);
      out.outputs.insert(out.outputs.end(), o.begin(), o.end());
    }
  }
  for (const auto& s : states) out.states.push_back(format_tuple(l, s));
  out.initial = 0;
  return out;
}

BisimVerdict bisimilar(const MealyMachine& a, const MealyMachine& b) {
  if (a.m != b.m || a.n != b.n) throw Error(ErrorCode::ArityMismatch, "machines have different interfaces");
  BisimVerdict v;
  const std::size_t letters = a.letters();
  TupleSpace in_space(*a.lattice, a.m);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{a.initial, b.initial}};
  std::vector<std::pair<std::size_t, std::size_t>> parent{{SIZE_MAX, 0}};  // (pair index, letter)
  seen[pairs[0]] = 0;
  auto word_to = [&](std::size_t idx, std::size_t last) {
    std::vector<Tuple> w{in_space.tuple(last)};
    while (parent[idx].first != SIZE_MAX) {
      w.push_back(in_space.tuple(parent[idx].second));
      idx = parent[idx].first;
    }
    return std::vector<Tuple>(w.rbegin(), w.rend());
  };
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [s, t] = pairs[i];
    for (std::size_t letter = 0; letter < letters; ++letter) {
      auto oa = a.O(s, letter), ob = b.O(t, letter);
      if (!std::equal(oa.begin(), oa.end(), ob.begin())) {
        v.bisimilar = false;
        v.counterexample = word_to(i, letter);
        return v;
      }
      std::pair<std::size_t, std::size_t> nxt{a.T(s, letter), b.T(t, letter)};
      if (seen.emplace(nxt, pairs.size()).second) {
        pairs.push_back(nxt);
        parent.emplace_back(i, letter);
      }
    }
  }
  v.relation = std::move(pairs);
  return v;
}

namespace {

// Machine restricted to `keep` (old indices, in new order); all successors
// must be kept.
MealyMachine renumber(const MealyMachine& a, const std::vector<std::size_t>& keep,
                      const std::vector<std::size_t>& class_of) {
  MealyMachine out;
  out.lattice = a.lattice;
  out.m = a.m;
  out.n = a.n;
  out.initial = class_of[a.initial];
  const std::size_t letters = a.letters();
  for (std::size_t s : keep) {
    out.states.push_back(a.states[s]);
    for (std::size_t letter = 0; letter < letters; ++letter) {
      out.next.push_back(class_of[a.T(s, letter)]);
      auto o = a.O(s, letter);
      out.outputs.insert(out.outputs.end(), o.begin(), o.end());
    }
  }
  return out;
}

}  // namespace

MealyMachine reachable(const MealyMachine& a) {
  const std::size_t letters = a.letters();
  std::vector<std::size_t> order{a.initial}, class_of(a.size(), SIZE_MAX);
  class_of[a.initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t letter = 0; letter < letters; ++letter) {
      std::size_t t = a.T(order[i], letter);
      if (class_of[t] == SIZE_MAX) {
        class_of[t] = order.size();
        order.push_back(t);
      }
    }
  return renumber(a, order, class_of);
}

MealyMachine minimize(const MealyMachine& input) {
  MealyMachine a = reachable(input);
  const std::size_t letters = a.letters();
  const std::size_t N = a.size();
  std::vector<std::size_t> cls(N);
  {
    std::map<std::vector<Elem>, std::size_t> sig;
    for (std::size_t s = 0; s < N; ++s) {
      std::vector<Elem> o(a.outputs.begin() + static_cast<std::ptrdiff_t>(s * letters * a.n),
                          a.outputs.begin() + static_cast<std::ptrdiff_t>((s + 1) * letters * a.n));
      cls[s] = sig.emplace(o, sig.size()).first->second;
    }
  }
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> sig;
    std::vector<std::size_t> next(N);
    for (std::size_t s = 0; s < N; ++s) {
      std::vector<std::size_t> key{cls[s]};
      for (std::size_t letter = 0; letter < letters; ++letter) key.push_back(cls[a.T(s, letter)]);
      next[s] = sig.emplace(key, sig.size()).first->second;
    }
    const std::size_t before = *std::max_element(cls.begin(), cls.end()) + 1;
    const bool stable = sig.size() == before;
    cls = std::move(next);
    if (stable) break;
  }
  // Representatives in breadth-first order from the initial state (a is
  // already numbered that way, so first occurrence suffices).
  std::vector<std::size_t> rep_of_class(N, SIZE_MAX), keep, class_index(N);
  for (std::size_t s = 0; s < N; ++s)
    if (rep_of_class[cls[s]] == SIZE_MAX) {
      rep_of_class[cls[s]] = keep.size();
      keep.push_back(s);
    }
  for (std::size_t s = 0; s < N; ++s) class_index[s] = rep_of_class[cls[s]];
  return reachable(renumber(a, keep, class_index));
}

// ---- composition ----

IMealyMachine cascade(const IMealyMachine& a, const IMealyMachine& b) {
  if (a.n != b.m)
    throw Error(ErrorCode::ArityMismatch, "cascade of " + std::to_string(a.n) + " outputs into " +
                                              std::to_string(b.m) + " inputs");
  IMealyMachine c;
  c.lattice = a.lattice;
  c.m = a.m;
  c.s = a.s + b.s;
  c.n = b.n;
  c.initial = a.initial;
  c.initial.insert(c.initial.end(), b.initial.begin(), b.initial.end());
  c.step = [a, b](std::span<const Elem> st, std::span<const Elem> in, std::span<Elem> next,
                  std::span<Elem> out) {
    Tuple mid(a.n);
    a.step(st.first(a.s), in, next.first(a.s), mid);
    b.step(st.subspan(a.s), mid, next.subspan(a.s), out);
  };
  return c;
}

IMealyMachine direct(const IMealyMachine& a, const IMealyMachine& b) {
  IMealyMachine c;
  c.lattice = a.lattice;
  c.m = a.m + b.m;
  c.s = a.s + b.s;
  c.n = a.n + b.n;
  c.initial = a.initial;
  c.initial.insert(c.initial.end(), b.initial.begin(), b.initial.end());
  c.step = [a, b](std::span<const Elem> st, std::span<const Elem> in, std::span<Elem> next,
                  std::span<Elem> out) {
    a.step(st.first(a.s), in.first(a.m), next.first(a.s), out.first(a.n));
    b.step(st.subspan(a.s), in.subspan(a.m), next.subspan(a.s), out.subspan(a.n));
  };
  return c;
}

IMealyMachine copy_machine(LatticePtr l, std::size_t n) {
  return stateless(std::move(l), n, 2 * n, [n](std::span<const Elem> in, std::span<Elem> out) {
    std::copy(in.begin(), in.end(), out.begin());
    std::copy(in.begin(), in.end(), out.begin() + static_cast<std::ptrdiff_t>(n));
  });
}

IMealyMachine discard_machine(LatticePtr l, std::size_t n) {
  return stateless(std::move(l), n, 0, [](std::span<const Elem>, std::span<Elem>) {});
}

IMealyMachine identity_machine(LatticePtr l, std::size_t n) {
  return stateless(std::move(l), n, n, [](std::span<const Elem> in, std::span<Elem> out) {
    std::copy(in.begin(), in.end(), out.begin());
  });
}

IMealyMachine conway(const IMealyMachine& a, std::size_t n) {
  if (a.n != n || a.m < n)
    throw Error(ErrorCode::ArityMismatch, "conway needs a machine n+m → n");
  IMealyMachine c;
  c.lattice = a.lattice;
  c.m = a.m - n;
  c.s = a.s;
  c.n = n;
  c.initial = a.initial;
  const std::size_t rounds = n * a.lattice->chain_steps() + 1;
  c.step = [a, n, rounds](std::span<const Elem> st, std::span<const Elem> in, std::span<Elem> next,
                          std::span<Elem> out) {
    const Lattice& l = *a.lattice;
    Tuple x(n, l.bottom());
    x.insert(x.end(), in.begin(), in.end());
    Tuple scratch(a.s), o(n);
    for (std::size_t k = 0; k < rounds; ++k) {
      a.step(st, x, scratch, o);
      bool same = true;
      for (std::size_t j = 0; j < n; ++j) {
        Elem v = l.join(x[j], o[j]);
        same = same && v == x[j];
        x[j] = v;
      }
      if (same) break;
    }
    a.step(st, x, next, o);
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n), out.begin());
  };
  return c;
}

IMealyMachine trace_machine(std::size_t x, const IMealyMachine& a) {
  if (a.m < x || a.n < x) throw Error(ErrorCode::ArityMismatch, "trace wider than the machine");
  IMealyMachine c;
  c.lattice = a.lattice;
  c.m = a.m - x;
  c.s = a.s;
  c.n = a.n - x;
  c.initial = a.initial;
  const std::size_t rounds = x * a.lattice->chain_steps() + 1;
  c.step = [a, x, rounds](std::span<const Elem> st, std::span<const Elem> in, std::span<Elem> next,
                          std::span<Elem> out) {
    const Lattice& l = *a.lattice;
    Tuple full(x, l.bottom());
    full.insert(full.end(), in.begin(), in.end());
    Tuple scratch(a.s), o(a.n);
    for (std::size_t k = 0; k < rounds; ++k) {
      a.step(st, full, scratch, o);
      bool same = true;
      for (std::size_t j = 0; j < x; ++j) {
        Elem v = l.join(full[j], o[j]);
        same = same && v == full[j];
        full[j] = v;
      }
      if (same) break;
    }
    a.step(st, full, next, o);
    std::copy(o.begin() + static_cast<std::ptrdiff_t>(x), o.end(), out.begin());
  };
  return c;
}

IMealyMachine circuit_to_mealy(const Circuit& c, const Interpretation& interp) {
  const LatticePtr& l = interp.lattice_ptr();
  switch (c->kind) {
    case Kind::Value:
    case Kind::Top: return one_register(l, value_node_elem(interp, *c), false);
    case Kind::Delay: return one_register(l, l->bottom(), true);
    case Kind::Bot: {
      const Elem b = l->bottom();
      return stateless(l, 0, 1, [b](std::span<const Elem>, std::span<Elem> out) { out[0] = b; });
    }
    case Kind::Gate: {
      auto g = interp.signature().find_gate(c->symbol);
      if (!g) throw Error(ErrorCode::UnknownGate, "unknown gate " + c->symbol);
      const Interpretation* I = &interp;
      const std::size_t gi = *g;
      return stateless(l, c->width, 1, [I, gi](std::span<const Elem> in, std::span<Elem> out) {
        out[0] = I->apply(gi, in);
      });
    }
    case Kind::Fork: return copy_machine(l, 1);
    case Kind::Join: {
      const Lattice* lat = l.get();
      return stateless(l, 2, 1, [lat](std::span<const Elem> in, std::span<Elem> out) {
        out[0] = lat->join(in[0], in[1]);
      });
    }
    case Kind::Stub: return discard_machine(l, 1);
    case Kind::Id: return identity_machine(l, c->width);
    case Kind::Swap:
      return stateless(l, 2, 2, [](std::span<const Elem> in, std::span<Elem> out) {
        out[0] = in[1];
        out[1] = in[0];
      });
    case Kind::Seq: return cascade(circuit_to_mealy(c->a, interp), circuit_to_mealy(c->b, interp));
    case Kind::Par: return direct(circuit_to_mealy(c->a, interp), circuit_to_mealy(c->b, interp));
    case Kind::Trace: return trace_machine(c->width, circuit_to_mealy(c->a, interp));
  }
  throw Error(ErrorCode::PatternMismatch, "unknown term");
}

Circuit mealy_to_circuit(const IMealyMachine& a, const Interpretation& interp) {
  const Lattice& l = *a.lattice;
  SampledFunction T, O;
  if (a.T_samples && a.O_samples) {
    T = *a.T_samples;
    O = *a.O_samples;
  } else {
    auto [tt, ot] = tabulate(a);
    T = irreducible_samples(l, tt);
    O = irreducible_samples(l, ot);
  }
  Circuit tc = realize_sampled(interp, T);
  Circuit oc = realize_sampled(interp, O);
  if (a.s == 0) return oc;
  std::vector<Circuit> front;
  for (Elem v : a.initial) front.push_back(register_of(interp, v));
  if (a.m) front.push_back(id(a.m));
  Circuit body = seq_all({par_all(front), diagonal(a.s + a.m), par(tc, oc)});
  return trace(a.s, body);
}

// ---- text formats ----

MealyMachine parse_mealy(std::string_view text, const Interpretation& interp) {
  auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::SyntaxError, "empty machine file");
  auto h = parse_header(lines[0].second, "mealy");
  if (!h.count("m") || !h.count("n")) throw Error(ErrorCode::SyntaxError, "header needs m= and n=");
  MealyMachine a;
  a.lattice = interp.lattice_ptr();
  a.m = h["m"];
  a.n = h["n"];
  const std::size_t letters = a.letters();
  TupleSpace in_space(interp.lattice(), a.m);
  std::map<std::string, std::size_t> index;
  std::optional<std::string> initial;
  struct Edge {
    std::size_t line;
    std::string from, to;
    Tuple in, out;
  };
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [no, line] = lines[k];
    if (line.rfind("states:", 0) == 0) {
      std::istringstream in(line.substr(7));
      std::string s;
      while (in >> s) {
        if (index.count(s)) throw Error(ErrorCode::SyntaxError, "state " + s + " listed twice");
        index[s] = a.states.size();
        a.states.push_back(s);
      }
    } else if (line.rfind("initial:", 0) == 0) {
      initial = detail::trim(line.substr(8));
    } else {
      // s -(a)-> s' / (b)
      auto dash = line.find("-(");
      auto arrow = line.find(")->");
      auto slash = line.find('/', arrow == std::string::npos ? 0 : arrow);
      if (dash == std::string::npos || arrow == std::string::npos || slash == std::string::npos)
        throw Error(ErrorCode::SyntaxError, "line " + std::to_string(no) + ": expected 's -(a)-> t / (b)'");
      Edge e;
      e.line = no;
      e.from = detail::trim(line.substr(0, dash));
      e.in = parse_tuple(line.substr(dash + 1, arrow - dash), interp, a.m, no);
      e.to = detail::trim(line.substr(arrow + 3, slash - arrow - 3));
      e.out = parse_tuple(line.substr(slash + 1), interp, a.n, no);
      edges.push_back(std::move(e));
    }
  }
  if (a.states.empty()) throw Error(ErrorCode::SyntaxError, "no states: line");
  if (!initial || !index.count(*initial)) throw Error(ErrorCode::SyntaxError, "missing or unknown initial state");
  a.initial = index[*initial];
  a.next.assign(a.size() * letters, SIZE_MAX);
  a.outputs.assign(a.size() * letters * a.n, interp.lattice().bottom());
  for (const auto& e : edges) {
    if (!index.count(e.from) || !index.count(e.to))
      throw Error(ErrorCode::SyntaxError, "line " + std::to_string(e.line) + ": unknown state");
    const std::size_t s = index[e.from], letter = in_space.index(e.in);
    std::size_t& slot = a.next[s * letters + letter];
    if (slot != SIZE_MAX)
      throw Error(ErrorCode::SyntaxError, "line " + std::to_string(e.line) + ": duplicate transition");
    slot = index[e.to];
    std::copy(e.out.begin(), e.out.end(), a.outputs.begin() + static_cast<std::ptrdiff_t>((s * letters + letter) * a.n));
  }
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t letter = 0; letter < letters; ++letter)
      if (a.next[s * letters + letter] == SIZE_MAX)
        throw Error(ErrorCode::SyntaxError, "state " + a.states[s] + " has no transition on " +
                                                tuple_text(interp, in_space.tuple(letter)));
  return a;
}

std::string print_mealy(const MealyMachine& a, const Interpretation& interp) {
  std::ostringstream out;
  out << "mealy m=" << a.m << " n=" << a.n << "\nstates:";
  for (const auto& s : a.states) out << " " << s;
  out << "\ninitial: " << a.states[a.initial] << "\n";
  TupleSpace in_space(interp.lattice(), a.m);
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t letter = 0; letter < a.letters(); ++letter)
      out << a.states[s] << " -" << tuple_text(interp, in_space.tuple(letter)) << "-> "
          << a.states[a.T(s, letter)] << " / " << tuple_text(interp, a.O(s, letter)) << "\n";
  return out.str();
}

IMealyMachine parse_imealy(std::string_view text, const Interpretation& interp) {
  auto lines = content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::SyntaxError, "empty machine file");
  auto h = parse_header(lines[0].second, "imealy");
  if (!h.count("m") || !h.count("s") || !h.count("n"))
    throw Error(ErrorCode::SyntaxError, "header needs m=, s= and n=");
  const std::size_t m = h["m"], s = h["s"], n = h["n"];
  std::optional<Tuple> initial;
  std::vector<std::pair<Tuple, Tuple>> T, O;
  std::vector<std::pair<Tuple, Tuple>>* section = nullptr;
  std::size_t width = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [no, line] = lines[k];
    if (line.rfind("initial:", 0) == 0) {
      initial = parse_tuple(line.substr(8), interp, s, no);
    } else if (line == "T:") {
      section = &T;
      width = s;
    } else if (line == "O:") {
      section = &O;
      width = n;
    } else {
      auto arrow = line.find("->");
      if (!section || arrow == std::string::npos)
        throw Error(ErrorCode::SyntaxError, "line " + std::to_string(no) + ": expected '(point) -> (value)' under T: or O:");
      section->emplace_back(parse_tuple(line.substr(0, arrow), interp, s + m, no),
                            parse_tuple(line.substr(arrow + 2), interp, width, no));
    }
  }
  if (!initial) throw Error(ErrorCode::SyntaxError, "missing initial: line");
  const Lattice& l = interp.lattice();
  return imealy_from_samples(interp.lattice_ptr(), m, n, *initial,
                             monotone_extension(l, s + m, s, std::move(T)),
                             monotone_extension(l, s + m, n, std::move(O)));
}

std::string print_imealy(const IMealyMachine& a, const Interpretation& interp) {
  SampledFunction T, O;
  if (a.T_samples && a.O_samples) {
    T = *a.T_samples;
    O = *a.O_samples;
  } else {
    auto [tt, ot] = tabulate(a);
    T = irreducible_samples(*a.lattice, tt);
    O = irreducible_samples(*a.lattice, ot);
  }
  std::ostringstream out;
  out << "imealy m=" << a.m << " s=" << a.s << " n=" << a.n << "\n";
  out << "initial: " << tuple_text(interp, a.initial) << "\nT:\n";
  for (const auto& [p, v] : T.samples) out << tuple_text(interp, p) << " -> " << tuple_text(interp, v) << "\n";
  out << "O:\n";
  for (const auto& [p, v] : O.samples) out << tuple_text(interp, p) << " -> " << tuple_text(interp, v) << "\n";
  return out.str();
}

}  // namespace latcirc
