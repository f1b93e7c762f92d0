#include "latcirc/semantics.hpp"

#include <deque>

#include "latcirc/error.hpp"

namespace latcirc {

Netlist compile(const Circuit& c, const Interpretation& interp) {
  Graph g = flatten(c);
  Netlist net;
  net.lattice_ = interp.lattice_ptr();
  net.wires_ = g.wires;
  net.graph_inputs_ = g.inputs;
  net.graph_outputs_ = g.outputs;
  const Lattice& lat = interp.lattice();

  std::vector<std::size_t> table_of_gate(interp.signature().gates.size(), SIZE_MAX);
  for (auto& gn : g.nodes) {
    NetNode n{gn.kind, 0, gn.ins, gn.outs};
    switch (gn.kind) {
      case Kind::Gate: {
        auto gi = interp.signature().find_gate(gn.symbol);
        if (!gi) throw Error(ErrorCode::UnknownGate, "unknown gate '" + gn.symbol + "'");
        if (interp.signature().gates[*gi].arity != gn.ins.size())
          throw Error(ErrorCode::ArityMismatch, "gate '" + gn.symbol + "' used with wrong arity");
        if (table_of_gate[*gi] == SIZE_MAX) {
          table_of_gate[*gi] = net.tables_.size();
          net.tables_.push_back(interp.gate(*gi));
        }
        n.gate = table_of_gate[*gi];
        break;
      }
      case Kind::Delay:
        n.slot = net.initial_.size();
        net.initial_.push_back(lat.bottom());
        break;
      case Kind::Value:
        n.slot = net.initial_.size();
        net.initial_.push_back(interp.value(gn.symbol));
        break;
      case Kind::Top:
        n.slot = net.initial_.size();
        net.initial_.push_back(lat.top());
        break;
      default: break;
    }
    net.nodes_.push_back(std::move(n));
  }

  // Evaluation order: topological where possible; nodes on cycles follow in
  // term order once nothing else is ready.
  const std::size_t N = net.nodes_.size();
  std::vector<std::size_t> driver(g.wires, SIZE_MAX);
  for (std::size_t k = 0; k < N; ++k)
    for (auto w : net.nodes_[k].outs) driver[w] = k;
  std::vector<std::size_t> pending(N, 0);
  std::vector<std::vector<std::size_t>> readers(N);
  for (std::size_t k = 0; k < N; ++k) {
    const NetNode& n = net.nodes_[k];
    // Stateful sources read their slot, not their input wire.
    if (n.kind == Kind::Delay) continue;
    for (auto w : n.ins)
      if (driver[w] != SIZE_MAX) {
        ++pending[k];
        readers[driver[w]].push_back(k);
      }
  }
  std::vector<bool> placed(N, false);
  std::deque<std::size_t> ready;
  for (std::size_t k = 0; k < N; ++k)
    if (!pending[k]) ready.push_back(k);
  std::size_t scan = 0;
  while (net.order_.size() < N) {
    if (ready.empty()) {
      while (placed[scan]) ++scan;
      ready.push_back(scan);
      pending[scan] = 0;
    }
    std::size_t k = ready.front();
    ready.pop_front();
    if (placed[k]) continue;
    placed[k] = true;
    net.order_.push_back(k);
    for (auto r : readers[k])
      if (!placed[r] && pending[r] && --pending[r] == 0) ready.push_back(r);
  }
  return net;
}

Tuple Netlist::resolve(std::span<const Elem> state, std::span<const Elem> input) const {
  const Lattice& lat = *lattice_;
  if (input.size() != inputs())
    throw Error(ErrorCode::WidthMismatch, "input has width " + std::to_string(input.size()) +
                                              ", circuit expects " + std::to_string(inputs()));
  Tuple w(wires_, lat.bottom());
  for (std::size_t i = 0; i < graph_inputs_.size(); ++i) w[graph_inputs_[i]] = input[i];
  for (const NetNode& n : nodes_)
    if (n.slot != SIZE_MAX) w[n.outs[0]] = state[n.slot];

  const std::size_t cap = wires_ * lat.chain_steps() + 1;
  for (std::size_t sweep = 0; sweep <= cap; ++sweep) {
    bool changed = false;
    auto set = [&](std::size_t wire, Elem v) {
      if (w[wire] != v) {
        w[wire] = v;
        changed = true;
      }
    };
    for (std::size_t k : order_) {
      const NetNode& n = nodes_[k];
      switch (n.kind) {
        case Kind::Gate: {
          const FunctionTable& t = tables_[n.gate];
          std::uint64_t idx = 0;
          for (auto in : n.ins) idx = idx * lat.size() + w[in];
          set(n.outs[0], t.cells[idx]);
          break;
        }
        case Kind::Fork:
          set(n.outs[0], w[n.ins[0]]);
          set(n.outs[1], w[n.ins[0]]);
          break;
        case Kind::Join: set(n.outs[0], lat.join(w[n.ins[0]], w[n.ins[1]])); break;
        default: break;
      }
    }
    if (!changed) return w;
  }
  throw Error(ErrorCode::NonConvergence,
              "wire resolution did not stabilize within " + std::to_string(cap) + " sweeps");
}

void Netlist::step(std::span<const Elem> state, std::span<const Elem> input, std::span<Elem> next,
                   std::span<Elem> output) const {
  Tuple w = resolve(state, input);
  for (const NetNode& n : nodes_) {
    if (n.slot == SIZE_MAX) continue;
    next[n.slot] = n.kind == Kind::Delay ? w[n.ins[0]] : lattice_->bottom();
  }
  for (std::size_t i = 0; i < graph_outputs_.size(); ++i) output[i] = w[graph_outputs_[i]];
}

std::pair<Tuple, Tuple> Netlist::step(std::span<const Elem> state,
                                      std::span<const Elem> input) const {
  Tuple next(slots()), out(outputs());
  step(state, input, next, out);
  return {std::move(next), std::move(out)};
}

Waveform simulate(const Netlist& net, const Waveform& input, std::size_t ticks) {
  if (input.width != net.inputs())
    throw Error(ErrorCode::WidthMismatch, "input waveform has width " + std::to_string(input.width) +
                                              ", circuit expects " + std::to_string(net.inputs()));
  Waveform out{net.outputs(), {}};
  Tuple state = net.initial_state(), next(net.slots());
  Tuple pad(net.inputs(), net.lattice().bottom());
  for (std::size_t t = 0; t < ticks; ++t) {
    Tuple o(net.outputs());
    net.step(state, t < input.ticks.size() ? std::span<const Elem>(input.ticks[t]) : pad, next, o);
    state.swap(next);
    out.ticks.push_back(std::move(o));
  }
  return out;
}

Waveform simulate(const Circuit& c, const Interpretation& interp, const Waveform& input,
                  std::size_t ticks) {
  return simulate(compile(c, interp), input, ticks);
}

namespace {

struct BoundedSearch {
  const Netlist& n1;
  const Netlist& n2;
  TupleSpace letters;
  std::uint64_t alphabet;
  std::vector<Tuple> word;
  BoundedVerdict verdict;

  // Depth-first over words of exactly `target` letters, checking the output at
  // the last tick only; shorter words were covered by earlier rounds.
  bool search(const Tuple& s1, const Tuple& s2, std::size_t target) {
    for (std::uint64_t a = 0; a < alphabet; ++a) {
      Tuple in = letters.tuple(a);
      auto [x1, o1] = n1.step(s1, in);
      auto [x2, o2] = n2.step(s2, in);
      word.push_back(in);
      if (word.size() == target) {
        if (o1 != o2) {
          verdict.equivalent = false;
          verdict.counterexample = Waveform{letters.width(), word};
          verdict.tick = target - 1;
          verdict.left = o1;
          verdict.right = o2;
          return true;
        }
      } else if (search(x1, x2, target)) {
        return true;
      }
      word.pop_back();
    }
    return false;
  }
};

}  // namespace

BoundedVerdict extensional_equiv_bounded(const Circuit& c1, const Circuit& c2,
                                         const Interpretation& interp, std::uint64_t budget) {
  if (c1->in != c2->in || c1->out != c2->out)
    throw Error(ErrorCode::WidthMismatch, "circuits have different arities");
  const Lattice& lat = interp.lattice();
  const std::size_t n = std::max(c1->delays, c2->delays);
  const std::size_t m = c1->in;

  // length = |V|^n + 1; words = |V|^(m·length)
  std::uint64_t length = 1;
  bool overflow = false;
  for (std::size_t i = 0; i < n && !overflow; ++i) {
    if (length > budget) overflow = true;
    length *= lat.size();
  }
  length += 1;
  long double words = 1;
  for (std::uint64_t i = 0; i < m * length && !overflow; ++i) {
    words *= lat.size();
    if (words > static_cast<long double>(budget)) overflow = true;
  }
  if (overflow)
    throw Error(ErrorCode::BudgetExceeded,
                "bounded check needs |V|^(m*(|V|^n+1)) waveforms with m=" + std::to_string(m) +
                    ", n=" + std::to_string(n) + ", beyond budget " + std::to_string(budget) +
                    "; use --method bisim");

  Netlist n1 = compile(c1, interp), n2 = compile(c2, interp);
  TupleSpace letters(lat, m);
  BoundedSearch s{n1, n2, letters, *letters.cardinality(), {}, {}};
  s.verdict.length = length;
  for (std::size_t len = 1; len <= length; ++len) {
    s.word.clear();
    if (s.search(n1.initial_state(), n2.initial_state(), len)) return s.verdict;
  }
  return s.verdict;
}

}  // namespace latcirc
