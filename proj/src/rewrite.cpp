#include "latcirc/rewrite.hpp"

#include <numeric>

#include "latcirc/error.hpp"

namespace latcirc {

namespace {

// Sequential composition that drops identity stages.
Circuit seq_s(const std::vector<Circuit>& cs) {
  std::vector<Circuit> kept;
  for (const auto& c : cs)
    if (c->kind != Kind::Id) kept.push_back(c);
  if (kept.empty()) return id(cs.front()->in);
  return seq_all(kept);
}

Circuit par_s(const std::vector<Circuit>& cs) {
  std::vector<Circuit> kept;
  std::size_t ids = 0;
  auto flush = [&] {
    if (ids) kept.push_back(id(ids));
    ids = 0;
  };
  for (const auto& c : cs) {
    if (c->kind == Kind::Id) {
      ids += c->width;
      continue;
    }
    flush();
    kept.push_back(c);
  }
  flush();
  return par_all(kept);
}

Circuit delays(std::size_t n) { return n ? par_n(delay(), n) : id(0); }
Circuit bots(std::size_t n) { return n ? par_n(bot(), n) : id(0); }

// Wiring that lays out the input blocks (of the given sizes) in `order`.
Circuit reorder(const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> start(sizes.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    start[i] = total;
    total += sizes[i];
  }
  std::vector<std::size_t> target(total);
  std::size_t pos = 0;
  for (std::size_t b : order)
    for (std::size_t j = 0; j < sizes[b]; ++j) target[start[b] + j] = pos++;
  return permutation(target);
}

bool passive_combinational(const Circuit& c) {
  return c->delays == 0 && c->traces == 0 && c->values == 0;
}

void par_leaves(const Circuit& c, std::vector<Circuit>& out) {
  if (c->kind == Kind::Par) {
    par_leaves(c->a, out);
    par_leaves(c->b, out);
  } else if (!(c->kind == Kind::Id && c->width == 0)) {
    out.push_back(c);
  }
}

std::size_t gate_index(const Interpretation& interp, const std::string& symbol) {
  auto g = interp.signature().find_gate(symbol);
  if (!g) throw Error(ErrorCode::UnknownGate, "unknown gate " + symbol);
  return *g;
}

}  // namespace

std::string format_locus(const Locus& l) {
  if (l.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(l[i]);
  }
  return s;
}

const Circuit& subterm_at(const Circuit& c, const Locus& l) {
  const Circuit* cur = &c;
  for (std::size_t step : l) {
    const Node& n = **cur;
    if (n.kind == Kind::Trace && step == 0) cur = &n.a;
    else if ((n.kind == Kind::Seq || n.kind == Kind::Par) && step < 2) cur = step ? &n.b : &n.a;
    else throw Error(ErrorCode::PatternMismatch, "locus " + format_locus(l) + " does not exist");
  }
  return *cur;
}

Circuit replace_at(const Circuit& c, const Locus& l, Circuit replacement) {
  std::vector<Circuit> path{c};
  for (std::size_t step : l) {
    (void)step;
    path.push_back(nullptr);
  }
  for (std::size_t i = 0; i < l.size(); ++i) {
    Locus prefix(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i + 1));
    path[i + 1] = subterm_at(c, prefix);
  }
  Circuit acc = std::move(replacement);
  for (std::size_t i = l.size(); i-- > 0;) {
    const Circuit& parent = path[i];
    switch (parent->kind) {
      case Kind::Seq: acc = l[i] ? seq(parent->a, acc) : seq(acc, parent->b); break;
      case Kind::Par: acc = l[i] ? par(parent->a, acc) : par(acc, parent->b); break;
      case Kind::Trace: acc = trace(parent->width, acc); break;
      default: throw Error(ErrorCode::PatternMismatch, "locus through a generator");
    }
  }
  return acc;
}

std::string print_trace(const ReductionTrace& t) {
  std::string s;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    s += "step " + std::to_string(i + 1) + ": " + st.rule + " @ " + format_locus(st.locus) + "\n";
    s += print_circuit(st.term) + "\n";
  }
  return s;
}

// ---- global trace-delay form ----

Circuit to_circuit(const TraceDelayForm& form, const Interpretation& interp) {
  std::vector<Circuit> front{id(form.x)};
  for (std::size_t i = 0; i < form.d; ++i) front.push_back(delay());
  for (Elem v : form.init_values) front.push_back(value_node(interp, v));
  front.push_back(id(form.m));
  Circuit body = seq_s({par_s(front), form.core});
  if (form.x + form.d == 0) return body;
  return trace(form.x + form.d, body);
}

namespace {

class FormCompiler {
 public:
  FormCompiler(const Interpretation& interp, Circuit whole) : interp_(interp), whole_(std::move(whole)) {}

  TraceDelayForm run(const Circuit& c, Locus& locus) {
    TraceDelayForm f = compile(c, locus);
    return f;
  }

  ReductionTrace trace;

 private:
  const Interpretation& interp_;
  Circuit whole_;

  void record(const char* rule, const Locus& locus, const TraceDelayForm& f) {
    Circuit before = subterm_at(whole_, locus);
    Circuit after = to_circuit(f, interp_);
    if (structurally_equal(before, after)) return;
    whole_ = replace_at(whole_, locus, after);
    trace.steps.push_back({rule, before, after, locus, whole_});
  }

  TraceDelayForm compile(const Circuit& c, Locus& locus) {
    TraceDelayForm f;
    switch (c->kind) {
      case Kind::Value:
      case Kind::Top:
        f.core = id(1);
        f.k = 1;
        f.init_values = {value_node_elem(interp_, *c)};
        f.n = 1;
        record("sliding", locus, f);
        return f;
      case Kind::Delay:
        f.core = swap();
        f.d = f.m = f.n = 1;
        record("yanking", locus, f);
        return f;
      case Kind::Seq: {
        locus.push_back(0);
        TraceDelayForm a = compile(c->a, locus);
        locus.back() = 1;
        TraceDelayForm b = compile(c->b, locus);
        locus.pop_back();
        f.x = a.x + b.x;
        f.d = a.d + b.d;
        f.k = a.k + b.k;
        f.m = a.m;
        f.n = b.n;
        f.init_values = a.init_values;
        f.init_values.insert(f.init_values.end(), b.init_values.begin(), b.init_values.end());
        f.core = seq_s({
            reorder({a.x, b.x, a.d, b.d, a.k, b.k, a.m}, {0, 2, 4, 6, 1, 3, 5}),
            par_s({a.core, id(b.x + b.d + b.k)}),
            reorder({a.x, a.d, a.n, b.x, b.d, b.k}, {0, 1, 3, 4, 5, 2}),
            par_s({id(a.x + a.d), b.core}),
            reorder({a.x, a.d, b.x, b.d, b.n}, {0, 2, 1, 3, 4}),
        });
        record("tightening", locus, f);
        return f;
      }
      case Kind::Par: {
        locus.push_back(0);
        TraceDelayForm a = compile(c->a, locus);
        locus.back() = 1;
        TraceDelayForm b = compile(c->b, locus);
        locus.pop_back();
        f.x = a.x + b.x;
        f.d = a.d + b.d;
        f.k = a.k + b.k;
        f.m = a.m + b.m;
        f.n = a.n + b.n;
        f.init_values = a.init_values;
        f.init_values.insert(f.init_values.end(), b.init_values.begin(), b.init_values.end());
        f.core = seq_s({
            reorder({a.x, b.x, a.d, b.d, a.k, b.k, a.m, b.m}, {0, 2, 4, 6, 1, 3, 5, 7}),
            par_s({a.core, b.core}),
            reorder({a.x, a.d, a.n, b.x, b.d, b.n}, {0, 3, 1, 4, 2, 5}),
        });
        record("superposing", locus, f);
        return f;
      }
      case Kind::Trace: {
        const std::size_t y = c->width;
        locus.push_back(0);
        TraceDelayForm a = compile(c->a, locus);
        locus.pop_back();
        f.x = y + a.x;
        f.d = a.d;
        f.k = a.k;
        f.m = a.m - y;
        f.n = a.n - y;
        f.init_values = a.init_values;
        f.core = seq_s({
            reorder({y, a.x, a.d, a.k, f.m}, {1, 2, 3, 0, 4}),
            a.core,
            reorder({a.x, a.d, y, f.n}, {2, 0, 1, 3}),
        });
        record("vanishing", locus, f);
        return f;
      }
      default:
        f.core = c;
        f.m = c->in;
        f.n = c->out;
        return f;
    }
  }
};

}  // namespace

FormResult to_trace_delay_form(const Circuit& c, const Interpretation& interp) {
  FormCompiler fc(interp, c);
  Locus locus;
  TraceDelayForm f = fc.run(c, locus);
  return {std::move(f), std::move(fc.trace)};
}

// ---- axioms ----

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Fork: return "Fork";
    case Axiom::Join: return "Join";
    case Axiom::Stub: return "Stub";
    case Axiom::Gate: return "Gate";
    case Axiom::Timelessness: return "Timelessness";
    case Axiom::Disconnect: return "Disconnect";
    case Axiom::Unobservable: return "Unobservable";
    case Axiom::Streaming: return "Streaming";
  }
  return "?";
}

const std::vector<Axiom>& all_axioms() {
  static const std::vector<Axiom> all{Axiom::Fork,         Axiom::Join,       Axiom::Stub,
                                      Axiom::Gate,         Axiom::Timelessness, Axiom::Disconnect,
                                      Axiom::Unobservable, Axiom::Streaming};
  return all;
}

namespace {

// Right-hand side if `s` is a redex of `rule`, else null.
Circuit rewrite_here(const Circuit& s, Axiom rule, const Interpretation* interp) {
  if (s->kind != Kind::Seq) return nullptr;
  const Circuit& a = s->a;
  const Circuit& b = s->b;
  switch (rule) {
    case Axiom::Fork:
      if (b->kind == Kind::Fork && is_value_generator(*a)) return par(a, a);
      return nullptr;
    case Axiom::Join:
      if (b->kind == Kind::Join && a->kind == Kind::Par && is_value_generator(*a->a) &&
          is_value_generator(*a->b)) {
        if (!interp) return a;
        const Lattice& l = interp->lattice();
        return value_node(*interp, l.join(value_node_elem(*interp, *a->a),
                                          value_node_elem(*interp, *a->b)));
      }
      return nullptr;
    case Axiom::Stub:
      if (b->kind == Kind::Stub && is_value_generator(*a)) return id(0);
      return nullptr;
    case Axiom::Disconnect:
      if (b->kind == Kind::Delay && a->kind == Kind::Bot) return bot();
      return nullptr;
    case Axiom::Unobservable:
      if (b->kind == Kind::Stub && a->kind == Kind::Delay) return stub();
      return nullptr;
    case Axiom::Gate:
    case Axiom::Timelessness:
    case Axiom::Streaming: {
      if (b->kind != Kind::Gate || b->width == 0) return nullptr;
      std::vector<Circuit> leaves;
      par_leaves(a, leaves);
      if (leaves.size() != b->width) return nullptr;
      if (rule == Axiom::Gate) {
        for (const auto& v : leaves)
          if (!is_value_generator(*v)) return nullptr;
        if (!interp) return a;
        Tuple in;
        for (const auto& v : leaves) in.push_back(value_node_elem(*interp, *v));
        return value_node(*interp, interp->apply(gate_index(*interp, b->symbol), in));
      }
      if (rule == Axiom::Timelessness) {
        for (const auto& v : leaves)
          if (v->kind != Kind::Delay) return nullptr;
        return seq(b, delay());
      }
      std::vector<Circuit> heads;
      for (const auto& v : leaves) {
        Circuit h = register_head(v);
        if (!h) return nullptr;
        heads.push_back(h);
      }
      return seq(par(seq(par_all(heads), b), seq(b, delay())), join());
    }
  }
  return nullptr;
}

void collect_redexes(const Circuit& c, Axiom rule, Locus& locus, std::vector<Locus>& out) {
  if (rewrite_here(c, rule, nullptr)) out.push_back(locus);
  if (c->kind == Kind::Seq || c->kind == Kind::Par) {
    locus.push_back(0);
    collect_redexes(c->a, rule, locus, out);
    locus.back() = 1;
    collect_redexes(c->b, rule, locus, out);
    locus.pop_back();
  } else if (c->kind == Kind::Trace) {
    locus.push_back(0);
    collect_redexes(c->a, rule, locus, out);
    locus.pop_back();
  }
}

}  // namespace

Circuit apply_axiom(const Circuit& c, Axiom rule, const Locus& locus, const Interpretation& interp) {
  const Circuit& s = subterm_at(c, locus);
  Circuit rhs = rewrite_here(s, rule, &interp);
  if (!rhs)
    throw Error(ErrorCode::PatternMismatch,
                axiom_name(rule) + " does not match at " + format_locus(locus) + ": " + print_circuit(s));
  return replace_at(c, locus, rhs);
}

std::vector<Locus> find_redexes(const Circuit& c, Axiom rule) {
  std::vector<Locus> out;
  Locus locus;
  collect_redexes(c, rule, locus, out);
  return out;
}

// ---- derived rules ----

Circuit join_n(std::size_t n) {
  if (n == 0) return id(0);
  std::vector<std::size_t> target(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = 2 * i;
    target[n + i] = 2 * i + 1;
  }
  return seq_s({permutation(target), par_n(join(), n)});
}

Circuit generalised_streaming(const Circuit& f, const std::vector<Circuit>& heads) {
  if (!passive_combinational(f))
    throw Error(ErrorCode::NotCombinational, "streaming needs a passive combinational block");
  if (heads.size() != f->in)
    throw Error(ErrorCode::ArityMismatch, "block takes " + std::to_string(f->in) + " registers");
  return seq_s({par(seq_s({par_all(heads), f}), seq_s({f, delays(f->out)})), join_n(f->out)});
}

Circuit generalised_streaming(const Circuit& lhs) {
  if (lhs->kind != Kind::Seq)
    throw Error(ErrorCode::PatternMismatch, "expected seq(registers, block)");
  std::vector<Circuit> leaves, heads;
  par_leaves(lhs->a, leaves);
  for (const auto& r : leaves) {
    Circuit h = register_head(r);
    if (!h) throw Error(ErrorCode::PatternMismatch, "block input is not a register: " + print_circuit(r));
    heads.push_back(h);
  }
  return generalised_streaming(lhs->b, heads);
}

Circuit unfold(const Circuit& c) {
  if (c->kind != Kind::Trace) throw Error(ErrorCode::NotATrace, "unfold needs a trace");
  const std::size_t x = c->width;
  const Circuit& f = c->a;
  const std::size_t m = c->in, n = c->out;
  Circuit loop = trace(x, seq_s({f, par_s({diagonal(x), discard(n)})}));
  return seq_s({diagonal(m), par_s({loop, id(m)}), f, par_s({discard(x), id(n)})});
}

Circuit instant_feedback(const Circuit& c, const Interpretation& interp, std::size_t extra) {
  if (c->kind != Kind::Trace) throw Error(ErrorCode::NotATrace, "instant feedback needs a trace");
  const Circuit& f = c->a;
  if (f->delays || f->traces)
    throw Error(ErrorCode::NotCombinationalCore, "traced body is not combinational");
  const std::size_t x = c->width, m = c->in, n = c->out;
  if (x == 0) return f;
  const std::size_t rounds = x * interp.lattice().chain_steps() + extra;
  Circuit it = seq_s({par_s({bots(x), id(m)}), f});
  for (std::size_t k = 0; k < rounds; ++k)
    it = seq_s({diagonal(m), par_s({it, id(m)}), par_s({id(x), discard(n), id(m)}), f});
  return seq_s({it, par_s({discard(x), id(n)})});
}

Tuple eval_combinational(const Circuit& c, const Interpretation& interp, std::span<const Elem> in) {
  const Lattice& l = interp.lattice();
  switch (c->kind) {
    case Kind::Value: return {interp.value(c->symbol)};
    case Kind::Bot: return {l.bottom()};
    case Kind::Top: return {l.top()};
    case Kind::Gate: return {interp.apply(gate_index(interp, c->symbol), in)};
    case Kind::Fork: return {in[0], in[0]};
    case Kind::Join: return {l.join(in[0], in[1])};
    case Kind::Stub: return {};
    case Kind::Id: return Tuple(in.begin(), in.end());
    case Kind::Swap: return {in[1], in[0]};
    case Kind::Seq: {
      Tuple mid = eval_combinational(c->a, interp, in);
      return eval_combinational(c->b, interp, mid);
    }
    case Kind::Par: {
      Tuple r = eval_combinational(c->a, interp, in.first(c->a->in));
      Tuple s = eval_combinational(c->b, interp, in.subspan(c->a->in));
      r.insert(r.end(), s.begin(), s.end());
      return r;
    }
    default:
      throw Error(ErrorCode::NotCombinational, "cannot evaluate a delay or trace in one instant");
  }
}

// ---- productivity ----

ProductivityResult productivity_step(const TraceDelayForm& form, const Interpretation& interp) {
  if (form.m != 0) throw Error(ErrorCode::ArityMismatch, "productivity needs a closed circuit");
  const std::size_t d = form.d, k = form.k, n = form.n;
  ProductivityResult r;
  auto push = [&](const char* rule, Circuit next) {
    Circuit prev = r.trace.steps.empty() ? to_circuit(form, interp) : r.trace.steps.back().term;
    r.trace.steps.push_back({rule, prev, next, {}, next});
  };

  Circuit vals = par_s([&] {
    std::vector<Circuit> vs;
    for (Elem v : form.init_values) vs.push_back(value_node(interp, v));
    return vs;
  }());
  Circuit fb = form.x ? instant_feedback(trace(form.x, form.core), interp) : form.core;
  Circuit body = seq_s({par_s({delays(d), vals}), fb});
  push("instant-feedback", d ? trace(d, body) : body);

  // Left copy closes the loop; its trace is forked into the right copy.
  Circuit loop = d ? trace(d, seq_s({body, par_s({diagonal(d), discard(n)})})) : id(0);
  if (d) push("unfolding", unfold(trace(d, body)));

  Circuit top_copy = seq_s({par_s({bots(d), vals}), fb});
  Circuit tail_copy = seq_s({par_s({loop, bots(k)}), fb});
  push("generalised-streaming",
       seq_s({par(top_copy, seq_s({tail_copy, delays(d + n)})), join_n(d + n),
              par_s({discard(d), id(n)})}));

  const Tuple head = eval_combinational(top_copy, interp, {});
  r.values.assign(head.begin() + static_cast<std::ptrdiff_t>(d), head.end());
  r.residual = seq_s({tail_copy, par_s({discard(d), id(n)})});
  std::vector<Circuit> regs;
  for (Elem w : r.values) regs.push_back(register_of(interp, w));
  push("extensionality", seq_s({r.residual, par_s(regs)}));

  // The residual as a form: delay i restarts from head[i] through the value bus.
  TraceDelayForm next;
  next.d = d;
  next.n = n;
  std::vector<Circuit> merge;
  std::vector<std::size_t> sizes, order;
  std::size_t heads = 0;
  for (std::size_t i = 0; i < d; ++i)
    if (head[i] != interp.lattice().bottom()) {
      next.init_values.push_back(head[i]);
      ++heads;
    }
  next.k = heads;
  // inputs (q_0..q_{d-1}, u_0..u_{heads-1}) interleaved so each u sits after its q
  std::vector<std::size_t> target(d + heads);
  std::size_t pos = 0, u = 0;
  for (std::size_t i = 0; i < d; ++i) {
    target[i] = pos++;
    if (head[i] != interp.lattice().bottom()) {
      target[d + u++] = pos++;
      merge.push_back(join());
    } else {
      merge.push_back(id(1));
    }
  }
  next.core = seq_s({permutation(target), par_s(merge), par_s({id(d), bots(k)}), fb});
  r.residual_form = std::move(next);
  return r;
}

ProductivityResult productivity_step(const Circuit& closed, const Interpretation& interp) {
  if (closed->in != 0) throw Error(ErrorCode::ArityMismatch, "productivity needs a closed circuit");
  FormResult fr = to_trace_delay_form(closed, interp);
  ProductivityResult r = productivity_step(fr.form, interp);
  fr.trace.append(r.trace);
  r.trace = std::move(fr.trace);
  return r;
}

StreamReduction reduce_stream(const Circuit& closed, const Interpretation& interp, std::size_t ticks) {
  if (closed->in != 0) throw Error(ErrorCode::ArityMismatch, "reduce needs a closed circuit");
  StreamReduction out;
  out.output.width = closed->out;
  FormResult fr = to_trace_delay_form(closed, interp);
  out.trace = std::move(fr.trace);
  TraceDelayForm form = std::move(fr.form);
  for (std::size_t t = 0; t < ticks; ++t) {
    ProductivityResult r = productivity_step(form, interp);
    out.output.ticks.push_back(std::move(r.values));
    out.trace.append(r.trace);
    form = std::move(r.residual_form);
  }
  return out;
}

}  // namespace latcirc
