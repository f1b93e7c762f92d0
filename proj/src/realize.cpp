#include "latcirc/realize.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <set>

#include "latcirc/error.hpp"

namespace latcirc {

namespace {

bool tuple_leq(const Lattice& l, std::span<const Elem> a, std::span<const Elem> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!l.leq(a[i], b[i])) return false;
  return true;
}

Circuit par_compact(const std::vector<Circuit>& cs) {
  std::vector<Circuit> kept;
  for (const auto& c : cs)
    if (!(c->kind == Kind::Id && c->width == 0)) kept.push_back(c);
  return par_all(kept);
}

Circuit seq_compact(const std::vector<Circuit>& cs) {
  std::vector<Circuit> kept;
  for (const auto& c : cs)
    if (c->kind != Kind::Id) kept.push_back(c);
  if (kept.empty()) return id(cs.front()->in);
  return seq_all(kept);
}

// 1 → k copies.
Circuit fanout(std::size_t k) {
  if (k == 0) return stub();
  Circuit c = id(1);
  for (std::size_t i = 2; i <= k; ++i) c = seq_compact({c, par_compact({id(i - 2), dup()})});
  return c;
}

// k → 1 by folding a binary operator from the left.
Circuit fold(const Circuit& op, std::size_t k) {
  Circuit c = id(k);
  for (std::size_t i = k; i >= 2; --i) c = seq_compact({c, par_compact({op, id(i - 2)})});
  return c;
}

// ---- gadget search ----

struct Candidate {
  std::vector<Elem> values;  // over the search domain
  Circuit circuit;
};

// Closure of the start set under the unary/binary gates and the join,
// pointwise over `points` (each a tuple of the circuit's inputs).
std::vector<Candidate> closure(const Interpretation& I, const std::vector<Tuple>& points,
                               std::vector<Candidate> start, std::size_t in_width) {
  const Lattice& l = I.lattice();
  const auto& gates = I.signature().gates;
  std::map<std::vector<Elem>, std::size_t> seen;
  std::vector<Candidate> all;
  for (auto& c : start)
    if (seen.emplace(c.values, all.size()).second) all.push_back(std::move(c));
  const Circuit copy2 = in_width == 1 ? dup() : diagonal(in_width);

  for (int round = 0; round < 6; ++round) {
    std::vector<Candidate> fresh;
    auto offer = [&](std::vector<Elem> v, const std::function<Circuit()>& make) {
      if (seen.count(v)) return;
      seen.emplace(v, all.size() + fresh.size());
      fresh.push_back({std::move(v), make()});
    };
    const std::size_t n = all.size();
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
      const GateDecl& g = gates[gi];
      if (g.arity == 1) {
        for (std::size_t a = 0; a < n; ++a) {
          std::vector<Elem> v(points.size());
          for (std::size_t p = 0; p < points.size(); ++p) v[p] = I.apply(gi, std::span(&all[a].values[p], 1));
          offer(std::move(v), [&] { return seq(all[a].circuit, gate(g.name, 1)); });
        }
      } else if (g.arity == 2) {
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) {
            std::vector<Elem> v(points.size());
            for (std::size_t p = 0; p < points.size(); ++p) {
              Elem xy[2] = {all[a].values[p], all[b].values[p]};
              v[p] = I.apply(gi, xy);
            }
            offer(std::move(v), [&] {
              return seq_all({copy2, par(all[a].circuit, all[b].circuit), gate(g.name, 2)});
            });
          }
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        std::vector<Elem> v(points.size());
        for (std::size_t p = 0; p < points.size(); ++p) v[p] = l.join(all[a].values[p], all[b].values[p]);
        offer(std::move(v), [&] { return seq_all({copy2, par(all[a].circuit, all[b].circuit), join()}); });
      }
    if (fresh.empty()) break;
    for (auto& c : fresh) all.push_back(std::move(c));
  }
  return all;
}

void collect_primitives(const Circuit& c, std::set<std::string>& out) {
  switch (c->kind) {
    case Kind::Gate: out.insert(c->symbol); break;
    case Kind::Join: out.insert("join"); break;
    case Kind::Bot: out.insert("bot"); break;
    case Kind::Seq:
    case Kind::Par:
      collect_primitives(c->a, out);
      collect_primitives(c->b, out);
      break;
    default: break;
  }
}

std::string fingerprint(const Interpretation& I) {
  const Lattice& l = I.lattice();
  std::string s;
  for (Elem a = 0; a < l.size(); ++a) {
    s += l.name(a) + ",";
    for (Elem b = 0; b < l.size(); ++b) s += l.leq(a, b) ? '1' : '0';
  }
  for (std::size_t g = 0; g < I.signature().gates.size(); ++g) {
    s += "|" + I.signature().gates[g].name + ":";
    for (Elem e : I.gate(g).cells) s += std::to_string(e) + ",";
  }
  return s;
}

Gadgets search_gadgets(const Interpretation& I) {
  const Lattice& l = I.lattice();
  const Elem B = l.bottom(), T = l.top();
  Gadgets g;
  g.detector.resize(l.size());
  g.guard.resize(l.size());

  std::vector<Tuple> unary_points;
  for (Elem v = 0; v < l.size(); ++v) unary_points.push_back({v});
  std::vector<Elem> ident(l.size());
  for (Elem v = 0; v < l.size(); ++v) ident[v] = v;
  auto unary = closure(I, unary_points,
                       {{ident, id(1)}, {std::vector<Elem>(l.size(), B), seq(stub(), bot())}}, 1);

  std::set<std::string> used;
  for (Elem v = 0; v < l.size(); ++v) {
    if (v == B) continue;
    for (const auto& c : unary) {
      bool det = true, grd = c.values[B] == B && c.values[T] == v;
      for (Elem x = 0; x < l.size(); ++x) det = det && c.values[x] == (l.leq(v, x) ? T : B);
      if (det && !g.detector[v]) g.detector[v] = c.circuit;
      if (grd && !g.guard[v]) g.guard[v] = c.circuit;
    }
    if (!g.detector[v])
      throw Error(ErrorCode::NotFunctionallyComplete, "no detector for x ⊒ " + l.name(v));
    if (!g.guard[v]) throw Error(ErrorCode::NotFunctionallyComplete, "no guard for " + l.name(v));
    collect_primitives(g.detector[v], used);
    collect_primitives(g.guard[v], used);
  }

  std::vector<Tuple> pairs{{B, B}, {B, T}, {T, B}, {T, T}};
  auto binary = closure(I, pairs,
                        {{{B, B, T, T}, par(id(1), stub())},
                         {{B, T, B, T}, par(stub(), id(1))},
                         {{B, B, B, B}, seq(discard(2), bot())}},
                        2);
  for (const auto& c : binary)
    if (c.values == std::vector<Elem>{B, B, B, T}) {
      g.conj = c.circuit;
      break;
    }
  if (!g.conj) throw Error(ErrorCode::NotFunctionallyComplete, "no ⊤-conjunction");
  collect_primitives(g.conj, used);
  g.primitives.assign(used.begin(), used.end());
  return g;
}

}  // namespace

// ---- sampled functions ----

void SampledFunction::eval_into(const Lattice& l, std::span<const Elem> x, std::span<Elem> out) const {
  std::fill(out.begin(), out.end(), l.bottom());
  for (const auto& [p, v] : samples)
    if (tuple_leq(l, p, x))
      for (std::size_t j = 0; j < out_width; ++j) out[j] = l.join(out[j], v[j]);
}

Tuple SampledFunction::eval(const Lattice& l, std::span<const Elem> x) const {
  Tuple out(out_width);
  eval_into(l, x, out);
  return out;
}

FunctionTable SampledFunction::tabulate(const Lattice& l) const {
  return latcirc::tabulate(l, in_width, out_width,
                           [&](std::span<const Elem> x, std::span<Elem> out) { eval_into(l, x, out); });
}

SampledFunction monotone_extension(const Lattice& l, std::size_t in_width, std::size_t out_width,
                                   std::vector<std::pair<Tuple, Tuple>> samples) {
  for (const auto& [p, v] : samples)
    if (p.size() != in_width || v.size() != out_width)
      throw Error(ErrorCode::WidthMismatch, "sample " + format_tuple(l, p) + " has the wrong width");
  for (const auto& [p, v] : samples)
    for (const auto& [q, w] : samples)
      if (tuple_leq(l, p, q) && !tuple_leq(l, v, w))
        throw Error(ErrorCode::SamplesNotMonotone,
                    format_tuple(l, p) + " ↦ " + format_tuple(l, v) + " but " + format_tuple(l, q) +
                        " ↦ " + format_tuple(l, w));
  return {in_width, out_width, std::move(samples)};
}

SampledFunction irreducible_samples(const Lattice& l, const FunctionTable& table) {
  TupleSpace dom(l, table.in_width);
  SampledFunction f{table.in_width, table.out_width, {}};
  Tuple x(table.in_width);
  for (std::uint64_t i = 0; i < table.rows(); ++i) {
    dom.tuple_into(i, x);
    auto fx = table.row(i);
    Tuple below(table.out_width, l.bottom());
    for (std::size_t k = 0; k < x.size(); ++k) {
      const Elem keep = x[k];
      for (Elem c : l.lower_covers(keep)) {
        x[k] = c;
        auto fy = table.row(dom.index(x));
        for (std::size_t j = 0; j < below.size(); ++j) below[j] = l.join(below[j], fy[j]);
      }
      x[k] = keep;
    }
    if (!std::equal(below.begin(), below.end(), fx.begin()))
      f.samples.emplace_back(x, Tuple(fx.begin(), fx.end()));
  }
  return f;
}

const Gadgets& find_gadgets(const Interpretation& interp) {
  static std::mutex mu;
  static std::map<std::string, Gadgets> cache;
  const std::string key = fingerprint(interp);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, search_gadgets(interp)).first;
  return it->second;
}

Circuit realize_sampled(const Interpretation& interp, const SampledFunction& f, bool allow_values) {
  const Lattice& l = interp.lattice();
  const Elem B = l.bottom();
  if (!allow_values && f.eval(l, Tuple(f.in_width, B)) != Tuple(f.out_width, B))
    throw Error(ErrorCode::NotRealizable, "function does not send ⊥ to ⊥; gates cannot build it");
  const Gadgets& g = find_gadgets(interp);

  struct Term {
    Tuple point;
    Elem value;
  };
  std::vector<std::vector<Term>> terms(f.out_width);
  for (std::size_t j = 0; j < f.out_width; ++j) {
    std::map<Tuple, Elem> at;
    for (const auto& [p, v] : f.samples)
      if (v[j] != B) at[p] = at.count(p) ? l.join(at[p], v[j]) : v[j];
    for (const auto& [p, v] : at) {
      Elem below = B;
      for (const auto& [q, w] : at)
        if (q != p && tuple_leq(l, q, p)) below = l.join(below, w);
      if (!l.leq(v, below)) terms[j].push_back({p, v});
    }
  }

  // Each term reads the coordinates where its point is above ⊥.
  std::vector<std::size_t> uses(f.in_width, 0);
  std::vector<std::pair<std::size_t, Elem>> order;  // (input, detector) in term order
  for (const auto& ts : terms)
    for (const auto& t : ts)
      for (std::size_t i = 0; i < f.in_width; ++i)
        if (t.point[i] != B) {
          ++uses[i];
          order.emplace_back(i, t.point[i]);
        }

  std::vector<Circuit> fans;
  std::vector<std::size_t> first(f.in_width);
  std::size_t total = 0;
  for (std::size_t i = 0; i < f.in_width; ++i) {
    fans.push_back(fanout(uses[i]));
    first[i] = total;
    total += uses[i];
  }
  std::vector<std::size_t> target(total);
  std::vector<std::size_t> next = first;
  std::vector<Circuit> detectors;
  for (std::size_t k = 0; k < order.size(); ++k) {
    target[next[order[k].first]++] = k;
    detectors.push_back(g.detector[order[k].second]);
  }

  std::vector<Circuit> term_circuits, outputs;
  for (const auto& ts : terms) {
    for (const auto& t : ts) {
      std::size_t width = 0;
      for (Elem e : t.point) width += e != B;
      term_circuits.push_back(width == 0 ? value_node(interp, t.value)
                                         : seq_compact({fold(g.conj, width), g.guard[t.value]}));
    }
    outputs.push_back(ts.empty() ? bot() : fold(join(), ts.size()));
  }
  return seq_compact({par_compact(fans), permutation(target), par_compact(detectors),
                      par_compact(term_circuits), par_compact(outputs)});
}

Circuit realize_monotone(const Interpretation& interp, const FunctionTable& table) {
  const Lattice& l = interp.lattice();
  MonotoneVerdict v = check_monotone(l, table);
  if (!v.monotone)
    throw Error(ErrorCode::SamplesNotMonotone,
                "table is not monotone at " + format_tuple(l, v.witness->first) + " ⊑ " +
                    format_tuple(l, v.witness->second));
  return realize_sampled(interp, irreducible_samples(l, table), true);
}

}  // namespace latcirc
