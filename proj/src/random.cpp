#include "latcirc/random.hpp"

#include <algorithm>
#include <numeric>

namespace latcirc {

namespace {

struct Budget {
  std::size_t gates, delays, traces;
};

class Generator {
 public:
  Generator(std::mt19937_64& rng, const Interpretation& interp, const RandomCircuitLimits& lim)
      : rng_(rng), interp_(interp), lim_(lim) {}

  Circuit build(std::size_t in, std::size_t out, Budget& b, std::size_t steps) {
    Circuit c = id(in);
    std::size_t width = in;
    const std::size_t n_ops = 1 + uniform(steps);
    for (std::size_t k = 0; k < n_ops; ++k) {
      Circuit op = pick_op(width, b, steps);
      if (!op) continue;
      const std::size_t p = op->in == width ? 0 : uniform(width - op->in + 1);
      Circuit layer = par_all(std::vector<Circuit>{id(p), op, id(width - p - op->in)});
      c = seq(c, strip_ids(layer));
      width = c->out;
      if (width >= 2 && chance(0.2)) {
        std::vector<std::size_t> t(width);
        std::iota(t.begin(), t.end(), 0);
        std::shuffle(t.begin(), t.end(), rng_);
        c = seq(c, permutation(t));
      }
    }
    // Adapt the width.
    while (width > out) {
      Circuit shrink = (width - out >= 1 && chance(0.5)) ? join() : par(id(1), stub());
      if (shrink->in > width) shrink = stub();
      const std::size_t p = uniform(width - shrink->in + 1);
      c = seq(c, strip_ids(par_all({id(p), shrink, id(width - p - shrink->in)})));
      width = c->out;
    }
    while (width < out) {
      Circuit grow = (width > 0 && chance(0.6)) ? dup() : source();
      const std::size_t p = uniform(width - grow->in + 1);
      c = seq(c, strip_ids(par_all({id(p), grow, id(width - p - grow->in)})));
      width = c->out;
    }
    return simplify_ids(c);
  }

 private:
  std::mt19937_64& rng_;
  const Interpretation& interp_;
  const RandomCircuitLimits& lim_;

  std::size_t uniform(std::size_t n) { return n <= 1 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  Circuit source() {
    if (chance(lim_.value_rate * 3)) {
      const Lattice& l = interp_.lattice();
      return value_node(interp_, static_cast<Elem>(uniform(l.size())));
    }
    return bot();
  }

  Circuit pick_op(std::size_t width, Budget& b, std::size_t steps) {
    const auto& gates = interp_.signature().gates;
    for (int attempt = 0; attempt < 8; ++attempt) {
      switch (uniform(9)) {
        case 0:
        case 1:
          if (b.gates && !gates.empty()) {
            const GateDecl& g = gates[uniform(gates.size())];
            if (g.arity <= width) {
              --b.gates;
              return gate(g.name, g.arity);
            }
          }
          break;
        case 2:
          if (width >= 1) return dup();
          break;
        case 3:
          if (width >= 2) return join();
          break;
        case 4:
          if (b.delays && width >= 1) {
            --b.delays;
            return delay();
          }
          break;
        case 5:
          if (chance(lim_.value_rate * 4)) return source();
          break;
        case 6:
          if (width >= 2) return chance(0.5) ? swap() : stub();
          break;
        case 7:
        case 8:
          if (b.traces && steps > 1) {
            --b.traces;
            const std::size_t x = 1 + uniform(std::min<std::size_t>(2, 1 + b.traces));
            const std::size_t j = std::min(width, uniform(3));
            const std::size_t j_out = uniform(3);
            Circuit body = build(x + j, x + j_out, b, steps / 2);
            return trace(x, body);
          }
          break;
      }
    }
    return nullptr;
  }

  static Circuit strip_ids(const Circuit& c) {
    if (c->kind != Kind::Par) return c;
    Circuit a = strip_ids(c->a), b = strip_ids(c->b);
    if (a->kind == Kind::Id && a->width == 0) return b;
    if (b->kind == Kind::Id && b->width == 0) return a;
    return par(a, b);
  }

  static Circuit simplify_ids(const Circuit& c) {
    if (c->kind != Kind::Seq) return c;
    Circuit a = simplify_ids(c->a);
    if (a->kind == Kind::Id) return c->b;
    return seq(a, c->b);
  }
};

}  // namespace

Circuit random_circuit(std::mt19937_64& rng, const Interpretation& interp,
                       const RandomCircuitLimits& limits) {
  Generator gen(rng, interp, limits);
  Budget b{limits.max_gates, limits.max_delays, limits.max_traces};
  return gen.build(limits.inputs, limits.outputs, b, limits.max_steps);
}

Waveform random_waveform(std::mt19937_64& rng, const Lattice& lattice, std::size_t width,
                         std::size_t ticks) {
  Waveform w{width, {}};
  std::uniform_int_distribution<std::size_t> pick(0, lattice.size() - 1);
  for (std::size_t t = 0; t < ticks; ++t) {
    Tuple x(width);
    for (auto& e : x) e = static_cast<Elem>(pick(rng));
    w.ticks.push_back(std::move(x));
  }
  return w;
}

}  // namespace latcirc
