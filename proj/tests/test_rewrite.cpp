#include "doctest.h"

#include <set>

#include "latcirc/error.hpp"
#include "paper_circuits.hpp"
#include "rewrite_support.hpp"

using namespace latcirc;
using latcirc::testing::embed;
using latcirc::testing::random_lhs;
using latcirc::testing::simulation_agrees;

namespace {

struct Fixture {
  InterpretedSignature b = builtin_belnap();
  const Interpretation& I = *b.interp;
  const Lattice& L = I.lattice();
  Elem vB = L.bottom(), vT = L.top(), vt = I.value("t"), vf = I.value("f");
  Circuit parse(const char* s) const { return parse_circuit(s, b.sig); }

  Waveform sim0(const Circuit& c, std::size_t ticks) const {
    return simulate(c, I, Waveform{0, {}}, ticks);
  }
};

bool passive_comb(const Circuit& c) { return c->delays == 0 && c->traces == 0 && c->values == 0; }

// Consecutive terms differ only at the recorded locus.
void check_trace_shape(const ReductionTrace& t, const Circuit& start,
                       const std::set<std::string>& rules) {
  Circuit cur = start;
  for (const auto& s : t.steps) {
    CHECK(rules.count(s.rule) == 1);
    CHECK(structurally_equal(subterm_at(cur, s.locus), s.before));
    CHECK(structurally_equal(replace_at(cur, s.locus, s.after), s.term));
    cur = s.term;
  }
}

const std::set<std::string> kStmc{"tightening", "sliding", "superposing", "vanishing", "yanking"};

RandomCircuitLimits limits(std::size_t in, std::size_t out) {
  RandomCircuitLimits l;
  l.inputs = in;
  l.outputs = out;
  return l;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "trace-delay form shapes") {
  Circuit comb = parse("seq(par(gate(AND), id1), gate(OR))");
  auto r = to_trace_delay_form(comb, I);
  CHECK(r.form.x == 0);
  CHECK(r.form.d == 0);
  CHECK(r.form.k == 0);
  CHECK(structurally_equal(r.form.core, comb));
  CHECK(r.trace.steps.empty());

  auto vd = to_trace_delay_form(parse("seq(val(t), delay)"), I);
  CHECK(vd.form.x == 0);
  CHECK(vd.form.d == 1);
  CHECK(vd.form.k == 1);
  CHECK(vd.form.init_values == Tuple{vt});
  CHECK(vd.form.m == 0);
  CHECK(vd.form.n == 1);

  Circuit ex = parse(kExampleMealyCircuit);
  auto e = to_trace_delay_form(ex, I);
  CHECK(e.form.x == 2);
  CHECK(e.form.d == 3);
  CHECK(e.form.k == 3);
  CHECK(e.form.init_values == Tuple{vf, vt, vt});
  CHECK(passive_comb(e.form.core));
  CHECK(e.form.core->in == 2 + 3 + 3 + 1);
  CHECK(e.form.core->out == 2 + 3 + 2);
  check_trace_shape(e.trace, ex, kStmc);
  CHECK(structurally_equal(e.trace.steps.back().term, to_circuit(e.form, I)));
  std::mt19937_64 rng(5);
  CHECK(simulation_agrees(ex, to_circuit(e.form, I), I, rng));
}

TEST_CASE_FIXTURE(Fixture, "trace-delay form is sound on random circuits") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Circuit c = random_circuit(rng, I, limits(i % 3, 1 + i % 2));
    auto r = to_trace_delay_form(c, I);
    REQUIRE(passive_comb(r.form.core));
    CHECK(r.form.core->in == r.form.x + r.form.d + r.form.k + r.form.m);
    CHECK(r.form.core->out == r.form.x + r.form.d + r.form.n);
    CHECK(r.form.d == c->delays);
    CHECK(r.form.k == c->values);
    Circuit back = to_circuit(r.form, I);
    CHECK(simulation_agrees(c, back, I, rng));
    check_trace_shape(r.trace, c, kStmc);
  }
}

TEST_CASE_FIXTURE(Fixture, "axiom examples") {
  Circuit fork_lhs = parse("seq(val(t), fork)");
  Circuit r = apply_axiom(fork_lhs, Axiom::Fork, {}, I);
  CHECK(print_circuit(r) == "par(val(t), val(t))");

  Circuit j = apply_axiom(parse("seq(par(val(t), val(f)), join)"), Axiom::Join, {}, I);
  CHECK(j->kind == Kind::Top);

  Circuit g = apply_axiom(parse("seq(par(val(t), val(f)), gate(AND))"), Axiom::Gate, {}, I);
  CHECK(print_circuit(g) == "val(f)");

  CHECK(apply_axiom(parse("seq(val(t), stub)"), Axiom::Stub, {}, I)->kind == Kind::Id);
  CHECK(apply_axiom(parse("seq(bot, delay)"), Axiom::Disconnect, {}, I)->kind == Kind::Bot);
  CHECK(apply_axiom(parse("seq(delay, stub)"), Axiom::Unobservable, {}, I)->kind == Kind::Stub);
  CHECK(print_circuit(apply_axiom(parse("seq(par(delay, delay), gate(OR))"), Axiom::Timelessness,
                                  {}, I)) == "seq(gate(OR), delay)");

  // Inside a context.
  Circuit ctx = parse("par(id1, seq(val(t), fork))");
  CHECK(find_redexes(ctx, Axiom::Fork) == std::vector<Locus>{{1}});
  CHECK(print_circuit(apply_axiom(ctx, Axiom::Fork, {1}, I)) == "par(id1, par(val(t), val(t)))");

  CHECK_THROWS_AS(apply_axiom(fork_lhs, Axiom::Join, {}, I), Error);
  try {
    apply_axiom(parse("seq(delay, fork)"), Axiom::Fork, {}, I);
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PatternMismatch);
  }
  CHECK_THROWS_AS(apply_axiom(fork_lhs, Axiom::Fork, {0, 1}, I), Error);
}

TEST_CASE_FIXTURE(Fixture, "every axiom is sound in random contexts") {
  std::mt19937_64 rng(23);
  for (Axiom a : all_axioms()) {
    for (int i = 0; i < 40; ++i) {
      Circuit lhs = random_lhs(a, rng, I);
      Circuit rhs = apply_axiom(lhs, a, {}, I);
      CHECK(simulation_agrees(lhs, rhs, I, rng));
      Circuit c = embed(lhs, rng, I);
      auto loci = find_redexes(c, a);
      REQUIRE_FALSE(loci.empty());
      for (const auto& l : loci) {
        Circuit out = apply_axiom(c, a, l, I);
        INFO(axiom_name(a), " ", print_circuit(c), " @ ", format_locus(l));
        CHECK(simulation_agrees(c, out, I, rng));
      }
    }
  }
}

TEST_CASE_FIXTURE(Fixture, "generalised streaming") {
  Circuit s = generalised_streaming(parse("seq(reg(t), gate(NOT))"));
  CHECK(print_circuit(s) == "seq(par(seq(val(t), gate(NOT)), seq(gate(NOT), delay)), join)");

  std::mt19937_64 rng(3);
  Circuit idb = parse("seq(reg(f), id1)");
  CHECK(simulation_agrees(idb, generalised_streaming(idb), I, rng));

  Circuit two = seq(parse("par(reg(t), reg(B))"), parse("seq(par(gate(NOT), id1), gate(AND))"));
  CHECK(simulation_agrees(two, generalised_streaming(two), I, rng, 6, 8));

  try {
    generalised_streaming(parse("seq(reg(t), seq(par(id1, val(t)), join))"));
    FAIL("expected NotCombinational");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCombinational);
  }
  CHECK_THROWS_AS(generalised_streaming(parse("seq(delay, gate(NOT))")), Error);
}

TEST_CASE_FIXTURE(Fixture, "unfolding") {
  std::mt19937_64 rng(7);
  Circuit y = parse("trace1(swap)");
  CHECK(simulation_agrees(unfold(y), id(1), I, rng));
  Circuit fb = parse(kFeedbackAndOpen);
  CHECK(simulation_agrees(unfold(fb), fb, I, rng));
  CHECK(sim0(seq(val("t"), unfold(fb)), 4) == sim0(parse(kFeedbackAnd), 4));
  try {
    unfold(parse("gate(NOT)"));
    FAIL("expected NotATrace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotATrace);
  }
  for (int i = 0; i < 100; ++i) {
    std::size_t x = 1 + i % 2;
    Circuit body = random_circuit(rng, I, limits(x + i % 2, x + 1));
    Circuit t = trace(x, body);
    CHECK(simulation_agrees(t, unfold(t), I, rng));
  }
}

TEST_CASE_FIXTURE(Fixture, "instant feedback") {
  std::mt19937_64 rng(9);
  Circuit y = instant_feedback(parse("trace1(swap)"), I);
  CHECK(y->traces == 0);
  CHECK(simulation_agrees(y, id(1), I, rng));

  Circuit fb = instant_feedback(parse(kFeedbackAndOpen), I);
  CHECK(fb->traces == 0);
  Waveform w = sim0(seq(val("t"), fb), 10);
  for (const auto& tick : w.ticks) CHECK(tick == Tuple{vB});

  // Latch: least p with p = p ⊔ a, found by search over the lattice.
  Circuit latch = instant_feedback(parse("trace1(seq(join, fork))"), I);
  for (Elem a = 0; a < L.size(); ++a) {
    std::optional<Elem> least;
    for (Elem p = 0; p < L.size(); ++p)
      if (L.join(p, a) == p && (!least || L.leq(p, *least))) least = p;
    REQUIRE(least);
    CHECK(eval_combinational(latch, I, Tuple{a}) == Tuple{*least});
  }

  // Extra rounds change nothing.
  Circuit more = instant_feedback(parse(kFeedbackAndOpen), I, 3);
  CHECK(simulation_agrees(more, fb, I, rng));

  try {
    instant_feedback(parse("trace1(seq(join, delay, fork))"), I);
    FAIL("expected NotCombinationalCore");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCombinationalCore);
  }

  RandomCircuitLimits lim = limits(2, 3);
  lim.max_delays = 0;
  lim.max_traces = 0;
  for (int i = 0; i < 100; ++i) {
    std::size_t x = 1 + i % 2;
    lim.inputs = x + i % 2;
    lim.outputs = x + 1;
    Circuit t = trace(x, random_circuit(rng, I, lim));
    Circuit r = instant_feedback(t, I);
    CHECK(r->traces == 0);
    CHECK(simulation_agrees(t, r, I, rng));
  }
}

TEST_CASE_FIXTURE(Fixture, "productivity step") {
  auto fb = productivity_step(parse(kFeedbackAnd), I);
  CHECK(fb.values == Tuple{vB});
  CHECK(productivity_step(fb.residual, I).values == Tuple{vB});

  Circuit wave = waveform_circuit(I, Waveform{1, {{vt}, {vf}}});
  auto w = productivity_step(wave, I);
  CHECK(w.values == Tuple{vt});
  Waveform rest = sim0(w.residual, 3);
  CHECK(rest.ticks == std::vector<Tuple>{{vf}, {vB}, {vB}});

  auto n = productivity_step(parse("seq(val(t), gate(NOT))"), I);
  CHECK(n.values == Tuple{vf});
  for (const auto& tick : sim0(n.residual, 4).ticks) CHECK(tick == Tuple{vB});

  std::set<std::string> rules = kStmc;
  rules.insert({"instant-feedback", "unfolding", "generalised-streaming", "extensionality"});
  Circuit ex = parse(("seq(bot, " + std::string(kExampleMealyCircuit) + ")").c_str());
  auto e = productivity_step(ex, I);
  check_trace_shape(e.trace, ex, rules);
  Waveform full = sim0(ex, 5);
  CHECK(e.values == full.ticks[0]);
  Waveform tail = sim0(e.residual, 4);
  CHECK(tail.ticks == std::vector<Tuple>(full.ticks.begin() + 1, full.ticks.end()));
}

TEST_CASE_FIXTURE(Fixture, "reduce_stream matches the simulator") {
  auto fb = reduce_stream(parse(kFeedbackAnd), I, 5);
  CHECK(fb.output.ticks == std::vector<Tuple>(5, Tuple{vB}));

  Circuit wave = waveform_circuit(I, Waveform{1, {{vt}, {vf}, {vT}}});
  CHECK(reduce_stream(wave, I, 4).output.ticks == std::vector<Tuple>{{vt}, {vf}, {vT}, {vB}});

  std::mt19937_64 rng(31);
  RandomCircuitLimits lim = limits(0, 1);
  for (int i = 0; i < 200; ++i) {
    lim.outputs = 1 + i % 2;
    Circuit c = random_circuit(rng, I, lim);
    INFO(print_circuit(c));
    CHECK(reduce_stream(c, I, 6).output == sim0(c, 6));
  }
}
