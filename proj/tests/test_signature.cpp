#include "doctest.h"

#include <fstream>
#include <sstream>

#include "latcirc/error.hpp"
#include "latcirc/signature.hpp"

using namespace latcirc;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

// Rows and columns in the order ⊥, f, t, ⊤ as printed in the paper.
const char* kOrder[] = {"B", "f", "t", "T"};
const char* kAnd[4][4] = {{"B", "f", "B", "f"}, {"f", "f", "f", "f"}, {"B", "f", "t", "T"}, {"f", "f", "T", "T"}};
const char* kOr[4][4] = {{"B", "B", "t", "t"}, {"B", "f", "t", "T"}, {"t", "t", "t", "t"}, {"t", "T", "t", "T"}};
const char* kNot[4] = {"B", "t", "f", "T"};

RawInterpretation raw_belnap(const InterpretedSignature& b) {
  RawInterpretation raw;
  raw.lattice = b.interp->lattice_ptr();
  raw.value_map = {{"t", b.interp->value("t")}, {"f", b.interp->value("f")}};
  for (const auto& g : b.sig.gates) raw.gate_tables.emplace_back(g.name, b.interp->gate(g.name));
  return raw;
}

}  // namespace

TEST_CASE("belnap truth tables match the figure") {
  auto b = builtin_belnap();
  const Interpretation& I = *b.interp;
  auto e = [&](const char* s) { return *I.element_of(s); };
  std::size_t checked = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Tuple in{e(kOrder[i]), e(kOrder[j])};
      CHECK(I.apply(*b.sig.find_gate("AND"), in) == e(kAnd[i][j]));
      CHECK(I.apply(*b.sig.find_gate("OR"), in) == e(kOr[i][j]));
      checked += 2;
    }
    Tuple in{e(kOrder[i])};
    CHECK(I.apply(*b.sig.find_gate("NOT"), in) == e(kNot[i]));
    ++checked;
  }
  CHECK(checked == 36);
  CHECK(I.apply(0, Tuple{e("t"), e("f")}) == e("f"));
  CHECK(I.apply(1, Tuple{e("B"), e("T")}) == e("t"));
  CHECK(I.apply(2, Tuple{e("T")}) == e("T"));
}

TEST_CASE("belnap signature") {
  auto b = builtin_belnap();
  CHECK(b.sig.values == std::vector<std::string>{"t", "f"});
  REQUIRE(b.sig.gates.size() == 3);
  CHECK(b.sig.gates[0] == GateDecl{"AND", 2});
  CHECK(b.sig.gates[1] == GateDecl{"OR", 2});
  CHECK(b.sig.gates[2] == GateDecl{"NOT", 1});
  CHECK(b.interp->symbol_of(b.interp->lattice().bottom()) == "B");
  CHECK(b.interp->symbol_of(b.interp->value("t")) == "t");
  // revalidating the builtin succeeds
  validate_interpretation(b.sig, raw_belnap(b));
}

TEST_CASE("validation failures") {
  auto b = builtin_belnap();
  const Lattice& L = b.interp->lattice();
  const Elem t = b.interp->value("t");

  SUBCASE("NOT maps bottom to t") {
    RawInterpretation raw = raw_belnap(b);
    raw.gate_tables[2].second.row(L.bottom())[0] = t;
    CHECK(code_of([&] { validate_interpretation(b.sig, raw); }) == ErrorCode::GateNotBottomPreserving);
  }
  SUBCASE("f unmapped") {
    RawInterpretation raw = raw_belnap(b);
    raw.value_map = {{"t", t}};
    CHECK(code_of([&] { validate_interpretation(b.sig, raw); }) == ErrorCode::ValueMapNotBijective);
  }
  SUBCASE("value mapped to top") {
    RawInterpretation raw = raw_belnap(b);
    raw.value_map[1].second = L.top();
    CHECK(code_of([&] { validate_interpretation(b.sig, raw); }) == ErrorCode::ValueMapNotBijective);
  }
  SUBCASE("non-monotone gate") {
    RawInterpretation raw = raw_belnap(b);
    // NOT with t ↦ T but T ↦ f
    auto& tab = raw.gate_tables[2].second;
    tab.row(L.top())[0] = b.interp->value("f");
    CHECK(code_of([&] { validate_interpretation(b.sig, raw); }) == ErrorCode::GateNotMonotone);
  }
  SUBCASE("arity zero gate") {
    Signature sig = b.sig;
    sig.gates.push_back({"K", 0});
    RawInterpretation raw = raw_belnap(b);
    raw.gate_tables.emplace_back("K", FunctionTable{0, 1, {L.bottom()}});
    CHECK(code_of([&] { validate_interpretation(sig, raw); }) == ErrorCode::ArityMismatch);
  }
  SUBCASE("table size disagrees with arity") {
    RawInterpretation raw = raw_belnap(b);
    raw.gate_tables[2].second = raw.gate_tables[0].second;
    CHECK(code_of([&] { validate_interpretation(b.sig, raw); }) == ErrorCode::ArityMismatch);
  }
}

TEST_CASE("interpretation file over a chain") {
  auto lat = std::make_shared<const Lattice>(lattice_from_covers({"B", "m", "T"}, {{"B", "m"}, {"m", "T"}}));
  auto parsed = parse_interpretation(R"(
values: m
gates: UP/1
map:
  m -> m
table UP:
  B -> B
  m -> T
  T -> T
)",
                                     lat);
  CHECK(parsed.interp->apply(0, Tuple{*lat->find("m")}) == lat->top());
  CHECK(code_of([&] { parse_interpretation("values: m\ngates: UP/1\nmap:\n m -> m\ntable UP:\n B -> B\n", lat); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([&] { parse_interpretation("values: m\ngates: UP/1\nmap:\n m -> m\ntable UP:\n B -> B\n m -> T\n T -> m\n", lat); }) ==
        ErrorCode::GateNotMonotone);
}

TEST_CASE("shipped Belnap interpretation file matches the built-in one") {
  auto b = builtin_belnap();
  std::ifstream in(LATCIRC_DATA_DIR "/belnap.interp");
  std::stringstream ss;
  ss << in.rdbuf();
  std::ifstream lin(LATCIRC_DATA_DIR "/belnap.lattice");
  std::stringstream ls;
  ls << lin.rdbuf();
  auto lat = std::make_shared<const Lattice>(parse_lattice(ls.str()));
  auto parsed = parse_interpretation(ss.str(), lat);
  REQUIRE(parsed.sig.gates == b.sig.gates);
  for (std::size_t g = 0; g < b.sig.gates.size(); ++g) CHECK(parsed.interp->gate(g).cells == b.interp->gate(g).cells);
}
