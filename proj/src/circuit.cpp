#include "latcirc/circuit.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "latcirc/error.hpp"
#include "text_util.hpp"

namespace latcirc {

namespace {

Circuit leaf(Kind kind, std::size_t in, std::size_t out, std::string symbol = {},
             std::size_t width = 0) {
  auto n = std::make_shared<Node>(Node{kind, std::move(symbol), width, nullptr, nullptr, in, out});
  if (kind == Kind::Delay) n->delays = 1;
  if (kind == Kind::Value || kind == Kind::Top) n->values = 1;
  if (kind == Kind::Gate) n->gates = 1;
  return n;
}

Circuit composite(Kind kind, Circuit a, Circuit b, std::size_t in, std::size_t out,
                  std::size_t width = 0) {
  auto n = std::make_shared<Node>(Node{kind, {}, width, a, b, in, out});
  n->delays = a->delays + (b ? b->delays : 0);
  n->values = a->values + (b ? b->values : 0);
  n->gates = a->gates + (b ? b->gates : 0);
  n->traces = a->traces + (b ? b->traces : 0) + (kind == Kind::Trace ? 1 : 0);
  n->size = 1 + a->size + (b ? b->size : 0);
  return n;
}

std::string arity_str(const Circuit& c) {
  return std::to_string(c->in) + "->" + std::to_string(c->out);
}

}  // namespace

Circuit val(std::string symbol) { return leaf(Kind::Value, 0, 1, std::move(symbol)); }
Circuit bot() { return leaf(Kind::Bot, 0, 1); }
Circuit top() { return leaf(Kind::Top, 0, 1); }
Circuit gate(std::string symbol, std::size_t arity) {
  return leaf(Kind::Gate, arity, 1, std::move(symbol), arity);
}
Circuit dup() { return leaf(Kind::Fork, 1, 2); }
Circuit join() { return leaf(Kind::Join, 2, 1); }
Circuit stub() { return leaf(Kind::Stub, 1, 0); }
Circuit delay() { return leaf(Kind::Delay, 1, 1); }
Circuit id(std::size_t n) { return leaf(Kind::Id, n, n, {}, n); }
Circuit swap() { return leaf(Kind::Swap, 2, 2); }

Circuit seq(Circuit f, Circuit g) {
  if (f->out != g->in)
    throw Error(ErrorCode::ArityMismatch,
                "seq of " + arity_str(f) + " and " + arity_str(g) + ": " +
                    std::to_string(f->out) + " outputs vs " + std::to_string(g->in) + " inputs");
  std::size_t in = f->in, out = g->out;
  return composite(Kind::Seq, std::move(f), std::move(g), in, out);
}

Circuit par(Circuit f, Circuit g) {
  std::size_t in = f->in + g->in, out = f->out + g->out;
  return composite(Kind::Par, std::move(f), std::move(g), in, out);
}

Circuit trace(std::size_t x, Circuit f) {
  if (f->in < x || f->out < x)
    throw Error(ErrorCode::ArityMismatch, "trace" + std::to_string(x) + " of " + arity_str(f));
  std::size_t in = f->in - x, out = f->out - x;
  return composite(Kind::Trace, std::move(f), nullptr, in, out, x);
}

Circuit seq_all(const std::vector<Circuit>& cs) {
  if (cs.empty()) throw Error(ErrorCode::ArityMismatch, "empty seq");
  Circuit acc = cs[0];
  for (std::size_t i = 1; i < cs.size(); ++i) acc = seq(acc, cs[i]);
  return acc;
}

Circuit par_all(const std::vector<Circuit>& cs) {
  if (cs.empty()) return id(0);
  Circuit acc = cs[0];
  for (std::size_t i = 1; i < cs.size(); ++i) acc = par(acc, cs[i]);
  return acc;
}

Circuit par_n(const Circuit& c, std::size_t n) { return par_all(std::vector<Circuit>(n, c)); }

bool structurally_equal(const Circuit& x, const Circuit& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind || x->symbol != y->symbol || x->width != y->width || x->in != y->in ||
      x->out != y->out || x->size != y->size)
    return false;
  return structurally_equal(x->a, y->a) && structurally_equal(x->b, y->b);
}

Circuit value_node(const Interpretation& interp, Elem e) {
  if (e == interp.lattice().bottom()) return bot();
  if (e == interp.lattice().top()) return top();
  return val(interp.symbol_of(e));
}

Elem value_node_elem(const Interpretation& interp, const Node& n) {
  switch (n.kind) {
    case Kind::Bot: return interp.lattice().bottom();
    case Kind::Top: return interp.lattice().top();
    case Kind::Value: return interp.value(n.symbol);
    default: throw Error(ErrorCode::PatternMismatch, "not a value generator");
  }
}

bool is_value_generator(const Node& n) {
  return n.kind == Kind::Value || n.kind == Kind::Bot || n.kind == Kind::Top;
}

Circuit register_of(Circuit head) { return seq(par(std::move(head), delay()), join()); }

Circuit register_of(const Interpretation& interp, Elem v) {
  return register_of(value_node(interp, v));
}

Circuit register_head(const Circuit& c) {
  if (c->kind != Kind::Seq || c->b->kind != Kind::Join) return nullptr;
  const Circuit& p = c->a;
  if (p->kind != Kind::Par || p->b->kind != Kind::Delay || !is_value_generator(*p->a)) return nullptr;
  return p->a;
}

Circuit waveform_circuit(const Interpretation& interp, const Waveform& w) {
  if (w.width == 0) return id(0);
  std::vector<Circuit> wires;
  for (std::size_t j = 0; j < w.width; ++j) {
    Circuit c = bot();
    for (std::size_t t = w.ticks.size(); t-- > 0;) c = seq(c, register_of(interp, w.ticks[t].at(j)));
    wires.push_back(c);
  }
  return par_all(wires);
}

Circuit diagonal(std::size_t n) {
  if (n == 0) return id(0);
  Circuit d = dup();
  for (std::size_t k = 1; k < n; ++k)
    d = seq(par(d, dup()), par(par(id(k), block_swap(k, 1)), id(1)));
  return d;
}

Circuit discard(std::size_t n) {
  if (n == 0) return id(0);
  return par_n(stub(), n);
}

Circuit block_swap(std::size_t a, std::size_t b) {
  std::vector<std::size_t> target(a + b);
  for (std::size_t i = 0; i < a; ++i) target[i] = b + i;
  for (std::size_t j = 0; j < b; ++j) target[a + j] = j;
  return permutation(target);
}

Circuit permutation(const std::vector<std::size_t>& target) {
  const std::size_t n = target.size();
  std::vector<std::size_t> cur = target;
  std::vector<Circuit> layers;
  for (std::size_t pass = 0;; ++pass) {
    bool any = false;
    std::vector<Circuit> parts;
    std::size_t pending_ids = 0;
    auto flush = [&] {
      if (pending_ids) parts.push_back(id(pending_ids));
      pending_ids = 0;
    };
    std::size_t p = 0;
    if (pass % 2 == 1 && n > 0) {
      pending_ids = 1;
      p = 1;
    }
    while (p < n) {
      if (p + 1 < n && cur[p] > cur[p + 1]) {
        flush();
        parts.push_back(swap());
        std::swap(cur[p], cur[p + 1]);
        any = true;
        p += 2;
      } else if (p + 1 < n) {
        pending_ids += 2;
        p += 2;
      } else {
        pending_ids += 1;
        p += 1;
      }
    }
    flush();
    if (any) layers.push_back(par_all(parts));
    bool sorted = true;
    for (std::size_t i = 0; i + 1 < n; ++i) sorted = sorted && cur[i] < cur[i + 1];
    if (sorted) break;
  }
  if (layers.empty()) return id(n);
  return seq_all(layers);
}

bool is_wiring(const Circuit& c) {
  switch (c->kind) {
    case Kind::Id:
    case Kind::Swap: return true;
    case Kind::Seq:
    case Kind::Par: return is_wiring(c->a) && is_wiring(c->b);
    default: return false;
  }
}

std::vector<std::size_t> wiring_map(const Circuit& c) {
  switch (c->kind) {
    case Kind::Id: {
      std::vector<std::size_t> m(c->width);
      std::iota(m.begin(), m.end(), 0);
      return m;
    }
    case Kind::Swap: return {1, 0};
    case Kind::Seq: {
      auto f = wiring_map(c->a), g = wiring_map(c->b);
      std::vector<std::size_t> m(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) m[j] = f[g[j]];
      return m;
    }
    case Kind::Par: {
      auto f = wiring_map(c->a), g = wiring_map(c->b);
      for (auto& v : g) v += c->a->in;
      f.insert(f.end(), g.begin(), g.end());
      return f;
    }
    default: throw Error(ErrorCode::PatternMismatch, "not a wiring term");
  }
}

Classification classify(const Circuit& c) {
  Level level = c->traces ? Level::Sequential : c->delays ? Level::Temporal : Level::Combinational;
  return {level, c->in == 0, c->values == 0};
}

std::string classification_name(const Classification& k) {
  std::string s = k.level == Level::Combinational ? "combinational"
                  : k.level == Level::Temporal    ? "temporal"
                                                  : "sequential";
  s += k.closed ? ", closed" : ", open";
  s += k.passive ? ", passive" : ", valued";
  return s;
}

// ---- printing ----

namespace {

void print_into(const Circuit& c, std::string& out);

void collect_spine(const Circuit& c, Kind kind, std::vector<Circuit>& items) {
  if (c->kind == kind && !(kind == Kind::Seq && register_head(c))) {
    collect_spine(c->a, kind, items);
    items.push_back(c->b);
  } else {
    items.push_back(c);
  }
}

void print_into(const Circuit& c, std::string& out) {
  switch (c->kind) {
    case Kind::Value: out += "val(" + c->symbol + ")"; return;
    case Kind::Bot: out += "bot"; return;
    case Kind::Top: out += "top"; return;
    case Kind::Gate: out += "gate(" + c->symbol + ")"; return;
    case Kind::Fork: out += "fork"; return;
    case Kind::Join: out += "join"; return;
    case Kind::Stub: out += "stub"; return;
    case Kind::Delay: out += "delay"; return;
    case Kind::Swap: out += "swap"; return;
    case Kind::Id: out += "id" + std::to_string(c->width); return;
    case Kind::Trace:
      out += "trace" + std::to_string(c->width) + "(";
      print_into(c->a, out);
      out += ")";
      return;
    case Kind::Seq:
    case Kind::Par: {
      if (Circuit head = register_head(c)) {
        out += "reg(";
        out += head->kind == Kind::Bot ? "B" : head->kind == Kind::Top ? "T" : head->symbol;
        out += ")";
        return;
      }
      // Only the left spine is flattened, matching how the parser associates.
      std::vector<Circuit> items;
      collect_spine(c->a, c->kind, items);
      items.push_back(c->b);
      out += c->kind == Kind::Seq ? "seq(" : "par(";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        print_into(items[i], out);
      }
      out += ")";
      return;
    }
  }
}

}  // namespace

std::string print_circuit(const Circuit& c) {
  std::string out;
  print_into(c, out);
  return out;
}

// ---- parsing ----

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Circuit parse_top() {
    Circuit c = expr();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return c;
  }

 private:
  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::SyntaxError) {
    throw Error(code, location(pos_) + msg);
  }

  std::string location(std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
  }

  void skip() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  static bool word_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  }

  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
    if (start == pos_) {
      if (pos_ >= text_.size()) fail("unexpected end of input");
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char ch) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != ch)
      fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  bool accept(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  static std::optional<std::size_t> suffix_number(const std::string& w, std::string_view prefix) {
    if (w.size() <= prefix.size() || w.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    std::size_t n = 0;
    for (std::size_t i = prefix.size(); i < w.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(w[i]))) return std::nullopt;
      n = n * 10 + static_cast<std::size_t>(w[i] - '0');
    }
    return n;
  }

  template <class F>
  Circuit located(std::size_t at, F&& build) {
    try {
      return build();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SyntaxError) throw;
      throw Error(e.code(), location(at) + e.what());
    }
  }

  Circuit expr() {
    skip();
    const std::size_t at = pos_;
    std::string w = word();
    if (w == "swap") return swap();
    if (w == "fork") return dup();
    if (w == "join") return join();
    if (w == "stub") return stub();
    if (w == "bot") return bot();
    if (w == "top") return top();
    if (w == "delay") return delay();
    if (auto n = suffix_number(w, "id")) return id(*n);
    if (w == "val") {
      expect('(');
      std::string s = word();
      expect(')');
      if (!sig_.find_value(s)) {
        pos_ = at;
        fail("unknown value '" + s + "'", ErrorCode::UnknownValue);
      }
      return val(s);
    }
    if (w == "gate") {
      expect('(');
      std::string s = word();
      expect(')');
      auto g = sig_.find_gate(s);
      if (!g) {
        pos_ = at;
        fail("unknown gate '" + s + "'", ErrorCode::UnknownGate);
      }
      return gate(s, sig_.gates[*g].arity);
    }
    if (w == "reg") {
      expect('(');
      std::string s = word();
      expect(')');
      if (s == "B") return register_of(bot());
      if (s == "T") return register_of(top());
      if (!sig_.find_value(s)) {
        pos_ = at;
        fail("unknown value '" + s + "'", ErrorCode::UnknownValue);
      }
      return register_of(val(s));
    }
    if (w == "seq" || w == "par") {
      expect('(');
      std::vector<Circuit> items{expr()};
      while (accept(',')) items.push_back(expr());
      expect(')');
      if (items.size() < 2) {
        pos_ = at;
        fail(w + " needs at least two operands");
      }
      return located(at, [&] { return w == "seq" ? seq_all(items) : par_all(items); });
    }
    if (auto x = suffix_number(w, "trace")) {
      expect('(');
      Circuit body = expr();
      expect(')');
      return located(at, [&] { return trace(*x, body); });
    }
    pos_ = at;
    fail("unknown term '" + w + "'");
  }
};

}  // namespace

Circuit parse_circuit(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse_top();
}

// ---- flattening ----

namespace {

struct Flattener {
  std::vector<std::size_t> parent;
  Graph g;

  std::size_t fresh() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  std::size_t find(std::size_t w) {
    while (parent[w] != w) w = parent[w] = parent[parent[w]];
    return w;
  }

  std::vector<std::size_t> build(const Circuit& c, std::vector<std::size_t> ins) {
    switch (c->kind) {
      case Kind::Id: return ins;
      case Kind::Swap: return {ins[1], ins[0]};
      case Kind::Seq: return build(c->b, build(c->a, std::move(ins)));
      case Kind::Par: {
        std::vector<std::size_t> left(ins.begin(), ins.begin() + c->a->in);
        std::vector<std::size_t> right(ins.begin() + c->a->in, ins.end());
        auto o = build(c->a, std::move(left));
        auto o2 = build(c->b, std::move(right));
        o.insert(o.end(), o2.begin(), o2.end());
        return o;
      }
      case Kind::Trace: {
        std::vector<std::size_t> loop(c->width);
        for (auto& w : loop) w = fresh();
        std::vector<std::size_t> body_in = loop;
        body_in.insert(body_in.end(), ins.begin(), ins.end());
        auto o = build(c->a, std::move(body_in));
        for (std::size_t i = 0; i < c->width; ++i) parent[find(loop[i])] = find(o[i]);
        return {o.begin() + c->width, o.end()};
      }
      default: {
        GraphNode n{c->kind, c->symbol, std::move(ins), {}};
        for (std::size_t i = 0; i < c->out; ++i) n.outs.push_back(fresh());
        auto outs = n.outs;
        g.nodes.push_back(std::move(n));
        return outs;
      }
    }
  }
};

}  // namespace

Graph flatten(const Circuit& c) {
  Flattener f;
  std::vector<std::size_t> ins(c->in);
  for (auto& w : ins) w = f.fresh();
  auto outs = f.build(c, ins);

  // Renumber union-find classes densely.
  std::vector<std::size_t> dense(f.parent.size(), SIZE_MAX);
  std::size_t next = 0;
  auto map = [&](std::size_t w) {
    std::size_t r = f.find(w);
    if (dense[r] == SIZE_MAX) dense[r] = next++;
    return dense[r];
  };
  Graph g;
  for (auto w : ins) g.inputs.push_back(map(w));
  for (auto& n : f.g.nodes) {
    for (auto& w : n.ins) w = map(w);
    for (auto& w : n.outs) w = map(w);
  }
  for (auto w : outs) g.outputs.push_back(map(w));
  g.nodes = std::move(f.g.nodes);
  g.wires = next;
  return g;
}

std::string to_dot(const Circuit& c) {
  Graph g = flatten(c);
  std::ostringstream os;
  os << "digraph circuit {\n  rankdir=LR;\n";
  std::vector<std::string> driver(g.wires);
  for (std::size_t i = 0; i < g.inputs.size(); ++i) {
    os << "  in" << i << " [shape=circle,label=\"in" << i << "\"];\n";
    driver[g.inputs[i]] = "in" + std::to_string(i);
  }
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const GraphNode& n = g.nodes[k];
    std::string label;
    switch (n.kind) {
      case Kind::Value: label = n.symbol; break;
      case Kind::Bot: label = "B"; break;
      case Kind::Top: label = "T"; break;
      case Kind::Gate: label = n.symbol; break;
      case Kind::Fork: label = "fork"; break;
      case Kind::Join: label = "join"; break;
      case Kind::Stub: label = "stub"; break;
      case Kind::Delay: label = "delay"; break;
      default: label = "?"; break;
    }
    const char* shape = n.kind == Kind::Delay ? "box" : n.kind == Kind::Gate ? "ellipse" : "plain";
    os << "  n" << k << " [shape=" << shape << ",label=\"" << label << "\"];\n";
    for (auto w : n.outs) driver[w] = "n" + std::to_string(k);
  }
  for (std::size_t i = 0; i < g.outputs.size(); ++i)
    os << "  out" << i << " [shape=doublecircle,label=\"out" << i << "\"];\n";
  std::size_t undriven = 0;
  auto src = [&](std::size_t w) {
    if (driver[w].empty()) {
      driver[w] = "u" + std::to_string(undriven++);
      os << "  " << driver[w] << " [shape=point];\n";
    }
    return driver[w];
  };
  for (std::size_t k = 0; k < g.nodes.size(); ++k)
    for (std::size_t p = 0; p < g.nodes[k].ins.size(); ++p)
      os << "  " << src(g.nodes[k].ins[p]) << " -> n" << k << " [label=\"w" << g.nodes[k].ins[p]
         << "\"];\n";
  for (std::size_t i = 0; i < g.outputs.size(); ++i)
    os << "  " << src(g.outputs[i]) << " -> out" << i << " [label=\"w" << g.outputs[i] << "\"];\n";
  os << "}\n";
  return os.str();
}

// ---- waveforms ----

Waveform parse_waveform(std::string_view text, const Interpretation& interp, std::size_t width) {
  Waveform w{width, {}};
  std::size_t line_no = 0;
  for (const std::string& raw : detail::split_lines(text)) {
    ++line_no;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    Tuple t;
    for (auto& s : detail::split(line, ',')) {
      std::string sym = detail::trim(s);
      auto e = interp.element_of(sym);
      if (!e)
        throw Error(ErrorCode::UnknownValue,
                    "waveform line " + std::to_string(line_no) + ": unknown symbol '" + sym + "'");
      t.push_back(*e);
    }
    if (t.size() != width)
      throw Error(ErrorCode::WidthMismatch, "waveform line " + std::to_string(line_no) + " has " +
                                                std::to_string(t.size()) + " entries, expected " +
                                                std::to_string(width));
    w.ticks.push_back(std::move(t));
  }
  return w;
}

std::string print_waveform(const Waveform& w, const Interpretation& interp) {
  std::string out;
  for (const auto& t : w.ticks) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ',';
      out += interp.symbol_of(t[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace latcirc
