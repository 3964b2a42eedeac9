#include "zonecost/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace zonecost::model {

using dbm::ClockIndex;
using dbm::IntConstraint;

std::vector<IntConstraint> constraints(Guard const & g) {
  std::vector<IntConstraint> out;
  for (auto const & a : g) {
    switch (a.op) {
      case Op::lt: out.push_back(dbm::upper_bound<std::int64_t>(a.clock, a.value, true)); break;
      case Op::le: out.push_back(dbm::upper_bound<std::int64_t>(a.clock, a.value)); break;
      case Op::gt: out.push_back(dbm::lower_bound<std::int64_t>(a.clock, a.value, true)); break;
      case Op::ge: out.push_back(dbm::lower_bound<std::int64_t>(a.clock, a.value)); break;
      case Op::eq:
        out.push_back(dbm::upper_bound<std::int64_t>(a.clock, a.value));
        out.push_back(dbm::lower_bound<std::int64_t>(a.clock, a.value));
        break;
    }
  }
  return out;
}

bool satisfies(Guard const & g, std::span<Rational const> v) {
  for (auto const & a : g) {
    Rational const & x = v[a.clock - 1];
    Rational const c = to_rational(a.value);
    bool ok = false;
    switch (a.op) {
      case Op::lt: ok = x < c; break;
      case Op::le: ok = x <= c; break;
      case Op::eq: ok = x == c; break;
      case Op::ge: ok = x >= c; break;
      case Op::gt: ok = x > c; break;
    }
    if (!ok) return false;
  }
  return true;
}

bool Automaton::has_goal() const {
  return std::any_of(locations.begin(), locations.end(), [](Location const & l) { return l.goal; });
}

bool Automaton::has_negative_weights() const {
  return std::any_of(locations.begin(), locations.end(), [](Location const & l) { return l.rate < 0; }) ||
         std::any_of(edges.begin(), edges.end(), [](Edge const & e) { return e.weight < 0; });
}

std::optional<std::size_t> Automaton::location_index(std::string_view n) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == n) return i;
  return std::nullopt;
}

ParseError::ParseError(std::size_t l, std::size_t c, std::string const & what)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + what), line(l), column(c) {}

RunError::RunError(std::size_t s, std::string const & what)
    : std::runtime_error("step " + std::to_string(s) + ": " + what), step(s) {}

namespace {

struct Token {
  enum Kind { word, number, symbol, end } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char const c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
      out.push_back({Token::word, std::string(s.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::number, std::string(s.substr(i, j - i)), line, col});
      advance(j - i);
    } else {
      static constexpr std::string_view two[] = {"->", "&&", "<=", ">=", "=="};
      std::size_t len = 1;
      for (auto t : two)
        if (s.substr(i, 2) == t) len = 2;
      std::string text(s.substr(i, len));
      if (len == 1 && std::string_view(";,<>=!?").find(c) == std::string_view::npos)
        throw ParseError(line, col, "unexpected character '" + text + "'");
      out.push_back({Token::symbol, text, line, col});
      advance(len);
    }
  }
  out.push_back({Token::end, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Network run() {
    if (peek().kind == Token::end) fail(peek(), "empty model");
    expect_word("clocks");
    while (!is_symbol(";")) {
      Token const & t = take();
      if (t.kind == Token::symbol && t.text == ",") continue;
      if (t.kind != Token::word) fail(t, "expected a clock name");
      if (std::find(net_.clocks.begin(), net_.clocks.end(), t.text) != net_.clocks.end())
        fail(t, "duplicate clock '" + t.text + "'");
      net_.clocks.push_back(t.text);
    }
    take();
    if (peek().kind == Token::end) fail(peek(), "expected 'automaton'");
    while (peek().kind != Token::end) automaton();
    check_channels();
    return std::move(net_);
  }

 private:
  struct PendingEdge {
    Token source, target;
    Edge edge;
  };

  Token const & peek() const { return toks_[pos_]; }
  Token const & take() {
    Token const & t = toks_[pos_];
    if (t.kind != Token::end) ++pos_;
    return t;
  }
  bool is_symbol(std::string_view s) const { return peek().kind == Token::symbol && peek().text == s; }
  bool is_word(std::string_view s) const { return peek().kind == Token::word && peek().text == s; }
  [[noreturn]] static void fail(Token const & t, std::string const & what) { throw ParseError(t.line, t.column, what); }

  void expect_symbol(std::string_view s) {
    if (!is_symbol(s)) fail(peek(), "expected '" + std::string(s) + "'");
    take();
  }
  void expect_word(std::string_view s) {
    if (!is_word(s)) fail(peek(), "expected '" + std::string(s) + "'");
    take();
  }
  std::string name() {
    if (peek().kind != Token::word) fail(peek(), "expected a name");
    return take().text;
  }
  std::int64_t integer() {
    Token const & t = peek();
    if (t.kind != Token::number) fail(t, "expected an integer");
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(t, "integer out of range");
    take();
    return v;
  }
  ClockIndex clock() {
    Token const & t = peek();
    if (t.kind != Token::word) fail(t, "expected a clock");
    auto it = std::find(net_.clocks.begin(), net_.clocks.end(), t.text);
    if (it == net_.clocks.end()) fail(t, "unknown clock '" + t.text + "'");
    take();
    return static_cast<ClockIndex>(it - net_.clocks.begin()) + 1;
  }

  Guard guard() {
    Guard g;
    while (true) {
      Atom a;
      a.clock = clock();
      Token const & op = peek();
      if (op.kind != Token::symbol) fail(op, "expected a comparison");
      if (op.text == "<") a.op = Op::lt;
      else if (op.text == "<=") a.op = Op::le;
      else if (op.text == "=" || op.text == "==") a.op = Op::eq;
      else if (op.text == ">=") a.op = Op::ge;
      else if (op.text == ">") a.op = Op::gt;
      else fail(op, "expected a comparison");
      take();
      Token const c = peek();
      a.value = integer();
      if (a.value < 0) fail(c, "guard constants must be natural numbers");
      g.push_back(a);
      if (!is_symbol("&&")) return g;
      take();
    }
  }

  void automaton() {
    expect_word("automaton");
    Token const head = peek();
    Automaton a;
    a.name = name();
    a.clocks = net_.clocks;
    for (auto const & o : net_.automata)
      if (o.name == a.name) fail(head, "duplicate automaton '" + a.name + "'");
    std::optional<std::size_t> initial;
    std::vector<PendingEdge> pending;
    while (is_word("location") || is_word("edge")) {
      if (take().text == "location") {
        Token const at = peek();
        Location l;
        l.name = name();
        if (a.location_index(l.name)) fail(at, "duplicate location '" + l.name + "'");
        expect_word("rate");
        l.rate = integer();
        std::set<std::string> seen;
        while (!is_symbol(";")) {
          Token const & k = peek();
          if (k.kind != Token::word || !seen.insert(k.text).second) fail(k, "unexpected '" + k.text + "'");
          if (k.text == "invariant") {
            take();
            l.invariant = guard();
          } else if (k.text == "goal") {
            take();
            l.goal = true;
          } else if (k.text == "initial") {
            if (initial) fail(k, "second initial location");
            take();
            initial = a.locations.size();
          } else {
            fail(k, "unexpected '" + k.text + "'");
          }
        }
        take();
        a.locations.push_back(std::move(l));
      } else {
        PendingEdge pe;
        pe.source = peek();
        name();
        expect_symbol("->");
        pe.target = peek();
        name();
        std::set<std::string> seen;
        while (!is_symbol(";")) {
          Token const & k = peek();
          if (k.kind != Token::word || !seen.insert(k.text).second) fail(k, "unexpected '" + k.text + "'");
          take();
          if (k.text == "guard") {
            pe.edge.guard = guard();
          } else if (k.text == "reset") {
            do {
              if (is_symbol(",")) take();
              pe.edge.resets.push_back(clock());
            } while (is_symbol(","));
          } else if (k.text == "weight") {
            pe.edge.weight = integer();
          } else if (k.text == "sync") {
            Sync s;
            s.channel = name();
            if (is_symbol("!")) s.send = true;
            else if (is_symbol("?")) s.send = false;
            else fail(peek(), "expected '!' or '?'");
            take();
            pe.edge.sync = s;
          } else {
            fail(k, "unexpected '" + k.text + "'");
          }
        }
        take();
        pending.push_back(std::move(pe));
      }
    }
    if (a.locations.empty()) fail(head, "automaton '" + a.name + "' has no location");
    if (!initial) fail(head, "automaton '" + a.name + "' has no initial location");
    a.initial = *initial;
    for (auto & pe : pending) {
      auto s = a.location_index(pe.source.text);
      if (!s) fail(pe.source, "unknown location '" + pe.source.text + "'");
      auto t = a.location_index(pe.target.text);
      if (!t) fail(pe.target, "unknown location '" + pe.target.text + "'");
      pe.edge.source = *s;
      pe.edge.target = *t;
      if (pe.edge.sync) channel_uses_.push_back({pe.source, *pe.edge.sync});
      a.edges.push_back(std::move(pe.edge));
    }
    if (peek().kind != Token::end && !is_word("automaton")) fail(peek(), "expected 'location', 'edge' or 'automaton'");
    net_.automata.push_back(std::move(a));
  }

  void check_channels() {
    for (auto const & [tok, s] : channel_uses_) {
      bool matched = std::any_of(channel_uses_.begin(), channel_uses_.end(), [&](auto const & o) {
        return o.second.channel == s.channel && o.second.send != s.send;
      });
      if (!matched) fail(tok, "channel '" + s.channel + "' has no matching " + (s.send ? "receiver" : "sender"));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Network net_;
  std::vector<std::pair<Token, Sync>> channel_uses_;
};

char const * op_text(Op op) {
  switch (op) {
    case Op::lt: return "<";
    case Op::le: return "<=";
    case Op::eq: return "=";
    case Op::ge: return ">=";
    case Op::gt: return ">";
  }
  return "?";
}

void write_guard(std::ostream & os, Guard const & g, std::vector<std::string> const & clocks) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) os << " && ";
    os << clocks[g[i].clock - 1] << ' ' << op_text(g[i].op) << ' ' << g[i].value;
  }
}

}  // namespace

Network parse_model(std::string_view text) { return Parser(text).run(); }

std::string serialize(Network const & n) {
  std::ostringstream os;
  os << "clocks";
  for (auto const & c : n.clocks) os << ' ' << c;
  os << ";\n";
  for (auto const & a : n.automata) {
    os << "\nautomaton " << a.name << '\n';
    for (std::size_t i = 0; i < a.locations.size(); ++i) {
      auto const & l = a.locations[i];
      os << "  location " << l.name << " rate " << l.rate;
      if (!l.invariant.empty()) {
        os << " invariant ";
        write_guard(os, l.invariant, n.clocks);
      }
      if (l.goal) os << " goal";
      if (i == a.initial) os << " initial";
      os << ";\n";
    }
    for (auto const & e : a.edges) {
      os << "  edge " << a.locations[e.source].name << " -> " << a.locations[e.target].name;
      if (!e.guard.empty()) {
        os << " guard ";
        write_guard(os, e.guard, n.clocks);
      }
      if (!e.resets.empty()) {
        os << " reset ";
        for (std::size_t i = 0; i < e.resets.size(); ++i) os << (i ? "," : "") << n.clocks[e.resets[i] - 1];
      }
      if (e.weight != 0) os << " weight " << e.weight;
      if (e.sync) os << " sync " << e.sync->channel << (e.sync->send ? '!' : '?');
      os << ";\n";
    }
  }
  return os.str();
}

Automaton compose(Network const & n) {
  if (n.automata.empty()) throw std::invalid_argument("empty network");
  if (n.automata.size() == 1) return n.automata.front();
  std::size_t const k = n.automata.size();
  std::vector<std::size_t> radix(k);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    radix[i] = n.automata[i].locations.size();
    total *= radix[i];
  }
  // tuple <-> index, first component most significant
  auto index_of = [&](std::vector<std::size_t> const & t) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i) idx = idx * radix[i] + t[i];
    return idx;
  };
  auto tuple_of = [&](std::size_t idx) {
    std::vector<std::size_t> t(k);
    for (std::size_t i = k; i-- > 0;) {
      t[i] = idx % radix[i];
      idx /= radix[i];
    }
    return t;
  };

  Automaton out;
  for (std::size_t i = 0; i < k; ++i) out.name += (i ? "." : "") + n.automata[i].name;
  out.clocks = n.clocks;
  std::vector<bool> has_goal(k);
  for (std::size_t i = 0; i < k; ++i) has_goal[i] = n.automata[i].has_goal();
  bool const any_goal = std::find(has_goal.begin(), has_goal.end(), true) != has_goal.end();

  for (std::size_t idx = 0; idx < total; ++idx) {
    auto const t = tuple_of(idx);
    Location l;
    l.goal = any_goal;
    for (std::size_t i = 0; i < k; ++i) {
      auto const & c = n.automata[i].locations[t[i]];
      l.name += (i ? "." : "") + c.name;
      l.rate += c.rate;
      l.invariant.insert(l.invariant.end(), c.invariant.begin(), c.invariant.end());
      if (has_goal[i] && !c.goal) l.goal = false;
    }
    out.locations.push_back(std::move(l));
  }
  std::vector<std::size_t> init(k);
  for (std::size_t i = 0; i < k; ++i) init[i] = n.automata[i].initial;
  out.initial = index_of(init);

  auto merge_resets = [](std::vector<ClockIndex> a, std::vector<ClockIndex> const & b) {
    for (ClockIndex x : b)
      if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
    return a;
  };

  for (std::size_t idx = 0; idx < total; ++idx) {
    auto const t = tuple_of(idx);
    for (std::size_t i = 0; i < k; ++i) {
      for (auto const & e : n.automata[i].edges) {
        if (e.source != t[i]) continue;
        if (!e.sync) {
          auto u = t;
          u[i] = e.target;
          Edge f = e;
          f.source = idx;
          f.target = index_of(u);
          out.edges.push_back(std::move(f));
          continue;
        }
        if (!e.sync->send) continue;
        for (std::size_t j = 0; j < k; ++j) {
          if (j == i) continue;
          for (auto const & r : n.automata[j].edges) {
            if (r.source != t[j] || !r.sync || r.sync->send || r.sync->channel != e.sync->channel) continue;
            auto u = t;
            u[i] = e.target;
            u[j] = r.target;
            Edge f;
            f.source = idx;
            f.target = index_of(u);
            f.guard = e.guard;
            f.guard.insert(f.guard.end(), r.guard.begin(), r.guard.end());
            f.resets = merge_resets(e.resets, r.resets);
            f.weight = e.weight + r.weight;
            out.edges.push_back(std::move(f));
          }
        }
      }
    }
  }
  return out;
}

MaxConstants max_constants(Automaton const & a) {
  MaxConstants m;
  m.bound.assign(a.clock_count(), std::nullopt);
  auto scan = [&](Guard const & g) {
    for (auto const & atom : g) {
      auto & b = m.bound[atom.clock - 1];
      if (!b || atom.value > *b) b = atom.value;
    }
  };
  for (auto const & l : a.locations) scan(l.invariant);
  for (auto const & e : a.edges) scan(e.guard);
  return m;
}

namespace {

struct Walk {
  std::size_t location;
  std::vector<Rational> clocks;
  Rational cost;
};

void delay(Automaton const & a, Walk & w, Rational const & d, std::size_t step, RunCheck check) {
  if (d < 0) throw RunError(step, "negative delay");
  auto const & loc = a.locations[w.location];
  if (check == RunCheck::strict && !satisfies(loc.invariant, w.clocks))
    throw RunError(step, "invariant of " + loc.name + " violated before the delay");
  for (auto & x : w.clocks) x += d;
  w.cost += d * to_rational(loc.rate);
  if (check == RunCheck::strict && !satisfies(loc.invariant, w.clocks))
    throw RunError(step, "invariant of " + loc.name + " violated after the delay");
}

Walk walk(Automaton const & a, Run const & r, RunCheck check) {
  Walk w{a.initial, std::vector<Rational>(a.clock_count(), Rational(0)), Rational(0)};
  for (std::size_t s = 0; s < r.steps.size(); ++s) {
    auto const & st = r.steps[s];
    delay(a, w, st.delay, s, check);
    if (st.edge >= a.edges.size()) throw RunError(s, "unknown edge");
    auto const & e = a.edges[st.edge];
    if (e.source != w.location) throw RunError(s, "edge does not leave " + a.locations[w.location].name);
    if (check == RunCheck::strict && !satisfies(e.guard, w.clocks)) throw RunError(s, "guard violated");
    for (ClockIndex x : e.resets) w.clocks[x - 1] = 0;
    w.cost += to_rational(e.weight);
    w.location = e.target;
    if (check == RunCheck::strict && !satisfies(a.locations[w.location].invariant, w.clocks))
      throw RunError(s, "invariant of " + a.locations[w.location].name + " violated on entry");
  }
  delay(a, w, r.final_delay, r.steps.size(), check);
  return w;
}

}  // namespace

Rational evaluate_run(Automaton const & a, Run const & r, RunCheck check) { return walk(a, r, check).cost; }

std::size_t run_target(Automaton const & a, Run const & r) { return walk(a, r, RunCheck::cost_only).location; }

std::string to_string(Run const & r, Automaton const & a) {
  std::ostringstream os;
  std::size_t loc = a.initial;
  os << a.locations[loc].name;
  for (auto const & st : r.steps) {
    auto const & e = a.edges[st.edge];
    os << " --" << zonecost::to_string(st.delay) << "--> --e" << st.edge << "--> " << a.locations[e.target].name;
  }
  if (r.final_delay != 0) os << " --" << zonecost::to_string(r.final_delay) << "-->";
  return os.str();
}

}  // namespace zonecost::model
