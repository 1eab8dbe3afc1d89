#include "nilclose/automata.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace nilclose {

namespace {

std::vector<State> sorted_unique(std::vector<State> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// per-state, per-code adjacency built once from the sorted edge list
struct Adjacency {
  std::size_t num_codes;
  std::vector<std::vector<std::vector<State>>> out;  // out[s][c] = targets
  explicit Adjacency(const WordAutomaton& a)
      : num_codes(a.alphabet().num_codes()),
        out(a.num_states(),
            std::vector<std::vector<State>>(a.alphabet().num_codes())) {
    for (const Edge& e : a.edges()) out[e.src][e.label].push_back(e.dst);
  }
};

}  // namespace

WordAutomaton::WordAutomaton(Alphabet alphabet, State num_states,
                             std::vector<Edge> edges,
                             std::vector<State> initials,
                             std::vector<State> finals, bool reduced)
    : alphabet_(std::move(alphabet)),
      num_states_(num_states),
      edges_(std::move(edges)),
      initials_(sorted_unique(std::move(initials))),
      finals_(sorted_unique(std::move(finals))),
      reduced_(reduced) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    if (e.src >= num_states_ || e.dst >= num_states_) {
      throw ValidationError("automaton edge endpoint out of range");
    }
    if (code_index(e.label) >= alphabet_.size()) {
      throw AlphabetError("automaton edge label outside alphabet");
    }
  }
  for (State s : initials_) {
    if (s >= num_states_) throw ValidationError("initial state out of range");
  }
  for (State s : finals_) {
    if (s >= num_states_) throw ValidationError("final state out of range");
  }
}

std::string WordAutomaton::key() const {
  std::ostringstream os;
  os << alphabet_.letters() << '#' << num_states_ << '#' << reduced_ << '#';
  for (State s : initials_) os << s << ',';
  os << '#';
  for (State s : finals_) os << s << ',';
  os << '#';
  for (const Edge& e : edges_) os << e.src << '.' << e.label << '.' << e.dst << ',';
  return os.str();
}

// ---------------------------------------------------------------------------
// rational expressions

struct RationalExpression::Node {
  Kind kind;
  Alphabet alphabet;
  std::optional<ReducedWord> word;  // Literal
  std::shared_ptr<const Node> a, b;
};

RationalExpression RationalExpression::empty(Alphabet alphabet) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Empty;
  n->alphabet = std::move(alphabet);
  return RationalExpression(std::move(n));
}

RationalExpression RationalExpression::literal(ReducedWord w) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->alphabet = w.alphabet();
  n->word = std::move(w);
  return RationalExpression(std::move(n));
}

RationalExpression RationalExpression::alt(RationalExpression a,
                                           RationalExpression b) {
  require_same_alphabet(a.alphabet(), b.alphabet(), "expression union");
  if (a.kind() == Kind::Empty) return b;
  if (b.kind() == Kind::Empty) return a;
  if (a.node_ == b.node_) return a;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  n->alphabet = a.alphabet();
  n->a = a.node_;
  n->b = b.node_;
  return RationalExpression(std::move(n));
}

RationalExpression RationalExpression::seq(RationalExpression a,
                                           RationalExpression b) {
  require_same_alphabet(a.alphabet(), b.alphabet(), "expression concat");
  if (a.kind() == Kind::Empty || b.kind() == Kind::Empty) {
    return empty(a.alphabet());
  }
  if (a.kind() == Kind::Literal && a.literal_word().empty()) return b;
  if (b.kind() == Kind::Literal && b.literal_word().empty()) return a;
  if (a.kind() == Kind::Literal && b.kind() == Kind::Literal) {
    // join literals when no cancellation occurs at the seam, so the
    // letter-level language is unchanged
    const auto& u = a.literal_word().letters();
    const auto& v = b.literal_word().letters();
    if (!u.empty() && !v.empty() && u.back() != inverse_code(v.front())) {
      auto joined = u;
      joined.insert(joined.end(), v.begin(), v.end());
      return literal(ReducedWord::checked(Word(a.alphabet(), std::move(joined))));
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Concat;
  n->alphabet = a.alphabet();
  n->a = a.node_;
  n->b = b.node_;
  return RationalExpression(std::move(n));
}

RationalExpression RationalExpression::star(RationalExpression a) {
  if (a.kind() == Kind::Empty ||
      (a.kind() == Kind::Literal && a.literal_word().empty())) {
    return literal(ReducedWord(a.alphabet()));
  }
  if (a.kind() == Kind::Star) return a;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Star;
  n->alphabet = a.alphabet();
  n->a = a.node_;
  return RationalExpression(std::move(n));
}

RationalExpression::Kind RationalExpression::kind() const {
  return node_->kind;
}

const Alphabet& RationalExpression::alphabet() const {
  return node_->alphabet;
}

const ReducedWord& RationalExpression::literal_word() const {
  assert(node_->kind == Kind::Literal);
  return *node_->word;
}

RationalExpression RationalExpression::left() const {
  assert(node_->a);
  return RationalExpression(node_->a);
}

RationalExpression RationalExpression::right() const {
  assert(node_->b);
  return RationalExpression(node_->b);
}

RationalExpression RationalExpression::child() const {
  assert(node_->a);
  return RationalExpression(node_->a);
}

namespace {

// prec: 0 = union context, 1 = concat context, 2 = star context
void expr_str(const RationalExpression& e, std::string& out, int prec) {
  using Kind = RationalExpression::Kind;
  switch (e.kind()) {
    case Kind::Empty:
      out += '0';
      return;
    case Kind::Literal: {
      const auto& w = e.literal_word();
      if (w.empty()) {
        out += '1';
        return;
      }
      if (w.size() > 1 && prec >= 2) out += '(';
      out += w.str();
      if (w.size() > 1 && prec >= 2) out += ')';
      return;
    }
    case Kind::Union:
      if (prec >= 1) out += '(';
      expr_str(e.left(), out, 0);
      out += '|';
      expr_str(e.right(), out, 0);
      if (prec >= 1) out += ')';
      return;
    case Kind::Concat:
      if (prec >= 2) out += '(';
      expr_str(e.left(), out, 1);
      expr_str(e.right(), out, 1);
      if (prec >= 2) out += ')';
      return;
    case Kind::Star:
      expr_str(e.child(), out, 2);
      out += '*';
      return;
  }
}

}  // namespace

std::string RationalExpression::str() const {
  std::string out;
  expr_str(*this, out, 0);
  return out;
}

namespace {

struct ExprParser {
  const Alphabet& alphabet;
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return text[pos];
  }

  RationalExpression parse() {
    auto e = parse_union();
    if (!at_end()) {
      throw ValidationError("unexpected character in expression: '" +
                            std::string(1, peek()) + "'");
    }
    return e;
  }

  RationalExpression parse_union() {
    auto e = parse_concat();
    while (!at_end() && peek() == '|') {
      ++pos;
      e = RationalExpression::alt(std::move(e), parse_concat());
    }
    return e;
  }

  bool starts_atom() {
    if (at_end()) return false;
    char c = peek();
    return c == '(' || c == '0' || c == '1' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  RationalExpression parse_concat() {
    if (!starts_atom()) {
      throw ValidationError("expected expression atom");
    }
    auto e = parse_starred();
    while (starts_atom()) {
      e = RationalExpression::seq(std::move(e), parse_starred());
    }
    return e;
  }

  RationalExpression parse_starred() {
    auto e = parse_atom();
    while (!at_end() && peek() == '*') {
      ++pos;
      e = RationalExpression::star(std::move(e));
    }
    return e;
  }

  RationalExpression parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      auto e = parse_union();
      if (at_end() || peek() != ')') {
        throw ValidationError("missing ')' in expression");
      }
      ++pos;
      return e;
    }
    if (c == '0') {
      ++pos;
      return RationalExpression::empty(alphabet);
    }
    if (c == '1') {
      ++pos;
      return RationalExpression::literal(ReducedWord(alphabet));
    }
    auto code = alphabet.code_of(c);
    if (!code) {
      throw AlphabetError(std::string("unknown letter '") + c +
                          "' in expression over " + alphabet.letters());
    }
    ++pos;
    return RationalExpression::literal(
        ReducedWord::checked(Word(alphabet, {*code})));
  }
};

}  // namespace

RationalExpression parse_expression(const Alphabet& alphabet,
                                    std::string_view text) {
  ExprParser p{alphabet, text};
  return p.parse();
}

// ---------------------------------------------------------------------------
// epsilon machinery shared by compile and the rational operations

namespace {

struct EpsNfa {
  Alphabet alphabet;
  State n = 0;
  std::vector<Edge> edges;
  std::vector<std::pair<State, State>> eps;
  std::vector<State> initials, finals;

  State fresh() { return n++; }
};

// forward closure over epsilon edges, per state
std::vector<std::vector<State>> eps_closure(State n,
                                            const std::vector<std::pair<State, State>>& eps) {
  std::vector<std::vector<State>> succ(n);
  for (auto [p, q] : eps) succ[p].push_back(q);
  std::vector<std::vector<State>> closure(n);
  std::vector<char> seen(n);
  for (State s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<State> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      State v = queue.front();
      queue.pop_front();
      closure[s].push_back(v);
      for (State w : succ[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    std::sort(closure[s].begin(), closure[s].end());
  }
  return closure;
}

WordAutomaton eliminate_eps(EpsNfa nfa, bool reduced) {
  auto closure = eps_closure(nfa.n, nfa.eps);
  std::vector<std::vector<std::pair<LetterCode, State>>> out(nfa.n);
  for (const Edge& e : nfa.edges) out[e.src].emplace_back(e.label, e.dst);
  std::vector<char> is_final(nfa.n);
  for (State f : nfa.finals) is_final[f] = 1;

  std::vector<Edge> edges;
  std::vector<State> finals;
  for (State s = 0; s < nfa.n; ++s) {
    bool fin = false;
    for (State t : closure[s]) {
      fin = fin || is_final[t];
      for (auto [c, d] : out[t]) edges.push_back({s, c, d});
    }
    if (fin) finals.push_back(s);
  }
  return WordAutomaton(std::move(nfa.alphabet), nfa.n, std::move(edges),
                       std::move(nfa.initials), std::move(finals), reduced);
}

// trim to accessible and co-accessible states
WordAutomaton trim(const WordAutomaton& a) {
  State n = a.num_states();
  std::vector<std::vector<State>> succ(n), pred(n);
  for (const Edge& e : a.edges()) {
    succ[e.src].push_back(e.dst);
    pred[e.dst].push_back(e.src);
  }
  auto bfs = [&](const std::vector<State>& start,
                 const std::vector<std::vector<State>>& next) {
    std::vector<char> seen(n);
    std::deque<State> queue;
    for (State s : start) {
      if (!seen[s]) {
        seen[s] = 1;
        queue.push_back(s);
      }
    }
    while (!queue.empty()) {
      State v = queue.front();
      queue.pop_front();
      for (State w : next[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    return seen;
  };
  auto reach = bfs(a.initials(), succ);
  auto coreach = bfs(a.finals(), pred);
  std::vector<State> remap(n, UINT32_MAX);
  State m = 0;
  for (State s = 0; s < n; ++s) {
    if (reach[s] && coreach[s]) remap[s] = m++;
  }
  std::vector<Edge> edges;
  for (const Edge& e : a.edges()) {
    if (remap[e.src] != UINT32_MAX && remap[e.dst] != UINT32_MAX) {
      edges.push_back({remap[e.src], e.label, remap[e.dst]});
    }
  }
  std::vector<State> initials, finals;
  for (State s : a.initials()) {
    if (remap[s] != UINT32_MAX) initials.push_back(remap[s]);
  }
  for (State s : a.finals()) {
    if (remap[s] != UINT32_MAX) finals.push_back(remap[s]);
  }
  return WordAutomaton(a.alphabet(), m, std::move(edges), std::move(initials),
                       std::move(finals), a.reduced());
}

EpsNfa thompson(const RationalExpression& e, EpsNfa acc, State& init,
                State& fin) {
  using Kind = RationalExpression::Kind;
  switch (e.kind()) {
    case Kind::Empty: {
      init = acc.fresh();
      fin = acc.fresh();
      return acc;
    }
    case Kind::Literal: {
      init = acc.fresh();
      State cur = init;
      for (LetterCode c : e.literal_word().letters()) {
        State next = acc.fresh();
        acc.edges.push_back({cur, c, next});
        cur = next;
      }
      fin = cur;
      return acc;
    }
    case Kind::Union: {
      State i1, f1, i2, f2;
      acc = thompson(e.left(), std::move(acc), i1, f1);
      acc = thompson(e.right(), std::move(acc), i2, f2);
      init = acc.fresh();
      fin = acc.fresh();
      acc.eps.push_back({init, i1});
      acc.eps.push_back({init, i2});
      acc.eps.push_back({f1, fin});
      acc.eps.push_back({f2, fin});
      return acc;
    }
    case Kind::Concat: {
      State i1, f1, i2, f2;
      acc = thompson(e.left(), std::move(acc), i1, f1);
      acc = thompson(e.right(), std::move(acc), i2, f2);
      acc.eps.push_back({f1, i2});
      init = i1;
      fin = f2;
      return acc;
    }
    case Kind::Star: {
      State i1, f1;
      acc = thompson(e.child(), std::move(acc), i1, f1);
      State s = acc.fresh();
      acc.eps.push_back({s, i1});
      acc.eps.push_back({f1, s});
      init = fin = s;
      return acc;
    }
  }
  throw InternalError("unreachable expression kind");
}

}  // namespace

WordAutomaton compile_expression(const RationalExpression& e) {
  EpsNfa nfa;
  nfa.alphabet = e.alphabet();
  State init = 0, fin = 0;
  nfa = thompson(e, std::move(nfa), init, fin);
  nfa.initials = {init};
  nfa.finals = {fin};
  return trim(eliminate_eps(std::move(nfa), false));
}

// ---------------------------------------------------------------------------
// the Benois construction

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<State, State>& p) const {
    return std::hash<std::uint64_t>()((std::uint64_t(p.first) << 32) | p.second);
  }
};

struct Saturation {
  // silent (dip) pairs with nesting depth and, optionally, a witness word
  // that reduces to the empty word along original edges
  std::unordered_map<std::pair<State, State>, std::size_t, PairHash> depth;
  std::unordered_map<std::pair<State, State>, std::vector<LetterCode>, PairHash>
      witness;
  std::vector<std::vector<State>> succ, pred;  // silent adjacency
  std::size_t max_depth = 0;
  bool record;
};

Saturation saturate(const WordAutomaton& a, bool record_witnesses) {
  State n = a.num_states();
  std::size_t codes = a.alphabet().num_codes();
  std::vector<std::vector<std::vector<State>>> out(
      n, std::vector<std::vector<State>>(codes));
  std::vector<std::vector<std::vector<State>>> in(
      n, std::vector<std::vector<State>>(codes));
  for (const Edge& e : a.edges()) {
    out[e.src][e.label].push_back(e.dst);
    in[e.dst][e.label].push_back(e.src);
  }

  Saturation sat;
  sat.record = record_witnesses;
  sat.succ.resize(n);
  sat.pred.resize(n);
  std::deque<std::pair<State, State>> worklist;

  auto add = [&](State p, State q, std::size_t d,
                 std::vector<LetterCode>&& w) {
    auto key = std::make_pair(p, q);
    auto [it, inserted] = sat.depth.try_emplace(key, d);
    if (!inserted) return;
    if (sat.record) sat.witness.emplace(key, std::move(w));
    sat.succ[p].push_back(q);
    sat.pred[q].push_back(p);
    sat.max_depth = std::max(sat.max_depth, d);
    worklist.push_back(key);
  };

  for (State s = 0; s < n; ++s) add(s, s, 0, {});

  while (!worklist.empty()) {
    auto [r, s] = worklist.front();
    worklist.pop_front();
    std::size_t d_rs = sat.depth.at({r, s});

    // cancellation: p —x→ r ⇝ s —x⁻¹→ q
    for (LetterCode x = 0; x < codes; ++x) {
      const auto& srcs = in[r][x];
      const auto& dsts = out[s][inverse_code(x)];
      if (srcs.empty() || dsts.empty()) continue;
      for (State p : srcs) {
        for (State q : dsts) {
          if (sat.depth.count({p, q})) continue;
          std::vector<LetterCode> w;
          if (sat.record) {
            w.push_back(x);
            const auto& mid = sat.witness.at({r, s});
            w.insert(w.end(), mid.begin(), mid.end());
            w.push_back(inverse_code(x));
          }
          add(p, q, d_rs + 1, std::move(w));
        }
      }
    }

    // transitivity in both directions
    for (State q : std::vector<State>(sat.succ[s])) {
      if (sat.depth.count({r, q})) continue;
      std::vector<LetterCode> w;
      if (sat.record) {
        w = sat.witness.at({r, s});
        const auto& tail = sat.witness.at({s, q});
        w.insert(w.end(), tail.begin(), tail.end());
      }
      add(r, q, std::max(d_rs, sat.depth.at({s, q})), std::move(w));
    }
    for (State p : std::vector<State>(sat.pred[r])) {
      if (sat.depth.count({p, s})) continue;
      std::vector<LetterCode> w;
      if (sat.record) {
        w = sat.witness.at({p, r});
        const auto& tail = sat.witness.at({r, s});
        w.insert(w.end(), tail.begin(), tail.end());
      }
      add(p, s, std::max(sat.depth.at({p, r}), d_rs), std::move(w));
    }
  }
  return sat;
}

WordAutomaton reduced_word_filter(const Alphabet& alphabet) {
  // state 0 remembers "no letter yet", state 1+c remembers last letter c;
  // an edge x then x⁻¹ is never allowed
  std::size_t codes = alphabet.num_codes();
  std::vector<Edge> edges;
  std::vector<State> finals;
  State n = static_cast<State>(1 + codes);
  for (LetterCode c = 0; c < codes; ++c) {
    edges.push_back({0, c, static_cast<State>(1 + c)});
    for (LetterCode d = 0; d < codes; ++d) {
      if (d != inverse_code(c)) {
        edges.push_back({static_cast<State>(1 + c), d, static_cast<State>(1 + d)});
      }
    }
  }
  for (State s = 0; s < n; ++s) finals.push_back(s);
  return WordAutomaton(alphabet, n, std::move(edges), {0}, std::move(finals),
                       true);
}

// product with every state of b accepting (b is the reduced-word filter)
WordAutomaton filter_product(const WordAutomaton& a) {
  WordAutomaton filter = reduced_word_filter(a.alphabet());
  Adjacency aa(a), fa(filter);
  std::vector<char> a_final(a.num_states());
  for (State f : a.finals()) a_final[f] = 1;

  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> order;
  std::deque<State> queue;
  auto intern = [&](State s, State t) {
    auto [it, inserted] = ids.try_emplace({s, t}, static_cast<State>(order.size()));
    if (inserted) {
      order.push_back({s, t});
      queue.push_back(it->second);
      if (order.size() > limits().max_states) {
        throw LimitError("state budget exceeded in reduced-word filtering");
      }
    }
    return it->second;
  };
  for (State i : a.initials()) intern(i, 0);

  std::vector<Edge> edges;
  std::vector<State> initials, finals;
  for (State i : a.initials()) initials.push_back(ids.at({i, 0}));
  while (!queue.empty()) {
    State id = queue.front();
    queue.pop_front();
    auto [s, t] = order[id];
    if (a_final[s]) finals.push_back(id);
    for (LetterCode c = 0; c < aa.num_codes; ++c) {
      if (fa.out[t][c].empty()) continue;
      State t2 = fa.out[t][c][0];
      for (State s2 : aa.out[s][c]) {
        edges.push_back({id, c, intern(s2, t2)});
      }
    }
  }
  return trim(WordAutomaton(a.alphabet(), static_cast<State>(order.size()),
                            std::move(edges), std::move(initials),
                            std::move(finals), true));
}

}  // namespace

struct BenoisResult::Debug {
  WordAutomaton original;
  WordAutomaton eliminated;
  // provenance of eliminated parts: edge (p,x,r) came from silent (p,q) and
  // original edge (q,x,r); final p came from silent (p,q) with q final
  std::map<std::tuple<State, LetterCode, State>, State> edge_via;
  std::map<State, State> final_via;
  std::map<std::pair<State, State>, std::vector<LetterCode>> witness;

  Debug(WordAutomaton orig, WordAutomaton elim)
      : original(std::move(orig)), eliminated(std::move(elim)) {}
};

BenoisResult benois_reduce_stats(const WordAutomaton& a) {
  Saturation sat = saturate(a, true);
  State n = a.num_states();

  std::vector<std::vector<std::pair<LetterCode, State>>> out(n);
  for (const Edge& e : a.edges()) out[e.src].emplace_back(e.label, e.dst);
  std::vector<char> is_final(n);
  for (State f : a.finals()) is_final[f] = 1;

  std::map<std::tuple<State, LetterCode, State>, State> edge_via;
  std::map<State, State> final_via;
  std::vector<Edge> edges;
  std::vector<State> finals;

  // deterministic iteration: by source state, then silent target
  for (State p = 0; p < n; ++p) {
    auto targets = sat.succ[p];
    std::sort(targets.begin(), targets.end());
    for (State q : targets) {
      const auto& w_pq = sat.witness.at({p, q});
      for (auto [c, r] : out[q]) {
        auto key = std::make_tuple(p, c, r);
        auto it = edge_via.find(key);
        if (it == edge_via.end() ||
            sat.witness.at({p, it->second}).size() > w_pq.size()) {
          edge_via[key] = q;
        }
        edges.push_back({p, c, r});
      }
      if (is_final[q]) {
        auto it = final_via.find(p);
        if (it == final_via.end() ||
            sat.witness.at({p, it->second}).size() > w_pq.size()) {
          final_via[p] = q;
        }
      }
    }
    if (final_via.count(p)) finals.push_back(p);
  }

  WordAutomaton eliminated(a.alphabet(), n, std::move(edges), a.initials(),
                           std::move(finals), false);
  auto debug = std::make_shared<BenoisResult::Debug>(a, eliminated);
  debug->edge_via = std::move(edge_via);
  debug->final_via = std::move(final_via);
  for (auto& [pq, w] : sat.witness) debug->witness.emplace(pq, std::move(w));

  BenoisResult result{filter_product(eliminated), sat.max_depth,
                      std::move(debug)};
  return result;
}

WordAutomaton benois_reduce(const WordAutomaton& a) {
  Saturation sat = saturate(a, false);
  State n = a.num_states();
  std::vector<std::vector<std::pair<LetterCode, State>>> out(n);
  for (const Edge& e : a.edges()) out[e.src].emplace_back(e.label, e.dst);
  std::vector<char> is_final(n);
  for (State f : a.finals()) is_final[f] = 1;

  std::vector<Edge> edges;
  std::vector<State> finals;
  for (State p = 0; p < n; ++p) {
    bool fin = false;
    for (State q : sat.succ[p]) {
      fin = fin || is_final[q];
      for (auto [c, r] : out[q]) edges.push_back({p, c, r});
    }
    if (fin) finals.push_back(p);
  }
  WordAutomaton eliminated(a.alphabet(), n, std::move(edges), a.initials(),
                           std::move(finals), false);
  return filter_product(eliminated);
}

std::optional<Word> benois_witness(const BenoisResult& r,
                                   const ReducedWord& u) {
  const auto& dbg = *r.debug;
  const WordAutomaton& elim = dbg.eliminated;
  require_same_alphabet(elim.alphabet(), u.alphabet(), "benois_witness");
  Adjacency adj(elim);
  std::vector<char> is_final(elim.num_states());
  for (State f : elim.finals()) is_final[f] = 1;

  // DFS over (position, state) for a path spelling u that ends in a state
  // with final provenance
  struct Frame {
    State state;
    std::size_t pos;
  };
  std::set<std::pair<std::size_t, State>> visited;
  std::vector<std::pair<State, LetterCode>> path;  // (state the edge left, code)
  std::vector<State> path_states;

  std::function<bool(State, std::size_t)> dfs = [&](State s,
                                                    std::size_t pos) -> bool {
    if (!visited.insert({pos, s}).second) return false;
    if (pos == u.size()) {
      if (dbg.final_via.count(s)) {
        path_states.push_back(s);
        return true;
      }
      return false;
    }
    LetterCode c = u.letters()[pos];
    for (State t : adj.out[s][c]) {
      path.push_back({s, c});
      if (dfs(t, pos + 1)) return true;
      path.pop_back();
    }
    return false;
  };

  bool found = false;
  for (State i : elim.initials()) {
    if (dfs(i, 0)) {
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;

  std::vector<LetterCode> v;
  for (std::size_t k = 0; k < path.size(); ++k) {
    auto [s, c] = path[k];
    State next = (k + 1 < path.size()) ? path[k + 1].first : path_states[0];
    State via = dbg.edge_via.at({s, c, next});
    const auto& dip = dbg.witness.at({s, via});
    v.insert(v.end(), dip.begin(), dip.end());
    v.push_back(c);
  }
  State from = path_states[0];
  State via = dbg.final_via.at(from);
  const auto& dip = dbg.witness.at({from, via});
  v.insert(v.end(), dip.begin(), dip.end());
  return Word(u.alphabet(), std::move(v));
}

// ---------------------------------------------------------------------------
// rational operations

WordAutomaton automaton_union(const WordAutomaton& a, const WordAutomaton& b) {
  require_same_alphabet(a.alphabet(), b.alphabet(), "union");
  State off = a.num_states();
  std::vector<Edge> edges = a.edges();
  for (const Edge& e : b.edges()) edges.push_back({e.src + off, e.label, e.dst + off});
  std::vector<State> initials = a.initials(), finals = a.finals();
  for (State s : b.initials()) initials.push_back(s + off);
  for (State s : b.finals()) finals.push_back(s + off);
  return WordAutomaton(a.alphabet(), a.num_states() + b.num_states(),
                       std::move(edges), std::move(initials), std::move(finals),
                       a.reduced() && b.reduced());
}

WordAutomaton automaton_concat(const WordAutomaton& a, const WordAutomaton& b) {
  require_same_alphabet(a.alphabet(), b.alphabet(), "concat");
  EpsNfa nfa;
  nfa.alphabet = a.alphabet();
  nfa.n = a.num_states() + b.num_states();
  State off = a.num_states();
  nfa.edges = a.edges();
  for (const Edge& e : b.edges()) nfa.edges.push_back({e.src + off, e.label, e.dst + off});
  for (State f : a.finals()) {
    for (State i : b.initials()) nfa.eps.push_back({f, i + off});
  }
  nfa.initials = a.initials();
  for (State f : b.finals()) nfa.finals.push_back(f + off);
  return trim(eliminate_eps(std::move(nfa), false));
}

WordAutomaton automaton_star(const WordAutomaton& a) {
  EpsNfa nfa;
  nfa.alphabet = a.alphabet();
  nfa.n = a.num_states();
  nfa.edges = a.edges();
  State s = nfa.fresh();
  for (State i : a.initials()) nfa.eps.push_back({s, i});
  for (State f : a.finals()) nfa.eps.push_back({f, s});
  nfa.initials = {s};
  nfa.finals = {s};
  return trim(eliminate_eps(std::move(nfa), false));
}

namespace {

void require_reduced(const WordAutomaton& a, const char* op) {
  if (!a.reduced()) {
    throw FlagError(std::string(op) +
                    " requires an automaton with the reduced flag");
  }
}

}  // namespace

WordAutomaton intersect_reduced(const WordAutomaton& a, const WordAutomaton& b) {
  require_same_alphabet(a.alphabet(), b.alphabet(), "intersect_reduced");
  require_reduced(a, "intersect_reduced");
  require_reduced(b, "intersect_reduced");

  Adjacency aa(a), bb(b);
  std::vector<char> a_final(a.num_states()), b_final(b.num_states());
  for (State f : a.finals()) a_final[f] = 1;
  for (State f : b.finals()) b_final[f] = 1;

  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> order;
  std::deque<State> queue;
  auto intern = [&](State s, State t) {
    auto [it, inserted] = ids.try_emplace({s, t}, static_cast<State>(order.size()));
    if (inserted) {
      order.push_back({s, t});
      queue.push_back(it->second);
      if (order.size() > limits().max_states) {
        throw LimitError("state budget exceeded in intersection");
      }
    }
    return it->second;
  };
  std::vector<State> initials;
  for (State i : a.initials()) {
    for (State j : b.initials()) initials.push_back(intern(i, j));
  }
  std::vector<Edge> edges;
  std::vector<State> finals;
  while (!queue.empty()) {
    State id = queue.front();
    queue.pop_front();
    auto [s, t] = order[id];
    if (a_final[s] && b_final[t]) finals.push_back(id);
    for (LetterCode c = 0; c < aa.num_codes; ++c) {
      for (State s2 : aa.out[s][c]) {
        for (State t2 : bb.out[t][c]) {
          edges.push_back({id, c, intern(s2, t2)});
        }
      }
    }
  }
  return trim(WordAutomaton(a.alphabet(), static_cast<State>(order.size()),
                            std::move(edges), std::move(initials),
                            std::move(finals), true));
}

// ---------------------------------------------------------------------------
// determinization, minimization, canonical forms

namespace {

struct Dfa {
  std::size_t num_codes = 0;
  State n = 0;                // state 0 is initial
  std::vector<State> trans;   // n * num_codes, complete
  std::vector<char> final_;
};

Dfa determinize(const WordAutomaton& a) {
  Adjacency adj(a);
  std::size_t codes = a.alphabet().num_codes();
  std::vector<char> is_final(a.num_states());
  for (State f : a.finals()) is_final[f] = 1;

  std::map<std::vector<State>, State> ids;
  std::vector<std::vector<State>> order;
  std::deque<State> queue;
  auto intern = [&](std::vector<State> set) {
    auto [it, inserted] = ids.try_emplace(std::move(set), static_cast<State>(order.size()));
    if (inserted) {
      order.push_back(it->first);
      queue.push_back(it->second);
      if (order.size() > limits().max_states) {
        throw LimitError("state budget exceeded in determinization");
      }
    }
    return it->second;
  };
  intern(sorted_unique(a.initials()));

  Dfa d;
  d.num_codes = codes;
  std::vector<std::vector<State>> rows;
  std::vector<char> finals;
  while (!queue.empty()) {
    State id = queue.front();
    queue.pop_front();
    std::vector<State> set = order[id];
    bool fin = false;
    for (State s : set) fin = fin || is_final[s];
    std::vector<State> row(codes);
    for (LetterCode c = 0; c < codes; ++c) {
      std::vector<State> next;
      for (State s : set) {
        next.insert(next.end(), adj.out[s][c].begin(), adj.out[s][c].end());
      }
      row[c] = intern(sorted_unique(std::move(next)));
    }
    if (rows.size() <= id) {
      rows.resize(id + 1);
      finals.resize(id + 1);
    }
    rows[id] = std::move(row);
    finals[id] = fin ? 1 : 0;
  }
  d.n = static_cast<State>(rows.size());
  d.final_.assign(finals.begin(), finals.end());
  d.trans.reserve(d.n * codes);
  for (const auto& row : rows) {
    d.trans.insert(d.trans.end(), row.begin(), row.end());
  }
  return d;
}

Dfa minimize(const Dfa& d) {
  std::vector<State> cls(d.n);
  for (State s = 0; s < d.n; ++s) cls[s] = d.final_[s] ? 1 : 0;
  State num_classes = 2;
  // handle the all-final / all-nonfinal case
  {
    bool any0 = false, any1 = false;
    for (State s = 0; s < d.n; ++s) (cls[s] ? any1 : any0) = true;
    if (!any0 || !any1) {
      for (State s = 0; s < d.n; ++s) cls[s] = 0;
      num_classes = 1;
    }
  }
  for (;;) {
    std::map<std::vector<State>, State> sig_ids;
    std::vector<State> next_cls(d.n);
    for (State s = 0; s < d.n; ++s) {
      std::vector<State> sig;
      sig.reserve(d.num_codes + 1);
      sig.push_back(cls[s]);
      for (std::size_t c = 0; c < d.num_codes; ++c) {
        sig.push_back(cls[d.trans[s * d.num_codes + c]]);
      }
      auto [it, inserted] = sig_ids.try_emplace(std::move(sig),
                                                static_cast<State>(sig_ids.size()));
      next_cls[s] = it->second;
    }
    if (sig_ids.size() == num_classes) break;
    num_classes = static_cast<State>(sig_ids.size());
    cls = std::move(next_cls);
  }

  Dfa m;
  m.num_codes = d.num_codes;
  m.n = num_classes;
  m.trans.assign(m.n * m.num_codes, 0);
  m.final_.assign(m.n, 0);
  // remap so that the class of the initial state is 0 and classes appear in
  // breadth-first order, codes in order: a canonical numbering
  std::vector<State> remap(num_classes, UINT32_MAX);
  std::vector<State> rep(num_classes, UINT32_MAX);
  for (State s = 0; s < d.n; ++s) {
    if (rep[cls[s]] == UINT32_MAX) rep[cls[s]] = s;
  }
  std::deque<State> queue{cls[0]};
  remap[cls[0]] = 0;
  State assigned = 1;
  while (!queue.empty()) {
    State c0 = queue.front();
    queue.pop_front();
    State s = rep[c0];
    for (std::size_t c = 0; c < d.num_codes; ++c) {
      State t = cls[d.trans[s * d.num_codes + c]];
      if (remap[t] == UINT32_MAX) {
        remap[t] = assigned++;
        queue.push_back(t);
      }
    }
  }
  // all classes are reachable from the initial class in a trimmed subset DFA
  for (State s = 0; s < d.n; ++s) {
    State from = remap[cls[s]];
    m.final_[from] = d.final_[s];
    for (std::size_t c = 0; c < d.num_codes; ++c) {
      m.trans[from * m.num_codes + c] = remap[cls[d.trans[s * d.num_codes + c]]];
    }
  }
  return m;
}

std::mutex canon_mutex;
std::map<std::string, std::shared_ptr<const Dfa>> canon_cache;

std::shared_ptr<const Dfa> cached_min_dfa(const WordAutomaton& a) {
  std::string key = a.key();
  {
    std::lock_guard<std::mutex> lock(canon_mutex);
    auto it = canon_cache.find(key);
    if (it != canon_cache.end()) return it->second;
  }
  auto dfa = std::make_shared<Dfa>(minimize(determinize(a)));
  std::lock_guard<std::mutex> lock(canon_mutex);
  return canon_cache.emplace(key, std::move(dfa)).first->second;
}

}  // namespace

bool accepts(const WordAutomaton& a, const Word& w) {
  require_same_alphabet(a.alphabet(), w.alphabet(), "accepts");
  Adjacency adj(a);
  std::vector<char> cur(a.num_states());
  for (State i : a.initials()) cur[i] = 1;
  for (LetterCode c : w.letters()) {
    std::vector<char> next(a.num_states());
    for (State s = 0; s < a.num_states(); ++s) {
      if (!cur[s]) continue;
      for (State t : adj.out[s][c]) next[t] = 1;
    }
    cur = std::move(next);
  }
  for (State f : a.finals()) {
    if (cur[f]) return true;
  }
  return false;
}

std::string relation_name(Relation r) {
  switch (r) {
    case Relation::Equal: return "equal";
    case Relation::StrictSubset: return "strict_subset";
    case Relation::StrictSuperset: return "strict_superset";
    case Relation::Incomparable: return "incomparable";
  }
  return "?";
}

Relation compare(const WordAutomaton& a, const WordAutomaton& b) {
  require_same_alphabet(a.alphabet(), b.alphabet(), "compare");
  require_reduced(a, "compare");
  require_reduced(b, "compare");
  auto da = cached_min_dfa(a);
  auto db = cached_min_dfa(b);

  bool a_only = false, b_only = false;
  std::map<std::pair<State, State>, State> seen;
  std::deque<std::pair<State, State>> queue;
  auto visit = [&](State s, State t) {
    auto [it, inserted] = seen.try_emplace({s, t}, 0);
    if (inserted) queue.push_back({s, t});
  };
  visit(0, 0);
  while (!queue.empty() && !(a_only && b_only)) {
    auto [s, t] = queue.front();
    queue.pop_front();
    if (da->final_[s] && !db->final_[t]) a_only = true;
    if (!da->final_[s] && db->final_[t]) b_only = true;
    for (std::size_t c = 0; c < da->num_codes; ++c) {
      visit(da->trans[s * da->num_codes + c], db->trans[t * db->num_codes + c]);
    }
  }
  if (!a_only && !b_only) return Relation::Equal;
  if (!a_only) return Relation::StrictSubset;
  if (!b_only) return Relation::StrictSuperset;
  return Relation::Incomparable;
}

bool is_empty(const WordAutomaton& a) {
  std::vector<std::vector<State>> succ(a.num_states());
  for (const Edge& e : a.edges()) succ[e.src].push_back(e.dst);
  std::vector<char> is_final(a.num_states());
  for (State f : a.finals()) is_final[f] = 1;
  std::vector<char> seen(a.num_states());
  std::deque<State> queue;
  for (State i : a.initials()) {
    if (!seen[i]) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    State s = queue.front();
    queue.pop_front();
    if (is_final[s]) return false;
    for (State t : succ[s]) {
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  return true;
}

bool is_universal(const WordAutomaton& a) {
  return compare(a, universal_reduced(a.alphabet())) == Relation::Equal;
}

WordAutomaton universal_reduced(const Alphabet& alphabet) {
  return reduced_word_filter(alphabet);
}

WordAutomaton empty_automaton(const Alphabet& alphabet) {
  return WordAutomaton(alphabet, 0, {}, {}, {}, true);
}

WordAutomaton word_automaton(const ReducedWord& w) {
  std::vector<Edge> edges;
  State n = static_cast<State>(w.size() + 1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    edges.push_back({static_cast<State>(i), w.letters()[i],
                     static_cast<State>(i + 1)});
  }
  return WordAutomaton(w.alphabet(), n, std::move(edges), {0},
                       {static_cast<State>(n - 1)}, true);
}

WordAutomaton complement_reduced(const WordAutomaton& a) {
  require_reduced(a, "complement_reduced");
  auto d = cached_min_dfa(a);
  std::vector<Edge> edges;
  std::vector<State> finals;
  for (State s = 0; s < d->n; ++s) {
    if (!d->final_[s]) finals.push_back(s);
    for (std::size_t c = 0; c < d->num_codes; ++c) {
      edges.push_back({s, static_cast<LetterCode>(c),
                       d->trans[s * d->num_codes + c]});
    }
  }
  WordAutomaton complemented(a.alphabet(), d->n, std::move(edges), {0},
                             std::move(finals), false);
  // restrict the complement to the universe of reduced words
  return filter_product(complemented);
}

WordAutomaton difference_reduced(const WordAutomaton& a, const WordAutomaton& b) {
  return intersect_reduced(a, complement_reduced(b));
}

WordAutomaton canonical_automaton(const WordAutomaton& a) {
  auto d = cached_min_dfa(a);
  std::vector<Edge> edges;
  std::vector<State> finals;
  for (State s = 0; s < d->n; ++s) {
    if (d->final_[s]) finals.push_back(s);
    for (std::size_t c = 0; c < d->num_codes; ++c) {
      edges.push_back({s, static_cast<LetterCode>(c),
                       d->trans[s * d->num_codes + c]});
    }
  }
  return trim(WordAutomaton(a.alphabet(), d->n, std::move(edges), {0},
                            std::move(finals), a.reduced()));
}

// ---------------------------------------------------------------------------
// state elimination

RationalExpression extract_expression(const WordAutomaton& raw) {
  WordAutomaton a = trim(raw);
  const Alphabet& alphabet = a.alphabet();
  if (a.num_states() == 0) return RationalExpression::empty(alphabet);

  State n = a.num_states();
  State src = n, dst = n + 1;
  std::map<std::pair<State, State>, RationalExpression> expr;
  auto add = [&](State p, State q, RationalExpression e) {
    auto it = expr.find({p, q});
    if (it == expr.end()) {
      expr.emplace(std::make_pair(p, q), std::move(e));
    } else {
      it->second = RationalExpression::alt(it->second, std::move(e));
    }
  };

  ReducedWord eps(alphabet);
  for (const Edge& e : a.edges()) {
    add(e.src, e.dst,
        RationalExpression::literal(
            ReducedWord::checked(Word(alphabet, {e.label}))));
  }
  for (State i : a.initials()) add(src, i, RationalExpression::literal(eps));
  for (State f : a.finals()) add(f, dst, RationalExpression::literal(eps));

  std::vector<char> alive(n, 1);
  for (State round = 0; round < n; ++round) {
    // pick the live state with the fewest incident expression edges
    State best = UINT32_MAX;
    std::size_t best_deg = SIZE_MAX;
    std::vector<std::size_t> in_deg(n, 0), out_deg(n, 0);
    for (const auto& [pq, e] : expr) {
      auto [p, q] = pq;
      if (q < n && alive[q] && p != q) ++in_deg[q];
      if (p < n && alive[p] && p != q) ++out_deg[p];
    }
    for (State s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      std::size_t deg = in_deg[s] * out_deg[s];
      if (deg < best_deg) {
        best_deg = deg;
        best = s;
      }
    }
    State v = best;
    alive[v] = 0;

    std::optional<RationalExpression> loop;
    std::vector<std::pair<State, RationalExpression>> in, out;
    for (auto it = expr.begin(); it != expr.end();) {
      auto [p, q] = it->first;
      if (p == v && q == v) {
        loop = it->second;
        it = expr.erase(it);
      } else if (q == v) {
        in.emplace_back(p, it->second);
        it = expr.erase(it);
      } else if (p == v) {
        out.emplace_back(q, it->second);
        it = expr.erase(it);
      } else {
        ++it;
      }
    }
    std::optional<RationalExpression> loop_star;
    if (loop) loop_star = RationalExpression::star(*loop);
    for (const auto& [p, e_in] : in) {
      for (const auto& [q, e_out] : out) {
        RationalExpression e = e_in;
        if (loop_star) e = RationalExpression::seq(e, *loop_star);
        e = RationalExpression::seq(e, e_out);
        add(p, q, std::move(e));
      }
    }
  }

  auto it = expr.find({src, dst});
  if (it == expr.end()) return RationalExpression::empty(alphabet);
  return it->second;
}

bool reduced_flag_consistent(const WordAutomaton& a) {
  if (!a.reduced()) return true;
  // a reduced automaton may not accept any word with a cancelling pair
  WordAutomaton flagged(a.alphabet(), a.num_states(), a.edges(), a.initials(),
                        a.finals(), true);
  return compare(intersect_reduced(flagged, universal_reduced(a.alphabet())),
                 flagged) == Relation::Equal;
}

}  // namespace nilclose
