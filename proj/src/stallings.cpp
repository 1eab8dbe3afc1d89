#include "nilclose/stallings.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <random>
#include <sstream>

namespace nilclose {

namespace {

constexpr std::int32_t kNone = -1;

// working representation during folding: union-find over vertices plus a
// per-root transition table
struct Folder {
  std::size_t num_codes;
  std::vector<std::uint32_t> parent;
  std::vector<std::vector<std::int32_t>> adj;  // valid for roots
  std::deque<std::pair<std::uint32_t, std::uint32_t>> pending;
  std::optional<std::mt19937_64> rng;

  explicit Folder(std::size_t codes) : num_codes(codes) {}

  std::uint32_t fresh() {
    parent.push_back(static_cast<std::uint32_t>(parent.size()));
    adj.emplace_back(num_codes, kNone);
    return parent.back();
  }

  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  // install edge u --c--> v (and the inverse edge), queueing folds on clash
  void link(std::uint32_t u, LetterCode c, std::uint32_t v) {
    u = find(u);
    v = find(v);
    std::int32_t& slot = adj[u][c];
    if (slot == kNone) {
      slot = static_cast<std::int32_t>(v);
    } else if (find(static_cast<std::uint32_t>(slot)) != v) {
      pending.push_back({find(static_cast<std::uint32_t>(slot)), v});
    }
    std::int32_t& rslot = adj[v][inverse_code(c)];
    if (rslot == kNone) {
      rslot = static_cast<std::int32_t>(u);
    } else if (find(static_cast<std::uint32_t>(rslot)) != u) {
      pending.push_back({find(static_cast<std::uint32_t>(rslot)), u});
    }
  }

  void merge(std::uint32_t u, std::uint32_t v) {
    u = find(u);
    v = find(v);
    if (u == v) return;
    parent[v] = u;
    for (LetterCode c = 0; c < num_codes; ++c) {
      std::int32_t t = adj[v][c];
      if (t == kNone) continue;
      std::uint32_t target = find(static_cast<std::uint32_t>(t));
      std::int32_t& slot = adj[u][c];
      if (slot == kNone) {
        slot = static_cast<std::int32_t>(target);
      } else if (find(static_cast<std::uint32_t>(slot)) != target) {
        pending.push_back({find(static_cast<std::uint32_t>(slot)), target});
      }
    }
  }

  void run() {
    while (!pending.empty()) {
      std::size_t pick = 0;
      if (rng) {
        pick = std::uniform_int_distribution<std::size_t>(0, pending.size() - 1)(*rng);
      }
      auto [u, v] = pending[pick];
      pending[pick] = pending.back();
      pending.pop_back();
      merge(u, v);
    }
  }
};

// degree-1 pruning to a fixpoint, never touching the base root
void core(Folder& f, std::uint32_t base) {
  base = f.find(base);
  std::vector<std::uint32_t> roots;
  for (std::uint32_t v = 0; v < f.parent.size(); ++v) {
    if (f.find(v) == v) roots.push_back(v);
  }
  auto degree = [&](std::uint32_t v) {
    std::size_t d = 0;
    for (LetterCode c = 0; c < f.num_codes; ++c) {
      if (f.adj[v][c] != kNone) ++d;
    }
    return d;
  };
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v : roots) {
    if (v != base && degree(v) <= 1) queue.push_back(v);
  }
  std::vector<char> dead(f.parent.size(), 0);
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    if (dead[v] || v == base || degree(v) > 1) continue;
    dead[v] = 1;
    for (LetterCode c = 0; c < f.num_codes; ++c) {
      std::int32_t t = f.adj[v][c];
      if (t == kNone) continue;
      std::uint32_t w = f.find(static_cast<std::uint32_t>(t));
      f.adj[v][c] = kNone;
      if (w != v && !dead[w]) {
        f.adj[w][inverse_code(c)] = kNone;
        if (w != base && degree(w) <= 1) queue.push_back(w);
      }
    }
  }
  for (std::uint32_t v = 0; v < f.parent.size(); ++v) {
    if (dead[f.find(v)]) {
      // detach dead roots so canonicalization never reaches them
      f.adj[f.find(v)].assign(f.num_codes, kNone);
    }
  }
}

// breadth-first renumbering from the base in letter order
std::shared_ptr<const SubgroupGraph> canonicalize(Folder& f, std::uint32_t base) {
  base = f.find(base);
  std::vector<std::int32_t> number(f.parent.size(), kNone);
  std::vector<std::uint32_t> order;
  number[base] = 0;
  order.push_back(base);
  for (std::size_t head = 0; head < order.size(); ++head) {
    std::uint32_t v = order[head];
    for (LetterCode c = 0; c < f.num_codes; ++c) {
      std::int32_t t = f.adj[v][c];
      if (t == kNone) continue;
      std::uint32_t w = f.find(static_cast<std::uint32_t>(t));
      if (number[w] == kNone) {
        number[w] = static_cast<std::int32_t>(order.size());
        order.push_back(w);
      }
    }
  }
  auto g = std::make_shared<SubgroupGraph>();
  g->num_vertices = static_cast<std::uint32_t>(order.size());
  g->num_codes = static_cast<std::uint32_t>(f.num_codes);
  g->trans.assign(static_cast<std::size_t>(g->num_vertices) * f.num_codes, kNone);
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    std::uint32_t v = order[i];
    for (LetterCode c = 0; c < f.num_codes; ++c) {
      std::int32_t t = f.adj[v][c];
      if (t == kNone) continue;
      std::uint32_t w = f.find(static_cast<std::uint32_t>(t));
      g->trans[static_cast<std::size_t>(i) * f.num_codes + c] = number[w];
    }
  }
  return g;
}

std::string graph_key(const Alphabet& alphabet, const SubgroupGraph& g) {
  std::ostringstream os;
  os << alphabet.letters() << '#' << g.num_vertices << '#';
  for (std::int32_t t : g.trans) os << t << ',';
  return os.str();
}

Folder folder_from_graph(const SubgroupGraph& g) {
  Folder f(g.num_codes);
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) f.fresh();
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    for (LetterCode c = 0; c < g.num_codes; ++c) {
      f.adj[v][c] = g.step(v, c);
    }
  }
  return f;
}

// cached per-graph derived data
struct GraphCache {
  std::optional<std::vector<ReducedWord>> basis;
  std::optional<WordAutomaton> language;
  std::optional<std::vector<std::shared_ptr<const SubgroupGraph>>> overgroups;
  // canonical keys of the one-pair-merge quotients; shared across every
  // lattice this graph appears in
  std::optional<std::vector<std::string>> direct_quotients;
};

std::mutex cache_mutex;
std::map<std::string, GraphCache>& graph_caches() {
  static std::map<std::string, GraphCache> caches;
  return caches;
}

std::map<std::string, std::shared_ptr<const SubgroupGraph>>& graph_universe() {
  static std::map<std::string, std::shared_ptr<const SubgroupGraph>> universe;
  return universe;
}

}  // namespace

Subgroup::Subgroup(Alphabet alphabet, std::shared_ptr<const SubgroupGraph> graph)
    : alphabet_(std::move(alphabet)), graph_(std::move(graph)) {
  if (graph_->num_codes != alphabet_.num_codes()) {
    throw AlphabetError("subgroup graph does not match alphabet");
  }
  key_ = graph_key(alphabet_, *graph_);
}

bool Subgroup::is_trivial() const {
  return graph_->num_vertices == 1 &&
         std::all_of(graph_->trans.begin(), graph_->trans.end(),
                     [](std::int32_t t) { return t == kNone; });
}

Subgroup fold(const Alphabet& alphabet, const std::vector<ReducedWord>& generators,
              std::optional<std::uint64_t> shuffle_seed) {
  Folder f(alphabet.num_codes());
  if (shuffle_seed) f.rng.emplace(*shuffle_seed);
  std::uint32_t base = f.fresh();
  for (const ReducedWord& g : generators) {
    require_same_alphabet(alphabet, g.alphabet(), "fold");
    if (g.empty()) continue;
    std::uint32_t cur = base;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::uint32_t next = (i + 1 == g.size()) ? base : f.fresh();
      f.link(cur, g.letters()[i], next);
      f.run();
      cur = f.find(next);
    }
  }
  f.run();
  core(f, base);
  return Subgroup(alphabet, canonicalize(f, base));
}

Subgroup subgroup_from_edges(
    const Alphabet& alphabet, std::uint32_t num_vertices,
    const std::vector<std::tuple<std::uint32_t, LetterCode, std::uint32_t>>& edges,
    std::uint32_t base) {
  if (base >= num_vertices && !(base == 0 && num_vertices == 0)) {
    throw ValidationError("subgroup base vertex out of range");
  }
  Folder f(alphabet.num_codes());
  for (std::uint32_t v = 0; v < std::max(num_vertices, 1u); ++v) f.fresh();
  for (const auto& [src, code, dst] : edges) {
    if (src >= f.parent.size() || dst >= f.parent.size()) {
      throw ValidationError("subgroup edge endpoint out of range");
    }
    if (code_index(code) >= alphabet.size()) {
      throw AlphabetError("subgroup edge label outside alphabet");
    }
    f.link(src, code, dst);
    f.run();
  }
  core(f, base);
  return Subgroup(alphabet, canonicalize(f, base));
}

Subgroup full_group(const Alphabet& alphabet) {
  auto g = std::make_shared<SubgroupGraph>();
  g->num_vertices = 1;
  g->num_codes = static_cast<std::uint32_t>(alphabet.num_codes());
  g->trans.assign(alphabet.num_codes(), 0);
  return Subgroup(alphabet, std::move(g));
}

Subgroup trivial_subgroup(const Alphabet& alphabet) {
  auto g = std::make_shared<SubgroupGraph>();
  g->num_vertices = 1;
  g->num_codes = static_cast<std::uint32_t>(alphabet.num_codes());
  g->trans.assign(alphabet.num_codes(), kNone);
  return Subgroup(alphabet, std::move(g));
}

bool member(const Subgroup& h, const ReducedWord& w) {
  require_same_alphabet(h.alphabet(), w.alphabet(), "member");
  std::uint32_t v = 0;
  for (LetterCode c : w.letters()) {
    std::int32_t t = h.graph().step(v, c);
    if (t == kNone) return false;
    v = static_cast<std::uint32_t>(t);
  }
  return v == 0;
}

namespace {

// spanning tree from the base, letter order; parent edge of each non-base
// vertex and the tree path word to every vertex
struct SpanningTree {
  std::vector<std::pair<std::uint32_t, LetterCode>> parent;  // (vertex, code)
  std::vector<std::vector<LetterCode>> path;
};

SpanningTree spanning_tree(const SubgroupGraph& g) {
  SpanningTree t;
  t.parent.assign(g.num_vertices, {UINT32_MAX, 0});
  t.path.assign(g.num_vertices, {});
  std::vector<char> seen(g.num_vertices, 0);
  seen[0] = 1;
  std::deque<std::uint32_t> queue{0};
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (LetterCode c = 0; c < g.num_codes; ++c) {
      std::int32_t w = g.step(v, c);
      if (w == kNone || seen[w]) continue;
      seen[w] = 1;
      t.parent[w] = {v, c};
      t.path[w] = t.path[v];
      t.path[w].push_back(c);
      queue.push_back(static_cast<std::uint32_t>(w));
    }
  }
  return t;
}

std::vector<ReducedWord> compute_basis(const Alphabet& alphabet,
                                       const SubgroupGraph& g) {
  SpanningTree t = spanning_tree(g);
  std::vector<ReducedWord> out;
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    for (LetterCode c = 0; c < g.num_codes; c += 2) {
      std::int32_t wi = g.step(v, c);
      if (wi == kNone) continue;
      std::uint32_t w = static_cast<std::uint32_t>(wi);
      bool tree = (w != 0 && t.parent[w] == std::make_pair(v, c)) ||
                  (v != 0 && t.parent[v] == std::make_pair(w, inverse_code(c)));
      if (tree) continue;
      std::vector<LetterCode> letters = t.path[v];
      letters.push_back(c);
      for (auto it = t.path[w].rbegin(); it != t.path[w].rend(); ++it) {
        letters.push_back(inverse_code(*it));
      }
      out.push_back(reduce(Word(alphabet, std::move(letters))));
    }
  }
  return out;
}

}  // namespace

std::pair<ReducedWord, Subgroup> detach_stem(const Subgroup& h) {
  const SubgroupGraph& g = h.graph();
  auto slots = [&](std::uint32_t v) {
    std::vector<LetterCode> out;
    for (LetterCode c = 0; c < g.num_codes; ++c) {
      if (g.step(v, c) != kNone) out.push_back(c);
    }
    return out;
  };

  // the stem is the maximal path from a degree-1 base through degree-2
  // vertices; only the base can have degree 1 in a cored graph
  std::vector<LetterCode> stem;
  std::uint32_t v = 0;
  auto base_slots = slots(0);
  if (base_slots.size() == 1) {
    LetterCode in = base_slots.front();
    stem.push_back(in);
    v = static_cast<std::uint32_t>(g.step(0, in));
    for (;;) {
      auto here = slots(v);
      if (here.size() != 2) break;
      LetterCode forward =
          (here[0] == inverse_code(in)) ? here[1] : here[0];
      stem.push_back(forward);
      v = static_cast<std::uint32_t>(g.step(v, forward));
      in = forward;
    }
  }
  ReducedWord u = ReducedWord::checked(Word(h.alphabet(), stem));
  if (v == 0) return {u, h};
  // re-core from the new base; the old stem becomes a dangling path
  Folder f = folder_from_graph(g);
  core(f, v);
  return {u, Subgroup(h.alphabet(), canonicalize(f, v))};
}

std::vector<std::int64_t> abelianized_coordinates(const Subgroup& h,
                                                  const ReducedWord& w) {
  require_same_alphabet(h.alphabet(), w.alphabet(), "abelianized_coordinates");
  const SubgroupGraph& g = h.graph();
  SpanningTree t = spanning_tree(g);

  // non-tree edge indices in the same order compute_basis emits them
  std::map<std::pair<std::uint32_t, LetterCode>, std::size_t> edge_index;
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    for (LetterCode c = 0; c < g.num_codes; c += 2) {
      std::int32_t wi = g.step(v, c);
      if (wi == kNone) continue;
      std::uint32_t to = static_cast<std::uint32_t>(wi);
      bool tree = (to != 0 && t.parent[to] == std::make_pair(v, c)) ||
                  (v != 0 && t.parent[v] == std::make_pair(to, inverse_code(c)));
      if (!tree) edge_index.emplace(std::make_pair(v, c), edge_index.size());
    }
  }

  std::vector<std::int64_t> coords(edge_index.size(), 0);
  std::uint32_t v = 0;
  for (LetterCode c : w.letters()) {
    std::int32_t ti = g.step(v, c);
    if (ti == kNone) {
      throw ValidationError("word leaves the subgroup graph: " + w.str());
    }
    std::uint32_t to = static_cast<std::uint32_t>(ti);
    std::pair<std::uint32_t, LetterCode> positive =
        code_is_inverse(c) ? std::make_pair(to, inverse_code(c))
                           : std::make_pair(v, c);
    auto it = edge_index.find(positive);
    if (it != edge_index.end()) {
      coords[it->second] += code_is_inverse(c) ? -1 : 1;
    }
    v = to;
  }
  if (v != 0) {
    throw ValidationError("word does not lie in the subgroup: " + w.str());
  }
  return coords;
}

const std::vector<ReducedWord>& basis(const Subgroup& h) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  GraphCache& cache = graph_caches()[h.key()];
  if (!cache.basis) cache.basis = compute_basis(h.alphabet(), h.graph());
  return *cache.basis;
}

std::size_t rank(const Subgroup& h) { return basis(h).size(); }

std::optional<std::size_t> subgroup_index(const Subgroup& h) {
  const SubgroupGraph& g = h.graph();
  for (std::int32_t t : g.trans) {
    if (t == kNone) return std::nullopt;
  }
  return g.num_vertices;
}

WordAutomaton subgroup_language(const Subgroup& h) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    GraphCache& cache = graph_caches()[h.key()];
    if (cache.language) return *cache.language;
  }
  const SubgroupGraph& g = h.graph();
  std::vector<Edge> edges;
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    for (LetterCode c = 0; c < g.num_codes; ++c) {
      std::int32_t w = g.step(v, c);
      if (w != kNone) edges.push_back({v, c, static_cast<State>(w)});
    }
  }
  WordAutomaton lang = benois_reduce(WordAutomaton(
      h.alphabet(), g.num_vertices, std::move(edges), {0}, {0}, false));
  std::lock_guard<std::mutex> lock(cache_mutex);
  GraphCache& cache = graph_caches()[h.key()];
  if (!cache.language) cache.language = lang;
  return *cache.language;
}

SubgroupReport subgroup_report(const Subgroup& h) {
  return SubgroupReport{basis(h), rank(h), subgroup_index(h),
                        subgroup_language(h)};
}

Subgroup intersect(const Subgroup& h, const Subgroup& k) {
  require_same_alphabet(h.alphabet(), k.alphabet(), "intersect");
  const SubgroupGraph& a = h.graph();
  const SubgroupGraph& b = k.graph();
  std::size_t codes = a.num_codes;

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
  ids[{0, 0}] = 0;
  order.push_back({0, 0});
  Folder f(codes);
  f.fresh();
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto [va, vb] = order[head];
    for (LetterCode c = 0; c < codes; ++c) {
      std::int32_t ta = a.step(va, c);
      std::int32_t tb = b.step(vb, c);
      if (ta == kNone || tb == kNone) continue;
      auto key = std::make_pair(static_cast<std::uint32_t>(ta),
                                static_cast<std::uint32_t>(tb));
      auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(order.size()));
      if (inserted) {
        order.push_back(key);
        f.fresh();
      }
      f.adj[static_cast<std::uint32_t>(head)][c] = static_cast<std::int32_t>(it->second);
    }
  }
  core(f, 0);
  return Subgroup(h.alphabet(), canonicalize(f, 0));
}

Subgroup conjugate(const Subgroup& h, const ReducedWord& g) {
  require_same_alphabet(h.alphabet(), g.alphabet(), "conjugate");
  ReducedWord ginv = invert(g);
  std::vector<ReducedWord> gens;
  for (const ReducedWord& b : basis(h)) {
    gens.push_back(multiply(multiply(ginv, b), g));
  }
  return fold(h.alphabet(), gens);
}

Subgroup join(const std::vector<Subgroup>& parts,
              const std::vector<ReducedWord>& words) {
  if (parts.empty() && words.empty()) {
    throw ValidationError("join requires at least one part");
  }
  Alphabet alphabet =
      parts.empty() ? words.front().alphabet() : parts.front().alphabet();
  std::vector<ReducedWord> gens;
  for (const Subgroup& p : parts) {
    require_same_alphabet(alphabet, p.alphabet(), "join");
    const auto& b = basis(p);
    gens.insert(gens.end(), b.begin(), b.end());
  }
  for (const ReducedWord& w : words) {
    require_same_alphabet(alphabet, w.alphabet(), "join");
    gens.push_back(w);
  }
  return fold(alphabet, gens);
}

bool contains(const Subgroup& h, const Subgroup& k) {
  require_same_alphabet(h.alphabet(), k.alphabet(), "contains");
  for (const ReducedWord& b : basis(k)) {
    if (!member(h, b)) return false;
  }
  return true;
}

namespace {

// one-pair-merge quotients, computed once per graph and shared by every
// overgroup lattice that reaches it
const std::vector<std::string>& direct_quotients(const Alphabet& alphabet,
                                                 const std::string& key) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    GraphCache& cache = graph_caches()[key];
    if (cache.direct_quotients) return *cache.direct_quotients;
  }
  std::shared_ptr<const SubgroupGraph> graph;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    graph = graph_universe().at(key);
  }
  std::vector<std::string> quotients;
  for (std::uint32_t u = 0; u < graph->num_vertices; ++u) {
    for (std::uint32_t v = u + 1; v < graph->num_vertices; ++v) {
      Folder f = folder_from_graph(*graph);
      f.pending.push_back({u, v});
      f.run();
      core(f, 0);
      auto merged = canonicalize(f, 0);
      std::string merged_key = graph_key(alphabet, *merged);
      {
        std::lock_guard<std::mutex> lock(cache_mutex);
        graph_universe().try_emplace(merged_key, std::move(merged));
      }
      if (std::find(quotients.begin(), quotients.end(), merged_key) ==
          quotients.end()) {
        quotients.push_back(merged_key);
      }
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  GraphCache& cache = graph_caches()[key];
  if (!cache.direct_quotients) cache.direct_quotients = std::move(quotients);
  return *cache.direct_quotients;
}

}  // namespace

std::vector<Subgroup> overgroups(const Subgroup& h) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    GraphCache& cache = graph_caches()[h.key()];
    if (cache.overgroups) {
      std::vector<Subgroup> out;
      out.reserve(cache.overgroups->size());
      for (const auto& g : *cache.overgroups) out.emplace_back(h.alphabet(), g);
      return out;
    }
    graph_universe().try_emplace(h.key(), h.graph_ptr());
  }

  // breadth-first closure over the shared quotient relation
  std::vector<std::string> order{h.key()};
  std::set<std::string> seen{h.key()};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const std::string& q : direct_quotients(h.alphabet(), order[head])) {
      if (seen.insert(q).second) {
        order.push_back(q);
        if (order.size() > limits().max_overgroups) {
          throw LimitError("overgroup lattice exceeds configured bound");
        }
      }
    }
  }

  std::vector<std::shared_ptr<const SubgroupGraph>> discovered;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    for (const std::string& key : order) {
      discovered.push_back(graph_universe().at(key));
    }
    GraphCache& cache = graph_caches()[h.key()];
    if (!cache.overgroups) cache.overgroups = discovered;
  }
  std::vector<Subgroup> out;
  out.reserve(discovered.size());
  for (const auto& g : discovered) out.emplace_back(h.alphabet(), g);
  return out;
}

}  // namespace nilclose
