#include "nilclose/json_io.hpp"

#include <sstream>

namespace nilclose {

namespace {

Alphabet alphabet_from_json(const Json& j) {
  if (j.is_string()) return Alphabet(j.get<std::string>());
  if (j.is_array()) {
    std::string letters;
    for (const auto& item : j) {
      std::string s = item.get<std::string>();
      if (s.size() != 1) {
        throw ValidationError("alphabet letters must be single characters");
      }
      letters += s;
    }
    return Alphabet(letters);
  }
  throw ValidationError("alphabet must be a string or array of letters");
}

LetterCode label_from_json(const Alphabet& alphabet, const Json& j) {
  std::string s = j.get<std::string>();
  if (s.size() != 1) throw ValidationError("edge label must be one symbol");
  auto code = alphabet.code_of(s[0]);
  if (!code) {
    throw AlphabetError("unknown edge label '" + s + "' for alphabet " +
                        alphabet.letters());
  }
  return *code;
}

}  // namespace

Json word_to_json(const ReducedWord& w) { return w.str(); }

ReducedWord word_from_json(const Alphabet& alphabet, const Json& j) {
  return parse_reduced(alphabet, j.get<std::string>());
}

Json automaton_to_json(const WordAutomaton& a) {
  Json j;
  Json alphabet = Json::array();
  for (char c : a.alphabet().letters()) alphabet.push_back(std::string(1, c));
  j["alphabet"] = alphabet;
  j["states"] = a.num_states();
  j["initials"] = a.initials();
  j["finals"] = a.finals();
  Json edges = Json::array();
  for (const Edge& e : a.edges()) {
    edges.push_back(Json::array(
        {e.src, std::string(1, a.alphabet().code_name(e.label)), e.dst}));
  }
  j["edges"] = edges;
  j["reduced"] = a.reduced();
  return j;
}

WordAutomaton automaton_from_json(const Json& j) {
  Alphabet alphabet = alphabet_from_json(j.at("alphabet"));
  State states = j.at("states").get<State>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) {
      throw ValidationError("automaton edge must be [src, label, dst]");
    }
    edges.push_back({e[0].get<State>(), label_from_json(alphabet, e[1]),
                     e[2].get<State>()});
  }
  return WordAutomaton(alphabet, states, std::move(edges),
                       j.at("initials").get<std::vector<State>>(),
                       j.at("finals").get<std::vector<State>>(),
                       j.value("reduced", false));
}

std::string automaton_to_dot(const WordAutomaton& a) {
  std::ostringstream os;
  os << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (State f : a.finals()) os << "  " << f << " [shape=doublecircle];\n";
  for (std::size_t i = 0; i < a.initials().size(); ++i) {
    os << "  start" << i << " [shape=none, label=\"\"];\n";
    os << "  start" << i << " -> " << a.initials()[i] << ";\n";
  }
  for (const Edge& e : a.edges()) {
    os << "  " << e.src << " -> " << e.dst << " [label=\""
       << a.alphabet().code_name(e.label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

Json subgroup_to_json(const Subgroup& h) {
  Json j;
  j["alphabet"] = h.alphabet().letters();
  j["base"] = 0;
  Json edges = Json::array();
  const SubgroupGraph& g = h.graph();
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    for (LetterCode c = 0; c < g.num_codes; c += 2) {
      std::int32_t w = g.step(v, c);
      if (w < 0) continue;
      edges.push_back(Json::array(
          {v, std::string(1, h.alphabet().code_name(c)), static_cast<std::uint32_t>(w)}));
    }
  }
  j["edges"] = edges;
  return j;
}

Subgroup subgroup_from_json(const Json& j) {
  Alphabet alphabet = alphabet_from_json(j.at("alphabet"));
  std::uint32_t base = j.value("base", 0u);
  std::vector<std::tuple<std::uint32_t, LetterCode, std::uint32_t>> edges;
  std::uint32_t max_vertex = base;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) {
      throw ValidationError("subgroup edge must be [src, label, dst]");
    }
    std::uint32_t src = e[0].get<std::uint32_t>();
    std::uint32_t dst = e[2].get<std::uint32_t>();
    max_vertex = std::max({max_vertex, src, dst});
    edges.emplace_back(src, label_from_json(alphabet, e[1]), dst);
  }
  return subgroup_from_edges(alphabet, max_vertex + 1, edges, base);
}

std::string subgroup_to_dot(const Subgroup& h) {
  std::ostringstream os;
  const SubgroupGraph& g = h.graph();
  os << "digraph subgroup {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  0 [shape=doublecircle];\n";
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    for (LetterCode c = 0; c < g.num_codes; c += 2) {
      std::int32_t w = g.step(v, c);
      if (w < 0) continue;
      os << "  " << v << " -> " << w << " [label=\""
         << h.alphabet().code_name(c) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

Json primeset_to_json(const PrimeSet& p) {
  Json j;
  j["kind"] = p.is_finite() ? "finite" : "cofinite";
  j["primes"] = p.listed();
  return j;
}

PrimeSet primeset_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  auto primes = j.at("primes").get<std::vector<std::uint64_t>>();
  if (kind == "finite") return PrimeSet::finite(std::move(primes));
  if (kind == "cofinite") return PrimeSet::cofinite(std::move(primes));
  throw ValidationError("prime set kind must be finite or cofinite");
}

Json nf_to_json(const ClosureNormalForm& nf) {
  Json j;
  j["alphabet"] = nf.alphabet().letters();
  Json terms = Json::array();
  for (const ClosureTerm& t : nf.terms()) {
    Json term;
    term["g"] = t.translation.str();
    Json factors = Json::array();
    for (const Subgroup& f : t.factors) {
      Json gens = Json::array();
      for (const ReducedWord& b : basis(f)) gens.push_back(b.str());
      factors.push_back(gens);
    }
    term["factors"] = factors;
    terms.push_back(term);
  }
  j["terms"] = terms;
  return j;
}

ClosureNormalForm nf_from_json(const Json& j) {
  Alphabet alphabet = alphabet_from_json(j.at("alphabet"));
  std::vector<ClosureTerm> terms;
  for (const auto& t : j.at("terms")) {
    ClosureTerm term{parse_reduced(alphabet, t.at("g").get<std::string>()), {}};
    for (const auto& gens : t.at("factors")) {
      std::vector<ReducedWord> words;
      for (const auto& w : gens) {
        words.push_back(parse_reduced(alphabet, w.get<std::string>()));
      }
      term.factors.push_back(fold(alphabet, words));
    }
    terms.push_back(std::move(term));
  }
  return ClosureNormalForm(alphabet, std::move(terms));
}

Json monoid_to_json(const FiniteMonoid& m) {
  Json j;
  j["size"] = m.size();
  j["identity"] = m.identity();
  Json table = Json::array();
  for (std::uint32_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::uint32_t k = 0; k < m.size(); ++k) row.push_back(m.mul(i, k));
    table.push_back(row);
  }
  j["table"] = table;
  Json gens;
  for (std::size_t i = 0; i < m.alphabet().size(); ++i) {
    gens[std::string(1, m.alphabet().letter(i))] = m.gen_images()[i];
  }
  j["generators"] = gens;
  j["names"] = m.names();
  return j;
}

FiniteMonoid monoid_from_json(const Json& j) {
  std::size_t size = j.at("size").get<std::size_t>();
  std::uint32_t identity = j.at("identity").get<std::uint32_t>();
  const Json& table_json = j.at("table");
  if (!table_json.is_array() || table_json.size() != size) {
    throw ValidationError("monoid table must have `size` rows");
  }
  std::vector<std::uint32_t> table;
  table.reserve(size * size);
  for (const auto& row : table_json) {
    if (!row.is_array() || row.size() != size) {
      throw ValidationError("monoid table must be square");
    }
    for (const auto& x : row) table.push_back(x.get<std::uint32_t>());
  }
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  if (!j.contains("generators") || j.at("generators").is_null()) {
    return FiniteMonoid::with_all_generators(std::move(table), identity,
                                             std::move(names));
  }
  std::string letters;
  std::vector<std::uint32_t> images;
  // object iteration in nlohmann is key-sorted, keeping this deterministic
  for (const auto& [key, value] : j.at("generators").items()) {
    if (key.size() != 1) {
      throw ValidationError("generator letters must be single characters");
    }
    letters += key;
    images.push_back(value.get<std::uint32_t>());
  }
  return FiniteMonoid(std::move(table), identity, Alphabet(letters),
                      std::move(images), std::move(names));
}

Json catalog_to_json(const Catalog& c) {
  Json j = Json::array();
  for (const GroupPtr& g : c.groups) {
    Json entry = monoid_to_json(g->monoid);
    if (g->nilpotency_class) entry["nilpotency_class"] = *g->nilpotency_class;
    entry["name"] = g->name;
    j.push_back(entry);
  }
  return j;
}

Catalog catalog_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("catalog must be a JSON array");
  Catalog c;
  for (const auto& entry : j) {
    FiniteGroupTable table{monoid_from_json(entry), std::nullopt,
                           entry.value("name", std::string("group"))};
    if (entry.contains("nilpotency_class")) {
      table.nilpotency_class = entry.at("nilpotency_class").get<std::uint32_t>();
    }
    auto actual = nilpotency_class_of(table.monoid);
    if (!actual) {
      throw ValidationError("catalog member is not nilpotent: " + table.name);
    }
    if (table.nilpotency_class && *table.nilpotency_class != *actual) {
      throw ValidationError("wrong nilpotency class for " + table.name);
    }
    table.nilpotency_class = actual;
    c.groups.push_back(std::make_shared<FiniteGroupTable>(std::move(table)));
  }
  return c;
}

}  // namespace nilclose
