#pragma once

#include <string>

#include <json.hpp>

#include "nilclose/closures.hpp"
#include "nilclose/monoids.hpp"
#include "nilclose/oracle.hpp"
#include "nilclose/stallings.hpp"

namespace nilclose {

using Json = nlohmann::json;

// Words are JSON strings in the text syntax ("aa", "aB", "1").
Json word_to_json(const ReducedWord& w);
ReducedWord word_from_json(const Alphabet& alphabet, const Json& j);

// {"alphabet":["a","b"],"states":N,"initials":[..],"finals":[..],
//  "edges":[[src,"label",dst],..],"reduced":bool}
Json automaton_to_json(const WordAutomaton& a);
WordAutomaton automaton_from_json(const Json& j);
std::string automaton_to_dot(const WordAutomaton& a);

// {"alphabet":"ab","base":0,"edges":[[p,"a",q],..]}; one entry per
// undirected edge, positive label.
Json subgroup_to_json(const Subgroup& h);
Subgroup subgroup_from_json(const Json& j);
std::string subgroup_to_dot(const Subgroup& h);

// {"kind":"finite"|"cofinite","primes":[..]}
Json primeset_to_json(const PrimeSet& p);
PrimeSet primeset_from_json(const Json& j);

// {"alphabet":"ab","terms":[{"g":"w","factors":[["aa","b"],..]},..]};
// factors are generator lists.
Json nf_to_json(const ClosureNormalForm& nf);
ClosureNormalForm nf_from_json(const Json& j);

// {"size":n,"identity":i,"table":[[..],..],"generators":{"a":j,..},
//  "names":[..]?}
Json monoid_to_json(const FiniteMonoid& m);
FiniteMonoid monoid_from_json(const Json& j);

// array of monoid objects with "nilpotency_class" and "name"
Json catalog_to_json(const Catalog& c);
Catalog catalog_from_json(const Json& j);

}  // namespace nilclose
