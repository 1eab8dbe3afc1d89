#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nilclose/cli.hpp"
#include "nilclose/json_io.hpp"

namespace py = pybind11;
using namespace nilclose;

namespace {

ReducedWord rw(const Alphabet& a, const std::string& text) {
  return parse_reduced(a, text);
}

std::vector<ReducedWord> rws(const Alphabet& a,
                             const std::vector<std::string>& texts) {
  std::vector<ReducedWord> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse_reduced(a, t));
  return out;
}

std::vector<std::string> basis_strings(const Subgroup& h) {
  std::vector<std::string> out;
  for (const ReducedWord& b : basis(h)) out.push_back(b.str());
  return out;
}

}  // namespace

PYBIND11_MODULE(_nilclose, m) {
  m.doc() =
      "pro-p, pro-nilpotent and profinite closures in free groups, and the "
      "monoid pseudovariety tests built on them";

  py::register_exception<LimitError>(m, "LimitError");
  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<AlphabetError>(m, "AlphabetError", PyExc_ValueError);
  py::register_exception<FlagError>(m, "FlagError", PyExc_ValueError);

  py::class_<Alphabet>(m, "Alphabet")
      .def(py::init([](const std::string& letters) { return Alphabet(letters); }),
           py::arg("letters"))
      .def_property_readonly("letters",
                             [](const Alphabet& a) { return a.letters(); })
      .def("__eq__", [](const Alphabet& a, const Alphabet& b) { return a == b; })
      .def("__repr__", [](const Alphabet& a) {
        return "Alphabet('" + a.letters() + "')";
      });

  m.def("reduce_word", [](const Alphabet& a, const std::string& text) {
    return rw(a, text).str();
  }, py::arg("alphabet"), py::arg("word"), "freely reduce a word");
  m.def("multiply_words",
        [](const Alphabet& a, const std::string& u, const std::string& v) {
          return multiply(rw(a, u), rw(a, v)).str();
        });
  m.def("invert_word", [](const Alphabet& a, const std::string& u) {
    return invert(rw(a, u)).str();
  });

  py::class_<Subgroup>(m, "Subgroup")
      .def_property_readonly("alphabet", &Subgroup::alphabet)
      .def_property_readonly("num_vertices", &Subgroup::num_vertices)
      .def_property_readonly("is_trivial", &Subgroup::is_trivial)
      .def_property_readonly("rank", [](const Subgroup& h) { return rank(h); })
      .def_property_readonly("index",
                             [](const Subgroup& h) { return subgroup_index(h); })
      .def_property_readonly("basis", &basis_strings)
      .def("member",
           [](const Subgroup& h, const std::string& w) {
             return member(h, rw(h.alphabet(), w));
           })
      .def("language", &subgroup_language)
      .def("to_json", [](const Subgroup& h) { return subgroup_to_json(h).dump(); })
      .def("to_dot", &subgroup_to_dot)
      .def("__eq__", [](const Subgroup& a, const Subgroup& b) { return a == b; })
      .def("__repr__", [](const Subgroup& h) {
        std::string out = "Subgroup<";
        bool first = true;
        for (const std::string& b : basis_strings(h)) {
          if (!first) out += ",";
          out += b;
          first = false;
        }
        return out + ">";
      });

  m.def("fold",
        [](const Alphabet& a, const std::vector<std::string>& gens) {
          return fold(a, rws(a, gens));
        },
        py::arg("alphabet"), py::arg("generators"),
        "Stallings graph of the subgroup generated by the given words");
  m.def("full_group", &full_group);
  m.def("trivial_subgroup", &trivial_subgroup);
  m.def("intersect", &intersect);
  m.def("conjugate", [](const Subgroup& h, const std::string& g) {
    return conjugate(h, rw(h.alphabet(), g));
  });
  m.def("join", [](const std::vector<Subgroup>& parts,
                   const std::vector<std::string>& words) {
    std::vector<ReducedWord> ws;
    if (!parts.empty()) ws = rws(parts.front().alphabet(), words);
    return join(parts, ws);
  }, py::arg("subgroups"), py::arg("words") = std::vector<std::string>{});
  m.def("contains", &contains);
  m.def("overgroups", &overgroups);
  m.def("subgroup_from_json", [](const std::string& text) {
    return subgroup_from_json(Json::parse(text));
  });

  py::class_<PrimeSet>(m, "PrimeSet")
      .def_static("finite", &PrimeSet::finite)
      .def_static("cofinite", &PrimeSet::cofinite)
      .def_static("all", &PrimeSet::all)
      .def_static("none", &PrimeSet::none)
      .def_property_readonly("is_finite", &PrimeSet::is_finite)
      .def_property_readonly("listed", &PrimeSet::listed)
      .def_property_readonly("empty", &PrimeSet::empty)
      .def("contains", &PrimeSet::contains)
      .def("intersect", &PrimeSet::intersect)
      .def("unite", &PrimeSet::unite)
      .def("complement", &PrimeSet::complement)
      .def("__eq__", [](const PrimeSet& a, const PrimeSet& b) { return a == b; })
      .def("__str__", &PrimeSet::str)
      .def("__repr__", [](const PrimeSet& p) { return "PrimeSet(" + p.str() + ")"; });

  m.def("dense_primes", &dense_primes, py::arg("k"), py::arg("l"),
        "primes p for which K is p-dense in L");
  m.def("primes_closed", &primes_closed,
        "primes p for which the subgroup is p-closed");
  m.def("p_closure", &p_closure);
  m.def("p_closure_product", &p_closure_product);
  m.def("nil_closure_subgroup", &nil_closure_subgroup);
  m.def("nil_closure_product", &nil_closure_product);
  m.def("union_p_dense", &union_p_dense);

  py::class_<WordAutomaton>(m, "Automaton")
      .def_property_readonly("alphabet", &WordAutomaton::alphabet)
      .def_property_readonly("num_states", &WordAutomaton::num_states)
      .def_property_readonly("reduced", &WordAutomaton::reduced)
      .def("accepts",
           [](const WordAutomaton& a, const std::string& w) {
             return accepts(a, parse_word(a.alphabet(), w));
           })
      .def("is_empty", [](const WordAutomaton& a) { return is_empty(a); })
      .def("is_universal", [](const WordAutomaton& a) { return is_universal(a); })
      .def("to_json",
           [](const WordAutomaton& a) { return automaton_to_json(a).dump(); })
      .def("to_dot", &automaton_to_dot)
      .def("__repr__", [](const WordAutomaton& a) {
        return "Automaton(states=" + std::to_string(a.num_states()) +
               (a.reduced() ? ", reduced" : "") + ")";
      });

  m.def("compare", [](const WordAutomaton& a, const WordAutomaton& b) {
    return relation_name(compare(a, b));
  }, "language comparison: equal, strict_subset, strict_superset, incomparable");
  m.def("universal_reduced", &universal_reduced);
  m.def("empty_automaton", &empty_automaton);
  m.def("automaton_from_json", [](const std::string& text) {
    return automaton_from_json(Json::parse(text));
  });
  m.def("benois_reduce", &benois_reduce,
        "automaton of the reduced words representing elements of the input's image");
  m.def("automaton_union", &automaton_union);
  m.def("automaton_concat", &automaton_concat);
  m.def("automaton_star", &automaton_star);
  m.def("intersect_reduced", &intersect_reduced);
  m.def("complement_reduced", &complement_reduced);
  m.def("difference_reduced", &difference_reduced);

  py::class_<RationalExpression>(m, "RationalExpression")
      .def_property_readonly("alphabet", &RationalExpression::alphabet)
      .def("__str__", &RationalExpression::str)
      .def("__repr__", [](const RationalExpression& e) {
        return "RationalExpression('" + e.str() + "')";
      });
  m.def("parse_expression", [](const Alphabet& a, const std::string& text) {
    return parse_expression(a, text);
  });
  m.def("compile_expression", &compile_expression);
  m.def("extract_expression", &extract_expression);

  py::class_<ClosureTerm>(m, "ClosureTerm")
      .def_property_readonly("translation",
                             [](const ClosureTerm& t) { return t.translation.str(); })
      .def_readonly("factors", &ClosureTerm::factors);

  py::class_<ClosureNormalForm>(m, "ClosureNormalForm")
      .def_property_readonly("terms", &ClosureNormalForm::terms)
      .def("to_json",
           [](const ClosureNormalForm& nf) { return nf_to_json(nf).dump(); })
      .def("automaton", &nf_to_automaton);
  m.def("pro_g_closure", &pro_g_closure,
        "profinite closure of a rational subset as a union of g·H1···Hn terms");
  m.def("nf_from_json", [](const std::string& text) {
    return nf_from_json(Json::parse(text));
  });

  m.def("nil_closure_rational",
        py::overload_cast<const RationalExpression&>(&nil_closure_rational));
  m.def("nil_closure_rational",
        py::overload_cast<const WordAutomaton&>(&nil_closure_rational));

  py::class_<FiniteMonoid>(m, "FiniteMonoid")
      .def_property_readonly("size", &FiniteMonoid::size)
      .def_property_readonly("identity", &FiniteMonoid::identity)
      .def_property_readonly("names", &FiniteMonoid::names)
      .def("mul", &FiniteMonoid::mul)
      .def("to_json",
           [](const FiniteMonoid& mo) { return monoid_to_json(mo).dump(); })
      .def("__repr__", [](const FiniteMonoid& mo) {
        return "FiniteMonoid(size=" + std::to_string(mo.size()) + ")";
      });
  m.def("monoid_from_json", [](const std::string& text) {
    return monoid_from_json(Json::parse(text));
  });
  m.def("cyclic_group", &cyclic_group);
  m.def("quaternion_q8", &quaternion_q8);
  m.def("dihedral_d4", &dihedral_d4);
  m.def("direct_product", &direct_product);
  m.def("submonoid", &submonoid);

  py::class_<StructureReport>(m, "StructureReport")
      .def_readonly("j_classes", &StructureReport::j_classes)
      .def_readonly("is_j_trivial", &StructureReport::is_j_trivial)
      .def_readonly("regular", &StructureReport::regular)
      .def_readonly("is_block_group", &StructureReport::is_block_group)
      .def_readonly("is_group", &StructureReport::is_group)
      .def_readonly("is_nilpotent_group", &StructureReport::is_nilpotent_group);
  m.def("analyze_structure", &analyze_structure);
  m.def("cayley_language", &cayley_language);
  m.def("liftable", &liftable);
  m.def("gnil_kernel", &gnil_kernel,
        "elements related to 1 under every relational morphism to a finite "
        "nilpotent group");
  m.def("pointlike_pair", &pointlike_pair);
  m.def("in_j_star_gnil", [](const FiniteMonoid& mo) {
    JStarGnilResult r = in_J_star_Gnil(mo);
    return py::make_tuple(r.member, r.reason, r.failing_pair);
  });
  m.def("in_j_malcev_gnil", &in_J_malcev_Gnil);

  py::class_<Catalog>(m, "Catalog")
      .def_property_readonly("size",
                             [](const Catalog& c) { return c.groups.size(); })
      .def_property_readonly("names", [](const Catalog& c) {
        std::vector<std::string> names;
        for (const GroupPtr& g : c.groups) names.push_back(g->name);
        return names;
      })
      .def("to_json", [](const Catalog& c) { return catalog_to_json(c).dump(); });
  m.def("nilpotent_catalog", &nilpotent_catalog);
  m.def("catalog_from_json", [](const std::string& text) {
    return catalog_from_json(Json::parse(text));
  });
  m.def("approx_closure_check",
        [](const WordAutomaton& lang, const std::string& w, const Catalog& c) {
          return approx_closure_check(lang, rw(lang.alphabet(), w), c);
        });
  m.def("pseudonorm", [](const Alphabet& a, const std::string& g,
                         const Catalog& c) {
    PseudonormResult r = pseudonorm(rw(a, g), c);
    std::optional<std::string> witness;
    if (r.witness_group) witness = c.groups[*r.witness_group]->name;
    return py::make_tuple(r.norm.str(), r.norm.value(), witness);
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "run a nilclose CLI invocation in-process; returns (exit, stdout, stderr)");

  m.def("set_max_states", [](std::size_t n) { limits().max_states = n; });
  m.def("set_max_overgroups", [](std::size_t n) { limits().max_overgroups = n; });
}
