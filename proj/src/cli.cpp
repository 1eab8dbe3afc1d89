#include "nilclose/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "nilclose/json_io.hpp"
#include "nilclose/primes.hpp"

namespace nilclose {

namespace {

struct Settings {
  std::string format = "text";
  std::string catalog_path;
  std::size_t catalog_order = 8;
};

std::vector<ReducedWord> parse_generators(const Alphabet& alphabet,
                                          const std::string& spec) {
  std::vector<ReducedWord> gens;
  std::string current;
  std::stringstream ss(spec);
  while (std::getline(ss, current, ',')) {
    gens.push_back(parse_reduced(alphabet, current));
  }
  return gens;
}

// factor groups in a product are separated by ";" tokens
std::vector<std::vector<ReducedWord>> parse_factors(
    const Alphabet& alphabet, const std::vector<std::string>& args) {
  std::vector<std::vector<ReducedWord>> factors;
  std::vector<std::string> chunk;
  auto flush = [&]() {
    if (chunk.empty()) {
      throw ValidationError("empty factor in product (stray ';'?)");
    }
    std::string joined;
    for (const auto& c : chunk) joined += c + ",";
    joined.pop_back();
    factors.push_back(parse_generators(alphabet, joined));
    chunk.clear();
  };
  for (const std::string& a : args) {
    if (a == ";") {
      flush();
    } else {
      chunk.push_back(a);
    }
  }
  flush();
  return factors;
}

Json load_json(const std::string& path) {
  if (path == "-") {
    return Json::parse(std::cin);
  }
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return Json::parse(in);
}

Catalog load_catalog(const Settings& settings) {
  if (!settings.catalog_path.empty()) {
    return catalog_from_json(load_json(settings.catalog_path));
  }
  return nilpotent_catalog(settings.catalog_order);
}

void print_subgroup(const Settings& s, const Subgroup& h, std::ostream& out) {
  if (s.format == "json") {
    out << subgroup_to_json(h).dump(2) << "\n";
    return;
  }
  if (s.format == "dot") {
    out << subgroup_to_dot(h);
    return;
  }
  SubgroupReport rep = subgroup_report(h);
  out << "vertices: " << h.num_vertices() << "\n";
  out << "rank: " << rep.rank << "\n";
  out << "index: " << (rep.index ? std::to_string(*rep.index) : "infinite")
      << "\n";
  out << "basis:";
  for (const ReducedWord& b : rep.basis) out << " " << b.str();
  out << "\n";
  const SubgroupGraph& g = h.graph();
  out << "edges:";
  for (std::uint32_t v = 0; v < g.num_vertices; ++v) {
    for (LetterCode c = 0; c < g.num_codes; c += 2) {
      std::int32_t w = g.step(v, c);
      if (w >= 0) {
        out << " " << v << "-" << h.alphabet().code_name(c) << "->" << w;
      }
    }
  }
  out << "\n";
}

void print_automaton(const Settings& s, const WordAutomaton& a,
                     std::ostream& out) {
  if (s.format == "json") {
    out << automaton_to_json(a).dump(2) << "\n";
    return;
  }
  if (s.format == "dot") {
    out << automaton_to_dot(a);
    return;
  }
  out << "states: " << a.num_states() << "\n";
  out << "edges: " << a.edges().size() << "\n";
  out << "empty: " << (is_empty(a) ? "yes" : "no") << "\n";
  if (a.reduced()) {
    out << "universal: " << (is_universal(a) ? "yes" : "no") << "\n";
  }
}

struct UsageError : Error {
  using Error::Error;
};

void require_format(const Settings& s,
                    const std::vector<std::string>& allowed) {
  for (const std::string& f : allowed) {
    if (s.format == f) return;
  }
  throw UsageError("--format " + s.format + " not supported here");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  // budgets set via flags apply to this invocation only; in-process callers
  // (tests, bindings) keep their configuration
  struct LimitsGuard {
    Limits saved = limits();
    ~LimitsGuard() { limits() = saved; }
  } limits_guard;

  CLI::App app{"pro-p, pro-nilpotent and profinite closures in free groups"};
  app.name("nilclose");
  app.require_subcommand(1);

  Settings settings;
  std::size_t max_states = limits().max_states;
  std::size_t max_overgroups = limits().max_overgroups;
  bool timing = false;
  app.add_option("--format", settings.format, "output format")
      ->check(CLI::IsMember({"text", "json", "dot"}))
      ->capture_default_str();
  app.add_flag("--timing", timing, "print elapsed time to stderr");
  app.add_option("--max-states", max_states,
                 "state budget for determinization and products");
  app.add_option("--max-overgroups", max_overgroups,
                 "bound on overgroup lattice size");
  app.add_option("--catalog", settings.catalog_path,
                 "JSON file with a nilpotent-group catalog");
  app.add_option("--catalog-order", settings.catalog_order,
                 "max order for the generated default catalog")
      ->capture_default_str();

  // pieces shared by the subcommand callbacks
  std::string alphabet_arg;
  std::vector<std::string> positionals;
  std::uint64_t prime_arg = 0;
  std::string check_arg;
  std::size_t max_order = 16;

  // callbacks run inside parse(), so budgets are applied there
  auto apply_limits = [&]() {
    limits().max_states = max_states;
    limits().max_overgroups = max_overgroups;
  };
  auto alphabet = [&]() { return Alphabet(alphabet_arg); };
  auto fold_positional = [&](const std::string& text) {
    return fold(alphabet(), parse_generators(alphabet(), text));
  };
  auto one_positional = [&]() -> const std::string& {
    if (positionals.size() != 1) {
      throw UsageError("expected exactly one positional argument");
    }
    return positionals.front();
  };

  auto add_alphabet = [&](CLI::App* sub) {
    sub->add_option("--alphabet", alphabet_arg, "free group generators, e.g. ab")
        ->required();
  };

  CLI::App* stallings = app.add_subcommand(
      "stallings", "fold generators into a subgroup graph");
  add_alphabet(stallings);
  stallings->add_option("generators", positionals, "comma-separated words")
      ->required();
  stallings->callback([&]() {
    apply_limits();
    print_subgroup(settings, fold_positional(one_positional()), out);
  });

  CLI::App* over = app.add_subcommand(
      "overgroups", "enumerate the overgroup lattice of a subgroup");
  add_alphabet(over);
  over->add_option("generators", positionals)->required();
  over->callback([&]() {
    apply_limits();
    auto list = overgroups(fold_positional(one_positional()));
    if (settings.format == "json") {
      Json j = Json::array();
      for (const Subgroup& s : list) j.push_back(subgroup_to_json(s));
      out << j.dump(2) << "\n";
      return;
    }
    require_format(settings, {"text"});
    out << "overgroups: " << list.size() << "\n";
    for (const Subgroup& s : list) {
      out << "- vertices " << s.num_vertices() << " rank " << rank(s)
          << " basis:";
      for (const ReducedWord& b : basis(s)) out << " " << b.str();
      out << "\n";
    }
  });

  CLI::App* primes_cmd = app.add_subcommand(
      "primes-closed", "the set of primes p for which the subgroup is p-closed");
  add_alphabet(primes_cmd);
  primes_cmd->add_option("generators", positionals)->required();
  primes_cmd->callback([&]() {
    apply_limits();
    PrimeSet ps = primes_closed(fold_positional(one_positional()));
    if (settings.format == "json") {
      out << primeset_to_json(ps).dump(2) << "\n";
    } else {
      require_format(settings, {"text"});
      out << ps.str() << "\n";
    }
  });

  CLI::App* pclo = app.add_subcommand("pclosure", "pro-p closure of a subgroup");
  add_alphabet(pclo);
  pclo->add_option("-p,--prime", prime_arg, "prime p")->required();
  pclo->add_option("generators", positionals)->required();
  pclo->callback([&]() {
    apply_limits();
    if (!is_prime_u64(prime_arg)) {
      throw UsageError("-p expects a prime, got " + std::to_string(prime_arg));
    }
    print_subgroup(settings, p_closure(fold_positional(one_positional()), prime_arg),
                   out);
  });

  CLI::App* nil = app.add_subcommand("nilclosure", "pro-nilpotent closures");
  nil->require_subcommand(1);

  CLI::App* nil_sub = nil->add_subcommand("subgroup", "nil-closure of a subgroup");
  add_alphabet(nil_sub);
  nil_sub->add_option("generators", positionals)->required();
  nil_sub->callback([&]() {
    apply_limits();
    print_subgroup(settings, nil_closure_subgroup(fold_positional(one_positional())),
                   out);
  });

  CLI::App* nil_prod = nil->add_subcommand(
      "product", "nil-closure of a product H1 H2 ... (factors separated by ';')");
  add_alphabet(nil_prod);
  nil_prod->add_option("factors", positionals)->required();
  nil_prod->callback([&]() {
    apply_limits();
    std::vector<Subgroup> hs;
    for (const auto& gens : parse_factors(alphabet(), positionals)) {
      hs.push_back(fold(alphabet(), gens));
    }
    print_automaton(settings, nil_closure_product(hs), out);
  });

  CLI::App* nil_rat = nil->add_subcommand(
      "rational", "nil-closure of a rational subset given by an expression");
  add_alphabet(nil_rat);
  nil_rat->add_option("expression", positionals)->required();
  nil_rat->callback([&]() {
    apply_limits();
    auto e = parse_expression(alphabet(), one_positional());
    print_automaton(settings, nil_closure_rational(e), out);
  });

  CLI::App* clo = app.add_subcommand("closure", "other closures");
  clo->require_subcommand(1);
  CLI::App* clo_pro = clo->add_subcommand(
      "profinite", "profinite closure of a rational subset, as g·H1···Hn terms");
  add_alphabet(clo_pro);
  clo_pro->add_option("expression", positionals)->required();
  clo_pro->callback([&]() {
    apply_limits();
    auto nf = pro_g_closure(parse_expression(alphabet(), one_positional()));
    if (settings.format == "json") {
      out << nf_to_json(nf).dump(2) << "\n";
      return;
    }
    require_format(settings, {"text"});
    out << "terms: " << nf.terms().size() << "\n";
    for (const ClosureTerm& t : nf.terms()) {
      out << "- g = " << t.translation.str() << ", factors:";
      for (const Subgroup& f : t.factors) {
        out << " <";
        const auto& b = basis(f);
        for (std::size_t i = 0; i < b.size(); ++i) {
          if (i) out << ",";
          out << b[i].str();
        }
        out << ">";
      }
      out << "\n";
    }
  });

  CLI::App* pnorm = app.add_subcommand(
      "pseudonorm", "catalog-bounded pro-nil pseudonorm of a word");
  add_alphabet(pnorm);
  pnorm->add_option("word", positionals)->required();
  pnorm->callback([&]() {
    apply_limits();
    Catalog catalog = load_catalog(settings);
    ReducedWord w = parse_reduced(alphabet(), one_positional());
    PseudonormResult r = pseudonorm(w, catalog);
    if (settings.format == "json") {
      Json j;
      j["word"] = w.str();
      j["norm"] = r.norm.str();
      if (r.witness) {
        j["witness_group"] = catalog.groups[*r.witness_group]->name;
        j["witness_images"] = r.witness->images;
      }
      out << j.dump(2) << "\n";
      return;
    }
    require_format(settings, {"text"});
    out << "|" << w.str() << "| = " << r.norm.str() << "\n";
    if (r.witness) {
      out << "witness: " << catalog.groups[*r.witness_group]->name << ", images";
      for (std::size_t i = 0; i < r.witness->images.size(); ++i) {
        out << " " << alphabet().letter(i) << "->"
            << r.witness->target->monoid.name_of(r.witness->images[i]);
      }
      out << "\n";
    }
  });

  CLI::App* monoid = app.add_subcommand("monoid", "finite monoid analysis");
  monoid->require_subcommand(1);

  CLI::App* analyze = monoid->add_subcommand("analyze", "structure and pseudovariety checks");
  analyze->add_option("file", positionals, "monoid JSON file, or - for stdin")
      ->required();
  analyze->add_option("--check", check_arg, "one of: j-star-gnil, j-malcev-gnil")
      ->check(CLI::IsMember({"j-star-gnil", "j-malcev-gnil"}));
  analyze->callback([&]() {
    apply_limits();
    FiniteMonoid m = monoid_from_json(load_json(one_positional()));
    if (check_arg == "j-star-gnil") {
      JStarGnilResult r = in_J_star_Gnil(m);
      if (settings.format == "json") {
        Json j;
        j["member"] = r.member;
        j["reason"] = r.reason;
        if (r.failing_pair) {
          j["failing_pair"] = Json::array({m.name_of(r.failing_pair->first),
                                           m.name_of(r.failing_pair->second)});
        }
        out << j.dump(2) << "\n";
      } else {
        require_format(settings, {"text"});
        out << (r.member ? "true" : "false") << "\n" << r.reason << "\n";
      }
      return;
    }
    if (check_arg == "j-malcev-gnil") {
      bool member = in_J_malcev_Gnil(m);
      if (settings.format == "json") {
        out << Json{{"member", member}}.dump(2) << "\n";
      } else {
        require_format(settings, {"text"});
        out << (member ? "true" : "false") << "\n";
      }
      return;
    }
    StructureReport r = analyze_structure(m);
    if (settings.format == "json") {
      Json j;
      j["size"] = m.size();
      j["j_trivial"] = r.is_j_trivial;
      j["block_group"] = r.is_block_group;
      j["group"] = r.is_group;
      j["nilpotent_group"] = r.is_nilpotent_group;
      Json classes = Json::array();
      for (const auto& cls : r.j_classes) {
        Json one = Json::array();
        for (std::uint32_t x : cls) one.push_back(m.name_of(x));
        classes.push_back(one);
      }
      j["j_classes"] = classes;
      Json regular = Json::array();
      for (std::uint32_t x = 0; x < m.size(); ++x) {
        if (r.regular[x]) regular.push_back(m.name_of(x));
      }
      j["regular"] = regular;
      out << j.dump(2) << "\n";
      return;
    }
    require_format(settings, {"text"});
    out << "size: " << m.size() << "\n";
    out << "j-trivial: " << (r.is_j_trivial ? "yes" : "no") << "\n";
    out << "block group: " << (r.is_block_group ? "yes" : "no") << "\n";
    out << "group: " << (r.is_group ? "yes" : "no") << "\n";
    out << "nilpotent group: " << (r.is_nilpotent_group ? "yes" : "no") << "\n";
    out << "j-classes:";
    for (const auto& cls : r.j_classes) {
      out << " {";
      for (std::size_t i = 0; i < cls.size(); ++i) {
        if (i) out << ",";
        out << m.name_of(cls[i]);
      }
      out << "}";
    }
    out << "\n";
  });

  CLI::App* kernel_cmd = monoid->add_subcommand("kernel", "the G_nil-kernel");
  kernel_cmd->add_option("file", positionals)->required();
  kernel_cmd->callback([&]() {
    apply_limits();
    FiniteMonoid m = monoid_from_json(load_json(one_positional()));
    ElementSubset kernel = gnil_kernel(m);
    if (settings.format == "json") {
      Json j;
      Json members = Json::array();
      for (std::uint32_t x = 0; x < m.size(); ++x) {
        if (kernel[x]) members.push_back(m.name_of(x));
      }
      j["kernel"] = members;
      j["submonoid"] = monoid_to_json(submonoid(m, kernel));
      out << j.dump(2) << "\n";
      return;
    }
    require_format(settings, {"text"});
    out << "kernel:";
    for (std::uint32_t x = 0; x < m.size(); ++x) {
      if (kernel[x]) out << " " << m.name_of(x);
    }
    out << "\n";
  });

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "nilpotent group catalogs");
  catalog_cmd->require_subcommand(1);
  CLI::App* generate = catalog_cmd->add_subcommand("generate", "generate a catalog");
  generate->add_option("--max-order", max_order, "largest group order")
      ->capture_default_str();
  generate->callback([&]() {
    apply_limits();
    Catalog c = nilpotent_catalog(max_order);
    if (settings.format == "json") {
      out << catalog_to_json(c).dump(2) << "\n";
      return;
    }
    require_format(settings, {"text"});
    out << "groups: " << c.groups.size() << "\n";
    for (const GroupPtr& g : c.groups) {
      out << "- " << g->name << " order " << g->monoid.size() << " class "
          << (g->nilpotency_class ? std::to_string(*g->nilpotency_class) : "?")
          << "\n";
    }
  });

  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* node) {
    for (CLI::App* sub : node->get_subcommands({})) {
      sub->fallthrough();
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  std::vector<const char*> argv;
  argv.push_back("nilclose");
  for (const std::string& a : args) argv.push_back(a.c_str());

  auto started = std::chrono::steady_clock::now();
  struct TimingReport {
    bool* enabled;
    std::chrono::steady_clock::time_point start;
    std::ostream* err;
    ~TimingReport() {
      if (*enabled) {
        double s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
        (*err) << "elapsed: " << s << "s\n";
      }
    }
  } report{&timing, started, &err};

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const LimitError& e) {
    err << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const AlphabetError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const FlagError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "bad JSON: " << e.what() << "\n";
    return 2;
  }

  return 0;
}

}  // namespace nilclose
