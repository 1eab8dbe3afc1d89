#include "nilclose/monoids.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "nilclose/closures.hpp"

namespace nilclose {

namespace {

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("m" + std::to_string(i));
  return names;
}

Alphabet synthesized_alphabet(std::size_t n) {
  if (n > 26) {
    throw ValidationError(
        "cannot synthesize more than 26 generator letters (monoid size " +
        std::to_string(n) + ")");
  }
  std::string letters;
  for (std::size_t i = 0; i < n; ++i) letters.push_back(static_cast<char>('a' + i));
  return Alphabet(letters);
}

}  // namespace

FiniteMonoid::FiniteMonoid(std::vector<std::uint32_t> table,
                           std::uint32_t identity, Alphabet alphabet,
                           std::vector<std::uint32_t> gen_images,
                           std::vector<std::string> names)
    : table_(std::move(table)),
      identity_(identity),
      alphabet_(std::move(alphabet)),
      gen_images_(std::move(gen_images)),
      names_(std::move(names)) {
  std::size_t n = 0;
  while (n * n < table_.size()) ++n;
  if (n * n != table_.size() || n == 0) {
    throw ValidationError("monoid table is not square");
  }
  size_ = n;
  for (std::uint32_t x : table_) {
    if (x >= size_) throw ValidationError("monoid table entry out of range");
  }
  if (identity_ >= size_) throw ValidationError("monoid identity out of range");
  for (std::uint32_t a = 0; a < size_; ++a) {
    if (mul(identity_, a) != a || mul(a, identity_) != a) {
      throw ValidationError("monoid identity law fails at element " +
                            std::to_string(a));
    }
  }
  for (std::uint32_t a = 0; a < size_; ++a) {
    for (std::uint32_t b = 0; b < size_; ++b) {
      std::uint32_t ab = mul(a, b);
      for (std::uint32_t c = 0; c < size_; ++c) {
        if (mul(ab, c) != mul(a, mul(b, c))) {
          std::ostringstream os;
          os << "monoid table is not associative at (" << a << "," << b << ","
             << c << ")";
          throw ValidationError(os.str());
        }
      }
    }
  }
  if (gen_images_.size() != alphabet_.size()) {
    throw ValidationError("generator map size does not match alphabet");
  }
  for (std::uint32_t g : gen_images_) {
    if (g >= size_) throw ValidationError("generator image out of range");
  }
  // generation check: the submonoid generated by the images must be M
  std::vector<char> seen(size_, 0);
  seen[identity_] = 1;
  std::vector<std::uint32_t> frontier{identity_};
  while (!frontier.empty()) {
    std::uint32_t x = frontier.back();
    frontier.pop_back();
    for (std::uint32_t g : gen_images_) {
      std::uint32_t y = mul(x, g);
      if (!seen[y]) {
        seen[y] = 1;
        frontier.push_back(y);
      }
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) !=
      static_cast<std::ptrdiff_t>(size_)) {
    throw ValidationError("generators do not generate the monoid");
  }
  if (names_.empty()) names_ = default_names(size_);
  if (names_.size() != size_) {
    throw ValidationError("name list size does not match monoid size");
  }
}

FiniteMonoid FiniteMonoid::with_all_generators(std::vector<std::uint32_t> table,
                                               std::uint32_t identity,
                                               std::vector<std::string> names) {
  std::size_t n = 0;
  while (n * n < table.size()) ++n;
  Alphabet alphabet = synthesized_alphabet(n);
  std::vector<std::uint32_t> gens(n);
  for (std::uint32_t i = 0; i < n; ++i) gens[i] = i;
  return FiniteMonoid(std::move(table), identity, std::move(alphabet),
                      std::move(gens), std::move(names));
}

StructureReport analyze_structure(const FiniteMonoid& m) {
  std::size_t n = m.size();
  StructureReport r;

  // principal two-sided ideals M x M
  std::map<std::vector<char>, std::uint32_t> ideal_ids;
  r.j_class_of.assign(n, 0);
  for (std::uint32_t x = 0; x < n; ++x) {
    std::vector<char> ideal(n, 0);
    for (std::uint32_t a = 0; a < n; ++a) {
      std::uint32_t ax = m.mul(a, x);
      for (std::uint32_t b = 0; b < n; ++b) ideal[m.mul(ax, b)] = 1;
    }
    auto [it, inserted] =
        ideal_ids.try_emplace(std::move(ideal), static_cast<std::uint32_t>(ideal_ids.size()));
    r.j_class_of[x] = it->second;
  }
  r.j_classes.assign(ideal_ids.size(), {});
  for (std::uint32_t x = 0; x < n; ++x) r.j_classes[r.j_class_of[x]].push_back(x);
  r.is_j_trivial = std::all_of(r.j_classes.begin(), r.j_classes.end(),
                               [](const auto& c) { return c.size() == 1; });

  r.regular.assign(n, false);
  r.inverse_of.assign(n, std::nullopt);
  r.is_block_group = true;
  for (std::uint32_t a = 0; a < n; ++a) {
    std::vector<std::uint32_t> gen_inverses;
    for (std::uint32_t b = 0; b < n; ++b) {
      if (m.mul(m.mul(a, b), a) == a && m.mul(m.mul(b, a), b) == b) {
        gen_inverses.push_back(b);
      }
    }
    if (!gen_inverses.empty()) r.regular[a] = true;
    if (gen_inverses.size() == 1) r.inverse_of[a] = gen_inverses.front();
    if (gen_inverses.size() > 1) r.is_block_group = false;
  }

  r.is_group = true;
  for (std::uint32_t a = 0; a < n && r.is_group; ++a) {
    bool invertible = false;
    for (std::uint32_t b = 0; b < n; ++b) {
      if (m.mul(a, b) == m.identity() && m.mul(b, a) == m.identity()) {
        invertible = true;
        break;
      }
    }
    r.is_group = invertible;
  }

  r.is_nilpotent_group = false;
  if (r.is_group) {
    // lower central series of commutator subgroups
    std::vector<char> gamma(n, 1);
    for (;;) {
      if (std::count(gamma.begin(), gamma.end(), 1) == 1) {
        r.is_nilpotent_group = true;
        break;
      }
      std::vector<char> commutators(n, 0);
      for (std::uint32_t x = 0; x < n; ++x) {
        if (!gamma[x]) continue;
        for (std::uint32_t y = 0; y < n; ++y) {
          std::uint32_t xi = group_inverse(m, x);
          std::uint32_t yi = group_inverse(m, y);
          commutators[m.mul(m.mul(xi, yi), m.mul(x, y))] = 1;
        }
      }
      // subgroup closure
      std::vector<char> next(n, 0);
      next[m.identity()] = 1;
      std::vector<std::uint32_t> frontier{m.identity()};
      while (!frontier.empty()) {
        std::uint32_t x = frontier.back();
        frontier.pop_back();
        for (std::uint32_t g = 0; g < n; ++g) {
          if (!commutators[g]) continue;
          for (std::uint32_t y : {m.mul(x, g), m.mul(x, group_inverse(m, g))}) {
            if (!next[y]) {
              next[y] = 1;
              frontier.push_back(y);
            }
          }
        }
      }
      if (next == gamma) break;  // stalled above the trivial subgroup
      gamma = std::move(next);
    }
  }
  return r;
}

WordAutomaton cayley_language(const FiniteMonoid& m, std::uint32_t element) {
  if (element >= m.size()) {
    throw ValidationError("cayley_language: element out of range");
  }
  std::vector<Edge> edges;
  for (std::uint32_t x = 0; x < m.size(); ++x) {
    for (std::size_t i = 0; i < m.alphabet().size(); ++i) {
      edges.push_back({x, make_code(i, false), m.mul(x, m.gen_images()[i])});
    }
  }
  return WordAutomaton(m.alphabet(), static_cast<State>(m.size()),
                       std::move(edges), {m.identity()}, {element}, true);
}

bool liftable(const FiniteMonoid& m, const std::vector<std::uint32_t>& tuple) {
  if (tuple.empty()) throw ValidationError("liftable requires a nonempty tuple");
  std::optional<RationalExpression> expr;
  for (std::uint32_t element : tuple) {
    RationalExpression piece =
        extract_expression(cayley_language(m, element));
    expr = expr ? RationalExpression::seq(std::move(*expr), std::move(piece))
                : std::move(piece);
  }
  WordAutomaton closure = nil_closure_rational(*expr);
  return accepts(closure, Word(m.alphabet()));
}

ElementSubset gnil_kernel(const FiniteMonoid& m) {
  ElementSubset kernel(m.size(), false);
  for (std::uint32_t x = 0; x < m.size(); ++x) {
    kernel[x] = liftable(m, {x});
  }
  return kernel;
}

bool pointlike_pair(const FiniteMonoid& m, std::uint32_t alpha,
                    std::uint32_t beta) {
  StructureReport r = analyze_structure(m);
  if (alpha >= m.size() || beta >= m.size()) {
    throw ValidationError("pointlike_pair: element out of range");
  }
  if (!r.regular[alpha] || !r.regular[beta] || !r.inverse_of[alpha] ||
      !r.inverse_of[beta]) {
    throw ValidationError(
        "pointlike_pair requires regular elements with unique generalized "
        "inverses");
  }
  return liftable(m, {alpha, *r.inverse_of[beta]});
}

JStarGnilResult in_J_star_Gnil(const FiniteMonoid& m) {
  StructureReport r = analyze_structure(m);
  if (!r.is_block_group) {
    return {false, "not a block group (J*Gnil is contained in BG)",
            std::nullopt};
  }
  for (std::uint32_t alpha = 0; alpha < m.size(); ++alpha) {
    if (!r.regular[alpha]) continue;
    for (std::uint32_t beta = 0; beta < m.size(); ++beta) {
      if (!r.regular[beta]) continue;
      if (!liftable(m, {alpha, *r.inverse_of[beta]})) continue;
      std::uint32_t lhs = m.mul(m.mul(alpha, *r.inverse_of[alpha]),
                                m.mul(beta, *r.inverse_of[beta]));
      std::uint32_t rhs = m.mul(alpha, *r.inverse_of[beta]);
      if (lhs != rhs) {
        std::ostringstream os;
        os << "pointlike pair (" << m.name_of(alpha) << ", " << m.name_of(beta)
           << ") violates aa'bb' = ab'";
        return {false, os.str(), std::make_pair(alpha, beta)};
      }
    }
  }
  return {true, "all pointlike pairs of regular elements pass", std::nullopt};
}

bool in_J_malcev_Gnil(const FiniteMonoid& m) {
  return analyze_structure(submonoid(m, gnil_kernel(m))).is_j_trivial;
}

FiniteMonoid direct_product(const FiniteMonoid& a, const FiniteMonoid& b) {
  std::size_t n = a.size() * b.size();
  if (n > limits().max_monoid) {
    throw LimitError("direct product exceeds the monoid size cap");
  }
  auto pack = [&](std::uint32_t x, std::uint32_t y) {
    return static_cast<std::uint32_t>(x * b.size() + y);
  };
  std::vector<std::uint32_t> table(n * n);
  for (std::uint32_t x1 = 0; x1 < a.size(); ++x1) {
    for (std::uint32_t y1 = 0; y1 < b.size(); ++y1) {
      for (std::uint32_t x2 = 0; x2 < a.size(); ++x2) {
        for (std::uint32_t y2 = 0; y2 < b.size(); ++y2) {
          table[static_cast<std::size_t>(pack(x1, y1)) * n + pack(x2, y2)] =
              pack(a.mul(x1, x2), b.mul(y1, y2));
        }
      }
    }
  }
  std::vector<std::string> names(n);
  for (std::uint32_t x = 0; x < a.size(); ++x) {
    for (std::uint32_t y = 0; y < b.size(); ++y) {
      names[pack(x, y)] = "(" + a.name_of(x) + "," + b.name_of(y) + ")";
    }
  }
  Alphabet alphabet = synthesized_alphabet(a.alphabet().size() + b.alphabet().size());
  std::vector<std::uint32_t> gens;
  for (std::uint32_t g : a.gen_images()) gens.push_back(pack(g, b.identity()));
  for (std::uint32_t g : b.gen_images()) gens.push_back(pack(a.identity(), g));
  return FiniteMonoid(std::move(table), pack(a.identity(), b.identity()),
                      std::move(alphabet), std::move(gens), std::move(names));
}

FiniteMonoid submonoid(const FiniteMonoid& m, const ElementSubset& keep) {
  if (keep.size() != m.size()) {
    throw ValidationError("submonoid subset size mismatch");
  }
  if (!keep[m.identity()]) {
    throw ValidationError("submonoid must contain the identity");
  }
  std::vector<std::uint32_t> remap(m.size(), UINT32_MAX);
  std::vector<std::uint32_t> kept;
  for (std::uint32_t x = 0; x < m.size(); ++x) {
    if (keep[x]) {
      remap[x] = static_cast<std::uint32_t>(kept.size());
      kept.push_back(x);
    }
  }
  std::size_t n = kept.size();
  std::vector<std::uint32_t> table(n * n);
  std::vector<std::string> names(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    names[i] = m.name_of(kept[i]);
    for (std::uint32_t j = 0; j < n; ++j) {
      std::uint32_t prod = m.mul(kept[i], kept[j]);
      if (remap[prod] == UINT32_MAX) {
        throw ValidationError("subset is not closed under multiplication");
      }
      table[static_cast<std::size_t>(i) * n + j] = remap[prod];
    }
  }
  return FiniteMonoid::with_all_generators(std::move(table),
                                           remap[m.identity()], std::move(names));
}

std::uint32_t group_inverse(const FiniteMonoid& g, std::uint32_t x) {
  for (std::uint32_t y = 0; y < g.size(); ++y) {
    if (g.mul(x, y) == g.identity() && g.mul(y, x) == g.identity()) return y;
  }
  throw ValidationError("element has no two-sided inverse: " + g.name_of(x));
}

}  // namespace nilclose
