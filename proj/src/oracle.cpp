#include "nilclose/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace nilclose {

namespace {

std::vector<std::uint32_t> mul_table(std::size_t n,
                                     auto&& mul) {
  std::vector<std::uint32_t> table(n * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      table[static_cast<std::size_t>(i) * n + j] = mul(i, j);
    }
  }
  return table;
}

}  // namespace

FiniteMonoid cyclic_group(std::size_t n) {
  if (n == 0) throw ValidationError("cyclic group order must be positive");
  auto table = mul_table(n, [n](std::uint32_t i, std::uint32_t j) {
    return static_cast<std::uint32_t>((i + j) % n);
  });
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  if (n == 1) {
    return FiniteMonoid(std::move(table), 0, Alphabet("a"), {0},
                        std::move(names));
  }
  return FiniteMonoid(std::move(table), 0, Alphabet("a"), {1},
                      std::move(names));
}

FiniteMonoid quaternion_q8() {
  // elements 1, -1, i, -i, j, -j, k, -k as indices 0..7
  // sign bit in bit 0, axis in bits 1-2 (0 = scalar, 1 = i, 2 = j, 3 = k)
  auto axis = [](std::uint32_t x) { return x >> 1; };
  auto sign = [](std::uint32_t x) { return x & 1u; };
  auto make = [](std::uint32_t ax, std::uint32_t sg) { return (ax << 1) | sg; };
  // i*j = k, j*k = i, k*i = j; squares of axes are -1
  auto mul = [&](std::uint32_t x, std::uint32_t y) -> std::uint32_t {
    std::uint32_t ax = axis(x), ay = axis(y);
    std::uint32_t s = sign(x) ^ sign(y);
    if (ax == 0) return make(ay, s);
    if (ay == 0) return make(ax, s);
    if (ax == ay) return make(0, s ^ 1);  // i*i = -1
    // distinct non-scalar axes: result is the third axis, sign from parity
    std::uint32_t az = 6 - ax - ay;  // {1,2,3} axes sum to 6
    bool cyclic = (ay == (ax % 3) + 1);
    return make(az, s ^ (cyclic ? 0 : 1));
  };
  auto table = mul_table(8, mul);
  std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  // generators i and j
  return FiniteMonoid(std::move(table), 0, Alphabet("ab"), {2, 4},
                      std::move(names));
}

FiniteMonoid dihedral_d4() {
  // elements r^a s^b with 0 ≤ a < 4, b ∈ {0,1}: index = a + 4b
  auto mul = [](std::uint32_t x, std::uint32_t y) -> std::uint32_t {
    std::uint32_t ax = x & 3, bx = x >> 2, ay = y & 3, by = y >> 2;
    // (r^ax s^bx)(r^ay s^by): s r = r^-1 s
    std::uint32_t a = bx ? (ax + 4 - ay) % 4 : (ax + ay) % 4;
    return a + 4 * (bx ^ by);
  };
  auto table = mul_table(8, mul);
  std::vector<std::string> names = {"1", "r", "r2", "r3", "s", "rs", "r2s", "r3s"};
  return FiniteMonoid(std::move(table), 0, Alphabet("ab"), {1, 4},
                      std::move(names));
}

std::optional<std::uint32_t> nilpotency_class_of(const FiniteMonoid& g) {
  std::size_t n = g.size();
  StructureReport r = analyze_structure(g);
  if (!r.is_group) throw ValidationError("nilpotency class requires a group");
  std::vector<char> gamma(n, 1);
  std::uint32_t cls = 0;
  for (;;) {
    if (std::count(gamma.begin(), gamma.end(), 1) == 1) return cls;
    std::vector<char> commutators(n, 0);
    for (std::uint32_t x = 0; x < n; ++x) {
      if (!gamma[x]) continue;
      for (std::uint32_t y = 0; y < n; ++y) {
        std::uint32_t xi = group_inverse(g, x);
        std::uint32_t yi = group_inverse(g, y);
        commutators[g.mul(g.mul(xi, yi), g.mul(x, y))] = 1;
      }
    }
    std::vector<char> next(n, 0);
    next[g.identity()] = 1;
    std::vector<std::uint32_t> frontier{g.identity()};
    while (!frontier.empty()) {
      std::uint32_t x = frontier.back();
      frontier.pop_back();
      for (std::uint32_t h = 0; h < n; ++h) {
        if (!commutators[h]) continue;
        for (std::uint32_t y : {g.mul(x, h), g.mul(x, group_inverse(g, h))}) {
          if (!next[y]) {
            next[y] = 1;
            frontier.push_back(y);
          }
        }
      }
    }
    if (next == gamma) return std::nullopt;
    gamma = std::move(next);
    ++cls;
  }
}

Catalog nilpotent_catalog(std::size_t max_order) {
  if (max_order < 1) {
    throw ValidationError("catalog order bound must be at least 1");
  }
  struct Atom {
    FiniteMonoid monoid;
    std::string name;
  };
  std::vector<Atom> atoms;
  for (std::size_t k = 1; k <= max_order; ++k) {
    atoms.push_back({cyclic_group(k), "Z/" + std::to_string(k)});
  }
  if (max_order >= 8) {
    atoms.push_back({quaternion_q8(), "Q8"});
    atoms.push_back({dihedral_d4(), "D4"});
  }

  Catalog catalog;
  std::set<std::string> signatures;
  auto add = [&](FiniteMonoid monoid, const std::string& name) {
    if (!signatures.insert(name).second) return;
    auto cls = nilpotency_class_of(monoid);
    if (!cls) throw InternalError("catalog member is not nilpotent: " + name);
    catalog.groups.push_back(std::make_shared<FiniteGroupTable>(
        FiniteGroupTable{std::move(monoid), cls, name}));
  };
  for (const Atom& a : atoms) add(a.monoid, a.name);

  // products of catalog members with nontrivial atoms, deduplicated by the
  // sorted multiset of atom names
  std::vector<std::pair<std::vector<std::string>, std::size_t>> frontier;
  for (std::size_t i = 0; i < catalog.groups.size(); ++i) {
    frontier.push_back({{catalog.groups[i]->name}, i});
  }
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    auto [sig, index] = frontier[head];
    const FiniteMonoid& left = catalog.groups[index]->monoid;
    if (left.size() < 2) continue;
    for (const Atom& a : atoms) {
      if (a.monoid.size() < 2) continue;
      if (left.size() * a.monoid.size() > max_order) continue;
      auto new_sig = sig;
      new_sig.push_back(a.name);
      std::sort(new_sig.begin(), new_sig.end());
      std::string name;
      for (const auto& part : new_sig) {
        if (!name.empty()) name += "x";
        name += part;
      }
      if (signatures.count(name)) continue;
      FiniteMonoid product = direct_product(left, a.monoid);
      std::size_t new_index = catalog.groups.size();
      add(std::move(product), name);
      if (catalog.groups.size() > new_index) {
        frontier.push_back({std::move(new_sig), new_index});
      }
    }
  }
  return catalog;
}

std::vector<Homomorphism> enum_homs(const Alphabet& alphabet,
                                    const GroupPtr& group) {
  std::size_t n = group->monoid.size();
  std::size_t k = alphabet.size();
  double count = 1;
  for (std::size_t i = 0; i < k; ++i) count *= static_cast<double>(n);
  if (count > static_cast<double>(limits().max_homs)) {
    throw LimitError("homomorphism enumeration exceeds the cap");
  }
  std::vector<Homomorphism> homs;
  std::vector<std::uint32_t> assignment(k, 0);
  for (;;) {
    homs.push_back({group, assignment});
    std::size_t i = 0;
    while (i < k && ++assignment[i] == n) {
      assignment[i] = 0;
      ++i;
    }
    if (i == k) break;
  }
  return homs;
}

std::uint32_t hom_eval(const Homomorphism& hom, const Word& w) {
  const FiniteMonoid& g = hom.target->monoid;
  std::uint32_t value = g.identity();
  for (LetterCode c : w.letters()) {
    std::uint32_t image = hom.images.at(code_index(c));
    if (code_is_inverse(c)) image = group_inverse(g, image);
    value = g.mul(value, image);
  }
  return value;
}

ElementSubset image_of_language(const WordAutomaton& a,
                                const Homomorphism& hom) {
  const FiniteMonoid& g = hom.target->monoid;
  if (hom.images.size() != a.alphabet().size()) {
    throw AlphabetError("homomorphism does not match automaton alphabet");
  }
  std::size_t gn = g.size();
  State n = a.num_states();
  std::vector<std::vector<std::pair<LetterCode, State>>> out(n);
  for (const Edge& e : a.edges()) out[e.src].emplace_back(e.label, e.dst);

  std::vector<char> seen(static_cast<std::size_t>(n) * gn, 0);
  std::deque<std::pair<State, std::uint32_t>> queue;
  auto visit = [&](State s, std::uint32_t value) {
    std::size_t idx = static_cast<std::size_t>(s) * gn + value;
    if (!seen[idx]) {
      seen[idx] = 1;
      queue.push_back({s, value});
    }
  };
  for (State i : a.initials()) visit(i, g.identity());

  while (!queue.empty()) {
    auto [s, value] = queue.front();
    queue.pop_front();
    for (auto [c, t] : out[s]) {
      std::uint32_t image = hom.images[code_index(c)];
      if (code_is_inverse(c)) image = group_inverse(g, image);
      visit(t, g.mul(value, image));
    }
  }

  ElementSubset image(gn, false);
  for (State f : a.finals()) {
    for (std::uint32_t v = 0; v < gn; ++v) {
      if (seen[static_cast<std::size_t>(f) * gn + v]) image[v] = true;
    }
  }
  return image;
}

ClosureOracle::ClosureOracle(const WordAutomaton& lang, const Catalog& catalog) {
  if (catalog.groups.empty()) {
    throw ValidationError("closure oracle requires a nonempty catalog");
  }
  for (const GroupPtr& g : catalog.groups) {
    for (Homomorphism& hom : enum_homs(lang.alphabet(), g)) {
      ElementSubset image = image_of_language(lang, hom);
      images_.emplace_back(std::move(hom), std::move(image));
    }
  }
}

bool ClosureOracle::admits(const ReducedWord& w) const {
  for (const auto& [hom, image] : images_) {
    if (!image[hom_eval(hom, w.word())]) return false;
  }
  return true;
}

bool approx_closure_check(const WordAutomaton& lang, const ReducedWord& w,
                          const Catalog& catalog) {
  if (catalog.groups.empty()) {
    throw ValidationError("approx_closure_check requires a nonempty catalog");
  }
  for (const GroupPtr& g : catalog.groups) {
    for (const Homomorphism& hom : enum_homs(lang.alphabet(), g)) {
      ElementSubset image = image_of_language(lang, hom);
      if (!image[hom_eval(hom, w.word())]) return false;
    }
  }
  return true;
}

ElementSubset nilpotent_residual_brute(const FiniteMonoid& g) {
  std::size_t n = g.size();
  if (n > 24) throw LimitError("brute-force residual is limited to order 24");
  StructureReport r = analyze_structure(g);
  if (!r.is_group) throw ValidationError("nilpotent residual requires a group");

  using Mask = std::uint32_t;
  auto closure = [&](Mask seed) {
    std::vector<std::uint32_t> elems;
    for (std::uint32_t x = 0; x < n; ++x) {
      if (seed & (Mask(1) << x)) elems.push_back(x);
    }
    Mask result = Mask(1) << g.identity();
    std::vector<std::uint32_t> frontier{g.identity()};
    while (!frontier.empty()) {
      std::uint32_t x = frontier.back();
      frontier.pop_back();
      for (std::uint32_t e : elems) {
        for (std::uint32_t y : {g.mul(x, e), g.mul(x, group_inverse(g, e))}) {
          if (!(result & (Mask(1) << y))) {
            result |= Mask(1) << y;
            frontier.push_back(y);
          }
        }
      }
    }
    return result;
  };

  // subgroup lattice by closing under one extra generator at a time
  std::set<Mask> subgroups;
  std::deque<Mask> queue;
  Mask trivial = closure(0);
  subgroups.insert(trivial);
  queue.push_back(trivial);
  while (!queue.empty()) {
    Mask s = queue.front();
    queue.pop_front();
    for (std::uint32_t x = 0; x < n; ++x) {
      if (s & (Mask(1) << x)) continue;
      Mask bigger = closure(s | (Mask(1) << x));
      if (subgroups.insert(bigger).second) queue.push_back(bigger);
    }
  }

  Mask residual = (n >= 32) ? ~Mask(0) : ((Mask(1) << n) - 1);
  for (Mask s : subgroups) {
    // normality
    bool normal = true;
    for (std::uint32_t x = 0; x < n && normal; ++x) {
      if (!(s & (Mask(1) << x))) continue;
      for (std::uint32_t a = 0; a < n; ++a) {
        std::uint32_t conj = g.mul(g.mul(a, x), group_inverse(g, a));
        if (!(s & (Mask(1) << conj))) {
          normal = false;
          break;
        }
      }
    }
    if (!normal) continue;
    // quotient table on cosets
    std::vector<std::int32_t> coset_of(n, -1);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t x = 0; x < n; ++x) {
      if (coset_of[x] != -1) continue;
      std::uint32_t id = static_cast<std::uint32_t>(reps.size());
      reps.push_back(x);
      for (std::uint32_t h = 0; h < n; ++h) {
        if (s & (Mask(1) << h)) coset_of[g.mul(x, h)] = static_cast<std::int32_t>(id);
      }
    }
    std::size_t q = reps.size();
    std::vector<std::uint32_t> qtable(q * q);
    for (std::uint32_t i = 0; i < q; ++i) {
      for (std::uint32_t j = 0; j < q; ++j) {
        qtable[static_cast<std::size_t>(i) * q + j] =
            static_cast<std::uint32_t>(coset_of[g.mul(reps[i], reps[j])]);
      }
    }
    FiniteMonoid quotient = FiniteMonoid::with_all_generators(
        std::move(qtable), static_cast<std::uint32_t>(coset_of[g.identity()]));
    if (nilpotency_class_of(quotient).has_value()) residual &= s;
  }

  ElementSubset out(n, false);
  for (std::uint32_t x = 0; x < n; ++x) out[x] = (residual >> x) & 1;
  return out;
}

}  // namespace nilclose
