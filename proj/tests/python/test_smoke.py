"""Smoke tests for the python bindings: the headline fixture end to end."""

import json
import sys

import nilclose as nc


def check(cond, label):
    if not cond:
        raise AssertionError(label)
    print(f"ok: {label}")


def main():
    ab = nc.Alphabet("ab")
    check(ab.letters == "ab", "alphabet letters")
    check(nc.reduce_word(ab, "aAb") == "b", "free reduction")
    check(nc.invert_word(ab, "aB") == "bA", "inversion")

    h = nc.fold(ab, ["aa", "b"])
    k = nc.fold(ab, ["a", "bbb"])
    check(h.rank == 2, "rank of H")
    check(h.index is None, "H has infinite index")
    check(h.member("aa") and not h.member("a"), "membership in H")
    check(nc.subgroup_from_json(h.to_json()) == h, "subgroup JSON round trip")

    check(str(nc.primes_closed(h)) == "{2}", "H is 2-closed only")
    check(str(nc.primes_closed(k)) == "{3}", "K is 3-closed only")
    check(nc.p_closure(h, 3) == nc.full_group(ab), "3-closure of H is F")
    check(nc.nil_closure_subgroup(h) == h, "H is nil-closed")

    hk = nc.nil_closure_product([h, k])
    check(hk.is_universal(), "HK is nil-dense")
    product = nc.benois_reduce(nc.automaton_concat(h.language(), k.language()))
    check(nc.compare(product, nc.universal_reduced(ab)) == "strict_subset",
          "HK itself is a proper subset")

    expr = nc.parse_expression(ab, "(aa|AA|b|B)*|(a|A|bbb|BBB)*")
    closure = nc.nil_closure_rational(expr)
    check(not closure.accepts("ab"), "ab is outside the closure of H ∪ K")
    union = nc.automaton_union(h.language(), k.language())
    check(nc.compare(closure, union) == "equal", "H ∪ K is nil-closed")
    for p in (2, 3, 5, 7):
        check(nc.union_p_dense([h, k], p), f"H ∪ K is {p}-dense")

    nf = nc.pro_g_closure(nc.parse_expression(ab, "(ab)*"))
    check(len(nf.terms) == 1 and nf.terms[0].translation == "1",
          "profinite closure of (ab)* is the subgroup <ab>")
    parsed = json.loads(nf.to_json())
    check(parsed["terms"][0]["factors"] == [["ab"]], "normal form JSON")

    u1 = nc.monoid_from_json(json.dumps({
        "size": 2, "identity": 0, "table": [[0, 1], [1, 1]],
        "generators": {"a": 1}, "names": ["1", "0"],
    }))
    check(nc.gnil_kernel(u1) == [True, True], "kernel of U1 is everything")
    member, reason, pair = nc.in_j_star_gnil(u1)
    check(member, "U1 lies in J*Gnil")
    check(nc.in_j_malcev_gnil(u1), "U1 lies in J m Gnil")

    z4 = nc.cyclic_group(4)
    check(nc.gnil_kernel(z4) == [True, False, False, False], "kernel of Z/4")

    catalog = nc.nilpotent_catalog(8)
    check("Q8" in catalog.names, "catalog contains Q8")
    norm, value, witness = nc.pseudonorm(ab, "a", catalog)
    check(norm == "2^-2" and value == 0.25, "pseudonorm of a")

    code, out, err = nc.run_cli(["primes-closed", "--alphabet", "ab", "aa,b"])
    check(code == 0 and out.strip() == "{2}", "CLI round trip")

    print("python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
