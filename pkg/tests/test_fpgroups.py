"""Tests for words, presentations, SNF, Tietze moves, and Reidemeister-Schreier."""

import itertools
import random

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from spinmcg.fpgroups import (
    CosetAction,
    Presentation,
    Relator,
    abelianization_matrix,
    abelianize,
    commutator,
    concat,
    exponent_sums,
    format_abelian,
    format_word,
    free_reduce,
    inv,
    letters,
    matches_expectation,
    parse_abelian,
    parse_presentation,
    parse_word,
    schreier_subgroup_presentation,
    schreier_transversal,
    serialize_presentation,
    smith_normal_form,
    smith_with_transforms,
    spin_coset_action,
    star,
    tietze_moves,
    wpow,
)

# ---------------------------------------------------------------------------
# words


def test_free_reduce_examples():
    assert free_reduce(parse_word("a a^-1")) == ()
    assert free_reduce(parse_word("a b b^-1 a")) == parse_word("a a")
    w = parse_word("a b a^-1")
    assert free_reduce(w) == w


def test_inv_and_star():
    w = parse_word("a b^-1")
    assert free_reduce(concat(w, inv(w))) == ()
    assert star(parse_word("c"), w) == parse_word("c a b^-1 c^-1")
    assert free_reduce(commutator(parse_word("a"), parse_word("a"))) == ()


def test_wpow():
    assert wpow(parse_word("a b"), 2) == parse_word("a b a b")
    assert wpow(parse_word("a b"), -1) == parse_word("b^-1 a^-1")
    assert wpow(parse_word("a"), 0) == ()


word_strategy = st.lists(
    st.tuples(st.sampled_from("abc"), st.sampled_from((1, -1))), max_size=30
).map(tuple)


@given(word_strategy)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r


@given(word_strategy)
def test_inverse_cancels(w):
    assert free_reduce(concat(w, inv(w))) == ()
    assert not any(exponent_sums(concat(w, inv(w))).values())


def test_parse_format_roundtrip():
    for text in ("a1^2 b1 d[1,2]^-1", "D[-2,-1,1,2]^3 r[1,3]", "s", ""):
        w = parse_word(text)
        assert parse_word(format_word(w)) == w
    assert format_word(parse_word("a a a b^-1 b^-1")) == "a^3 b^-2"
    with pytest.raises(ValueError):
        parse_word("3bad")
    with pytest.raises(ValueError):
        parse_word("a^x")


# ---------------------------------------------------------------------------
# presentations and abelianization


def pres(gens, rels, opaque=()):
    return Presentation(
        tuple(gens),
        tuple(Relator("r%d" % i, parse_word(w)) for i, w in enumerate(rels)),
        opaque,
    )


def test_presentation_validation():
    with pytest.raises(ValueError):
        pres(["a"], ["a b"])
    with pytest.raises(ValueError):
        Presentation(("a", "a"), ())
    with pytest.raises(ValueError):
        Presentation(("a",), (), opaque=("b",))


def test_abelianization_matrix_examples():
    p = pres(["x", "y"], ["x y x^-1 y^-1"])
    rows, cols = abelianization_matrix(p)
    assert rows == [[0, 0]] and cols == ("x", "y")
    p = pres(["x"], ["x^3"])
    rows, _ = abelianization_matrix(p)
    assert rows == [[3]]
    # squared-twist generator A paired with twist generator b, matching the
    # genus-1 relator shapes (A b)^2 (b A)^-2 and (A b)^4
    p = pres(["A", "b"], ["A b A b A^-1 b^-1 A^-1 b^-1", "A b A b A b A b"])
    rows, _ = abelianization_matrix(p)
    assert rows == [[0, 0], [4, 4]]


def test_opaque_columns():
    p = Presentation(
        ("x", "z"),
        (Relator("c", parse_word("x z x^-1 z^-1")),),
        opaque=("z",),
    )
    rows, cols = abelianization_matrix(p)
    assert cols == ("x",)
    assert rows == [[0]]
    bad = Presentation(
        ("x", "z"), (Relator("b", parse_word("x z")),), opaque=("z",))
    with pytest.raises(ValueError):
        abelianization_matrix(bad)


def test_snf_examples():
    r = smith_normal_form([[0, 0], [4, 4]])
    assert r.invariant_factors == (4,) and r.free_rank == 1
    r = smith_normal_form([[2, 0], [0, 3]])
    assert r.invariant_factors == (6,) and r.free_rank == 0
    assert r.diagonal == (1, 6)
    r = smith_normal_form([[0, 0, 0]])
    assert r.invariant_factors == () and r.free_rank == 3
    r = smith_normal_form([], ncols=3)
    assert r.free_rank == 3
    with pytest.raises(ValueError):
        smith_normal_form([])


def test_snf_divisibility_chain_and_reconstruction():
    rng = random.Random(7)
    for _ in range(40):
        nr = rng.randint(1, 5)
        nc = rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
        d, u, v = smith_with_transforms(rows)
        diag = [d[k][k] for k in range(min(nr, nc))]
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
            if a == 0:
                assert b == 0
        assert abs(sympy.Matrix(u).det()) == 1
        assert abs(sympy.Matrix(v).det()) == 1
        expected = sympy_snf(sympy.Matrix(rows))
        mine = sorted(abs(x) for x in diag if x)
        theirs = sorted(abs(x) for x in expected.diagonal() if x)
        assert mine == theirs


def test_abelianize_and_formatting():
    p = pres(["A", "b"], ["A b A b A^-1 b^-1 A^-1 b^-1", "A b A b A b A b"])
    r = abelianize(p)
    assert format_abelian(r) == "Z+Z/4"
    assert matches_expectation(r, "Z+Z/4")
    assert not matches_expectation(r, "Z+Z/2")
    assert parse_abelian("1") == (0, ())
    assert parse_abelian("Z+Z/2+Z/2") == (1, (2, 2))
    with pytest.raises(ValueError):
        parse_abelian("Z/1")
    trivial = pres(["x"], ["x"])
    assert format_abelian(abelianize(trivial)) == "1"


def test_abelianization_invariance():
    base = pres(["a", "b"], ["a^2 b^3", "a b a^-1 b"])
    r0 = abelianize(base)
    variants = []
    for k in range(4):
        rels = []
        for r in base.relators:
            w = r.word[k % len(r.word):] + r.word[: k % len(r.word)]  # cyclic
            if k % 2:
                w = inv(w)
            rels.append(Relator(r.label, w))
        variants.append(Presentation(base.generators, tuple(rels)))
    variants.append(Presentation(base.generators, tuple(reversed(base.relators))))
    for q in variants:
        assert abelianize(q).invariant_factors == r0.invariant_factors
        assert abelianize(q).free_rank == r0.free_rank


# ---------------------------------------------------------------------------
# Tietze moves


def test_tietze_add_remove_generator_roundtrip():
    p = pres(["a", "b"], ["a^2 b^2"])
    q = tietze_moves(p, ("add_generator", "c", parse_word("a b")))
    assert q.generators == ("a", "b", "c")
    assert len(q.relators) == 2
    back = tietze_moves(q, ("remove_generator", "c"))
    assert back.generators == ("a", "b")
    assert [free_reduce(r.word) for r in back.relators] == [
        free_reduce(r.word) for r in p.relators]


def test_tietze_add_relator_certificate():
    p = pres(["a", "b"], ["a^2", "b a b^-1"])
    # conjugate of r0 by b proves (b a b^-1)^2 = b a^2 b^-1
    new = parse_word("b a^2 b^-1")
    q = tietze_moves(p, ("add_relator", "extra", new, [("r0", 1, parse_word("b"))]))
    assert q.relator("extra").word == new
    with pytest.raises(ValueError):
        tietze_moves(p, ("add_relator", "bogus", parse_word("b^2"),
                         [("r0", 1, parse_word("b"))]))


def test_tietze_remove_relator():
    p = Presentation(
        ("a",),
        (Relator("one", parse_word("a^2")), Relator("two", parse_word("a^2"))),
    )
    q = tietze_moves(p, ("remove_relator", "two", [("one", 1, ())]))
    assert [r.label for r in q.relators] == ["one"]
    with pytest.raises(ValueError):
        tietze_moves(p, ("remove_relator", "two", [("one", -1, ())]))


def test_tietze_remove_generator_requires_definition():
    p = pres(["a", "b"], ["a^2 b^2"])
    with pytest.raises(ValueError):
        tietze_moves(p, ("remove_generator", "a"))


def test_tietze_preserves_abelianization():
    p = pres(["a", "b"], ["a^4 b^2", "a b a^-1 b^-1"])
    before = abelianize(p)
    q = tietze_moves(p, ("add_generator", "c", parse_word("a^2 b")))
    q = tietze_moves(q, ("add_relator", "sq", parse_word("c a^4 b^2 c^-1"),
                         [("r0", 1, parse_word("c"))]))
    q = tietze_moves(q, ("remove_relator", "sq", [("r0", 1, parse_word("c"))]))
    q = tietze_moves(q, ("remove_generator", "c"))
    after = abelianize(q)
    assert (before.invariant_factors, before.free_rank) == (
        after.invariant_factors, after.free_rank)


# ---------------------------------------------------------------------------
# coset actions / Reidemeister-Schreier


def test_coset_action_validation():
    with pytest.raises(ValueError):
        CosetAction(("0", "1"), {"x": (0, 0)})
    act = CosetAction(("0", "1"), {"x": (1, 0)})
    assert act.act("x", 0) == 1
    assert act.act_inv("x", 1) == 0
    assert act.is_transitive()


def test_schreier_index2_in_Z():
    p = Presentation(("x",), ())
    act = CosetAction((0, 1), {"x": (1, 0)})
    sub = schreier_subgroup_presentation(p, act)
    assert len(sub.generators) == 1
    assert sub.relators == ()
    r = abelianize(sub)
    assert (r.free_rank, r.invariant_factors) == (1, ())


def test_schreier_index2_in_free_rank2():
    p = Presentation(("x", "y"), ())
    act = CosetAction((0, 1), {"x": (1, 0), "y": (1, 0)})
    sub = schreier_subgroup_presentation(p, act)
    # Nielsen-Schreier: rank 1 + n(r-1) = 1 + 2(2-1) = 3
    assert len(sub.generators) == 3
    assert sub.relators == ()


def test_schreier_z6_to_z3():
    p = Presentation(("x",), (Relator("order", letters("x", 6)),))
    act = CosetAction((0, 1), {"x": (1, 0)})
    sub = schreier_subgroup_presentation(p, act)
    r = abelianize(sub)
    assert (r.free_rank, tuple(r.invariant_factors)) == (0, (3,))


def _perm_group_order(gens):
    # brute-force closure of permutation tuples
    n = len(gens[0])
    idn = tuple(range(n))
    seen = {idn}
    frontier = [idn]
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = tuple(q[i] for i in p)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return len(seen)


def test_schreier_symmetric_group_oracle():
    # symmetric group on 3 letters: x, y transpositions; index-2 subgroup
    p = Presentation(
        ("x", "y"),
        (
            Relator("xx", letters("x", 2)),
            Relator("yy", letters("y", 2)),
            Relator("xyxyxy", parse_word("x y x y x y")),
        ),
    )
    act = CosetAction((0, 1), {"x": (1, 0), "y": (1, 0)})
    sub = schreier_subgroup_presentation(p, act)
    r = abelianize(sub)
    assert (r.free_rank, tuple(r.invariant_factors)) == (0, (3,))
    # brute-force group order from a faithful permutation model
    x = (1, 0, 2)
    y = (0, 2, 1)
    order = _perm_group_order([x, y])
    assert order == 6
    even = _perm_group_order([tuple(x[y[i]] for i in range(3))])
    assert even == 3 == order // act.n


def test_schreier_rejects_inconsistent_action():
    p = Presentation(("x",), (Relator("cube", letters("x", 3)),))
    act = CosetAction((0, 1), {"x": (1, 0)})
    with pytest.raises(ValueError):
        schreier_subgroup_presentation(p, act)


def test_schreier_explicit_transversal():
    p = Presentation(("x",), (Relator("order", letters("x", 6)),))
    act = CosetAction((0, 1), {"x": (1, 0)})
    sub = schreier_subgroup_presentation(p, act, transversal=[(), (("x", 1),)])
    r = abelianize(sub)
    assert (r.free_rank, tuple(r.invariant_factors)) == (0, (3,))
    with pytest.raises(ValueError):
        schreier_subgroup_presentation(p, act, transversal=[(), ()])


# ---------------------------------------------------------------------------
# the subset coset action


def test_spin_coset_action_examples():
    act = spin_coset_action(2)
    assert act.labels == ((), (1,), (1, 2), (2,))
    empty = act.labels.index(())
    one = act.labels.index((1,))
    two = act.labels.index((2,))
    assert act.act("a1", empty) == one
    assert act.act("t1", one) == two
    for c in range(act.n):
        assert act.act("s", c) == c
        assert act.act("d[-1,2]", c) == c


@pytest.mark.parametrize("g", range(1, 7))
def test_spin_coset_action_properties(g):
    act = spin_coset_action(g)
    assert act.n == 2 ** g
    assert act.is_transitive()
    idn = tuple(range(act.n))
    for i in range(1, g + 1):
        p = act.perms["a%d" % i]
        assert tuple(p[p[c]] for c in range(act.n)) == idn
        assert p != idn
    for i in range(1, g):
        p = act.perms["t%d" % i]
        assert tuple(p[p[c]] for c in range(act.n)) == idn
    assert act.perms["s"] == idn
    count_d = sum(1 for name in act.perms if name.startswith("d["))
    assert count_d == (2 * g) * (2 * g - 1) // 2
    # orbit of the base coset under the a-moves alone is everything
    sub = CosetAction(act.labels, {n: act.perms[n] for n in act.perms if n.startswith("a")})
    assert sub.is_transitive()


def test_spin_coset_schreier_collapse():
    # free group on the twist alphabet: the Schreier generators at the base
    # coset collapse exactly on the spanning-tree edges u_J -> u_{J+{i}}
    g = 2
    act = spin_coset_action(g)
    names = tuple(sorted(act.perms, key=lambda n: (n[0] != "a", n)))
    p = Presentation(names, ())
    sub = schreier_subgroup_presentation(p, act)
    # Nielsen-Schreier rank: 1 + |cosets| * (rank - 1)
    assert len(sub.generators) == 1 + act.n * (len(names) - 1)
    assert "a1@0" not in sub.generators          # tree edge from the base
    one = act.labels.index((1,))
    assert "a1@%d" % one in sub.generators       # returns: conjugate of a1^2
    for c in range(act.n):
        assert "s@%d" % c in sub.generators      # s is fixed, never a tree edge


def test_schreier_transversal_words():
    g = 3
    act = spin_coset_action(g)
    names = tuple(sorted(act.perms, key=lambda n: (n[0] != "a", n)))
    p = Presentation(names, ())
    trans = schreier_transversal(p, act)
    for c, J in enumerate(act.labels):
        expected = tuple(("a%d" % j, 1) for j in J)
        assert trans[c] == expected


# ---------------------------------------------------------------------------
# text format


def test_parse_serialize_roundtrip():
    text = """\
# tiny example
gen a1
gen b1
gen z1 opaque

rel sq: a1^2 b1^-1
rel mix: b1 z1 a1 z1^-1
"""
    p = parse_presentation(text)
    assert p.generators == ("a1", "b1", "z1")
    assert p.opaque == frozenset({"z1"})
    assert p.relator("sq").word == parse_word("a1^2 b1^-1")
    again = parse_presentation(serialize_presentation(p))
    assert again == p


def test_parse_errors():
    for bad in ("gens a", "rel nolabel a b", "gen 1x", "rel x: a^b", "gen a extra flag"):
        with pytest.raises(ValueError):
            parse_presentation(bad)


def test_serialize_rejects_odd_names():
    p = Presentation(("x@0",), ())
    with pytest.raises(ValueError):
        serialize_presentation(p)
