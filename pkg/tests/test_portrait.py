import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almostlocal import perm as P
from almostlocal import portrait as Q
from almostlocal.tree import V0, V1, ball


def rand(d, seed, **kw):
    return Q.random_portrait(d, random.Random(seed), **kw)


seeds = st.integers(0, 2 ** 32)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), seeds, seeds, seeds)
def test_group_laws(d, a, b, c):
    g, h, k = rand(d, a), rand(d, b), rand(d, c)
    e = Q.identity(d)
    assert Q.compose(Q.compose(g, h), k) == Q.compose(g, Q.compose(h, k))
    assert Q.compose(g, Q.invert(g)) == e == Q.compose(Q.invert(g), g)
    assert Q.compose(e, g) == g == Q.compose(g, e)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), seeds, seeds)
def test_action_is_compatible(d, a, b):
    g, h = rand(d, a), rand(d, b)
    gh = Q.compose(g, h)
    for v in ball(V0, 3, d):
        assert gh.apply(v) == g.apply(h.apply(v))
    assert Q.agree_on_ball(gh, g * h, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), seeds)
def test_text_roundtrip(d, a):
    g = rand(d, a)
    assert Q.parse_portrait(Q.format_portrait(g)) == g


def test_cocycle_checker_detects_wrong_product():
    rng = random.Random(1)
    found = False
    for _ in range(50):
        g, h = Q.random_portrait(4, rng), Q.random_portrait(4, rng)
        if Q.compose(g, h) != Q.compose(h, g):
            assert not Q.check_cocycle_on_ball(g, h, Q.compose(h, g), 4)
            found = True
            break
    assert found


def test_canonical_form_is_unique():
    s = P.parse_perm("(2 3)", 3)
    # a constant automorphism written with a redundant internal vertex
    g = Q.Portrait.from_data(3, V0, {V0: s}, {(1,): s, (2,): s, (3,): s})
    assert g == Q.constant_aut(s)
    assert g.num_internal() == 0


def test_edge_compatibility_is_enforced():
    a = P.parse_perm("(1 2)", 3)
    b = P.parse_perm("(1 3)", 3)
    # on the edge of color 1 between V0 and V1, a sends 1 to 2 but b sends 1 to 3
    with pytest.raises(Q.PortraitError):
        Q.Portrait.from_data(3, V0, {V0: a}, {(1,): b, (2,): a, (3,): a})


@pytest.mark.parametrize("text", [
    "degree: 3\n",
    'degree: 3\nroot_image: "1 1"\n',
    'degree: 3\nroot_image: ""\ninternal "": (1 2)\n',
    'degree: 3\nroot_image: ""\nfoo: 1\n',
    'degree: 3\nroot_image: ""\ntail "2": (1 2)\n',
])
def test_parse_errors(text):
    with pytest.raises(Q.PortraitError):
        Q.parse_portrait(text)


def test_comments_and_blank_lines():
    text = ('# identity on the 3-regular tree\ndegree: 3\n\nroot_image: "" # base vertex fixed\n'
            'tail "": id\ntail "1": id\n')
    assert Q.parse_portrait(text) == Q.identity(3)


def test_budget(monkeypatch):
    monkeypatch.setenv("ALMOSTLOCAL_MAX_INTERNAL", "1")
    with pytest.raises(Q.PortraitError):
        rand(4, 3, radius=3, density=1.0)
    monkeypatch.setenv("ALMOSTLOCAL_MAX_INTERNAL", "x")
    with pytest.raises(Q.PortraitError):
        Q.max_internal()


def test_restricted_random_portraits_stay_in_group():
    F = P.construct_group("dihedral(4)")
    g = Q.random_portrait(4, random.Random(0), perms=F.elements)
    assert all(s in F for _, s in g.all_permutations())


def test_type_preserving():
    assert Q.identity(3).type_preserving()
    assert not Q.constant_aut(P.identity(3), V1).type_preserving()
