import random

import pytest

from almostlocal import gff as G
from almostlocal import perm as P
from almostlocal import portrait as Q
from almostlocal.tree import V0, V1, ball, is_complete, make_subtree, parity


def pp(s, d=4):
    return P.parse_perm(s, d)


@pytest.fixture(scope="module")
def d4():
    return G.GroupPair.from_specs("dihedral(4)", "sym(4)")


@pytest.fixture(scope="module")
def g123(d4):
    return G.star_element(d4, V0, pp("(1 2 3)"))


@pytest.fixture(scope="module")
def h2(d4):
    return G.translations(d4)[2]


def test_pair_validation():
    with pytest.raises(G.GffError):
        G.GroupPair.from_specs("sym(4)", "alt(4)")
    with pytest.raises(G.GffError):
        G.GroupPair.from_specs("gens(4, (1 2))", "sym(4)")


def test_membership(d4, g123):
    r = G.membership_report(d4, Q.identity(4))
    assert r.in_UF and r.in_GFFp and r.type_preserving and r.orbit_compatible
    r = G.membership_report(d4, g123)
    assert r.in_GFFp and not r.in_UF
    assert G.singular_set(d4, g123) == {V0}
    bad = Q.Portrait.from_data(4, V0, {}, {V0: pp("(1 2 3)"), V1: pp("(1 2 3)")})
    assert not G.in_gffp(d4, bad)
    with pytest.raises(G.GffError):
        G.singularity_report(d4, bad)


def test_singularity_reports(d4, g123, h2):
    assert G.singularity_report(d4, Q.identity(4)).N == 0
    r = G.singularity_report(d4, g123)
    assert r.Tminus.internal == {V0} and r.N == 1
    r = G.singularity_report(d4, h2)
    assert r.S == frozenset() and r.N == 1
    assert r.S == r.S0 | r.S1 and not r.S0 & r.S1


def _tminus_by_exhaustion(Pr, g, radius):
    """Smallest complete subtree in the ball containing e0, g^-1(e0), and S(g) as internal."""
    ginv = Q.invert(g)
    need = {V0, V1, ginv.apply(V0), ginv.apply(V1)}
    S = G.singular_set(Pr, g)
    cand = ball(V0, radius, Pr.d)
    best = None
    for mask in range(1 << len(cand)):
        internal = {v for i, v in enumerate(cand) if mask >> i & 1}
        if not S <= internal:
            continue
        T = make_subtree(internal, Pr.d)
        if is_complete(T, Pr.d) and need <= T.vertices():
            best = len(internal) if best is None else min(best, len(internal))
    return best


def test_tminus_minimal_by_exhaustion():
    Pr = G.GroupPair.from_specs("cyclic(3)", "sym(3)")
    rng = random.Random(0)
    checked = 0
    while checked < 25:
        g = G.random_element(Pr, rng, factors=3, radius=1)
        T = G.tminus(Pr, g)
        if T.depth() > 1:
            continue
        assert _tminus_by_exhaustion(Pr, g, 2) == len(T.internal)
        checked += 1


def test_extend_local(d4):
    g = G.extend_local(d4, V0, 0, {V0: pp("(1 2 3)")}, V0)
    assert G.in_K0(d4, V0, g) and g.local(V0) == pp("(1 2 3)")
    assert G.extend_local(d4, V0, 0, {V0: P.identity(4)}, V0) == Q.identity(4)
    u = G.extend_local(d4, V0, 1, {v: pp("(1 3)") for v in ball(V0, 1, 4)}, V0)
    assert G.in_uf(d4, u)


def test_decompose(d4, g123):
    u = Q.constant_aut(pp("(1 2)(3 4)"), (2,))
    gamma, parts = G.decompose_KU(d4, u)
    assert parts == [] and gamma == u
    gamma, parts = G.decompose_KU(d4, g123)
    assert len(parts) == 1 and parts[0][0] == V0 and G.in_uf(d4, gamma)
    two = Q.compose(g123, G.star_element(d4, (2, 3), pp("(1 2 4)")))
    gamma, parts = G.decompose_KU(d4, two)
    assert len(parts) <= 2
    assert Q.product([gamma] + [x for _, x in parts], 4) == two


def test_gamma_uf(d4):
    st = G.gamma_uf(d4, P.identity(4), V0)
    assert st.element == Q.identity(4) and st.witness == ()
    st = G.gamma_uf(d4, pp("(1 3 2)"), V0)
    assert st.element.local(V0) == pp("(1 3 2)") and st.element.apply(V0) == V0
    assert G.verify_step(st, 4)
    for f in st.witness:
        for x in f.edge:
            assert f.g.apply(x) == x and f.h.apply(x) == x
    with pytest.raises(G.GffError):
        G.gamma_uf(d4, pp("(1 2)"), V0)
    C = G.GroupPair.from_specs("cyclic(5)", "alt(5)")
    st = G.gamma_uf(C, P.parse_perm("(2 3 4)", 5), (3,))
    assert G.verify_step(st, 5)


def test_reduce_simple(d4, g123):
    u = Q.constant_aut(pp("(1 3)"))
    cert = G.reduce_simple(d4, u)
    assert cert.steps == [] and cert.residual == u
    cert = G.reduce_simple(d4, g123)
    assert len(cert.steps) == 1 and G.in_uf(d4, cert.residual) and G.verify_certificate(cert, g123)
    C = G.GroupPair.from_specs("cyclic(5)", "alt(5)")
    x = G.random_with_singularities(C, random.Random(3), 3)
    cert = G.reduce_simple(C, x)
    assert len(cert.steps) <= 3 and G.verify_certificate(cert, x) and G.in_uf(C, cert.residual)
    with pytest.raises(G.GffError):
        G.reduce_simple(G.GroupPair.from_specs("cyclic(4)", "sym(4)"), Q.identity(4))
    with pytest.raises(G.GffError):
        G.reduce_simple(d4, Q.constant_aut(P.identity(4), V1))


def test_two_singular(alt4):
    A = G.GroupPair.from_specs("alt(4)", "sym(4)")
    gm = G.make_two_singular(A, alt4, V0, (1, 2))
    assert G.singularity_report(A, gm, alt4).Sigma == {V0, (1, 2)}
    steps, res = G.sigma_reduce(A, alt4, gm)
    assert not G.singular_set(A, res, alt4)
    u = Q.constant_aut(pp("(1 2 3)"))
    assert G.sigma_reduce(A, alt4, u) == ([], u)
    with pytest.raises(G.GffError):
        G.make_two_singular(A, alt4, V0, (2,))
    with pytest.raises(G.GffError):
        G.make_two_singular(A, P.construct_group("dihedral(4)"), V0, (1, 2))


def test_even_classes_are_subgroups(alt4):
    A = G.GroupPair.from_specs("alt(4)", "sym(4)")
    rng = random.Random(8)
    for _ in range(40):
        g, h = G.random_type_preserving(A, rng), G.random_type_preserving(A, rng)
        for i in (0, 1):
            flag = "in_G0" if i == 0 else "in_G1"
            mg, mh = G.membership_report(A, g), G.membership_report(A, h)
            if getattr(mg, flag) and getattr(mh, flag):
                assert getattr(G.membership_report(A, Q.compose(g, h)), flag)
            assert getattr(G.membership_report(A, Q.invert(g)), flag) == getattr(mg, flag)


def test_words(d4, g123, h2):
    assert len(G.word_decompose(d4, Q.identity(4))) == 0
    w = G.word_decompose(d4, h2)
    assert len(w) == 1 and w.text() == "h2"
    w = G.word_decompose(d4, g123)
    assert len(w) <= 24 and G.evaluate_word(d4, w) == g123
    for x in w.letters:
        if x.kind == "k":
            assert G.in_K0(d4, x.vertex, x.element)
    with pytest.raises(G.GffError):
        G.word_decompose(G.GroupPair.from_specs("young(2,2)", "young(2,2)"), Q.identity(4))


def test_translations(d4):
    hs = G.translations(d4)
    assert sorted(hs) == [2, 3, 4]
    for i, h in hs.items():
        assert h.apply(V1) == (1, i) or h.apply(V0) == (1,)
        assert G.in_uf(d4, h)


def test_cosets(d4):
    rng = random.Random(9)
    verts = ball(V0, 4, 4)
    for v in rng.sample(verts, 100):
        r = G.coset_M(d4, v)
        assert r.nonempty and G.in_M(d4, r.witness, v)
    r = G.coset_M(d4, V0)
    assert r.witness == Q.identity(4)
    F = P.construct_group("gens(4, (1 2))")
    small = G.GroupPair(4, F, F)
    assert not G.coset_M(small, (3,)).nonempty


def test_symdiff(d4, g123, h2):
    assert G.symdiff_M(d4, Q.identity(4)) == 0 == G.symdiff_oracle(d4, Q.identity(4))
    assert G.symdiff_M(d4, g123) == 2 == G.symdiff_oracle(d4, g123)
    assert G.symdiff_M(d4, h2) == 2 == G.symdiff_oracle(d4, h2)


def test_cocompact_reduce():
    F = G.GroupPair.from_specs("agl_sq(1,5)", "agl(1,5)")
    H = G.GroupPair.from_specs("alt(5)", "sym(5)")
    u = Q.constant_aut(P.parse_perm("(1 2 3)", 5))
    gamma, k = G.cocompact_reduce(F, H, u)
    assert gamma == Q.identity(5) and k == u
    for y in (G.star_element(H, (), P.parse_perm("(4 5)", 5)),
              Q.compose(G.star_element(H, (2,), P.parse_perm("(1 3)", 5)),
                        G.star_element(H, (), P.parse_perm("(4 5)", 5)))):
        gamma, k = G.cocompact_reduce(F, H, y)
        assert G.in_gffp(F, gamma) and gamma.apply(V0) == V0
        assert Q.compose(y, gamma) == k and G.in_uf(H, k) and k.apply(V0) == V0
    with pytest.raises(G.GffError):
        G.cocompact_reduce(G.GroupPair.from_specs("agl_sq(1,5)", "agl_sq(1,5)"), H, u)


def test_conjugation_check(d4, g123):
    assert G.conjugation_commensuration_check(d4, Q.constant_aut(pp("(1 3)")), 5)
    assert G.conjugation_commensuration_check(d4, g123, 200, random.Random(2))
    # u moving the support tree violates the precondition
    with pytest.raises(G.GffError):
        G.conjugate_sample_ok(d4, g123, Q.constant_aut(pp("(1 3)")))


def test_local_actions_preserve_f_orbits():
    Pr = G.GroupPair.from_specs("gens(4, (1 2), (3 4))", "young(2,2)")
    rng = random.Random(4)
    for _ in range(30):
        g = G.random_element(Pr, rng)
        assert G.membership_report(Pr, g).orbit_compatible


def test_sigma_even_sampler(alt4):
    A = G.GroupPair.from_specs("alt(4)", "sym(4)")
    g = G.random_sigma_even(A, alt4, random.Random(1))
    sig = G.singular_set(A, g, alt4)
    assert sum(1 for v in sig if parity(v) == 0) % 2 == 0
    assert g.type_preserving()
