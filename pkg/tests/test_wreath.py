from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almostlocal import gff as G
from almostlocal import perm as P
from almostlocal import wreath as W


@pytest.fixture(scope="module")
def c2c4():
    C4 = P.cyclic_group(4)
    return W.WreathContext(4, W.embed_subgroup(P.cyclic_group(2), C4), C4)


def test_measures(c2c4):
    vals = [W.haar_measures(c2c4, n).mu_K for n in range(3)]
    assert vals == [Fraction(2), Fraction(8), Fraction(2048)]
    assert W.haar_measures(c2c4, 1).mu_U == Fraction(1, 32)
    assert W.format_fraction(Fraction(8)) == "8/1"


def test_literal_orders(c2c4):
    assert W.literal_iterated_group(c2c4.Dp, 2).order == W.iterated_order(c2c4.Dp, 4, 2) == 4 ** 5
    assert W.literal_kernel_order(c2c4.Dp, 0) == 4
    assert W.literal_kernel_order(c2c4.Dp, 1) == 256


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 4), st.data())
def test_measure_formula(ell, n, data):
    # D = the cyclic subgroup of order a inside D' = C_ell
    divisors = [a for a in range(1, ell + 1) if ell % a == 0]
    a = data.draw(st.sampled_from(divisors))
    Dp = P.cyclic_group(ell)
    D = W.embed_subgroup(P.cyclic_group(a), P.cyclic_group(ell)) if a > 1 else P.PermGroup(ell, [])
    ctx = W.WreathContext(ell, D, Dp)
    r, r1 = W.haar_measures(ctx, n), W.haar_measures(ctx, n + 1)
    assert r.mu_K == Fraction(ell ** (ell ** n), a ** ((ell ** (n + 1) - 1) // (ell - 1)))
    assert r.mu_U * W.iterated_order(D, ell, n + 1) == 1
    # the measures grow exactly when the divergence test says so
    assert (r1.mu_K > r.mu_K) == W.diverges(ctx)


def test_divergence_and_obstruction(c2c4):
    assert W.diverges(c2c4) and W.lattice_obstruction(c2c4)
    D = P.construct_group("gens(4, (1 2))")
    Dp = P.construct_group("gens(4, (1 2), (3 4))")
    ctx = W.WreathContext(4, D, Dp)
    assert not W.lattice_obstruction(ctx)


def test_context_errors():
    C4 = P.cyclic_group(4)
    with pytest.raises(W.WreathError):
        W.WreathContext(4, P.sym_group(4), C4)
    with pytest.raises(W.WreathError):
        W.WreathContext(3, C4, C4)
    with pytest.raises(W.WreathError):
        W.embed_subgroup(P.cyclic_group(3), C4)
    with pytest.raises(W.WreathError):
        W.embed_subgroup(P.cyclic_group(2), P.sym_group(3))
    with pytest.raises(W.WreathError):
        W.iterated_order(C4, 4, -1)


def test_essential_overgroups_brute_force():
    # compare with a scan over all subgroups of Sym(4)
    S4 = P.sym_group(4)
    for D in P.enumerate_subgroups(S4):
        found = {H.elements for H in W.essential_overgroups(D, S4)}
        brute = {H.elements for H in P.enumerate_subgroups(S4)
                 if D.issubgroup(H) and P.is_essential(D, H)}
        assert found == brute


@pytest.mark.parametrize("F,Fp,a,order", [
    ("psl2(5)", "pgl2(5)", 6, 20),
    ("psl2(9)", "pgl2(9)", 10, 72),
    ("agl_sq(1,5)", "agl(1,5)", 1, 4),
])
def test_obstruction_search(F, Fp, a, order):
    rep = W.obstruction_for_pair(G.GroupPair.from_specs(F, Fp), a)
    assert rep.found and rep.Dp.order == order


def test_obstruction_absent():
    rep = W.obstruction_for_pair(G.GroupPair.from_specs("dihedral(4)", "sym(4)"), 1)
    assert not rep.found and rep.Dp is None
    with pytest.raises(W.WreathError):
        W.obstruction_for_pair(G.GroupPair.from_specs("young(2,2)", "young(2,2)"))
