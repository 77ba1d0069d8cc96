import random

import pytest

from almostlocal import criteria as C
from almostlocal import perm as P

g_ = P.construct_group


def test_classify_examples():
    assert C.classify(g_("dihedral(4)"), g_("sym(4)")).value("thm413") == C.YES
    r = C.classify(g_("cyclic(4)"), g_("sym(4)"))
    assert r.value("thm413") == C.NO
    assert "order 12" in r.verdicts["thm413"].evidence
    assert C.classify(g_("alt(5)"), g_("sym(5)")).value("cor421") == C.YES
    r = C.classify(g_("cyclic(5)"), g_("alt(5)"), k=4)
    assert r.value("cor414") == C.YES and r.value("prop311") == C.YES


def test_alt_sym_rows():
    for d in (4, 5, 6):
        r = C.classify(P.alt_group(d), P.sym_group(d))
        assert r.value("cor421") == C.YES and r.value("thm420") == C.YES


def test_standing_failure_is_reported():
    with pytest.raises(C.ClassifyError, match="not contained"):
        C.classify(g_("sym(4)"), g_("alt(4)"))
    with pytest.raises(C.ClassifyError, match="F-orbits"):
        C.classify(g_("gens(4, (1 2))"), g_("sym(4)"))
    row = C.classify_row(g_("gens(4, (1 2))"), g_("sym(4)"))
    assert row.value("standing") == C.NO and row.value("thm413") == C.NA


def test_index_two_criterion_with_given_intermediate():
    A4, S4 = P.alt_group(4), P.sym_group(4)
    assert C.classify(A4, S4, Fpp=A4).value("thm420") == C.YES
    r = C.classify(g_("cyclic(4)"), S4, Fpp=A4)
    assert r.value("thm420") == C.NO


def test_normalizer_conditions_on_c6_in_wreath():
    F, Fp = g_("cyclic(6)"), g_("wreath_imprimitive(cyclic(2),3)")
    r = C.classify(F, Fp)
    assert r.value("prop56") == C.NO
    assert P.normalizer(Fp, F) == F


def test_intransitive_rows():
    F = g_("gens(4, (1 2), (3 4))")
    r = C.classify(F, g_("young(2,2)"))
    assert r.value("cor79") == C.NA
    assert r.value("thm413") == C.NO and "not transitive" in r.verdicts["thm413"].evidence


@pytest.mark.parametrize("F,Fp", C.LIBRARY_PAIRS)
def test_direct_path_agrees(F, Fp):
    fast = C.classify(g_(F), g_(Fp))
    slow = C.classify_direct(g_(F), g_(Fp))
    for name in C.CRITERIA:
        if slow[name] != C.NA:
            assert fast.value(name) == slow[name], name


def test_direct_path_agrees_on_all_degree_four_pairs():
    for F, Fp, _ in C.pair_classes(4):
        fast = C.classify_row(F, Fp)
        slow = C.classify_direct(F, Fp)
        for name in C.CRITERIA:
            if slow[name] != C.NA or fast.value(name) == C.NA:
                assert fast.value(name) == slow[name], (F, Fp, name)


def test_conjugacy_invariance():
    rng = random.Random(0)
    for F, Fp, _ in C.pair_classes(4):
        x = tuple([0] + rng.sample(range(1, 5), 4))
        a = C.classify_row(F, Fp)
        b = C.classify_row(P.conjugate_group(F, x), P.conjugate_group(Fp, x))
        assert [a.value(n) for n in C.CRITERIA] == [b.value(n) for n in C.CRITERIA]


def test_pair_class_counts():
    classes = C.pair_classes(4)
    # every containment pair of the 30 subgroups of Sym(4) is counted once
    subs = P.enumerate_subgroups(P.sym_group(4))
    raw = sum(1 for A in subs for B in subs if A.issubgroup(B))
    assert sum(size for _, _, size in classes) == raw


def test_scan_output_is_stable():
    a = C.format_scan(C.scan(4, "thm413 and proper"))
    b = C.format_scan(C.scan(4, "thm413 and proper"))
    assert a == b
    lines = a.splitlines()
    assert len(lines) == 3
    assert lines[0].split("\t")[5:] == list(C.CRITERIA)
    assert set(lines[1].split("\t")[5:]) <= {"yes", "no", "n/a"}


def test_scan_degree_bound():
    with pytest.raises(C.ClassifyError):
        C.scan(8)
    with pytest.raises(C.ClassifyError):
        C.scan(1)


@pytest.mark.parametrize("text,expected", [
    ("thm413", 3), ("thm413 and proper", 1), ("thm413 ∧ F⊊F′", 1), ("thm413 ∧ F⊊F'", 1),
    ("not proper and standing", 11), ("¬proper ∧ standing", 11),
    ("(cor421 or thm413) and proper", 2), ("cor421 ∨ thm413 ∧ proper", 2),
])
def test_filters(text, expected):
    assert len(C.scan(4, text).rows) == expected


@pytest.mark.parametrize("text", ["", "thm413 and", "(thm413", "foo", "thm413 thm413", "thm413 $"])
def test_bad_filters(text):
    with pytest.raises(C.ClassifyError):
        C.parse_filter(text)


def test_embedding_reports():
    F, Fp, H, Hp = g_("agl_sq(1,5)"), g_("agl(1,5)"), g_("alt(5)"), g_("sym(5)")
    e = C.embedding_report(F, Fp, H, Hp)
    assert e.closed and e.cocompact and not e.cocompact_lattice and not e.open
    e = C.embedding_report(H, Hp, H, Hp)
    assert e.open and e.closed and e.cocompact
    with pytest.raises(C.ClassifyError):
        C.embedding_report(H, Hp, F, Fp)


def test_example_library():
    names = [e.name for e in C.example_library()]
    assert len(names) == len(set(names))
    for required in ("psl_pgl_q5", "d6_c6_wreath", "affine_q5_n1_vs_altsym", "kk_prime_3_3"):
        assert required in names
    for ex in C.example_library():
        ok, checks = C.run_example(ex)
        assert ok, (ex.name, [label for label, good in checks if not good])
