"""Which structural theorems apply to a pair F <= F', and a scanner over all pairs.

Each verdict is "yes", "no" or "n/a" with a short evidence string.  The
functor-based path in ``classify`` is mirrored by ``classify_direct``, which
recomputes every verdict from element lists; the two are compared in tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import perm as P
from . import wreath as W
from .gff import GroupPair

YES, NO, NA = "yes", "no", "n/a"

CRITERIA = ("standing", "prop45_iii", "thm413", "cor414", "cor421", "thm420",
            "prop311", "prop56", "prop58", "cor79", "u_equals_g")

# the direct path enumerates subgroups, so it is limited to small stabilizers
DIRECT_ENUM_LIMIT = 120
# and it forms all commutators in each stabilizer, quadratic in its order
DIRECT_COMM_LIMIT = 400


class ClassifyError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    value: str
    evidence: str = ""

    def __bool__(self):
        return self.value == YES


def _yn(flag: bool, evidence: str = "") -> Verdict:
    return Verdict(YES if flag else NO, evidence)


@dataclass
class ClassifierReport:
    F: P.PermGroup
    Fp: P.PermGroup
    k: int
    verdicts: dict = field(default_factory=dict)

    def value(self, name: str) -> str:
        return self.verdicts[name].value

    def text(self) -> str:
        lines = [f"F: {self.F.describe()} (order {self.F.order})",
                 f"Fp: {self.Fp.describe()} (order {self.Fp.order})"]
        for name in CRITERIA:
            v = self.verdicts[name]
            label = f"prop311({self.k})" if name == "prop311" else name
            lines.append(f"{label}: {v.value}" + (f"  [{v.evidence}]" if v.evidence else ""))
        return "\n".join(lines)


def _order_note(G: P.PermGroup) -> str:
    return f"order {G.order}"


def standing_failure(F: P.PermGroup, Fp: P.PermGroup):
    """None when F <= F' <= F-hat, otherwise a sentence saying what fails."""
    if F.degree != Fp.degree:
        return f"F has degree {F.degree} but F' has degree {Fp.degree}"
    bad = next((x for x in F.generators if x not in Fp), None)
    if bad is not None:
        return f"F is not contained in F': {P.format_perm(bad)} is missing"
    young = P.young_closure(F)
    bad = next((x for x in Fp.generators if x not in young), None)
    if bad is not None:
        return f"F' does not preserve the F-orbits: {P.format_perm(bad)}"
    return None


# ---------------------------------------------------------------- functor path

def _simple_pair(F: P.PermGroup, Fpp: P.PermGroup, transitive: bool) -> bool:
    """The type-preserving part of G(F, F'') is known simple."""
    if not transitive:
        return False
    if F == Fpp:
        return P.plus_subgroup(F) == F
    return P.subgroup_functors(F, Fpp).mixed_closure == Fpp


def _thm420(F, Fp, Fpp, transitive) -> Verdict:
    if Fpp is not None:
        if not (F.issubgroup(Fpp) and Fpp.issubgroup(Fp)) or 2 * Fpp.order != Fp.order:
            return Verdict(NO, "given F'' is not an index-two subgroup of F' containing F")
        cands = [Fpp]
    else:
        cands = [H for H in P.index_two_subgroups(Fp) if F.issubgroup(H)]
    if not cands:
        return Verdict(NO, "no index-two subgroup of F' contains F")
    good = [H for H in cands if _simple_pair(F, H, transitive)]
    notes = ", ".join(f"F'' of {_order_note(H)}: {'ok' if H in good else 'fails'}" for H in cands)
    return _yn(bool(good), notes)


def _prop311(F, Fp, k, simply) -> Verdict:
    d = F.degree
    if not simply:
        return Verdict(NO, "F is not simply transitive")
    if not 2 <= k < d:
        return Verdict(NO, f"k = {k} must satisfy 2 <= k < d")
    m = P.min_nontrivial_action_degree(Fp, k)
    if m is None:
        return Verdict(YES, f"every action of F' on at most {k} points is trivial")
    return Verdict(NO, f"F' acts nontrivially on {m} points")


def classify(F: P.PermGroup, Fp: P.PermGroup, Fpp: P.PermGroup | None = None,
             k: int | None = None) -> ClassifierReport:
    """All verdicts for the pair, computed through the subgroup functors."""
    fail = standing_failure(F, Fp)
    if fail is not None:
        raise ClassifyError(fail)
    d = F.degree
    k = d - 1 if k is None else k
    od = P.orbit_data(F)
    fn = P.subgroup_functors(F, Fp)
    v = {"standing": Verdict(YES)}
    tr = od.transitive
    why_tr = "" if tr else "F is not transitive"
    Fp_plus = P.plus_subgroup(Fp)
    v["prop45_iii"] = _yn(tr and Fp_plus == Fp, why_tr or f"stabilizers generate {_order_note(Fp_plus)}")
    v["thm413"] = _yn(tr and fn.mixed_closure == Fp,
                      why_tr or f"<[F'_a,F'_a], F_a> has {_order_note(fn.mixed_closure)}")
    v["cor414"] = _yn(od.simply_transitive and fn.derived_stab_closure == Fp,
                      "F is not simply transitive" if not od.simply_transitive
                      else f"<[F'_a,F'_a]> has {_order_note(fn.derived_stab_closure)}")
    index = Fp.order // F.order
    v["cor421"] = _yn(index == 2 and tr and fn.F_plus == F,
                      f"index {index}; F+ has {_order_note(fn.F_plus)}" + ("; " + why_tr if why_tr else ""))
    v["thm420"] = _thm420(F, Fp, Fpp, tr)
    v["prop311"] = _prop311(F, Fp, k, od.simply_transitive)
    N = P.normalizer(Fp, fn.F_plus)
    v["prop56"] = _yn(N == F, f"N_F'(F+) has {_order_note(N)}")
    bad = None
    for a in range(1, d + 1):
        Fa = P.point_stabilizer(F, a)
        Na = P.normalizer(P.point_stabilizer(Fp, a), Fa)
        if Na != Fa:
            bad = (a, Na)
            break
    v["prop58"] = _yn(bad is None, "" if bad is None
                      else f"at a={bad[0]} the normalizer has {_order_note(bad[1])}")
    if tr:
        rep = W.obstruction_for_pair(GroupPair(d, F, Fp), 1)
        v["cor79"] = _yn(rep.found, f"D' of {_order_note(rep.Dp)}" if rep.found
                         else f"{rep.candidates} essential extensions of F_1, none large enough")
    else:
        v["cor79"] = Verdict(NA, "F is not transitive")
    v["u_equals_g"] = _yn(F == Fp)
    return ClassifierReport(F, Fp, k, v)


def classify_row(F: P.PermGroup, Fp: P.PermGroup, k: int | None = None) -> ClassifierReport:
    """Like classify, but a standing failure yields a row of n/a instead of an error."""
    fail = standing_failure(F, Fp)
    if fail is None:
        return classify(F, Fp, k=k)
    k = F.degree - 1 if k is None else k
    v = {name: Verdict(NA) for name in CRITERIA}
    v["standing"] = Verdict(NO, fail)
    return ClassifierReport(F, Fp, k, v)


# ---------------------------------------------------------------- direct path

def _stab(G: P.PermGroup, a: int) -> list:
    return [x for x in G.elements if x[a] == a]


def _gen(d: int, elts) -> P.PermGroup:
    return P.PermGroup(d, sorted(set(elts)))


def _normalizer_direct(G: P.PermGroup, H_elements) -> frozenset:
    H = frozenset(H_elements)
    return frozenset(g for g in G.elements
                     if frozenset(P.conjugate(g, h) for h in H) == H)


def _subgroups_between(lo: P.PermGroup, hi: P.PermGroup):
    return [H for H in P.enumerate_subgroups(hi) if lo.issubgroup(H)]


def _commutators(stabs: dict) -> set:
    return {P.commutator(x, y) for elts in stabs.values() for x in elts for y in elts}


def classify_direct(F: P.PermGroup, Fp: P.PermGroup, Fpp: P.PermGroup | None = None,
                    k: int | None = None) -> dict:
    """Verdict values recomputed from the definitions, name -> "yes" / "no" / "n/a"."""
    d = F.degree
    k = d - 1 if k is None else k
    if standing_failure(F, Fp) is not None:
        out = {name: NA for name in CRITERIA}
        out["standing"] = NO
        return out
    yn = {True: YES, False: NO}
    tr = len({x[1] for x in F.elements}) == d
    simply = tr and F.order == d
    Fp_stab = {a: _stab(Fp, a) for a in range(1, d + 1)}
    F_stab = {a: _stab(F, a) for a in range(1, d + 1)}
    small = len(Fp_stab[1]) <= DIRECT_COMM_LIMIT
    F_plus = _gen(d, [x for a in F_stab for x in F_stab[a]])
    Fp_plus = _gen(d, [x for a in Fp_stab for x in Fp_stab[a]])
    out = {"standing": YES}
    out["prop45_iii"] = yn[tr and Fp_plus == Fp]
    if small:
        comm = _commutators(Fp_stab)
        derived = _gen(d, comm)
        mixed = _gen(d, comm | {x for a in F_stab for x in F_stab[a]})
        out["thm413"] = yn[tr and mixed == Fp]
        out["cor414"] = yn[simply and derived == Fp]
    else:
        out["thm413"] = out["cor414"] = NA
    out["cor421"] = yn[Fp.order == 2 * F.order and tr and F_plus == F]
    # thm420: index-two overgroups read off the subgroup list when it is small
    if Fpp is not None:
        cands = [Fpp] if (F.issubgroup(Fpp) and Fpp.issubgroup(Fp)
                          and 2 * Fpp.order == Fp.order) else []
    else:
        cands = [H for H in _subgroups_between(F, Fp) if 2 * H.order == Fp.order] \
            if Fp.order <= DIRECT_ENUM_LIMIT else None
    if cands is None or not small:
        out["thm420"] = NA
    else:
        def simple(H):
            if not tr:
                return False
            if H == F:
                return F_plus == F
            c = _commutators({a: _stab(H, a) for a in range(1, d + 1)})
            return _gen(d, c | {x for a in F_stab for x in F_stab[a]}) == H
        out["thm420"] = yn[any(simple(H) for H in cands)]
    if not (simply and 2 <= k < d):
        out["prop311"] = NO
    elif Fp.order <= DIRECT_ENUM_LIMIT:
        out["prop311"] = yn[P.min_proper_index_by_subgroups(Fp, k) is None]
    else:
        out["prop311"] = NA
    out["prop56"] = yn[_normalizer_direct(Fp, F_plus.elements) == F.elements]
    out["prop58"] = yn[all(
        _normalizer_direct(P.PermGroup.from_elements(d, Fp_stab[a]), F_stab[a])
        == frozenset(F_stab[a]) for a in range(1, d + 1))]
    if not tr:
        out["cor79"] = NA
    elif len(Fp_stab[1]) <= DIRECT_ENUM_LIMIT:
        Fa = P.PermGroup.from_elements(d, F_stab[1])
        Fpa = P.PermGroup.from_elements(d, Fp_stab[1])
        hit = any(P.is_essential_literal(Fa, H) and H.order < (H.order // Fa.order) ** (d - 1)
                  for H in _subgroups_between(Fa, Fpa))
        out["cor79"] = yn[hit]
    else:
        out["cor79"] = NA
    out["u_equals_g"] = yn[F.elements == Fp.elements]
    return out


# ---------------------------------------------------------------- embeddings

@dataclass(frozen=True)
class EmbeddingReport:
    open: bool
    closed: bool
    discrete: bool
    cocompact: bool
    cocompact_lattice: bool
    qi_embedded: bool

    def text(self) -> str:
        yn = {True: "yes", False: "no"}
        return "\n".join(f"{k}: {yn[getattr(self, k)]}" for k in
                         ("open", "closed", "discrete", "cocompact", "cocompact_lattice", "qi_embedded"))


def embedding_report(F, Fp, H, Hp) -> EmbeddingReport:
    """Properties of the inclusion G(F,F') <= G(H,H')."""
    for a, b, what in ((F, H, "F <= H"), (Fp, Hp, "F' <= H'")):
        if a.degree != b.degree or not a.issubgroup(b):
            raise ClassifyError(f"containment {what} fails")
    for X, Y in ((F, Fp), (H, Hp)):
        fail = standing_failure(X, Y)
        if fail is not None:
            raise ClassifyError(fail)
    d = F.degree
    HcapFp = P.intersection(H, Fp)
    op = all(P.point_stabilizer(H, a).issubgroup(F) for a in range(1, d + 1))
    closed = HcapFp == F
    discrete = P.orbit_data(HcapFp).free
    cocompact = P.product_set_equals(H, Fp, Hp)
    free = P.orbit_data(F).free
    return EmbeddingReport(op, closed, discrete, cocompact, closed and cocompact and free,
                           closed and P.is_transitive(F))


# ---------------------------------------------------------------- filters

_TOKEN = re.compile(r"\s*(\(|\)|∧|∨|¬|F⊊F′|F⊊F'|[A-Za-z_][A-Za-z_0-9]*)")


def _tokenize(text: str) -> list:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ClassifyError(f"cannot parse filter near {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_filter(text: str):
    """Compile a boolean filter over criterion names into a predicate on reports.

    Operators: and/or/not (or the symbols), parentheses; ``proper`` (also
    written F⊊F′) means F is strictly smaller than F'.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def atom():
        t = peek()
        if t is None:
            raise ClassifyError("filter ends unexpectedly")
        take()
        if t == "(":
            e = disj()
            if take_if(")") is None:
                raise ClassifyError("missing closing parenthesis in filter")
            return e
        if t in ("not", "¬"):
            inner = atom()
            return lambda r: not inner(r)
        if t in ("proper", "F⊊F′", "F⊊F'"):
            return lambda r: r.F != r.Fp
        if t in CRITERIA:
            return lambda r, t=t: r.value(t) == YES
        raise ClassifyError(f"unknown filter term {t!r}")

    def take_if(t):
        if peek() == t:
            return take()
        return None

    def conj():
        e = atom()
        while peek() in ("and", "∧"):
            take()
            rhs = atom()
            e = (lambda a, b: lambda r: a(r) and b(r))(e, rhs)
        return e

    def disj():
        e = conj()
        while peek() in ("or", "∨"):
            take()
            rhs = conj()
            e = (lambda a, b: lambda r: a(r) or b(r))(e, rhs)
        return e

    if not toks:
        raise ClassifyError("empty filter")
    pred = disj()
    if pos != len(toks):
        raise ClassifyError(f"unexpected {toks[pos]!r} in filter")
    return pred


# ---------------------------------------------------------------- scanning

MAX_SCAN_DEGREE = 7


@dataclass
class ScanRow:
    report: ClassifierReport
    class_size: int
    raw_matches: int = 0


@dataclass
class ScanResult:
    degree: int
    rows: list
    raw_pairs: int
    classes: int
    raw_matching: int


def _key(elements) -> tuple:
    return tuple(sorted(elements))


def _conj_set(g, elements) -> frozenset:
    gi = P.inverse(g)
    return frozenset(P.compose(P.compose(g, x), gi) for x in elements)


def pair_classes(d: int) -> list:
    """Representatives of pairs F <= F' <= Sym(d) up to simultaneous conjugacy.

    Returns (F, F', class size) with the representative chosen as the
    lexicographically smallest member, so the result does not depend on the
    enumeration order.
    """
    S = P.sym_group(d)
    subs = P.enumerate_subgroups(S)
    by_set = {H.elements: H for H in subs}
    raw = [(F.elements, Fp.elements) for Fp in subs for F in subs
           if F.order <= Fp.order and Fp.order % F.order == 0 and F.elements <= Fp.elements]
    seen = set()
    out = []
    sym = S.sorted_elements
    for pair in raw:
        if pair in seen:
            continue
        orbit = {(_conj_set(g, pair[0]), _conj_set(g, pair[1])) for g in sym}
        seen |= orbit
        rep = min(orbit, key=lambda p: (_key(p[1]), _key(p[0])))
        out.append((by_set[rep[0]], by_set[rep[1]], len(orbit)))
    out.sort(key=lambda t: (t[1].order, _key(t[1].elements), t[0].order, _key(t[0].elements)))
    return out


def scan(d: int, filter_text: str | None = None, k: int | None = None,
         max_degree: int = MAX_SCAN_DEGREE) -> ScanResult:
    if d < 2 or d > max_degree:
        raise ClassifyError(f"scan degree must be between 2 and {max_degree}")
    pred = parse_filter(filter_text) if filter_text else (lambda r: True)
    classes = pair_classes(d)
    rows = []
    raw_total = 0
    raw_match = 0
    for F, Fp, size in classes:
        raw_total += size
        rep = classify_row(F, Fp, k)
        if pred(rep):
            rows.append(ScanRow(rep, size))
            raw_match += size
    return ScanResult(d, rows, raw_total, len(classes), raw_match)


def format_scan(res: ScanResult) -> str:
    head = ["F", "Fp", "|F|", "|Fp|", "conjugates"] + list(CRITERIA)
    lines = ["\t".join(head)]
    for row in res.rows:
        r = row.report
        cells = [_group_label(r.F), _group_label(r.Fp), str(r.F.order), str(r.Fp.order),
                 str(row.class_size)] + [r.value(c) for c in CRITERIA]
        lines.append("\t".join(cells))
    lines.append(f"# degree {res.degree}: {len(res.rows)} of {res.classes} classes match; "
                 f"{res.raw_matching} of {res.raw_pairs} pairs counted without conjugacy")
    return "\n".join(lines)


def _group_label(G: P.PermGroup) -> str:
    gens = P.small_generating_set(G.degree, G.elements)
    return "<" + ",".join(P.format_perm(g) for g in gens) + ">" if gens else "<id>"


# ---------------------------------------------------------------- examples

@dataclass
class Example:
    name: str
    description: str
    check: object  # callable returning a list of (label, bool)


def _g(spec: str) -> P.PermGroup:
    return P.construct_group(spec)


def _expect_verdicts(F, Fp, expected: dict, Fpp=None, k=None):
    rep = classify(_g(F), _g(Fp), _g(Fpp) if Fpp else None, k)
    return [(f"{name} = {val}", rep.value(name) == val) for name, val in expected.items()]


def _ex_kk(p: int, m: int):
    # Alt(pm) is too large to enumerate at pm = 9, so membership is read off signs
    K, Kp, alpha, tau = P.kk_prime_groups(p, m)
    even_Kp = [x for x in Kp.elements if P.sign(x) == 1]
    return [
        ("K acts freely", P.orbit_data(K).free),
        ("K lies in Alt", all(P.sign(x) == 1 for x in K.elements)),
        ("K' does not lie in Alt", P.sign(tau) == -1),
        ("tau commutes with alpha", P.compose(tau, alpha) == P.compose(alpha, tau)),
        ("Alt meets K' in K", frozenset(even_Kp) == K.elements),
        ("Sym = Alt K'", any(P.sign(x) == -1 for x in Kp.elements)),
        ("K' leaves the K-orbits", standing_failure(K, Kp) is not None),
    ]


def _ex_affine():
    F, Fp, H, Hp = _g("agl_sq(1,5)"), _g("agl(1,5)"), _g("alt(5)"), _g("sym(5)")
    e = embedding_report(F, Fp, H, Hp)
    obs = W.obstruction_for_pair(GroupPair(5, F, Fp), 1)
    return [("closed", e.closed), ("cocompact", e.cocompact), ("not a lattice", not e.cocompact_lattice),
            ("F lies in Alt", F.issubgroup(H)), ("F' does not", not Fp.issubgroup(H)),
            ("cor421 for (F,F')", classify(F, Fp).value("cor421") == YES),
            ("cor421 for (H,H')", classify(H, Hp).value("cor421") == YES),
            ("obstruction at F'_a", obs.found and obs.Dp == P.point_stabilizer(Fp, 1))]


def _ex_simple_lattice(d: int):
    H, Hp, Fp = _g(f"dihedral({d})"), _g(f"sym({d})"), _g(f"alt({d})")
    F = P.intersection(H, Fp)
    e = embedding_report(F, Fp, H, Hp)
    return [("F simply transitive", P.orbit_data(F).simply_transitive),
            ("stabilizers of H are odd", not P.point_stabilizer(H, 1).issubgroup(Fp)),
            ("thm413 for (H,H')", classify(H, Hp).value("thm413") == YES),
            ("cor414 for (F,F')", classify(F, Fp).value("cor414") == YES),
            ("closed", e.closed), ("cocompact", e.cocompact),
            ("cocompact lattice", e.cocompact_lattice)]


def _ex_d6():
    F, Fp = _g("cyclic(6)"), _g("wreath_imprimitive(cyclic(2),3)")
    rep = classify(F, Fp)
    return [("F inside F'", F.issubgroup(Fp)),
            ("prop56 = no", rep.value("prop56") == NO),
            ("N_F'(F+) = F'", P.normalizer(Fp, P.plus_subgroup(F)) == Fp),
            ("N_F'(F) = F", P.normalizer(Fp, F) == F)]


def _ex_obstruction(q: int):
    Pr = GroupPair.from_specs(f"psl2({q})", f"pgl2({q})")
    infinity = q + 1
    rep = W.obstruction_for_pair(Pr, infinity)
    Dp = P.point_stabilizer(Pr.Fp, infinity)
    ok = rep.found and rep.Dp == Dp
    return [("D' = F'_inf found", ok),
            ("|D'| = q(q-1)", Dp.order == q * (q - 1)),
            ("q(q-1) < 2^q", Dp.order < 2 ** q),
            ("F_inf essential", P.is_essential(P.point_stabilizer(Pr.F, infinity), Dp))]


def _ex_wreath():
    C4 = P.cyclic_group(4)
    C2 = W.embed_subgroup(P.cyclic_group(2), C4)
    ctx = W.WreathContext(4, C2, C4)
    m0, m1 = W.haar_measures(ctx, 0), W.haar_measures(ctx, 1)
    return [("mu(K_0) = 2", m0.mu_K == 2), ("mu(K_1) = 8", m1.mu_K == 8),
            ("diverges", m1.diverges), ("obstruction", W.lattice_obstruction(ctx))]


LIBRARY_PAIRS = (
    ("dihedral(4)", "sym(4)"), ("cyclic(4)", "sym(4)"), ("alt(4)", "sym(4)"),
    ("alt(5)", "sym(5)"), ("alt(6)", "sym(6)"), ("cyclic(5)", "alt(5)"),
    ("ex_alt(8)", "alt(8)"), ("agl_sq(1,5)", "agl(1,5)"), ("psl2(5)", "pgl2(5)"),
    ("psl2(9)", "pgl2(9)"), ("cyclic(6)", "wreath_imprimitive(cyclic(2),3)"),
    ("dihedral(7)", "sym(7)"), ("cyclic(7)", "alt(7)"), ("dihedral(8)", "sym(8)"),
)


def example_library() -> list:
    ex = [
        Example("d4_sym4", "dihedral(4) in sym(4): the degree four simplicity example",
                lambda: _expect_verdicts("dihedral(4)", "sym(4)", {"thm413": YES, "u_equals_g": NO})),
        Example("c4_sym4", "cyclic(4) in sym(4): mixed closure is only alt(4)",
                lambda: _expect_verdicts("cyclic(4)", "sym(4)", {"thm413": NO})),
        Example("alt4_sym4", "alt(4) in sym(4): index eight simple subgroup",
                lambda: _expect_verdicts("alt(4)", "sym(4)", {"cor421": YES, "thm420": YES})),
        Example("alt5_sym5", "alt(5) in sym(5)",
                lambda: _expect_verdicts("alt(5)", "sym(5)", {"cor421": YES})),
        Example("alt6_sym6", "alt(6) in sym(6)",
                lambda: _expect_verdicts("alt(6)", "sym(6)", {"cor421": YES})),
        Example("c5_alt5", "cyclic(5) in alt(5): discrete simple example",
                lambda: _expect_verdicts("cyclic(5)", "alt(5)", {"cor414": YES, "prop311": YES}, k=4)),
        Example("ex_alt8", "simply transitive subgroup of alt(8)",
                lambda: _expect_verdicts("ex_alt(8)", "alt(8)", {"cor414": YES})),
        Example("d5_agl5", "dihedral of degree five in the affine group",
                lambda: _expect_verdicts("agl_sq(1,5)", "agl(1,5)", {"cor421": YES})),
        Example("psl_pgl_q5", "PSL(2,5) in PGL(2,5): no lattices", lambda: _ex_obstruction(5)),
        Example("psl_pgl_q9", "PSL(2,9) in PGL(2,9): no lattices", lambda: _ex_obstruction(9)),
        Example("d6_c6_wreath", "cyclic(6) in C2 wr C3: normalizer conditions differ", _ex_d6),
        Example("affine_q5_n1_vs_altsym", "affine pair inside alt/sym(5)", _ex_affine),
        Example("simple_lattice_d7", "dihedral/alt/sym quadruple at d=7", lambda: _ex_simple_lattice(7)),
        Example("simple_lattice_d8", "dihedral/alt/sym quadruple at d=8", lambda: _ex_simple_lattice(8)),
        Example("kk_prime_3_3", "free K with an odd extension K' on 9 points", lambda: _ex_kk(3, 3)),
        Example("wreath_c2_c4", "C2 in C4 with four branches", _ex_wreath),
    ]
    return ex


def run_example(ex: Example):
    try:
        checks = ex.check()
    except (ValueError, P.GroupError) as exc:
        return False, [(f"error: {exc}", False)]
    return all(ok for _, ok in checks), checks
