"""Algorithms on the groups G(F,F') of almost-everywhere locally-F automorphisms.

Everything here works on portraits.  Every constructive routine returns data
that can be re-multiplied and compared canonically, so callers can verify
outputs exactly instead of trusting them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from . import perm as P
from . import portrait as Q
from .portrait import Portrait
from .tree import (V0, V1, CompleteSubtree, ball, complete_hull, distance, format_vertex,
                   geodesic, in_branch, make_subtree, neighbor, neighbors, parity,
                   toward_e0_color)


class GffError(ValueError):
    pass


def _vkey(v):
    return (len(v), v)


def _inward(v: tuple) -> tuple:
    """The neighbour of v outside L(v)."""
    if not v:
        return V1
    return v[:-1]


def reduce_word(letters) -> tuple:
    """Free reduction in the free product of copies of Z/2."""
    out = []
    for a in letters:
        if out and out[-1] == a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def left_translation(r: tuple, d: int) -> Portrait:
    """The automorphism with all local permutations trivial mapping V0 to r.

    It acts on reduced words by left multiplication: w -> reduce(r w).
    """
    return Q.constant_aut(P.identity(d), r)


def translation_to(src: tuple, dst: tuple, d: int) -> Portrait:
    """A left translation (so an element of every U(F)) with src -> dst."""
    return left_translation(reduce_word(dst + tuple(reversed(src))), d)


# ---------------------------------------------------------------- the pair

@dataclass(frozen=True, eq=False)
class GroupPair:
    """A validated pair F <= F' <= F-hat of permutation groups of degree d."""

    d: int
    F: P.PermGroup
    Fp: P.PermGroup

    def __post_init__(self):
        if self.F.degree != self.d or self.Fp.degree != self.d:
            raise GffError("degree mismatch between the pair and d")
        if not self.F.issubgroup(self.Fp):
            raise GffError("F is not a subgroup of F'")
        young = P.young_closure(self.F)
        for g in self.Fp.generators:
            if g not in young:
                raise GffError(f"F' element {P.format_perm(g)} does not preserve the F-orbits")

    @classmethod
    def from_specs(cls, F: str, Fp: str) -> "GroupPair":
        A = P.construct_group(F)
        B = P.construct_group(Fp)
        if A.degree != B.degree:
            raise GffError("F and F' have different degrees")
        return cls(A.degree, A, B)

    @cached_property
    def functors(self) -> P.SubgroupFunctors:
        return P.subgroup_functors(self.F, self.Fp)

    @cached_property
    def F_sorted(self) -> tuple:
        return self.F.sorted_elements

    @cached_property
    def transitive(self) -> bool:
        return P.is_transitive(self.F)

    @cached_property
    def index(self) -> int:
        return self.Fp.order // self.F.order

    @cached_property
    def _routing(self) -> dict:
        """(a, b) -> lexicographically smallest f in F with f(a) = b."""
        out = {}
        for f in self.F_sorted:
            for a in range(1, self.d + 1):
                out.setdefault((a, f[a]), f)
        return out

    def route(self, a: int, b: int):
        return self._routing.get((a, b))

    @cached_property
    def _commutators(self) -> dict:
        """Each commutator of two elements of some F'_a, with a witness (alpha, beta, a)."""
        out = {}
        for a in range(1, self.d + 1):
            stab = P.point_stabilizer(self.Fp, a).sorted_elements
            for x in stab:
                for y in stab:
                    c = P.commutator(x, y)
                    if c not in out:
                        out[c] = (x, y, a)
        return out

    def describe(self) -> str:
        return f"({self.F.describe()}, {self.Fp.describe()})"


def _check_degree(Pr: GroupPair, g: Portrait):
    if g.degree != Pr.d:
        raise GffError(f"element has degree {g.degree}, pair has degree {Pr.d}")


def _local_items(g: Portrait):
    yield from g.internal.items()
    yield from g.tails.items()


# ---------------------------------------------------------------- membership

@dataclass(frozen=True)
class MembershipReport:
    in_UF: bool
    in_GFFp: bool
    type_preserving: bool
    in_G0: bool
    in_G1: bool
    orbit_compatible: bool


def singular_set(Pr: GroupPair, g: Portrait, group=None) -> frozenset:
    """Internal vertices whose local permutation lies outside ``group`` (default F)."""
    group = Pr.F if group is None else group
    return frozenset(v for v, s in g.internal.items() if s not in group)


def in_gffp(Pr: GroupPair, g: Portrait) -> bool:
    return (all(s in Pr.Fp for s in g.internal.values())
            and all(s in Pr.F for s in g.tails.values()))


def in_uf(Pr: GroupPair, g: Portrait, group=None) -> bool:
    group = Pr.F if group is None else group
    return all(s in group for _, s in _local_items(g))


def membership_report(Pr: GroupPair, g: Portrait) -> MembershipReport:
    _check_degree(Pr, g)
    uf = in_uf(Pr, g)
    gffp = in_gffp(Pr, g)
    young = Pr.functors.young
    orbit_ok = all(s in young for _, s in _local_items(g))
    if gffp and not orbit_ok:
        raise GffError("element of G(F,F') moves an F-orbit")  # pragma: no cover
    S = singular_set(Pr, g)
    n0 = sum(1 for v in S if parity(v) == 0)
    return MembershipReport(uf, gffp, g.type_preserving(), n0 % 2 == 0,
                            (len(S) - n0) % 2 == 0, orbit_ok)


# ---------------------------------------------------------------- singularities

@dataclass(frozen=True)
class SingularityReport:
    S: frozenset
    S0: frozenset
    S1: frozenset
    Sigma: frozenset | None
    Tminus: CompleteSubtree
    N: int


def _require_gffp(Pr: GroupPair, g: Portrait):
    _check_degree(Pr, g)
    if not in_gffp(Pr, g):
        raise GffError("element is not in G(F,F')")


def tminus(Pr: GroupPair, g: Portrait, S=None) -> CompleteSubtree:
    S = singular_set(Pr, g) if S is None else S
    ginv = Q.invert(g)
    pts = {V0, V1, ginv.apply(V0), ginv.apply(V1)} | set(S)
    return complete_hull(pts, S, Pr.d)


def N(Pr: GroupPair, g: Portrait) -> int:
    """Number of internal vertices of the minimal diagram subtree of g."""
    return len(tminus(Pr, g).internal)


def singularity_report(Pr: GroupPair, g: Portrait, Fpp: P.PermGroup | None = None) -> SingularityReport:
    _require_gffp(Pr, g)
    S = singular_set(Pr, g)
    T = tminus(Pr, g, S)
    # outside T, g must act like F; checked on the internal vertices of g's base
    for v, s in g.internal.items():
        if v not in T.internal and s not in Pr.F:
            raise GffError("diagram subtree misses a singularity")  # pragma: no cover
    sigma = singular_set(Pr, g, Fpp) if Fpp is not None else None
    S0 = frozenset(v for v in S if parity(v) == 0)
    return SingularityReport(S, S0, S - S0, sigma, T, len(T.internal))


def format_singularity_report(r: SingularityReport) -> str:
    def vs(xs):
        return "[" + ", ".join(f'"{format_vertex(v)}"' for v in sorted(xs, key=_vkey)) + "]"
    lines = [f"S: {vs(r.S)}", f"S0: {vs(r.S0)}", f"S1: {vs(r.S1)}"]
    if r.Sigma is not None:
        lines.append(f"Sigma: {vs(r.Sigma)}")
    lines.append(f"Tminus_internal: {vs(r.Tminus.internal)}")
    lines.append(f"N: {r.N}")
    return "\n".join(lines)


# ---------------------------------------------------------------- extension

def extend_local(Pr: GroupPair, v: tuple, n: int, data: dict, image: tuple) -> Portrait:
    """An element of G(F,F') with the given local permutations on B(v, n).

    The result maps v to ``image``.  Past the sphere of radius n, each branch
    leaving x through color a carries the smallest f in F with
    f(a) = data[x](a), so the element acts like F outside the ball.
    """
    d = Pr.d
    if n < 0:
        raise GffError("radius must be nonnegative")
    B = ball(v, n, d)
    data = {tuple(x): tuple(s) for x, s in data.items()}
    missing = [x for x in B if x not in data]
    if missing:
        raise GffError(f"no local permutation given at {format_vertex(missing[0])!r}")
    Bset = set(B)
    for x in B:
        if data[x] not in Pr.Fp:
            raise GffError(f"local permutation at {format_vertex(x)!r} is not in F'")
        for a in range(1, d + 1):
            y = neighbor(x, a)
            if y in Bset and data[x][a] != data[y][a]:
                raise GffError("data is not the restriction of an automorphism")
    perms = {x: data[x] for x in B}
    for x in B:
        if distance(x, v) != n:
            continue
        s = data[x]
        for a in range(1, d + 1):
            y = neighbor(x, a)
            if y in Bset:
                continue
            f = Pr.route(a, s[a])
            if f is None:
                raise GffError("local permutation moves a color out of its F-orbit")
            perms[y] = f
    return Q.from_general(d, Bset, perms, v, image)


def star_element(Pr: GroupPair, v: tuple, sigma: tuple, image: tuple | None = None) -> Portrait:
    """The element of K_{0,F'}(v) (or its translate) with local permutation sigma at v."""
    return extend_local(Pr, v, 0, {v: sigma}, v if image is None else image)


# ---------------------------------------------------------------- U(F) x K decomposition

def decompose_KU(Pr: GroupPair, g: Portrait):
    """Write g = gamma g_1 ... g_k with gamma in U(F) and g_i in K_{0,F'}(v_i).

    Returns (gamma, parts) where parts is a list of (v_i, g_i).
    """
    _require_gffp(Pr, g)
    d = Pr.d
    cur = g
    prefix = Q.identity(d)
    suffix = []
    S = singular_set(Pr, cur)
    while S:
        v = min(S, key=_vkey)
        g1 = translation_to(cur.apply(v), v, d)
        fixed = Q.compose(g1, cur)
        gv = star_element(Pr, v, fixed.local(v))
        cur = Q.compose(fixed, Q.invert(gv))
        prefix = Q.compose(prefix, Q.invert(g1))
        suffix.insert(0, (v, gv))
        S_new = singular_set(Pr, cur)
        if len(S_new) >= len(S):
            raise GffError("decomposition did not remove a singularity")  # pragma: no cover
        S = S_new
    gamma = Q.compose(prefix, cur)
    if not in_uf(Pr, gamma):
        raise GffError("leftover factor is not in U(F)")  # pragma: no cover
    return gamma, suffix


def in_K0(Pr: GroupPair, v: tuple, k: Portrait) -> bool:
    return k.apply(v) == v and singular_set(Pr, k) <= {v} and in_gffp(Pr, k)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class CommutatorFactor:
    g: Portrait
    h: Portrait
    edge: tuple


@dataclass(frozen=True)
class CertificateStep:
    element: Portrait
    witness: tuple


@dataclass
class Certificate:
    steps: list
    residual: Portrait
    source: Portrait | None = None


def _fixes(x: Portrait, v: tuple) -> bool:
    return x.apply(v) == v


def verify_step(step: CertificateStep, d: int) -> bool:
    """The witness commutators multiply to the element and fix their edges."""
    prod = Q.identity(d)
    for f in step.witness:
        u, w = f.edge
        if not (_fixes(f.g, u) and _fixes(f.g, w) and _fixes(f.h, u) and _fixes(f.h, w)):
            return False
        prod = Q.compose(prod, Q.commutator(f.g, f.h))
    return prod == step.element


def verify_certificate(cert: Certificate, g: Portrait) -> bool:
    """Check every step, then gamma_m ... gamma_1 g == residual."""
    d = g.degree
    cur = g
    for st in cert.steps:
        if not verify_step(st, d):
            return False
        cur = Q.compose(st.element, cur)
    return cur == cert.residual


def commutator_expression(Pr: GroupPair, rho: tuple, max_factors: int | None = None):
    """Shortest list of (alpha, beta, a) with alpha, beta in F'_a and prod [alpha, beta] = rho.

    Breadth-first search over the group generated by the stabilizer
    commutators; ``max_factors`` caps the number of factors.
    """
    rho = tuple(rho)
    comms = Pr._commutators
    cache = Pr.__dict__.setdefault("_comm_bfs", {})
    e = P.identity(Pr.d)
    if not cache:
        cache[e] = None
    if rho not in cache:
        # extend the stored search tree level by level until rho shows up
        frontier = Pr.__dict__.get("_comm_frontier", [e])
        depth = Pr.__dict__.get("_comm_depth", 0)
        keys = sorted(comms)
        while rho not in cache and frontier:
            if max_factors is not None and depth >= max_factors:
                break
            nxt = []
            for x in frontier:
                for c in keys:
                    y = P.compose(x, c)
                    if y not in cache:
                        cache[y] = (x, c)
                        nxt.append(y)
            frontier = nxt
            depth += 1
            Pr.__dict__["_comm_frontier"] = frontier
            Pr.__dict__["_comm_depth"] = depth
    if rho not in cache:
        raise GffError(f"{P.format_perm(rho)} is not a product of stabilizer commutators"
                       + ("" if max_factors is None else f" with at most {max_factors} factors"))
    out = []
    x = rho
    while cache[x] is not None:
        prev, c = cache[x]
        out.append(comms[c])
        x = prev
    out.reverse()
    if max_factors is not None and len(out) > max_factors:
        raise GffError(f"{P.format_perm(rho)} needs more than {max_factors} commutator factors")
    return out


def gamma_uf(Pr: GroupPair, rho: tuple, v: tuple, max_factors: int | None = None) -> CertificateStep:
    """An element fixing v with local permutation rho at v and F elsewhere.

    It is built as a product of commutators [g_k, h_k] where g_k and h_k fix
    the edge at v of color a_k.
    """
    d = Pr.d
    factors = []
    gamma = Q.identity(d)
    for alpha, beta, a in commutator_expression(Pr, rho, max_factors):
        gk = star_element(Pr, v, alpha)
        hk = star_element(Pr, v, beta)
        factors.append(CommutatorFactor(gk, hk, (v, neighbor(v, a))))
        gamma = Q.compose(gamma, Q.commutator(gk, hk))
    if gamma.apply(v) != v or gamma.local(v) != tuple(rho) or singular_set(Pr, gamma) - {v}:
        raise GffError("commutator product has the wrong local action")  # pragma: no cover
    return CertificateStep(gamma, tuple(factors))


def simple_hypotheses(Pr: GroupPair) -> bool:
    """F transitive and F' generated by stabilizer commutators together with F_a."""
    return Pr.transitive and Pr.functors.mixed_closure == Pr.Fp


def reduce_simple(Pr: GroupPair, g: Portrait, max_factors: int | None = None) -> Certificate:
    """Cancel the singularities of g one at a time with certified commutator products."""
    _require_gffp(Pr, g)
    if not simple_hypotheses(Pr):
        raise GffError("pair does not satisfy: F transitive and F' = <[F'_a,F'_a], F_a>")
    if not g.type_preserving():
        raise GffError("element is not type-preserving")
    derived = Pr.functors.derived_stab_closure
    steps = []
    cur = g
    S = singular_set(Pr, cur)
    while S:
        v = min(S, key=_vkey)
        s_inv = P.inverse(cur.local(v))
        rho = next((P.compose(f, s_inv) for f in Pr.F_sorted
                    if P.compose(f, s_inv) in derived), None)
        if rho is None:
            raise GffError("no stabilizer-commutator correction exists")  # pragma: no cover
        step = gamma_uf(Pr, rho, cur.apply(v), max_factors)
        steps.append(step)
        cur = Q.compose(step.element, cur)
        S_new = singular_set(Pr, cur)
        if len(S_new) >= len(S):
            raise GffError("reduction did not remove a singularity")  # pragma: no cover
        S = S_new
    return Certificate(steps, cur, g)


# ---------------------------------------------------------------- index two refinements

def _check_fpp(Pr: GroupPair, Fpp: P.PermGroup):
    if Fpp.degree != Pr.d or not Pr.F.issubgroup(Fpp) or not Fpp.issubgroup(Pr.Fp):
        raise GffError("F'' must lie between F and F'")
    if 2 * Fpp.order != Pr.Fp.order:
        raise GffError("F'' must have index two in F'")


def make_two_singular(Pr: GroupPair, Fpp: P.PermGroup, v: tuple, w: tuple) -> Portrait:
    """A commutator whose local permutations lie outside F'' exactly at v and w."""
    _check_fpp(Pr, Fpp)
    if v == w or distance(v, w) % 2:
        raise GffError("vertices must be distinct and at even distance")
    sigma = next(s for s in Pr.Fp.sorted_elements if s not in Fpp)
    g1 = star_element(Pr, v, sigma)
    target = Q.invert(g1).apply(w)
    g2 = translation_to(v, target, Pr.d)
    gamma = Q.commutator(g2, g1)
    if singular_set(Pr, gamma, Fpp) != {v, w}:
        raise GffError("commutator has unexpected singularities")  # pragma: no cover
    return gamma


def sigma_reduce(Pr: GroupPair, Fpp: P.PermGroup, g: Portrait):
    """Strip F''-singularities in pairs of equal parity.

    Returns (steps, residual) with residual = gamma_m ... gamma_1 g and no
    local permutation of the residual outside F''.
    """
    _require_gffp(Pr, g)
    _check_fpp(Pr, Fpp)
    if not g.type_preserving():
        raise GffError("element is not type-preserving")
    cur = g
    steps = []
    Sig = singular_set(Pr, cur, Fpp)
    while Sig:
        by_parity = {0: [], 1: []}
        for x in sorted(Sig, key=_vkey):
            by_parity[parity(x)].append(x)
        pair = next((xs[:2] for xs in by_parity.values() if len(xs) >= 2), None)
        if pair is None:
            raise GffError("odd number of singularities of some parity")
        x1, x2 = pair
        gamma = make_two_singular(Pr, Fpp, cur.apply(x1), cur.apply(x2))
        steps.append(gamma)
        cur = Q.compose(gamma, cur)
        new = singular_set(Pr, cur, Fpp)
        if new != Sig - {x1, x2}:
            raise GffError("pair cancellation failed")  # pragma: no cover
        Sig = new
    return steps, cur


# ---------------------------------------------------------------- word metric

@dataclass(frozen=True)
class Letter:
    """Either the translation h_i to the power sign, or a local element at a vertex."""

    kind: str
    index: int = 0
    sign: int = 1
    vertex: tuple | None = None
    element: Portrait | None = None

    def text(self) -> str:
        if self.kind == "h":
            return f"h{self.index}" + ("" if self.sign == 1 else "^-1")
        return f'k["{format_vertex(self.vertex)}"]'


@dataclass
class GenWord:
    letters: list = field(default_factory=list)

    def __len__(self):
        return len(self.letters)

    def text(self) -> str:
        return " ".join(x.text() for x in self.letters) or "id"


def _matching(Pr: GroupPair) -> dict:
    """sigma_i in F with sigma_i(1) = i whose inverse images of 1 are distinct.

    Returns i -> sigma_i for i in 2..d.  Among valid systems the search takes
    lexicographically smallest choices first.
    """
    d = Pr.d
    cand = {i: [f for f in Pr.F_sorted if f[1] == i and P.inverse(f)[1] != 1] for i in range(2, d + 1)}
    used = {}

    def place(i, seen):
        for f in cand[i]:
            c = P.inverse(f)[1]
            if c in seen:
                continue
            seen.add(c)
            if c not in used or place(used[c][0], seen):
                used[c] = (i, f)
                return True
        return False

    for i in range(2, d + 1):
        if not place(i, set()):
            raise GffError("no translation system with distinct backward colors")
    out = {i: f for i, f in used.values()}
    return dict(sorted(out.items()))


def translations(Pr: GroupPair) -> dict:
    """i -> h_i, the element with all local permutations sigma_i and h_i(V0) = V1."""
    if not Pr.transitive:
        raise GffError("word metric needs a transitive F")
    cache = Pr.__dict__.get("_translations")
    if cache is None:
        cache = {i: Q.constant_aut(s, V1) for i, s in _matching(Pr).items()}
        Pr.__dict__["_translations"] = cache
    return cache


def _h_inverses(Pr: GroupPair) -> dict:
    cache = Pr.__dict__.get("_h_inverses")
    if cache is None:
        cache = {i: Q.invert(h) for i, h in translations(Pr).items()}
        Pr.__dict__["_h_inverses"] = cache
    return cache


def _backward(Pr: GroupPair) -> dict:
    """Color c -> i with h_i^{-1}(V0) = (c,)."""
    return {Q.invert(h).apply(V0)[0]: i for i, h in translations(Pr).items()}


def evaluate_word(Pr: GroupPair, word: GenWord) -> Portrait:
    hs = translations(Pr)
    hinv = _h_inverses(Pr)
    out = Q.identity(Pr.d)
    for x in word.letters:
        if x.kind == "h":
            out = Q.compose(out, hs[x.index] if x.sign == 1 else hinv[x.index])
        else:
            out = Q.compose(out, x.element)
    return out


def restrict_to_branch(g: Portrait, x: tuple) -> Portrait:
    """The automorphism equal to g on L(x) and trivial elsewhere.

    g must map L(x) onto itself fixing x and its inward neighbour.
    """
    d = g.degree
    y = _inward(x)
    internal = set(g.internal) | {x, y}
    pts = set(g.internal) | set(g.tails) | {V0, V1} | set(neighbors(x, d)) | set(neighbors(y, d))
    R = complete_hull(pts, internal, d)
    e = P.identity(d)
    perms = {w: (g.local(w) if in_branch(w, x) else e) for w in R.internal | R.leaves}
    return Q.from_general(d, set(R.internal), perms, y, y)


def _word_fix_l0(Pr: GroupPair, g: Portrait, depth: int = 0) -> list:
    """Letters for g acting trivially on L(V0)."""
    if g.is_identity():
        return []
    if depth > 10_000:  # pragma: no cover
        raise GffError("word recursion did not terminate")
    if N(Pr, g) == 0:
        return [Letter("k", vertex=V1, element=g)]
    hs = _matching(Pr)
    u = star_element(Pr, V1, P.inverse(g.local(V1)))
    gp = Q.compose(u, g)
    out = [Letter("k", vertex=V1, element=Q.invert(u))]
    for i in hs:
        gi = restrict_to_branch(gp, (1, i))
        if gi.is_identity():
            continue
        h = translations(Pr)[i]
        hinv = _h_inverses(Pr)[i]
        gi2 = Q.compose(Q.compose(hinv, gi), h)
        out.append(Letter("h", i, 1))
        out.extend(_word_fix_l0(Pr, gi2, depth + 1))
        out.append(Letter("h", i, -1))
    return out


def _word_fix_l1(Pr: GroupPair, g: Portrait, depth: int = 0) -> list:
    """Letters for g acting trivially on L(V1)."""
    if g.is_identity():
        return []
    if depth > 10_000:  # pragma: no cover
        raise GffError("word recursion did not terminate")
    if N(Pr, g) == 0:
        return [Letter("k", vertex=V0, element=g)]
    back = _backward(Pr)
    u = star_element(Pr, V0, P.inverse(g.local(V0)))
    gp = Q.compose(u, g)
    out = [Letter("k", vertex=V0, element=Q.invert(u))]
    for c in range(2, Pr.d + 1):
        gc = restrict_to_branch(gp, (c,))
        if gc.is_identity():
            continue
        i = back[c]
        h = translations(Pr)[i]
        hinv = _h_inverses(Pr)[i]
        gc2 = Q.compose(Q.compose(h, gc), hinv)
        out.append(Letter("h", i, -1))
        out.extend(_word_fix_l1(Pr, gc2, depth + 1))
        out.append(Letter("h", i, 1))
    return out


def word_decompose(Pr: GroupPair, g: Portrait) -> GenWord:
    """A word in h_2..h_d, K_{0,F'}(V0) and K_{0,F'}(V1) whose product is g."""
    _require_gffp(Pr, g)
    hs = translations(Pr)
    hinv = _h_inverses(Pr)
    back = _backward(Pr)
    d = Pr.d
    letters = []
    # route g(V1) back to V1 with translations
    cur = g.apply(V1)
    while cur != V1:
        if len(cur) >= 2 and cur[0] == 1:
            i = cur[1]
            cur = hinv[i].apply(cur)
            letters.append(Letter("h", i, 1))
        elif not cur:
            i = min(hs)
            cur = hs[i].apply(cur)
            letters.append(Letter("h", i, -1))
        else:
            i = back[cur[0]]
            cur = hs[i].apply(cur)
            letters.append(Letter("h", i, -1))
    W = evaluate_word(Pr, GenWord(list(letters)))
    g1 = Q.compose(Q.invert(W), g)
    u = star_element(Pr, V1, P.inverse(g1.local(V1)))
    g2 = Q.compose(u, g1)
    letters.append(Letter("k", vertex=V1, element=Q.invert(u)))
    ga = restrict_to_branch(g2, V1)
    gb = restrict_to_branch(g2, V0)
    letters.extend(_word_fix_l0(Pr, ga))
    letters.extend(_word_fix_l1(Pr, gb))
    word = GenWord([x for x in letters if x.kind == "h" or not x.element.is_identity()])
    n = N(Pr, g)
    if evaluate_word(Pr, word) != g:
        raise GffError("word does not multiply back to the element")  # pragma: no cover
    if not n <= len(word) <= (3 * d - 2) * n + 3 * d + 2:
        raise GffError(f"word length {len(word)} outside the bounds for N = {n}")  # pragma: no cover
    return word


# ---------------------------------------------------------------- commensurated cosets

@dataclass(frozen=True)
class CosetReport:
    nonempty: bool
    witness: Portrait | None


def coset_M(Pr: GroupPair, v: tuple) -> CosetReport:
    """Whether some element maps L(V0) onto L(v) acting like F on L(V0)."""
    c = toward_e0_color(v)
    f = Pr.route(1, c)
    if f is None:
        return CosetReport(False, None)
    w = Q.constant_aut(f, v)
    if not in_M(Pr, w, v):
        raise GffError("coset witness fails its defining property")  # pragma: no cover
    return CosetReport(True, w)


def in_M(Pr: GroupPair, p: Portrait, x: tuple) -> bool:
    """Literal test of p(L(V0)) = L(x) with every local permutation on L(V0) in F."""
    if p.apply(V0) != x or p.apply(V1) != _inward(x):
        return False
    return all(s in Pr.F for v, s in _local_items(p) if in_branch(v, V0))


def symdiff_M(Pr: GroupPair, g: Portrait) -> int:
    """#(gM symmetric difference M) computed as twice the diagram size."""
    _require_gffp(Pr, g)
    if not Pr.transitive:
        raise GffError("commensurated coset set needs a transitive F")
    return 2 * N(Pr, g)


def _displaced(Pr: GroupPair, g: Portrait) -> int:
    T = tminus(Pr, g)
    ginv = Q.invert(g)
    R = max(T.depth(), len(ginv.apply(V0)), len(ginv.apply(V1))) + 2
    # if g M_v = M_{g(v)} then the same holds throughout L(v), so only the
    # children of displaced vertices need a look
    count = 0
    stack = [V0, V1]
    while stack:
        v = stack.pop()
        wit = coset_M(Pr, v).witness
        if in_M(Pr, Q.compose(g, wit), g.apply(v)):
            continue
        count += 1
        if len(v) < R:
            last = v[-1] if v else 1
            stack.extend(v + (a,) for a in range(1, Pr.d + 1) if a != last)
    return count


def symdiff_oracle(Pr: GroupPair, g: Portrait) -> int:
    """Count displaced cosets directly: #(gM minus M) + #(g^-1 M minus M)."""
    _require_gffp(Pr, g)
    if not Pr.transitive:
        raise GffError("commensurated coset set needs a transitive F")
    return _displaced(Pr, g) + _displaced(Pr, Q.invert(g))


# ---------------------------------------------------------------- cocompactness

def cocompact_reduce(Fpair: GroupPair, Hpair: GroupPair, g: Portrait):
    """Split g in G(H,H') fixing V0 as k gamma^-1 with gamma in G(F,F') and k in U(H).

    Returns (gamma, k) with k = g gamma.
    """
    if Fpair.d != Hpair.d:
        raise GffError("pairs have different degrees")
    if not Fpair.F.issubgroup(Hpair.F) or not Fpair.Fp.issubgroup(Hpair.Fp):
        raise GffError("need F <= H and F' <= H'")
    if not P.product_set_equals(Hpair.F, Fpair.Fp, Hpair.Fp):
        raise GffError("H' is not the product set H F'")
    _require_gffp(Hpair, g)
    if g.apply(V0) != V0:
        raise GffError("element does not fix V0")
    d = Fpair.d
    gamma = Q.identity(d)
    cur = g
    S = singular_set(Hpair, cur)
    while S:
        v = min(S, key=_vkey)
        a = v[-1] if v else None
        s = cur.local(v)
        sigma = next((x for x in Fpair.Fp.sorted_elements
                      if (a is None or x[a] == a) and P.compose(s, x) in Hpair.F), None)
        if sigma is None:
            raise GffError("no correcting permutation in the stabilizer")  # pragma: no cover
        step = star_element(Fpair, v, sigma)
        gamma = Q.compose(gamma, step)
        cur = Q.compose(cur, step)
        S_new = singular_set(Hpair, cur)
        if len(S_new) >= len(S):
            raise GffError("peeling did not remove a singularity")  # pragma: no cover
        S = S_new
    if not in_uf(Hpair, cur) or cur.apply(V0) != V0:
        raise GffError("residual is not in U(H) fixing V0")  # pragma: no cover
    return gamma, cur


# ---------------------------------------------------------------- conjugating fixators of subtrees

def support_tree(Pr: GroupPair, g: Portrait) -> CompleteSubtree:
    """The 1-neighbourhood of the subtree spanned by S(g), or e0 when S(g) is empty."""
    S = sorted(singular_set(Pr, g), key=_vkey)
    if not S:
        return make_subtree((), Pr.d)
    span = set()
    for s in S:
        span.update(geodesic(S[0], s))
    return make_subtree(span, Pr.d)


def random_fixing(Pr: GroupPair, T: CompleteSubtree, rng: random.Random, depth: int = 2) -> Portrait:
    """A random element of U(F) fixing every vertex of T."""
    d = Pr.d
    e = P.identity(d)
    if T.internal:
        perms = {x: e for x in T.internal}
        frontier = [(x, next(a for a in range(1, d + 1) if neighbor(x, a) in T.internal))
                    for x in T.leaves]
    else:
        perms = {}
        frontier = [(V0, 1), (V1, 1)]
    stab = {a: [f for f in Pr.F_sorted if f[a] == a] for a in range(1, d + 1)}
    level = []
    for x, a in frontier:
        perms[x] = rng.choice(stab[a])
        level.append((x, a))
    for _ in range(depth):
        nxt = []
        for x, a in level:
            for b in range(1, d + 1):
                if b == a:
                    continue
                y = neighbor(x, b)
                perms[y] = rng.choice([f for f in Pr.F_sorted if f[b] == perms[x][b]])
                nxt.append((y, b))
        level = nxt
    internal = set(perms) - {x for x, _ in level}
    anchor = next(iter(T.internal)) if T.internal else V0
    return Q.from_general(d, internal, perms, anchor, anchor)


def conjugate_sample_ok(Pr: GroupPair, g: Portrait, u: Portrait, T: CompleteSubtree | None = None) -> bool:
    """For u in U(F) fixing T(g), check g u g^-1 in U(F) fixing g(T(g)).

    Raises GffError when u does not satisfy the precondition.
    """
    T = support_tree(Pr, g) if T is None else T
    verts = T.internal | T.leaves
    if not in_uf(Pr, u) or any(u.apply(x) != x for x in verts):
        raise GffError("sample is not an element of U(F) fixing T(g)")
    c = Q.conjugate(g, u)
    return in_uf(Pr, c) and all(c.apply(g.apply(x)) == g.apply(x) for x in verts)


def conjugation_commensuration_check(Pr: GroupPair, g: Portrait, trials: int,
                                     rng: random.Random | None = None) -> bool:
    _require_gffp(Pr, g)
    rng = rng or random.Random(0)
    T = support_tree(Pr, g)
    for _ in range(trials):
        u = random_fixing(Pr, T, rng)
        if not conjugate_sample_ok(Pr, g, u, T):
            return False
    return True


# ---------------------------------------------------------------- random elements

def random_element(Pr: GroupPair, rng: random.Random, factors: int = 6, radius: int = 2) -> Portrait:
    """Product of up to ``factors`` random generators.

    Generators are star elements at random vertices of the ball of the given
    radius (local permutation drawn from F') and constant elements of U(F)
    with a random root image.
    """
    d = Pr.d
    verts = ball(V0, radius, d)
    Fp = Pr.Fp.sorted_elements
    out = Q.identity(d)
    for _ in range(rng.randint(1, factors)):
        if rng.random() < 0.5:
            v = rng.choice(verts)
            x = star_element(Pr, v, rng.choice(Fp), rng.choice(verts))
        else:
            x = Q.constant_aut(rng.choice(Pr.F_sorted), rng.choice(verts))
        out = Q.compose(out, x)
    return out


def random_type_preserving(Pr: GroupPair, rng: random.Random, factors: int = 6, radius: int = 2) -> Portrait:
    while True:
        g = random_element(Pr, rng, factors, radius)
        if g.type_preserving():
            return g


def random_with_singularities(Pr: GroupPair, rng: random.Random, count: int, radius: int = 2,
                              type_preserving: bool = True) -> Portrait:
    """A random element with exactly ``count`` singularities (rejection sampling)."""
    while True:
        g = random_element(Pr, rng, factors=max(2, 2 * count), radius=radius)
        if type_preserving and not g.type_preserving():
            continue
        if len(singular_set(Pr, g)) == count:
            return g


def random_sigma_even(Pr: GroupPair, Fpp: P.PermGroup, rng: random.Random, factors: int = 6,
                      radius: int = 2) -> Portrait:
    """A random type-preserving element with evenly many F''-singularities of each parity."""
    _check_fpp(Pr, Fpp)
    while True:
        g = random_type_preserving(Pr, rng, factors, radius)
        sig = singular_set(Pr, g, Fpp)
        n0 = sum(1 for v in sig if parity(v) == 0)
        if n0 % 2 == 0 and (len(sig) - n0) % 2 == 0:
            return g
