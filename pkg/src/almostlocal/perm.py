"""Finite permutation groups on {1, ..., d}, stored fully enumerated.

A permutation is a tuple ``p`` of length d + 1 with ``p[0] == 0`` and
``p[a]`` the image of the point a.  Keeping the unused slot 0 lets colors and
points be used as indices directly.  ``compose(p, q)`` is "p after q".
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

from .fields import FieldError, field

MAX_ORDER = 40320
MAX_DEGREE = 16


class GroupError(ValueError):
    """Raised for malformed descriptors and violated preconditions."""


# ---------------------------------------------------------------- permutations

def identity(d: int) -> tuple:
    return tuple(range(d + 1))


def compose(p: tuple, q: tuple) -> tuple:
    """Return p o q (apply q first)."""
    return tuple([p[i] for i in q])


def inverse(p: tuple) -> tuple:
    inv = [0] * len(p)
    for a, b in enumerate(p):
        inv[b] = a
    return tuple(inv)


def commutator(p: tuple, q: tuple) -> tuple:
    """[p, q] = p q p^-1 q^-1."""
    return compose(compose(p, q), compose(inverse(p), inverse(q)))


def conjugate(g: tuple, p: tuple) -> tuple:
    """g p g^-1."""
    return compose(compose(g, p), inverse(g))


def from_images(images) -> tuple:
    """Build a permutation from the 1-based image sequence (sigma(1), ..., sigma(d))."""
    p = (0,) + tuple(int(x) for x in images)
    if not is_perm(p):
        raise GroupError(f"not a bijection: {list(images)}")
    return p


def images(p: tuple) -> tuple:
    return p[1:]


def degree_of(p: tuple) -> int:
    return len(p) - 1


def is_perm(p) -> bool:
    return len(p) >= 1 and p[0] == 0 and sorted(p) == list(range(len(p)))


def is_identity(p: tuple) -> bool:
    return all(i == x for i, x in enumerate(p))


def perm_order(p: tuple) -> int:
    n = 1
    for c in cycles(p):
        n = n * len(c) // math.gcd(n, len(c))
    return n


def power(p: tuple, k: int) -> tuple:
    if k < 0:
        p, k = inverse(p), -k
    r = identity(len(p) - 1)
    base = p
    while k:
        if k & 1:
            r = compose(r, base)
        base = compose(base, base)
        k >>= 1
    return r


def cycles(p: tuple) -> list:
    """Nontrivial cycles, each starting at its smallest point."""
    seen = set()
    out = []
    for a in range(1, len(p)):
        if a in seen or p[a] == a:
            continue
        c = [a]
        seen.add(a)
        b = p[a]
        while b != a:
            c.append(b)
            seen.add(b)
            b = p[b]
        out.append(tuple(c))
    return out


def format_perm(p: tuple) -> str:
    cs = cycles(p)
    if not cs:
        return "id"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cs)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, d: int) -> tuple:
    """Parse cycle notation such as ``(1 2 3)(4 5)`` or ``id`` on d points.

    Cycles are composed right to left, so ``(1 2)(2 3)`` maps 3 to 1.
    """
    s = text.strip()
    if s in ("id", "()", ""):
        return identity(d)
    pos = 0
    cyc = []
    for m in _CYCLE_RE.finditer(s):
        if s[pos:m.start()].strip():
            raise GroupError(f"malformed cycle string: {text!r}")
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        try:
            pts = [int(x) for x in body]
        except ValueError:
            raise GroupError(f"malformed cycle string: {text!r}") from None
        if len(set(pts)) != len(pts) or any(x < 1 or x > d for x in pts):
            raise GroupError(f"bad cycle {m.group(0)} on {d} points")
        cyc.append(pts)
    if s[pos:].strip() or not cyc:
        raise GroupError(f"malformed cycle string: {text!r}")
    result = identity(d)
    for pts in cyc:
        c = list(range(d + 1))
        for i, x in enumerate(pts):
            c[x] = pts[(i + 1) % len(pts)]
        result = compose(result, tuple(c))
    return result


def max_point(text: str) -> int:
    nums = [int(x) for x in re.findall(r"\d+", text)]
    return max(nums) if nums else 0


def cycle_perm(points, d: int) -> tuple:
    c = list(range(d + 1))
    pts = list(points)
    for i, x in enumerate(pts):
        c[x] = pts[(i + 1) % len(pts)]
    return tuple(c)


# ---------------------------------------------------------------- groups

def _dimino_extend(elements: list, member: set, gens: list, x: tuple, limit: int):
    """Extend the group ``elements`` (closed, with generators ``gens``) by x.

    The result is built as a union of right cosets of the old group.
    """
    if x in member:
        return elements, member
    old = list(elements)
    all_gens = gens + [x]
    elements = list(elements)
    member = set(member)
    reps = [x]
    coset = [compose(h, x) for h in old]
    elements.extend(coset)
    member.update(coset)
    i = 0
    while i < len(reps):
        y = reps[i]
        i += 1
        for s in all_gens:
            z = compose(y, s)
            if z not in member:
                coset = [compose(h, z) for h in old]
                elements.extend(coset)
                member.update(coset)
                reps.append(z)
                if len(elements) > limit:
                    raise GroupError(f"group order exceeds the enumeration limit {limit}")
    return elements, member


def closure(d: int, gens, limit: int = MAX_ORDER):
    """Enumerate the group generated by ``gens``; returns (elements, used_gens)."""
    e = identity(d)
    elements, member = [e], {e}
    used = []
    for g in gens:
        if g not in member:
            elements, member = _dimino_extend(elements, member, used, g, limit)
            used.append(g)
    return elements, used


class PermGroup:
    """A permutation group with its full element set.

    ``generators`` is a generating tuple; ``elements`` a frozenset.
    """

    __slots__ = ("degree", "_gens", "elements", "name", "__dict__")

    def __init__(self, degree: int, generators=(), name: str | None = None,
                 limit: int = MAX_ORDER, elements=None):
        if degree < 1 or degree > MAX_DEGREE:
            raise GroupError(f"degree {degree} outside supported range 1..{MAX_DEGREE}")
        self.degree = degree
        self.name = name
        gens = []
        for g in generators:
            if len(g) != degree + 1 or not is_perm(g):
                raise GroupError(f"generator {g!r} is not a permutation of degree {degree}")
            gens.append(tuple(g))
        if elements is not None:
            self.elements = frozenset(elements)
            self._gens = tuple(gens) if gens else None
        else:
            elts, used = closure(degree, gens, limit)
            self.elements = frozenset(elts)
            self._gens = tuple(used)

    @classmethod
    def from_elements(cls, degree, elements, name=None):
        return cls(degree, (), name=name, elements=elements)

    @property
    def generators(self) -> tuple:
        if self._gens is None:
            self._gens = tuple(small_generating_set(self.degree, self.elements))
        return self._gens

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p):
        return p in self.elements

    def __iter__(self):
        return iter(self.sorted_elements)

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        label = self.name or "group"
        return f"<{label}: degree {self.degree}, order {self.order}>"

    @cached_property
    def sorted_elements(self) -> tuple:
        return tuple(sorted(self.elements))

    @cached_property
    def identity(self) -> tuple:
        return identity(self.degree)

    def issubgroup(self, other) -> bool:
        return self.degree == other.degree and all(x in other for x in self.elements)

    def describe(self) -> str:
        return self.name or "<" + ",".join(format_perm(g) for g in self.generators) + ">"


class YoungGroup:
    """The Young subgroup preserving each block of a partition of {1..d}.

    Membership is decided blockwise, so no enumeration is needed; ``elements``
    is only built on request.
    """

    def __init__(self, degree: int, blocks):
        self.degree = degree
        self.blocks = tuple(tuple(sorted(b)) for b in sorted(blocks, key=min))
        self._block_of = {}
        for i, b in enumerate(self.blocks):
            for x in b:
                self._block_of[x] = i
        self.name = "young(" + ",".join(str(len(b)) for b in self.blocks) + ")"

    @property
    def order(self) -> int:
        return math.prod(math.factorial(len(b)) for b in self.blocks)

    def __contains__(self, p) -> bool:
        bo = self._block_of
        return all(bo[p[a]] == bo[a] for a in range(1, self.degree + 1))

    @property
    def generators(self) -> tuple:
        gens = []
        for b in self.blocks:
            for x, y in zip(b, b[1:]):
                gens.append(cycle_perm((x, y), self.degree))
        return tuple(gens)

    @cached_property
    def elements(self) -> frozenset:
        return PermGroup(self.degree, self.generators).elements

    def as_group(self) -> PermGroup:
        return PermGroup(self.degree, self.generators, name=self.name)

    def is_full(self) -> bool:
        return len(self.blocks) == 1

    def __repr__(self):
        return f"<{self.name}: degree {self.degree}>"


def small_generating_set(d: int, elements) -> list:
    """Greedy generating set, preferring elements of large order."""
    elts = sorted(elements, key=lambda p: (-perm_order(p), p))
    e = identity(d)
    grp, member, gens = [e], {e}, []
    target = len(elements)
    for x in elts:
        if len(grp) == target:
            break
        if x not in member:
            grp, member = _dimino_extend(grp, member, gens, x, max(target, 1))
            gens.append(x)
    return gens


def subgroup(G, elements, name=None) -> PermGroup:
    return PermGroup.from_elements(G.degree, elements, name=name)


def generated(d: int, gens, name=None) -> PermGroup:
    return PermGroup(d, list(gens), name=name)


def join(*groups, name=None) -> PermGroup:
    d = groups[0].degree
    gens = [g for H in groups for g in H.generators]
    return PermGroup(d, gens, name=name)


def intersection(A, B, name=None) -> PermGroup:
    if A.degree != B.degree:
        raise GroupError("degree mismatch")
    small, big = (A, B) if A.order <= B.order else (B, A)
    return PermGroup.from_elements(A.degree, [x for x in small.elements if x in big], name=name)


def conjugate_group(H: PermGroup, g: tuple) -> PermGroup:
    gi = inverse(g)
    return PermGroup.from_elements(H.degree, [compose(compose(g, h), gi) for h in H.elements])


def normal_closure(G: PermGroup, S, name=None) -> PermGroup:
    """Smallest normal subgroup of G containing the permutations S."""
    d = G.degree
    gens = [s for s in S if not is_identity(s)]
    N = PermGroup(d, gens)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            for n in N.generators:
                c = conjugate(g, n)
                if c not in N:
                    N = PermGroup(d, list(N.generators) + [c])
                    changed = True
    N.name = name
    return N


def derived_subgroup(G: PermGroup) -> PermGroup:
    gens = G.generators
    comms = [commutator(a, b) for a in gens for b in gens]
    return normal_closure(G, comms)


def is_normal(N: PermGroup, G: PermGroup) -> bool:
    return all(conjugate(g, n) in N for g in G.generators for n in N.generators)


# ---------------------------------------------------------------- orbits

@dataclass(frozen=True)
class OrbitData:
    orbits: tuple
    transitive: bool
    free: bool
    simply_transitive: bool


def orbits(G) -> tuple:
    d = G.degree
    seen = set()
    out = []
    for a in range(1, d + 1):
        if a in seen:
            continue
        orb = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for g in G.generators:
                y = g[x]
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        seen |= orb
        out.append(tuple(sorted(orb)))
    return tuple(out)


def orbit_of(G, a: int) -> tuple:
    for o in orbits(G):
        if a in o:
            return o
    raise GroupError(f"point {a} out of range")


def orbit_data(G: PermGroup) -> OrbitData:
    orbs = orbits(G)
    transitive = len(orbs) == 1
    free = all(sum(1 for g in G.elements if g[a] == a) == 1 for a in range(1, G.degree + 1))
    return OrbitData(orbs, transitive, free, transitive and free)


def is_transitive(G) -> bool:
    return len(orbits(G)) == 1


def point_stabilizer(G: PermGroup, a: int) -> PermGroup:
    if not 1 <= a <= G.degree:
        raise GroupError(f"point {a} out of range 1..{G.degree}")
    name = f"{G.name}_{a}" if G.name else None
    return PermGroup.from_elements(G.degree, [g for g in G.elements if g[a] == a], name=name)


def young_closure(F) -> YoungGroup:
    return YoungGroup(F.degree, orbits(F))


def sym_group(d: int) -> PermGroup:
    gens = []
    if d >= 2:
        gens.append(cycle_perm(range(1, d + 1), d))
        gens.append(cycle_perm((1, 2), d))
    return PermGroup(d, gens, name=f"sym({d})")


def alt_group(d: int) -> PermGroup:
    gens = [cycle_perm((1, 2, k), d) for k in range(3, d + 1)]
    return PermGroup(d, gens, name=f"alt({d})")


def sign(p: tuple) -> int:
    return -1 if sum(len(c) - 1 for c in cycles(p)) % 2 else 1


# ---------------------------------------------------------------- functors

@dataclass(frozen=True)
class SubgroupFunctors:
    F_plus: PermGroup
    derived_stab_closure: PermGroup
    mixed_closure: PermGroup
    young: YoungGroup


def plus_subgroup(F: PermGroup) -> PermGroup:
    """The subgroup generated by all point stabilizers."""
    gens = []
    for a in range(1, F.degree + 1):
        gens.extend(point_stabilizer(F, a).generators)
    return PermGroup(F.degree, gens)


def stabilizer_derived_gens(Fp: PermGroup) -> list:
    gens = []
    for a in range(1, Fp.degree + 1):
        gens.extend(derived_subgroup(point_stabilizer(Fp, a)).generators)
    return gens


def subgroup_functors(F: PermGroup, Fp: PermGroup) -> SubgroupFunctors:
    if F.degree != Fp.degree or not F.issubgroup(Fp):
        raise GroupError("F is not contained in F'")
    d = F.degree
    F_plus = plus_subgroup(F)
    dgens = stabilizer_derived_gens(Fp)
    derived = PermGroup(d, dgens)
    stab_gens = [g for a in range(1, d + 1) for g in point_stabilizer(F, a).generators]
    mixed = PermGroup(d, dgens + stab_gens)
    return SubgroupFunctors(F_plus, derived, mixed, young_closure(F))


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    if H.degree != G.degree or not H.issubgroup(G):
        raise GroupError("H is not contained in G")
    hg = H.generators
    elts = [g for g in G.elements if all(conjugate(g, h) in H for h in hg)]
    return PermGroup.from_elements(G.degree, elts)


def product_set_equals(H: PermGroup, Fp: PermGroup, Hp: PermGroup) -> bool:
    """Decide H Fp == Hp through |H Fp| = |H| |Fp| / |H meet Fp|."""
    if not (H.degree == Fp.degree == Hp.degree):
        raise GroupError("degree mismatch")
    if not (H.issubgroup(Hp) and Fp.issubgroup(Hp)):
        return False
    inter = sum(1 for x in H.elements if x in Fp)
    return H.order * Fp.order == Hp.order * inter


def product_set_literal(H, Fp) -> frozenset:
    return frozenset(compose(h, f) for h in H.elements for f in Fp.elements)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n ** 0.5) + 1))


def prime_order_elements(G: PermGroup) -> list:
    return [g for g in G.elements if _is_prime(perm_order(g))]


def is_essential(D: PermGroup, Dp: PermGroup) -> bool:
    """True iff D contains every element of prime order of Dp."""
    if D.degree != Dp.degree or not D.issubgroup(Dp):
        raise GroupError("D is not contained in D'")
    return all(g in D for g in prime_order_elements(Dp))


def is_essential_literal(D: PermGroup, Dp: PermGroup) -> bool:
    """Every nontrivial cyclic subgroup of Dp meets D nontrivially."""
    for g in Dp.elements:
        if is_identity(g):
            continue
        x, hit = g, False
        while not is_identity(x):
            if x in D:
                hit = True
                break
            x = compose(x, g)
        if not hit:
            return False
    return True


# ---------------------------------------------------------------- subgroup search

def cyclic_subgroups(G: PermGroup) -> list:
    seen = {}
    for x in G.sorted_elements:
        if is_identity(x):
            continue
        key = frozenset(power(x, k) for k in range(perm_order(x)))
        if key not in seen:
            seen[key] = x
    return [(x, key) for key, x in seen.items()]


def enumerate_subgroups(G: PermGroup) -> list:
    """All subgroups reached from cyclic subgroups by adding one generator at a time.

    Starting from every cyclic subgroup and repeatedly joining one more cyclic
    generator reaches every subgroup, since each subgroup is generated by its
    cyclic subgroups.  Results are deduplicated by element set and sorted by
    (order, elements).
    """
    d = G.degree
    cyc = cyclic_subgroups(G)
    found = {frozenset([identity(d)]): PermGroup(d, [])}
    queue = []
    for x, key in cyc:
        if key not in found:
            H = PermGroup(d, [x])
            found[key] = H
            queue.append(H)
    i = 0
    while i < len(queue):
        H = queue[i]
        i += 1
        for x, key in cyc:
            if x in H:
                continue
            K = PermGroup(d, list(H.generators) + [x])
            if K.elements not in found:
                found[K.elements] = K
                queue.append(K)
    return sorted(found.values(), key=lambda K: (K.order, K.sorted_elements))


def index_two_subgroups(G: PermGroup) -> list:
    """Index-two subgroups, via hyperplanes of G modulo the subgroup of squares."""
    d = G.degree
    N = PermGroup(d, [compose(x, x) for x in G.elements])
    if N.order == G.order:
        return []
    label = {}
    reps = []
    for x in G.sorted_elements:
        if x in label:
            continue
        idx = len(reps)
        reps.append(x)
        for n in N.elements:
            label[compose(x, n)] = idx
    # the quotient is elementary abelian; find a basis and coordinates
    zero = label[identity(d)]
    coords = {zero: 0}
    basis = []
    for i, r in enumerate(reps):
        if i in coords:
            continue
        bit = 1 << len(basis)
        basis.append(r)
        for c, v in list(coords.items()):
            coords[label[compose(reps[c], r)]] = v ^ bit
    rank = len(basis)
    out = []
    for f in range(1, 1 << rank):
        keep = [x for x in G.elements if bin(coords[label[x]] & f).count("1") % 2 == 0]
        out.append(PermGroup.from_elements(d, keep))
    return sorted(out, key=lambda K: K.sorted_elements)


def _sym_elements_by_order(m: int) -> dict:
    by = {}
    for img in itertools.permutations(range(1, m + 1)):
        p = (0,) + img
        by.setdefault(perm_order(p), []).append(p)
    return by


def _class_reps(perms) -> list:
    seen = set()
    out = []
    for p in perms:
        t = tuple(sorted(len(c) for c in cycles(p)))
        if t not in seen:
            seen.add(t)
            out.append(p)
    return out


def _presentation_data(G: PermGroup, gens, keep: int = 60):
    """Spanning-tree words for G and the shortest relators read off the Cayley graph."""
    d = G.degree
    e = identity(d)
    word = {e: ()}
    queue = [e]
    rels = []
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for j, g in enumerate(gens):
            y = compose(x, g)
            if y not in word:
                word[y] = word[x] + (j,)
                queue.append(y)
            elif word[y] != word[x] + (j,):
                rels.append((word[x] + (j,), word[y]))
    rels.sort(key=lambda r: len(r[0]) + len(r[1]))
    return queue, word, rels[:keep]


def _eval_word(w, imgs, em):
    r = em
    for j in w:
        r = compose(r, imgs[j])
    return r


def has_nontrivial_action(G: PermGroup, m: int, gens=None, _data=None) -> bool:
    """Whether G has a nontrivial homomorphism to Sym(m).

    Generator images are assigned one at a time with orders dividing the
    generator orders (the first only up to conjugacy in Sym(m)); short relators
    prune partial assignments and a full pass over the Cayley graph confirms a
    complete one.
    """
    d = G.degree
    if gens is None:
        gens = small_generating_set(d, G.elements)
    if not gens:
        return False
    queue, word, rels = _data or _presentation_data(G, gens)
    by_level = [[] for _ in gens]
    for lhs, rhs in rels:
        by_level[max(lhs + rhs)].append((lhs, rhs))
    by_order = _sym_elements_by_order(m)
    cands = []
    for g in gens:
        o = perm_order(g)
        cands.append([p for k, ps in by_order.items() if o % k == 0 for p in ps])
    cands[0] = _class_reps(cands[0])
    em = identity(m)
    imgs = [em] * len(gens)

    def full_check():
        phi = {}
        for x in queue:
            phi[x] = _eval_word(word[x], imgs, em)
        for x in queue:
            fx = phi[x]
            for g, t in zip(gens, imgs):
                if phi[compose(x, g)] != compose(fx, t):
                    return False
        return True

    def assign(level):
        if level == len(gens):
            return any(not is_identity(t) for t in imgs) and full_check()
        for t in cands[level]:
            imgs[level] = t
            if all(_eval_word(l, imgs, em) == _eval_word(r, imgs, em) for l, r in by_level[level]):
                if assign(level + 1):
                    return True
        imgs[level] = em
        return False

    return assign(0)


def min_nontrivial_action_degree(G: PermGroup, k: int):
    """Smallest m in 2..k such that G acts nontrivially on m points, else None.

    This is also the smallest index of a proper subgroup when it is at most k.
    """
    if k < 2:
        raise GroupError("bound must be at least 2")
    if G.order == 1:
        return None
    gens = small_generating_set(G.degree, G.elements)
    data = _presentation_data(G, gens)
    for m in range(2, k + 1):
        if has_nontrivial_action(G, m, gens, data):
            return m
    return None


def min_proper_index_by_subgroups(G: PermGroup, k: int):
    """Same quantity as min_nontrivial_action_degree, from the subgroup list."""
    best = None
    for H in enumerate_subgroups(G):
        if H.order < G.order:
            idx = G.order // H.order
            if 2 <= idx <= k and (best is None or idx < best):
                best = idx
    return best


# ---------------------------------------------------------------- families

def cyclic_group(d: int) -> PermGroup:
    return PermGroup(d, [cycle_perm(range(1, d + 1), d)] if d > 1 else [], name=f"cyclic({d})")


def dihedral_group(d: int) -> PermGroup:
    """Order-2d dihedral group acting on the d vertices of a polygon."""
    if d < 3:
        raise GroupError("dihedral(d) needs d >= 3")
    r = cycle_perm(range(1, d + 1), d)
    s = [0] + [((2 - i) % d) or d for i in range(1, d + 1)]
    return PermGroup(d, [r, tuple(s)], name=f"dihedral({d})")


def young_group(parts) -> PermGroup:
    blocks, start = [], 1
    for n in parts:
        if n < 1:
            raise GroupError("partition parts must be positive")
        blocks.append(tuple(range(start, start + n)))
        start += n
    d = start - 1
    return YoungGroup(d, blocks).as_group()


def _affine_perm(K, a, b):
    # x -> a x + b on labels x + 1
    return (0,) + tuple(K.add[K.mul[a][x]][b] + 1 for x in range(K.q))


def agl_group(q: int, squares_only: bool = False) -> PermGroup:
    K = field(q)
    g = K.generator
    mult = K.mul[g][g] if squares_only else g
    gens = [_affine_perm(K, 1, b) for b in K.basis()]
    if q > 2:
        gens.append(_affine_perm(K, mult, 0))
    name = f"agl_sq(1,{q})" if squares_only else f"agl(1,{q})"
    return PermGroup(q, gens, name=name)


def _mobius_perm(K, a, b, c, dd):
    """x -> (a x + b)/(c x + d) on the projective line; infinity is q + 1."""
    q = K.q
    inf = q
    out = [0]
    for x in range(q + 1):
        if x == inf:
            num, den = a, c
        else:
            num = K.add[K.mul[a][x]][b]
            den = K.add[K.mul[c][x]][dd]
        y = inf if den == 0 else K.mul[num][K.inv[den]]
        out.append(y + 1)
    return tuple(out)


def pgl2_group(q: int, special: bool = False) -> PermGroup:
    K = field(q)
    g = K.generator
    one, zero = 1, 0
    gens = [_mobius_perm(K, one, b, zero, one) for b in K.basis()]
    if special:
        if q > 3:
            gens.append(_mobius_perm(K, K.mul[g][g], zero, zero, one))
        gens.append(_mobius_perm(K, zero, K.neg[one], one, zero))
        name = f"psl2({q})"
    else:
        gens.append(_mobius_perm(K, g, zero, zero, one))
        gens.append(_mobius_perm(K, zero, one, one, zero))
        name = f"pgl2({q})"
    return PermGroup(q + 1, gens, name=name)


def wreath_imprimitive(D: PermGroup, T: PermGroup) -> PermGroup:
    """D wr T on ell * k points; block j is {j, j + k, j + 2k, ...}."""
    ell, k = D.degree, T.degree
    n = ell * k

    def label(i, j):
        return j + (i - 1) * k

    gens = []
    # one copy of D per block, since T need not be transitive on blocks
    for j in range(1, k + 1):
        for delta in D.generators:
            p = list(range(n + 1))
            for i in range(1, ell + 1):
                p[label(i, j)] = label(delta[i], j)
            gens.append(tuple(p))
    for tau in T.generators:
        p = [0] * (n + 1)
        for i in range(1, ell + 1):
            for j in range(1, k + 1):
                p[label(i, j)] = label(i, tau[j])
        gens.append(tuple(p))
    return PermGroup(n, gens, name=f"wreath_imprimitive({D.describe()},{T.describe()})")


def ex_alt_group(d: int) -> PermGroup:
    """Simply transitive subgroups of Alt(d) for odd d and for d divisible by 4."""
    if d % 2 == 1 and d >= 3:
        G = cyclic_group(d)
    elif d % 4 == 0 and d >= 4:
        n2 = d // 2
        a = compose(cycle_perm(range(1, n2 + 1), d), cycle_perm(range(n2 + 1, d + 1), d))
        b = identity(d)
        for i in range(1, n2 + 1):
            b = compose(b, cycle_perm((i, n2 + i), d))
        G = PermGroup(d, [a, b])
    else:
        raise GroupError("ex_alt(d) needs d odd or d divisible by 4")
    G.name = f"ex_alt({d})"
    return G


def kk_prime_groups(p: int, m: int):
    """K = <alpha> and K' = <alpha, tau> on p*m points.

    alpha is the product of the m consecutive p-cycles and tau swaps the first
    two blocks pointwise.
    """
    if not _is_prime(p) or m < 2:
        raise GroupError("kk_prime(p, m) needs p prime and m >= 2")
    d = p * m
    alpha = identity(d)
    for i in range(1, m + 1):
        alpha = compose(alpha, cycle_perm(range((i - 1) * p + 1, i * p + 1), d))
    tau = identity(d)
    for i in range(1, p + 1):
        tau = compose(tau, cycle_perm((i, p + i), d))
    K = PermGroup(d, [alpha], name=f"kk({p},{m})")
    Kp = PermGroup(d, [alpha, tau], name=f"kk_prime({p},{m})")
    return K, Kp, alpha, tau


# ---------------------------------------------------------------- descriptors

def split_args(s: str) -> list:
    """Split on commas at parenthesis depth zero."""
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise GroupError(f"unbalanced parentheses in {s!r}")
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise GroupError(f"unbalanced parentheses in {s!r}")
    tail = "".join(cur).strip()
    if tail or out:
        out.append(tail)
    return out


_DESC_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*\((.*)\)\s*$", re.S)


def _int_arg(x: str) -> int:
    try:
        return int(x)
    except ValueError:
        raise GroupError(f"expected an integer, got {x!r}") from None


def construct_group(spec: str) -> PermGroup:
    """Build a group from a descriptor such as ``pgl2(5)`` or ``gens(4, (1 2 3 4), (1 3))``.

    A bare list of cycle-notation permutations separated by commas is read as
    generators on max-point many points.
    """
    if not isinstance(spec, str):
        raise GroupError("descriptor must be a string")
    s = spec.strip()
    m = _DESC_RE.match(s)
    if not m:
        if s.startswith("(") or s == "id":
            parts = split_args(s)
            d = max(max_point(x) for x in parts)
            if d < 1:
                raise GroupError(f"cannot infer degree from {spec!r}")
            return PermGroup(d, [parse_perm(x, d) for x in parts], name=s)
        raise GroupError(f"malformed group descriptor {spec!r}")
    name, body = m.group(1).lower(), m.group(2)
    args = split_args(body)
    try:
        if name in ("cyclic", "sym", "alt", "dihedral", "ex_alt"):
            if len(args) != 1:
                raise GroupError(f"{name}(d) takes one argument")
            d = _int_arg(args[0])
            if d < 1 or d > MAX_DEGREE:
                raise GroupError(f"degree {d} outside supported range")
            G = {"cyclic": cyclic_group, "sym": sym_group, "alt": alt_group,
                 "dihedral": dihedral_group, "ex_alt": ex_alt_group}[name](d)
        elif name == "young":
            G = young_group([_int_arg(a) for a in args])
            G.name = s
        elif name in ("psl2", "pgl2"):
            if len(args) != 1:
                raise GroupError(f"{name}(q) takes one argument")
            G = pgl2_group(_int_arg(args[0]), special=(name == "psl2"))
        elif name in ("agl", "agl_sq"):
            if len(args) != 2 or _int_arg(args[0]) != 1:
                raise GroupError(f"{name}(1,q) expects dimension 1 and a field order")
            G = agl_group(_int_arg(args[1]), squares_only=(name == "agl_sq"))
        elif name == "wreath_imprimitive":
            if len(args) != 2:
                raise GroupError("wreath_imprimitive(D, k) takes two arguments")
            D = construct_group(args[0])
            top = args[1]
            T = cyclic_group(_int_arg(top)) if top.isdigit() else construct_group(top)
            G = wreath_imprimitive(D, T)
        elif name in ("kk", "kk_prime"):
            if len(args) != 2:
                raise GroupError(f"{name}(p, m) takes two arguments")
            K, Kp, _, _ = kk_prime_groups(_int_arg(args[0]), _int_arg(args[1]))
            G = K if name == "kk" else Kp
        elif name == "gens":
            if not args:
                raise GroupError("gens(d, ...) needs a degree")
            d = _int_arg(args[0])
            G = PermGroup(d, [parse_perm(x, d) for x in args[1:]], name=s)
        else:
            raise GroupError(f"unknown group family {name!r}")
    except FieldError as exc:
        raise GroupError(str(exc)) from None
    return G
