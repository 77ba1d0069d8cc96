"""Tree automorphisms with branch-wise eventually constant local permutations.

A portrait stores the image of the base vertex V0, a local permutation at each
internal vertex of a finite complete subtree containing the base edge, and one
permutation per leaf that is the local permutation at the leaf and everywhere
beyond it.  Portraits are kept in a canonical minimal form, so equality of
automorphisms is equality of portraits.
"""

from __future__ import annotations

import itertools
import os
import random
from functools import lru_cache

from . import perm as P
from .tree import (V0, V1, CompleteSubtree, TreeError, ball, check_vertex, format_vertex,
                   geodesic, make_subtree, neighbor, parse_vertex, prefix_closure, complete_hull)

DEFAULT_MAX_INTERNAL = 100_000


class PortraitError(ValueError):
    pass


def max_internal() -> int:
    raw = os.environ.get("ALMOSTLOCAL_MAX_INTERNAL")
    if raw is None:
        return DEFAULT_MAX_INTERNAL
    try:
        return int(raw)
    except ValueError:
        raise PortraitError(f"ALMOSTLOCAL_MAX_INTERNAL must be an integer, got {raw!r}") from None


def _check_budget(n: int):
    limit = max_internal()
    if n > limit:
        raise PortraitError(f"portrait needs {n} internal vertices, budget is {limit}")


def _inward(v: tuple) -> tuple:
    if not v:
        return V1
    return v[:-1]


class Portrait:
    """An automorphism in canonical form.  Build through ``from_data`` or helpers."""

    __slots__ = ("degree", "root_image", "internal", "tails", "_hash")

    def __init__(self, degree, root_image, internal, tails):
        self.degree = degree
        self.root_image = root_image
        self.internal = internal
        self.tails = tails
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_data(cls, degree: int, root_image, internal: dict, tails: dict) -> "Portrait":
        """Validate raw data and return the canonical portrait."""
        d = degree
        if d < 2 or d > P.MAX_DEGREE:
            raise PortraitError(f"degree {d} out of range")
        try:
            root = check_vertex(root_image, d)
            internal = {check_vertex(v, d): tuple(p) for v, p in internal.items()}
            tails = {check_vertex(v, d): tuple(p) for v, p in tails.items()}
        except TreeError as exc:
            raise PortraitError(str(exc)) from None
        for v, p in list(internal.items()) + list(tails.items()):
            if len(p) != d + 1 or not P.is_perm(p):
                raise PortraitError(f"permutation at {format_vertex(v)!r} is not a bijection of 1..{d}")
        if internal and V0 not in internal and V1 not in internal:
            raise PortraitError("internal vertices must include V0 or V1")
        T = make_subtree(internal.keys(), d)
        if internal and not _connected(set(internal), d):
            raise PortraitError("internal vertices do not form a connected subtree")
        if set(tails) != set(T.leaves):
            missing = sorted(set(T.leaves) - set(tails), key=_vkey)
            extra = sorted(set(tails) - set(T.leaves), key=_vkey)
            raise PortraitError(
                "tail assignments do not match the leaves: missing "
                f"{[format_vertex(x) for x in missing]}, extra {[format_vertex(x) for x in extra]}")
        _check_budget(len(internal))
        bad = _incompatible_edge(d, internal, tails)
        if bad is not None:
            u, v = bad
            raise PortraitError(
                f"local permutations at {format_vertex(u)!r} and {format_vertex(v)!r} "
                "disagree on the color of the edge joining them")
        return _canonical(d, root, dict(internal), dict(tails))

    # -- queries ------------------------------------------------------------

    @property
    def base(self) -> CompleteSubtree:
        return CompleteSubtree(frozenset(self.internal), frozenset(self.tails))

    def local(self, v: tuple) -> tuple:
        """The local permutation at v."""
        s = self.internal.get(v)
        if s is not None:
            return s
        return self.tails[self.branch(v)]

    def branch(self, v: tuple) -> tuple:
        """The leaf of the base whose half-tree contains the non-internal vertex v."""
        internal = self.internal
        if not internal:
            return V1 if v and v[0] == 1 else V0
        if V0 in internal:
            start = 1
        else:
            if not v or v[0] != 1:
                return V0
            start = 2
        for i in range(start, len(v) + 1):
            p = v[:i]
            if p not in internal:
                return p
        raise PortraitError(f"{v!r} is internal")  # pragma: no cover

    def prefix_locals(self, w: tuple) -> list:
        """Local permutations at w[:0], w[:1], ..., w."""
        internal, tails = self.internal, self.tails
        n = len(w)
        s = internal.get(V0)
        if s is None:
            s0 = tails[V0]
            if not w or w[0] != 1:
                return [s0] * (n + 1)
            s1 = internal.get(V1)
            if s1 is None:
                return [s0] + [tails[V1]] * n
            out = [s0, s1]
            i = 2
        else:
            out = [s]
            i = 1
        while i <= n:
            p = w[:i]
            s = internal.get(p)
            if s is None:
                out.extend([tails[p]] * (n + 1 - i))
                return out
            out.append(s)
            i += 1
        return out

    def apply(self, w: tuple) -> tuple:
        cur = self.root_image
        sig = self.prefix_locals(w)
        for i, a in enumerate(w):
            cur = neighbor(cur, sig[i][a])
        return cur

    __call__ = apply

    def is_identity(self) -> bool:
        return (not self.internal and self.root_image == V0
                and all(P.is_identity(p) for p in self.tails.values()))

    def num_internal(self) -> int:
        return len(self.internal)

    def depth(self) -> int:
        return max((len(v) for v in self.tails), default=0)

    def all_permutations(self):
        yield from self.internal.items()
        yield from self.tails.items()

    def type_preserving(self) -> bool:
        return len(self.root_image) % 2 == 0

    # -- algebra ------------------------------------------------------------

    def __mul__(self, other: "Portrait") -> "Portrait":
        return compose(self, other)

    def inverse(self) -> "Portrait":
        return invert(self)

    def __eq__(self, other):
        if not isinstance(other, Portrait):
            return NotImplemented
        return (self.degree == other.degree and self.root_image == other.root_image
                and self.internal == other.internal and self.tails == other.tails)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.degree, self.root_image,
                               frozenset(self.internal.items()), frozenset(self.tails.items())))
        return self._hash

    def __repr__(self):
        return (f"<Portrait d={self.degree} root={format_vertex(self.root_image)!r} "
                f"internal={len(self.internal)}>")

    def to_text(self) -> str:
        return format_portrait(self)


def _vkey(v):
    return (len(v), v)


def _incompatible_edge(d: int, internal: dict, tails: dict):
    """An edge whose endpoints map its color differently, or None.

    Both ends of an edge must send its color to the color of the image edge.
    Inside a leaf half-tree the permutation is constant, so only edges at
    internal vertices (and e0 itself) need checking.
    """
    if not internal:
        return None if tails[V0][1] == tails[V1][1] else (V0, V1)
    for v, s in internal.items():
        for a in range(1, d + 1):
            y = neighbor(v, a)
            t = internal.get(y)
            if t is None:
                t = tails[y]
            if t[a] != s[a]:
                return (v, y)
    return None


def _connected(internal: set, d: int) -> bool:
    start = next(iter(internal))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for a in range(1, d + 1):
            y = neighbor(x, a)
            if y in internal and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(internal)


def _canonical(d: int, root: tuple, internal: dict, tails: dict) -> Portrait:
    """Prune internal vertices whose outward neighbors are leaves with the same tail."""

    def prunable(v):
        s = internal[v]
        inward = _inward(v)
        for a in range(1, d + 1):
            y = neighbor(v, a)
            if y == inward:
                continue
            t = tails.get(y)
            if t is None or t != s:
                return False
        return True

    work = sorted(internal, key=_vkey, reverse=True)
    while work:
        nxt = []
        for v in work:
            if v not in internal or not prunable(v):
                continue
            s = internal.pop(v)
            inward = _inward(v)
            for a in range(1, d + 1):
                y = neighbor(v, a)
                if y != inward:
                    del tails[y]
            tails[v] = s
            if inward in internal:
                nxt.append(inward)
            elif not internal:
                # last internal vertex gone: the base is e0 again
                pass
        work = nxt
    if not internal:
        # keep exactly the two base leaves
        if set(tails) != {V0, V1}:  # pragma: no cover
            raise PortraitError("canonical form lost the base edge")
    return Portrait(d, root, internal, tails)


# ---------------------------------------------------------------- builders

def identity(d: int) -> Portrait:
    e = P.identity(d)
    return Portrait(d, V0, {}, {V0: e, V1: e})


def constant_aut(sigma: tuple, root_image: tuple = V0) -> Portrait:
    """The automorphism with every local permutation sigma and V0 mapped to root_image."""
    d = len(sigma) - 1
    root = check_vertex(root_image, d)
    return Portrait(d, root, {}, {V0: tuple(sigma), V1: tuple(sigma)})


def _refined_root(g: Portrait) -> tuple:
    """Internal map and tails of g with V0 forced internal."""
    internal = dict(g.internal)
    tails = dict(g.tails)
    d = g.degree
    if V0 not in internal:
        if not internal:
            internal[V0] = tails.pop(V0)
            t1 = tails.pop(V1)
            tails[V1] = t1
            for a in range(2, d + 1):
                tails[(a,)] = internal[V0]
        else:
            # V1 internal, V0 a leaf
            s = tails.pop(V0)
            internal[V0] = s
            for a in range(2, d + 1):
                tails[(a,)] = s
    return internal, tails


def from_general(d: int, base_internal: set, perms: dict, anchor: tuple, anchor_image: tuple) -> Portrait:
    """Canonical portrait of an automorphism given on an arbitrary complete subtree.

    ``base_internal`` is a nonempty connected vertex set, ``perms`` assigns a
    local permutation to each internal vertex and each leaf (the leaf value
    holds on the whole half-tree beyond the leaf), and the automorphism maps
    ``anchor`` to ``anchor_image``.
    """
    if not base_internal:
        raise PortraitError("general base needs at least one internal vertex")
    base_internal = set(base_internal)
    center = min(base_internal, key=_vkey)
    base_verts = set(perms)

    def proj(w):
        if w in base_verts:
            return w
        for x in geodesic(w, center):
            if x in base_verts:
                return x
        raise PortraitError("projection failed")  # pragma: no cover

    hull = complete_hull(base_verts | {V0, V1}, base_internal, d)
    _check_budget(len(hull.internal))
    internal = {v: perms[proj(v)] for v in hull.internal}
    tails = {v: perms[proj(v)] for v in hull.leaves}
    # walk from the anchor to V0 to find the root image
    cur = anchor_image
    path = geodesic(anchor, V0)
    for x, y in zip(path, path[1:]):
        a = _edge_color(x, y)
        cur = neighbor(cur, perms[proj(x)][a])
    return _canonical(d, cur, internal, tails)


def _edge_color(x: tuple, y: tuple) -> int:
    if len(y) > len(x):
        return y[-1]
    return x[-1]


def invert(g: Portrait) -> Portrait:
    d = g.degree
    internal, tails = _refined_root(g)
    images = _images_over(g, set(internal) | set(tails))
    perms = {}
    for v, s in internal.items():
        perms[images[v]] = P.inverse(s)
    for v, s in tails.items():
        perms[images[v]] = P.inverse(s)
    return from_general(d, {images[v] for v in internal}, perms, g.root_image, V0)


def _images_over(g: Portrait, verts: set) -> dict:
    """g(v) for every v in a connected vertex set containing V0."""
    out = {V0: g.root_image}
    stack = [V0]
    while stack:
        x = stack.pop()
        gx = out[x]
        s = g.local(x)
        for a in range(1, g.degree + 1):
            y = neighbor(x, a)
            if y in verts and y not in out:
                out[y] = neighbor(gx, s[a])
                stack.append(y)
    return out


def compose(g: Portrait, h: Portrait) -> Portrait:
    """g after h, so compose(g, h)(v) = g(h(v))."""
    if g.degree != h.degree:
        raise PortraitError("degree mismatch")
    d = g.degree
    hinv = invert(h)
    S = set(h.internal) | set(h.tails) | {V0, V1}
    force = set(h.internal)
    for x in g.internal:
        y = hinv.apply(x)
        S.add(y)
        force.add(y)
    for x in g.tails:
        S.add(hinv.apply(x))
    R = complete_hull(S, force, d)
    _check_budget(len(R.internal))
    verts = set(R.internal) | set(R.leaves)
    himg = _images_over(h, verts)
    internal = {w: P.compose(g.local(himg[w]), h.local(w)) for w in R.internal}
    tails = {w: P.compose(g.local(himg[w]), h.local(w)) for w in R.leaves}
    root = g.apply(h.root_image)
    return _canonical(d, root, internal, tails)


def product(elements, d: int) -> Portrait:
    out = identity(d)
    for x in elements:
        out = compose(out, x)
    return out


def conjugate(g: Portrait, u: Portrait) -> Portrait:
    """g u g^-1."""
    return compose(compose(g, u), invert(g))


def commutator(g: Portrait, h: Portrait) -> Portrait:
    """[g, h] = g h g^-1 h^-1."""
    return compose(compose(g, h), compose(invert(g), invert(h)))


# ---------------------------------------------------------------- text format

def format_portrait(g: Portrait) -> str:
    lines = [f"degree: {g.degree}", f'root_image: "{format_vertex(g.root_image)}"']
    for v in sorted(g.internal, key=_vkey):
        lines.append(f'internal "{format_vertex(v)}": {P.format_perm(g.internal[v])}')
    for v in sorted(g.tails, key=_vkey):
        lines.append(f'tail "{format_vertex(v)}": {P.format_perm(g.tails[v])}')
    return "\n".join(lines) + "\n"


def _strip_comment(line: str) -> str:
    inside = False
    for i, ch in enumerate(line):
        if ch == '"':
            inside = not inside
        elif ch == "#" and not inside:
            return line[:i]
    return line


def parse_portrait(text: str) -> Portrait:
    degree = None
    root = None
    internal, tails = {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        try:
            key, _, rest = line.partition(":") if not line.startswith(("internal", "tail")) \
                else _split_entry(line)
            key = key.strip()
            rest = rest.strip()
            if key == "degree":
                degree = int(rest)
            elif key == "root_image":
                root = parse_vertex(rest, degree)
            elif key.startswith("internal ") or key.startswith("tail "):
                kind, _, vlit = key.partition(" ")
                if degree is None:
                    raise PortraitError("degree must come first")
                v = parse_vertex(vlit, degree)
                p = P.parse_perm(rest, degree)
                target = internal if kind == "internal" else tails
                if v in target:
                    raise PortraitError(f"duplicate {kind} entry")
                target[v] = p
            else:
                raise PortraitError(f"unknown key {key!r}")
        except (ValueError, P.GroupError, TreeError) as exc:
            raise PortraitError(f"line {lineno}: {exc}") from None
    if degree is None or root is None:
        raise PortraitError("portrait text needs degree and root_image")
    return Portrait.from_data(degree, root, internal, tails)


def _split_entry(line: str):
    # key is `internal "..."` or `tail "..."`; the colon follows the closing quote
    q1 = line.index('"')
    q2 = line.index('"', q1 + 1)
    rest = line[q2 + 1:].lstrip()
    if not rest.startswith(":"):
        raise PortraitError(f"missing colon in {line!r}")
    return line[:q2 + 1], ":", rest[1:]


# ---------------------------------------------------------------- sampling and checks

def random_portrait(d: int, rng: random.Random, radius: int = 2, perms=None,
                    root_radius: int = 2, density: float = 0.5) -> Portrait:
    """A random automorphism with internal vertices within ``radius`` of V0.

    ``perms`` optionally restricts the local permutations (default Sym(d)).
    Each vertex draws a permutation agreeing with its parent on the color of
    the connecting edge.
    """
    perms, by_pair = _perm_tables(d, None if perms is None else tuple(sorted(perms)))
    internal = {V0}
    frontier = [V0]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for a in range(1, d + 1):
                y = neighbor(x, a)
                if y not in internal and len(y) > len(x) and rng.random() < density:
                    internal.add(y)
                    nxt.append(y)
        frontier = nxt
    T = make_subtree(internal, d)
    sigma = {V0: rng.choice(perms)}
    order = sorted(set(T.internal) | set(T.leaves), key=_vkey)
    for v in order:
        if v == V0:
            continue
        parent, a = (V0, 1) if v == V1 else (v[:-1], v[-1])
        choices = by_pair.get((a, sigma[parent][a]))
        if not choices:
            raise PortraitError("allowed permutations cannot extend along an edge")
        sigma[v] = rng.choice(choices)
    idata = {v: sigma[v] for v in T.internal}
    tdata = {v: sigma[v] for v in T.leaves}
    root = rng.choice(ball(V0, root_radius, d))
    return Portrait.from_data(d, root, idata, tdata)


@lru_cache(maxsize=64)
def _perm_tables(d: int, perms):
    if perms is None:
        perms = tuple((0,) + t for t in itertools.permutations(range(1, d + 1)))
    by_pair = {}
    for p in perms:
        for a in range(1, d + 1):
            by_pair.setdefault((a, p[a]), []).append(p)
    return list(perms), by_pair


def _step_local(g: Portrait, x: tuple, sx: tuple, y: tuple) -> tuple:
    """Local permutation of g at the neighbor y of x, given the one at x."""
    s = g.internal.get(y)
    if s is not None:
        return s
    if len(y) > len(x):
        if x in g.internal:
            return g.tails[y]
        if y == V1:
            return g.tails[V1]
        return sx
    return g.local(y)


def check_cocycle_on_ball(g: Portrait, h: Portrait, gh: Portrait, radius: int) -> bool:
    """Check local(gh, v) = local(g, h v) local(h, v) and gh(v) = g(h(v)) on a ball.

    The ball is walked breadth first; images and local permutations are carried
    along the walk instead of being recomputed from V0.
    """
    d = g.degree
    colors = range(1, d + 1)
    ih, th = h.internal, h.tails
    ik, tk = gh.internal, gh.tails
    ig, tg = g.internal, g.tails
    hv = h.root_image
    state = [(V0, hv, h.local(V0), gh.local(V0), g.local(hv), g.apply(hv), gh.root_image)]
    for depth in range(radius + 1):
        nxt = []
        push = nxt.append
        last = depth == radius
        for v, hv, sh, sgh, sg, g_hv, ghv in state:
            if g_hv != ghv:
                return False
            for a in colors:
                if sgh[a] != sg[sh[a]]:
                    return False
            if last:
                continue
            back = v[-1] if v else 0
            v_in_h = v in ih
            v_in_k = v in ik
            hv_in_g = hv in ig
            for a in colors:
                if a == back:
                    continue
                w = v + (a,)
                c = sh[a]
                if hv and hv[-1] == c:
                    hw = hv[:-1]
                    s3 = ig.get(hw) or g.local(hw)
                else:
                    hw = hv + (c,)
                    s3 = ig.get(hw)
                    if s3 is None:
                        s3 = tg[hw] if hv_in_g else (tg[V1] if hw == V1 else sg)
                s1 = ih.get(w)
                if s1 is None:
                    s1 = th[w] if v_in_h else (th[V1] if w == V1 else sh)
                s2 = ik.get(w)
                if s2 is None:
                    s2 = tk[w] if v_in_k else (tk[V1] if w == V1 else sgh)
                c2 = sg[c]
                gw = g_hv[:-1] if g_hv and g_hv[-1] == c2 else g_hv + (c2,)
                c3 = sgh[a]
                kw = ghv[:-1] if ghv and ghv[-1] == c3 else ghv + (c3,)
                push((w, hw, s1, s2, s3, gw, kw))
        state = nxt
    return True


def check_inverse_on_ball(g: Portrait, ginv: Portrait, radius: int) -> bool:
    """Check local(g^-1, v) = local(g, g^-1 v)^-1 and g(g^-1 v) = v on a ball."""
    d = g.degree
    colors = range(1, d + 1)
    ii, ti = ginv.internal, ginv.tails
    ig, tg = g.internal, g.tails
    x = ginv.root_image
    state = [(V0, x, ginv.local(V0), g.local(x), g.apply(x))]
    for depth in range(radius + 1):
        nxt = []
        push = nxt.append
        last = depth == radius
        for v, gv, si, sg, back_img in state:
            if back_img != v:
                return False
            for a in colors:
                if sg[si[a]] != a:
                    return False
            if last:
                continue
            back = v[-1] if v else 0
            v_in_i = v in ii
            gv_in_g = gv in ig
            for a in colors:
                if a == back:
                    continue
                w = v + (a,)
                c = si[a]
                if gv and gv[-1] == c:
                    gw = gv[:-1]
                    s2 = ig.get(gw) or g.local(gw)
                else:
                    gw = gv + (c,)
                    s2 = ig.get(gw)
                    if s2 is None:
                        s2 = tg[gw] if gv_in_g else (tg[V1] if gw == V1 else sg)
                s1 = ii.get(w)
                if s1 is None:
                    s1 = ti[w] if v_in_i else (ti[V1] if w == V1 else si)
                c2 = sg[c]
                bw = back_img[:-1] if back_img and back_img[-1] == c2 else back_img + (c2,)
                push((w, gw, s1, s2, bw))
        state = nxt
    return True


def agree_on_ball(g: Portrait, h: Portrait, radius: int) -> bool:
    """Compare two automorphisms vertex by vertex on a ball around V0."""
    for v in ball(V0, radius, g.degree):
        if g.apply(v) != h.apply(v) or g.local(v) != h.local(v):
            return False
    return True


__all__ = [
    "Portrait", "PortraitError", "identity", "constant_aut", "compose", "invert", "product",
    "conjugate", "commutator", "from_general", "format_portrait", "parse_portrait",
    "random_portrait", "check_cocycle_on_ball", "check_inverse_on_ball", "agree_on_ball",
    "prefix_closure",
]
