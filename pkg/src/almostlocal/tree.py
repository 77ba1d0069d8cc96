"""The d-regular tree with its legal edge coloring, addressed by reduced words.

A vertex is a tuple of colors with no two consecutive letters equal.  The
empty word is the base vertex ``V0`` and ``(1,)`` is ``V1``; the edge between
v and v.a has color a, so the base edge e0 = {V0, V1} has color 1.
"""

from __future__ import annotations

from dataclasses import dataclass

V0: tuple = ()
V1: tuple = (1,)
INTERNAL = "internal"


class TreeError(ValueError):
    pass


def is_reduced(v, d: int | None = None) -> bool:
    for i, a in enumerate(v):
        if not isinstance(a, int) or a < 1 or (d is not None and a > d):
            return False
        if i and v[i - 1] == a:
            return False
    return True


def check_vertex(v, d: int) -> tuple:
    v = tuple(v)
    if not is_reduced(v, d):
        raise TreeError(f"not a reduced word over 1..{d}: {v!r}")
    return v


def neighbor(v: tuple, a: int) -> tuple:
    if v and v[-1] == a:
        return v[:-1]
    return v + (a,)


def neighbors(v: tuple, d: int) -> list:
    return [neighbor(v, a) for a in range(1, d + 1)]


def toward_e0_color(v: tuple) -> int:
    """Color of the edge at v pointing toward the base edge (1 on e0 itself)."""
    return v[-1] if v else 1


def parity(v: tuple) -> int:
    return len(v) % 2


def common_prefix_len(u: tuple, v: tuple) -> int:
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def distance(u: tuple, v: tuple) -> int:
    k = common_prefix_len(u, v)
    return len(u) + len(v) - 2 * k


def geodesic(u: tuple, v: tuple) -> list:
    """Vertices from u to v inclusive."""
    k = common_prefix_len(u, v)
    up = [u[:i] for i in range(len(u), k - 1, -1)]
    down = [v[:i] for i in range(k + 1, len(v) + 1)]
    return up + down


def ball(center: tuple, radius: int, d: int) -> list:
    """All vertices within ``radius`` of ``center``, in breadth-first order."""
    out = [center]
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for a in range(1, d + 1):
                y = neighbor(x, a)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        out.extend(nxt)
        frontier = nxt
    return out


def sphere(center: tuple, radius: int, d: int) -> list:
    return [x for x in ball(center, radius, d) if distance(x, center) == radius]


def format_vertex(v: tuple) -> str:
    return " ".join(str(a) for a in v)


def parse_vertex(text: str, d: int | None = None) -> tuple:
    s = text.strip()
    if len(s) >= 2 and s[0] == s[-1] == '"':
        s = s[1:-1]
    try:
        v = tuple(int(x) for x in s.split())
    except ValueError:
        raise TreeError(f"bad vertex literal {text!r}") from None
    if not is_reduced(v, d):
        raise TreeError(f"not a reduced word: {text!r}")
    return v


def in_branch(v: tuple, x: tuple) -> bool:
    """Whether v lies in the half-tree L(x) of vertices whose route to e0 passes x.

    L(V0) is every word not starting with 1, L(V1) every word starting with 1,
    and otherwise L(x) is the set of words with prefix x.
    """
    if not x:
        return not v or v[0] != 1
    if x == V1:
        return bool(v) and v[0] == 1
    return v[:len(x)] == x


def prefix_closure(vertices) -> set:
    out = set()
    for v in vertices:
        for i in range(len(v), -1, -1):
            p = v[:i]
            if p in out:
                break
            out.add(p)
    return out


@dataclass(frozen=True)
class CompleteSubtree:
    """A finite complete subtree; ``internal`` empty encodes the single edge e0."""

    internal: frozenset
    leaves: frozenset

    def vertices(self) -> frozenset:
        return self.internal | self.leaves

    def depth(self) -> int:
        return max((len(v) for v in self.vertices()), default=0)

    def contains_edge(self, u: tuple, v: tuple) -> bool:
        verts = self.vertices()
        return u in verts and v in verts and (u in self.internal or v in self.internal
                                               or {u, v} == {V0, V1})


def _leaves_of(internal: set, d: int) -> set:
    if not internal:
        return {V0, V1}
    return {y for x in internal for y in neighbors(x, d) if y not in internal}


def make_subtree(internal, d: int) -> CompleteSubtree:
    internal = frozenset(internal)
    return CompleteSubtree(internal, frozenset(_leaves_of(set(internal), d)))


def complete_hull(S, must_be_internal, d: int) -> CompleteSubtree:
    """Minimal complete subtree containing S with the given vertices internal.

    S must contain V0 and V1.  The convex hull of a set containing V0 is its
    prefix closure; its vertices of degree at least two become internal.
    """
    S = set(S)
    if V0 not in S or V1 not in S:
        raise TreeError("S must contain both endpoints of the base edge")
    pts = set(S)
    for v in must_be_internal:
        pts.update(neighbors(v, d))
    H = prefix_closure(pts)
    internal = set()
    for v in H:
        deg = sum(1 for a in range(1, d + 1) if neighbor(v, a) in H)
        if deg >= 2:
            internal.add(v)
    return make_subtree(internal, d)


def is_complete(T: CompleteSubtree, d: int) -> bool:
    if not T.internal:
        return T.leaves == frozenset({V0, V1})
    if T.leaves != frozenset(_leaves_of(set(T.internal), d)):
        return False
    # connectivity of the internal set
    start = next(iter(T.internal))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in neighbors(x, d):
            if y in T.internal and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(T.internal)


def branch_of(T: CompleteSubtree, v: tuple):
    """The leaf of T whose half-tree contains v, or INTERNAL.

    T must contain the base edge, as every subtree built here does.
    """
    if v in T.internal:
        return INTERNAL
    if not T.internal:
        return V1 if v and v[0] == 1 else V0
    if V0 in T.internal:
        start = 1
    elif V1 in T.internal:
        if not v or v[0] != 1:
            return V0
        start = 2
    else:
        raise TreeError("subtree does not contain the base edge")
    for i in range(start, len(v) + 1):
        if v[:i] not in T.internal:
            return v[:i]
    raise TreeError("vertex not covered by subtree")  # pragma: no cover
