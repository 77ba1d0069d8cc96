"""Exact orders and Haar measures for iterated imprimitive wreath products.

W_0(D) is trivial and W_{n+1}(D) = D wr W_n(D), with D acting inside blocks
of size ell.  L(D,D') is the increasing union of the groups L_n in which D'
appears at the n deepest levels; its Haar measure is normalized so that the
profinite group L_0 has measure one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import perm as P


class WreathError(ValueError):
    pass


@dataclass(frozen=True)
class WreathContext:
    ell: int
    D: P.PermGroup
    Dp: P.PermGroup

    def __post_init__(self):
        if self.ell < 2:
            raise WreathError("block size must be at least 2")
        if self.D.degree != self.ell or self.Dp.degree != self.ell:
            raise WreathError(f"D and D' must act on {self.ell} points")
        if not self.D.issubgroup(self.Dp):
            raise WreathError("D is not a subgroup of D'")

    @property
    def index(self) -> int:
        return self.Dp.order // self.D.order


@dataclass(frozen=True)
class MeasureReport:
    n: int
    mu_U: Fraction
    mu_K: Fraction
    diverges: bool


def _levels(ell: int, n: int) -> int:
    """1 + ell + ... + ell^(n-1)."""
    return (ell ** n - 1) // (ell - 1)


def iterated_order(D, ell: int, n: int) -> int:
    """|W_n(D)| = |D|^((ell^n - 1)/(ell - 1)); D may be a group or its order."""
    if n < 0:
        raise WreathError("level must be nonnegative")
    order = D if isinstance(D, int) else D.order
    return order ** _levels(ell, n)


def literal_iterated_group(D: P.PermGroup, n: int) -> P.PermGroup:
    """W_n(D) as a permutation group on ell^n points, built by repeated wreathing."""
    W = P.PermGroup(1, [])
    for _ in range(n):
        W = P.wreath_imprimitive(D, W)
    return W


def literal_kernel_order(Dp: P.PermGroup, n: int) -> int:
    """Order of the kernel of W_{n+1}(D') -> W_n(D'), counted element by element."""
    W = literal_iterated_group(Dp, n + 1)
    k = Dp.degree ** n
    # block j is {j, j + k, j + 2k, ...}; the kernel fixes every block setwise
    return sum(1 for g in W.elements
               if all((g[j] - 1) % k == j - 1 for j in range(1, k + 1)))


def diverges(ctx: WreathContext) -> bool:
    """mu(K_n) grows without bound, i.e. |D'|^(ell-1) > |D|^ell."""
    return ctx.Dp.order ** (ctx.ell - 1) > ctx.D.order ** ctx.ell


def haar_measures(ctx: WreathContext, n: int) -> MeasureReport:
    if n < 0:
        raise WreathError("level must be nonnegative")
    mu_U = Fraction(1, iterated_order(ctx.D, ctx.ell, n + 1))
    mu_K = ctx.Dp.order ** (ctx.ell ** n) * mu_U
    return MeasureReport(n, mu_U, mu_K, diverges(ctx))


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def lattice_obstruction(ctx: WreathContext) -> bool:
    """D essential in D' and |D'| < (D':D)^ell; then no power of L(D,D') has lattices."""
    return P.is_essential(ctx.D, ctx.Dp) and ctx.Dp.order < ctx.index ** ctx.ell


def format_measure_report(ctx: WreathContext, r: MeasureReport) -> str:
    yn = {True: "yes", False: "no"}
    return "\n".join([
        f"level: {r.n}",
        f"mu_U: {format_fraction(r.mu_U)}",
        f"mu_K: {format_fraction(r.mu_K)}",
        f"diverges: {yn[r.diverges]}",
        f"obstruction: {yn[lattice_obstruction(ctx)]}",
    ])


def embed_subgroup(D: P.PermGroup, Dp: P.PermGroup) -> P.PermGroup:
    """Reinterpret an abstract cyclic D as the subgroup of the same order in cyclic D'.

    Used when D is given on fewer points than D'.  Only the cyclic case is
    unambiguous, so anything else is rejected.
    """
    if D.degree == Dp.degree:
        return D
    gen = next((g for g in Dp.elements if P.perm_order(g) == Dp.order), None)
    if gen is None:
        raise WreathError("D and D' act on different point sets and D' is not cyclic")
    if not any(P.perm_order(g) == D.order for g in D.elements):
        raise WreathError("D and D' act on different point sets and D is not cyclic")
    if Dp.order % D.order:
        raise WreathError(f"|D| = {D.order} does not divide |D'| = {Dp.order}")
    sub = P.power(gen, Dp.order // D.order)
    return P.PermGroup(Dp.degree, [sub], name=f"{D.describe()} in {Dp.describe()}")


# ---------------------------------------------------------------- obstruction search

@dataclass(frozen=True)
class ObstructionReport:
    found: bool
    Dp: P.PermGroup | None
    D: P.PermGroup
    candidates: int


def essential_overgroups(D: P.PermGroup, Dmax: P.PermGroup) -> list:
    """All subgroups D' with D <= D' <= Dmax in which D is essential.

    Every element of such a D' has all its prime-order powers in D, and every
    intermediate group of an essential extension is again essential, so
    adding one admissible element at a time reaches all of them.
    """
    d = D.degree
    allowed = []
    for x in Dmax.sorted_elements:
        if x in D:
            continue
        k = P.perm_order(x)
        if all(P.power(x, k // p) in D for p in range(2, k + 1) if k % p == 0 and P._is_prime(p)):
            allowed.append(x)
    start = D.elements
    seen = {start: D}
    queue = [D]
    while queue:
        G = queue.pop()
        for x in allowed:
            if x in G:
                continue
            H = P.PermGroup(d, list(G.generators) + [x])
            if H.elements in seen:
                continue
            if all(y in D for y in P.prime_order_elements(H)):
                seen[H.elements] = H
                queue.append(H)
    return sorted(seen.values(), key=lambda G: (G.order, G.sorted_elements))


def obstruction_search(D: P.PermGroup, Dmax: P.PermGroup, ell: int) -> ObstructionReport:
    """Look for D <= D' <= Dmax with D essential in D' and |D'| < (D':D)^ell."""
    cands = essential_overgroups(D, Dmax)
    hit = None
    for G in cands:
        if G.order < (G.order // D.order) ** ell:
            hit = G
    return ObstructionReport(hit is not None, hit, D, len(cands))


def obstruction_for_pair(pair, a: int = 1) -> ObstructionReport:
    """The stabilizer version: D = F_a inside F'_a, with ell = d - 1 branches."""
    if not P.is_transitive(pair.F):
        raise WreathError("obstruction search needs a transitive F")
    if not 1 <= a <= pair.d:
        raise WreathError(f"point {a} outside 1..{pair.d}")
    Fa = P.point_stabilizer(pair.F, a)
    Fpa = P.point_stabilizer(pair.Fp, a)
    return obstruction_search(Fa, Fpa, pair.d - 1)
