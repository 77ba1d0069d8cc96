"""Small finite fields from fixed irreducible polynomials.

An element of GF(p^k) is stored as the integer whose base-p digits are the
coefficients of a polynomial of degree < k, so 0 and 1 are the usual zero and
one and the prime field sits inside as 0..p-1.
"""

from __future__ import annotations

from functools import lru_cache

# coefficient lists, lowest degree first, monic of degree k
_IRREDUCIBLE = {
    2: (2, [0, 1]),
    3: (3, [0, 1]),
    4: (2, [1, 1, 1]),
    5: (5, [0, 1]),
    7: (7, [0, 1]),
    8: (2, [1, 1, 0, 1]),
    9: (3, [1, 0, 1]),
    11: (11, [0, 1]),
    13: (13, [0, 1]),
    16: (2, [1, 1, 0, 0, 1]),
}

SUPPORTED_ORDERS = tuple(sorted(_IRREDUCIBLE))


class FieldError(ValueError):
    pass


class FiniteField:
    """Addition and multiplication tables for GF(q)."""

    def __init__(self, q: int):
        if q not in _IRREDUCIBLE:
            raise FieldError(f"field order {q} not supported (choose from {SUPPORTED_ORDERS})")
        p, poly = _IRREDUCIBLE[q]
        self.q = q
        self.p = p
        self.k = len(poly) - 1
        self.add = [[self._add(a, b) for b in range(q)] for a in range(q)]
        if self.k == 1:
            self.mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            self.mul = [[self._mul(a, b, poly) for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [0] + [next(b for b in range(1, q) if self.mul[a][b] == 1) for a in range(1, q)]
        self.generator = self._find_generator()
        self.squares = frozenset(self.mul[a][a] for a in range(1, q))

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds):
        a = 0
        for c in reversed(ds):
            a = a * self.p + c
        return a

    def _add(self, a, b):
        return self._undigits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _mul(self, a, b, poly):
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        # reduce modulo the monic polynomial
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * poly[i]) % p
        return self._undigits(prod[:k])

    def _find_generator(self):
        for g in range(2 if self.q > 2 else 1, self.q):
            x, order = g, 1
            while x != 1:
                x = self.mul[x][g]
                order += 1
            if order == self.q - 1:
                return g
        raise FieldError("no multiplicative generator")  # pragma: no cover

    def basis(self):
        """Additive basis 1, p, p^2, ... as field elements."""
        return [self.p ** j for j in range(self.k)]


@lru_cache(maxsize=None)
def field(q: int) -> FiniteField:
    return FiniteField(q)
