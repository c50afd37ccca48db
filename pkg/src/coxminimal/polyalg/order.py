"""Monomial orders given by weight rows with a reverse-lexicographic tie-break."""

from __future__ import annotations


class MonomialOrder:
    """Compare monomials by ``(w_1.e, ..., w_k.e)`` then reverse lex.

    Every variable must have a positive entry in the first row where
    its weight is nonzero, which makes this a well-order.
    """

    def __init__(self, nvars: int, rows, name: str = "weighted"):
        self.nvars = nvars
        self.rows = tuple(tuple(int(w) for w in r) for r in rows)
        for r in self.rows:
            if len(r) != nvars:
                raise ValueError("weight row has wrong length")
        for i in range(nvars):
            first = next((r[i] for r in self.rows if r[i]), 0)
            if first <= 0:
                raise ValueError("weight rows do not define a well-order")
        self.name = name
        rows = self.rows
        rng = range(nvars - 1, -1, -1)
        if len(rows) == 1 and all(w == 1 for w in rows[0]):
            def key(e):
                return (sum(e),) + tuple(-e[i] for i in rng)
        else:
            def key(e):
                return tuple(sum(w * k for w, k in zip(r, e)) for r in rows) + tuple(-e[i] for i in rng)
        self.key = key

    @classmethod
    def grevlex(cls, nvars: int) -> "MonomialOrder":
        return cls(nvars, [[1] * nvars], "grevlex")

    @classmethod
    def weighted(cls, weights) -> "MonomialOrder":
        """Weighted degree order with grevlex tie-break; weights must be positive."""
        return cls(len(weights), [weights], "wdegrevlex")

    @classmethod
    def elimination(cls, nvars: int, block, grading=None) -> "MonomialOrder":
        """Eliminate the variables in ``block``: block degree first, then grading."""
        block = set(block)
        first = [1 if i in block else 0 for i in range(nvars)]
        grading = list(grading) if grading is not None else [1] * nvars
        return cls(nvars, [first, grading], "elimination")

    def spec(self) -> tuple:
        return (self.nvars, self.rows)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.spec() == other.spec()

    def __hash__(self):
        return hash(self.spec())

    def __repr__(self):
        return f"MonomialOrder({self.name}, rows={self.rows})"

    def positive_row(self):
        """A positive weight vector used for sugar degrees."""
        for r in self.rows:
            if all(w > 0 for w in r):
                return r
        acc = [0] * self.nvars
        for r in self.rows:
            if all(w >= 0 for w in r):
                acc = [a + w for a, w in zip(acc, r)]
        return tuple(a if a > 0 else 1 for a in acc)
