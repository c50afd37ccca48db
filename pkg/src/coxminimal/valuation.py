"""Monomial valuations attached to junior elements.

For a junior g of order r with eigen-coordinates u_1..u_n (g u_k = zeta_r^{a_k} u_k),
nu_g(f) is the least value of sum(alpha_k a_k) over the monomials u^alpha of f
written in those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .matgroup import EigenData, GroupAnalysis
from .polyalg import GradedPoly


class ValuationError(ValueError):
    pass


@dataclass
class ValuationData:
    index: int  # position in the junior list, 0-based
    element: int  # element index in the group
    eigen: EigenData
    order: int
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def exponents(self) -> tuple:
        return self.eigen.exponents

    def to_eigen(self, f: GradedPoly) -> GradedPoly:
        """f(x) rewritten as a polynomial in the eigen-coordinates (same variable slots)."""
        key = (f.ring, frozenset(f.terms.items()))
        hit = self._cache.get(key)
        if hit is None:
            # x = C^{-1} u, so x_j -> sum_k Cinv[j][k] u_k
            n = len(self.eigen.basis)
            hit = f.linear_change(linalg.transpose(self.eigen.inverse), range(n))
            self._cache[key] = hit
        return hit

    def from_eigen(self, f: GradedPoly) -> GradedPoly:
        n = len(self.eigen.basis)
        return f.linear_change(linalg.transpose(self.eigen.basis), range(n))

    def weight(self, exp) -> int:
        return sum(a * e for a, e in zip(self.eigen.exponents, exp))


def valuations(G: GroupAnalysis) -> list[ValuationData]:
    out = []
    for k, g in enumerate(G.junior_representatives()):
        ed = G.eigen_data(g)
        if ed.age != 1:
            raise ValuationError(f"element {g} is not junior (age {ed.age})")
        out.append(ValuationData(k, g, ed, G.orders[g]))
    return out


def nu(v: ValuationData, f: GradedPoly) -> int:
    if f.is_zero():
        raise ValuationError("the valuation of 0 is undefined")
    u = v.to_eigen(f)
    return min(v.weight(e) for e in u.terms)


def min_part(v: ValuationData, f: GradedPoly, *, eigen_coordinates: bool = True) -> GradedPoly:
    """The nu-minimal monomials of f.

    By default the result is in eigen-coordinates (variable slot k holds u_k);
    with ``eigen_coordinates=False`` it is converted back to x.
    """
    if f.is_zero():
        raise ValuationError("min part of 0 is undefined")
    u = v.to_eigen(f)
    low = min(v.weight(e) for e in u.terms)
    part = GradedPoly(u.ring, {e: c for e, c in u.terms.items() if v.weight(e) == low})
    return part if eigen_coordinates else v.from_eigen(part)


def degree_vector(S, juniors: list[ValuationData]) -> list[list[int]]:
    """Table nu_i(phi_j): one row per generator, one column per junior."""
    return [[nu(v, f) for v in juniors] for f in S]
