"""Invariants of the commutator subgroup, split by characters of Ab(G).

The group acts on polynomials by f -> f(g^T x): a linear form with
coefficient column c goes to g c.  A polynomial f is chi-homogeneous when
g.f = chi(g) f for every g in G; such f is automatically [G,G]-invariant.
"""

from __future__ import annotations

import logging
from itertools import combinations_with_replacement
from math import gcd

from . import linalg
from .exactnum import CycNum
from .matgroup import GroupAnalysis
from .polyalg import GradedPoly, Ring

log = logging.getLogger(__name__)


class InvariantError(ValueError):
    pass


def act(g, f: GradedPoly) -> GradedPoly:
    return f.linear_change(g)


def _series_inverse_det(F, exps, r, cap):
    """Coefficients of prod_i 1/(1 - zeta_r^{a_i} q) up to q^cap."""
    out = [F.zero] * (cap + 1)
    out[0] = F.one
    for a in exps:
        lam = F.zeta(a, r)
        # multiply by 1/(1 - lam q): c_d += lam * c_{d-1}
        for d in range(1, cap + 1):
            out[d] = out[d] + lam * out[d - 1]
    return out


def _class_traces(G: GroupAnalysis, cap: int) -> list:
    cache = getattr(G, "_trace_series", None)
    if cache is None:
        cache = {}
        G._trace_series = cache
    hit = cache.get("cap")
    if hit is not None and hit >= cap:
        return [s[: cap + 1] for s in cache["series"]]
    series = []
    for members in G.classes:
        ed = G.eigen_data(members[0])
        series.append(_series_inverse_det(G.field, ed.exponents, ed.order, cap))
    cache["cap"] = cap
    cache["series"] = series
    return series


def molien_series(G: GroupAnalysis, degree_cap: int, chi=None, subgroup=None) -> list[int]:
    """Dimensions of the invariants of degree 0..degree_cap.

    With ``subgroup`` = list of element indices (a union of classes, e.g. the
    commutator), count invariants of that subgroup; with ``chi`` count the
    chi-homogeneous elements of G instead.
    """
    F = G.field
    series = _class_traces(G, degree_cap)
    total = [F.zero] * (degree_cap + 1)
    if subgroup is not None:
        members = set(subgroup)
        size = len(members)
        for c, cls in enumerate(G.classes):
            inside = sum(1 for k in cls if k in members)
            if inside:
                w = F(inside)
                total = [t + w * s for t, s in zip(total, series[c])]
    else:
        size = G.order
        for c, cls in enumerate(G.classes):
            w = F(len(cls))
            if chi is not None:
                w = w * G.character_value(chi, cls[0]).conjugate()
            total = [t + w * s for t, s in zip(total, series[c])]
    out = []
    for t in total:
        v = t / size
        if not v.is_rational() or v.rational().denominator != 1:
            raise ArithmeticError(f"Molien coefficient {v} is not an integer")
        out.append(int(v.rational()))
    return out


def monomials(n: int, d: int) -> list[tuple]:
    """Exponent vectors of degree d in n variables, lexicographically descending."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _coset_reps(G: GroupAnalysis) -> list[int]:
    seen = {}
    for k in range(G.order):
        seen.setdefault(G.ab_image[k], k)
    return sorted(seen.values())


class _Reynolds:
    def __init__(self, G: GroupAnalysis, ring: Ring):
        self.G = G
        self.ring = ring
        self.H = list(G.commutator)
        self.reps = _coset_reps(G)
        self._memo = {}

    def average(self, exp) -> GradedPoly:
        hit = self._memo.get(exp)
        if hit is None:
            m = self.ring.monomial(exp)
            acc = self.ring.zero()
            for h in self.H:
                acc = acc + act(self.G.elements[h], m)
            hit = acc / len(self.H)
            self._memo[exp] = hit
        return hit

    def project(self, f: GradedPoly, chi) -> GradedPoly:
        G = self.G
        acc = self.ring.zero()
        for c in self.reps:
            w = G.character_value(chi, c).conjugate()
            acc = acc + act(G.elements[c], f).scale(w)
        return acc / len(self.reps)


def _vector(f: GradedPoly, index: dict, F) -> list:
    v = [F.zero] * len(index)
    for e, c in f.terms.items():
        v[index[e]] = c
    return v


def _poly(v, basis, ring: Ring) -> GradedPoly:
    return GradedPoly(ring, {e: c for e, c in zip(basis, v) if c})


def _weighted_exponents(degrees, d, start=0):
    """Exponent vectors e with sum e_j degrees_j = d."""
    if start == len(degrees):
        if d == 0:
            yield ()
        return
    w = degrees[start]
    for k in range(d // w + 1):
        for rest in _weighted_exponents(degrees, d - k * w, start + 1):
            yield (k,) + rest


def _lcm(xs) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


def invariant_generators(G: GroupAnalysis, ring: Ring, degree_cap: int | None = None,
                         *, early_stop: bool = True) -> list[GradedPoly]:
    """Character-homogeneous generators of the invariants of [G,G]."""
    F = G.field
    n = ring.nvars
    H = list(G.commutator)
    cap = degree_cap if degree_cap is not None else len(H)
    chars = G.characters()
    molien = {chi: molien_series(G, cap, chi=chi) for chi in chars}
    total = molien_series(G, cap, subgroup=H)
    if any(sum(molien[chi][d] for chi in chars) != total[d] for d in range(cap + 1)):
        raise ArithmeticError("character-twisted Molien series do not add up")
    reyn = _Reynolds(G, ring)
    gens: list[GradedPoly] = []
    degs: list[int] = []
    last_new = 0
    products: dict = {}

    def product_of(e):
        p = products.get(e)
        if p is None:
            j = next(i for i, k in enumerate(e) if k)
            prev = list(e)
            prev[j] -= 1
            p = product_of(tuple(prev)) * gens[j]
            products[e] = p
        return p

    for d in range(1, cap + 1):
        if early_stop and gens and d > last_new + _lcm(degs):
            log.info("generator search stopped at degree %d (window %d)", d, _lcm(degs))
            break
        basis = monomials(n, d)
        index = {e: i for i, e in enumerate(basis)}
        for chi in chars:
            target = molien[chi][d]
            if target == 0:
                continue
            rows = []
            products[tuple([0] * len(gens))] = ring.one()
            for e in _weighted_exponents(degs, d):
                ch = tuple([0] * len(chi))
                for k, j in zip(e, range(len(gens))):
                    for _ in range(k):
                        ch = G.character_product(ch, gens[j].character)
                if ch == chi:
                    rows.append(_vector(product_of(e), index, F))
            E, _ = linalg.rref(rows) if rows else ([], [])
            have = len(E)
            if have == target:
                continue
            if have > target:
                raise ArithmeticError("products exceed the Molien dimension")
            found = list(E)
            fresh = []
            for e in basis:
                f = reyn.project(reyn.average(e), chi)
                if f.is_zero():
                    continue
                trial, _ = linalg.rref(found + [_vector(f, index, F)])
                if len(trial) > len(found):
                    found = list(trial)
                    fresh.append(_vector(f, index, F))
                    if len(found) == target:
                        break
            if len(found) != target:
                raise ArithmeticError("Reynolds images do not reach the Molien dimension")
            # reduced echelon basis of the complement of the products
            reduced = [_reduce(v, E) for v in fresh]
            C, _ = linalg.rref(reduced)
            for v in C:
                g = _poly(v, basis, ring).with_character(chi)
                gens.append(g)
                degs.append(d)
                products.clear()
            last_new = d
            log.info("degree %d, character %s: %d new generator(s)", d, chi, len(C))
    if gens and early_stop and cap < len(H) and cap < last_new + _lcm(degs):
        log.warning("degree cap %d reached before a full window of %d degrees without new generators",
                    cap, _lcm(degs))
    return gens


def _reduce(v, E):
    v = list(v)
    for row in E:
        p = next(i for i, c in enumerate(row) if c)
        if v[p]:
            f = v[p]
            v = [a - f * b for a, b in zip(v, row)]
    return v


def character_of(G: GroupAnalysis, f: GradedPoly):
    """The character chi with g.f = chi(g) f for all g, or None."""
    lams = []
    for k in _generator_indices(G):
        gf = act(G.elements[k], f)
        lam = _ratio(gf, f)
        if lam is None:
            return None
        lams.append((k, lam))
    for chi in G.characters():
        if all(G.character_value(chi, k) == lam for k, lam in lams):
            return chi
    return None


def _generator_indices(G: GroupAnalysis) -> list[int]:
    return [G.index(g) for g in G.generators]


def _ratio(a: GradedPoly, b: GradedPoly) -> CycNum | None:
    if b.is_zero():
        return None
    e, c = next(iter(b.terms.items()))
    ca = a.terms.get(e)
    if ca is None:
        return None
    lam = ca / c
    if a != b.scale(lam):
        return None
    return lam


def describe_element(G: GroupAnalysis, k: int) -> str:
    for name, idx in G.names.items():
        if idx == k:
            return name
    from .catalog import _fmt

    return f"element {k} = {_fmt(G.elements[k])}"


def accept_user_generators(G: GroupAnalysis, polys, names=None) -> list[GradedPoly]:
    """Check [G,G]-invariance and character homogeneity; attach characters."""
    names = list(names) if names is not None else [f"phi{j + 1}" for j in range(len(polys))]
    out = []
    gen_idx = _generator_indices(G)
    for name, f in zip(names, polys):
        if f.is_zero():
            raise InvariantError(f"{name} is zero")
        if not f.is_homogeneous():
            raise InvariantError(f"{name} is not homogeneous")
        for h in G.commutator:
            if act(G.elements[h], f) != f:
                raise InvariantError(f"{name} is not invariant under the commutator element {describe_element(G, h)}")
        lams = {}
        for k in gen_idx:
            lam = _ratio(act(G.elements[k], f), f)
            if lam is None:
                raise InvariantError(f"{name} is not an eigenvector of {describe_element(G, k)}")
            lams[k] = lam
        chi = next((c for c in G.characters() if all(G.character_value(c, k) == lam for k, lam in lams.items())), None)
        if chi is None:
            raise InvariantError(f"{name}: eigenvalues under the generators do not come from a character of Ab(G)")
        out.append(f.with_character(chi))
    return out


# -- completeness of a generator set ----------------------------------------

def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _shift(a, d):
    return [0] * d + list(a)


def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(x <= y for x, y in zip(h, g)) for h in out):
            out.append(g)
    return out


def hilbert_numerator(monomials, weights) -> list[int]:
    """N(q) with H(K[X]/(monomials), q) = N(q) / prod(1 - q^w_j)."""
    memo = {}

    def deg(e):
        return sum(w * k for w, k in zip(weights, e))

    def rec(gens):
        gens = tuple(sorted(_minimalize(gens)))
        hit = memo.get(gens)
        if hit is not None:
            return hit
        if not gens:
            res = [1]
        elif len(gens) == 1:
            res = _poly_sub([1], _shift([1], deg(gens[0])))
        elif all(sum(1 for k in g if k) == 1 for g in gens):
            # pure powers of distinct variables: a product of (1 - q^d)
            res = [1]
            for g in gens:
                res = _poly_mul(res, _poly_sub([1], _shift([1], deg(g))))
        else:
            # Bigatti pivot p = x_v^a:  N(M) = N(M + (p)) + q^deg(p) N(M : p)
            n = len(gens[0])
            mixed = [g for g in gens if sum(1 for k in g if k) > 1]
            counts = [sum(1 for g in mixed if g[i]) for i in range(n)]
            v = max(range(n), key=lambda i: counts[i])
            exps = sorted(g[v] for g in mixed if g[v])
            p = [0] * n
            p[v] = exps[len(exps) // 2]
            p = tuple(p)
            quot = [tuple(max(0, a - b) for a, b in zip(g, p)) for g in gens]
            a, b = _pad(rec(list(gens) + [p]), _shift(rec(quot), deg(p)))
            res = [x + y for x, y in zip(a, b)]
            while len(res) > 1 and res[-1] == 0:
                res.pop()
        memo[gens] = res
        return res

    return rec(list(monomials))


def _pad(a, b):
    n = max(len(a), len(b))
    return list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b))


def _exponent(G: GroupAnalysis, members) -> int:
    e = 1
    for k in members:
        e = e * G.orders[k] // gcd(e, G.orders[k])
    return e


def generators_complete(G: GroupAnalysis, kernel, degrees) -> bool:
    """Do polynomials with these degrees and relation ideal ``kernel`` span all of C[V]^[G,G]?

    Compares the Hilbert series of K[X]/kernel with the Molien series of the
    commutator as rational functions: with e the exponent of [G,G] and n the
    dimension, Molien = P(q)/(1 - q^e)^n with deg P <= n(e - 1).
    """
    H = list(G.commutator)
    n = G.dim
    e = _exponent(G, H)
    top = n * e
    molien = molien_series(G, top, subgroup=H)
    denom = [1]
    for _ in range(n):
        denom = _poly_mul(denom, _poly_sub([1], _shift([1], e)))
    P = _poly_mul(denom, molien)[: top + 1]
    order = kernel.default_order()
    lms = [max(g.terms, key=order.key) for g in kernel.gb(order)]
    N = hilbert_numerator(lms, degrees)
    lhs = _poly_mul(N, denom)
    rhs = [1]
    for w in degrees:
        rhs = _poly_mul(rhs, _poly_sub([1], _shift([1], w)))
    rhs = _poly_mul(P, rhs)
    return _poly_sub(lhs, rhs) == [0]


class IncompleteGenerators(RuntimeError):
    """The degree cap stopped the search before the invariants were generated."""


def kernel_of(ring: Ring, gens):
    from .polyalg import Ideal, ring_map_kernel

    X = Ring([f"X{j + 1}" for j in range(len(gens))], ring.conductor)
    w = [f.total_degree() for f in gens]
    return Ideal(X, ring_map_kernel(X, gens, "ker alpha").gb(), w)


def certified_generators(G: GroupAnalysis, ring: Ring, degree_cap: int | None = None) -> list[GradedPoly]:
    """invariant_generators, checked against the Molien series; searches on
    without the early stop when the check fails."""
    gens = invariant_generators(G, ring, degree_cap)
    if generators_complete(G, kernel_of(ring, gens), [f.total_degree() for f in gens]):
        return gens
    log.info("early stop left the generators incomplete; continuing to the degree cap")
    gens = invariant_generators(G, ring, degree_cap, early_stop=False)
    if generators_complete(G, kernel_of(ring, gens), [f.total_degree() for f in gens]):
        return gens
    raise IncompleteGenerators(f"generators up to degree {degree_cap} do not generate the invariant ring; "
                               "raise --degree-cap")


def check_complete(G: GroupAnalysis, ring: Ring, gens, names=None) -> None:
    if not generators_complete(G, kernel_of(ring, gens), [f.total_degree() for f in gens]):
        raise InvariantError("the given polynomials do not generate the invariants of [G,G] "
                             "(Hilbert series differs from the Molien series)")
