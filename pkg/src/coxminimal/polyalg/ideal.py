"""Ideals over a cyclotomic field and the operations built on Gröbner bases."""

from __future__ import annotations

import hashlib
import logging

from .groebner import Engine
from .order import MonomialOrder
from .poly import GradedPoly, Ring

log = logging.getLogger(__name__)

# (ring key, order spec, generator fingerprint) -> list of raw polys
_GB_MEMO: dict = {}
_DISK = None  # object with get(key) / put(key, value), see coxminimal.cache
_STATS = {"hits": 0, "disk_hits": 0, "computed": 0}


def set_disk_cache(store) -> None:
    global _DISK
    _DISK = store


def gb_stats() -> dict:
    return dict(_STATS)


def clear_memo() -> None:
    _GB_MEMO.clear()


def _fingerprint(ring: Ring, order: MonomialOrder, raws) -> str:
    h = hashlib.sha256()
    h.update(repr((ring.names, ring.conductor, order.spec())).encode())
    for f in raws:
        for e in sorted(f):
            h.update(repr((e, str(f[e]))).encode())
        h.update(b";")
    return h.hexdigest()


def groebner_basis(ring: Ring, gens, order: MonomialOrder | None = None, label: str = "") -> list[GradedPoly]:
    """Reduced, monic Gröbner basis, sorted by leading monomial (ascending)."""
    order = order or MonomialOrder.grevlex(ring.nvars)
    raws = [g.raw() for g in gens if g]
    fp = _fingerprint(ring, order, raws)
    hit = _GB_MEMO.get(fp)
    if hit is not None:
        _STATS["hits"] += 1
        return [GradedPoly.from_raw(ring, r) for r in hit]
    if _DISK is not None:
        stored = _DISK.get_gb(fp, ring)
        if stored is not None:
            _STATS["disk_hits"] += 1
            log.debug("groebner cache hit %s", fp[:12])
            _GB_MEMO[fp] = stored
            return [GradedPoly.from_raw(ring, r) for r in stored]
    _STATS["computed"] += 1
    eng = Engine(ring.field.modulus, order)
    result = eng.groebner(raws, label)
    _GB_MEMO[fp] = result
    if _DISK is not None:
        _DISK.put_gb(fp, ring, result)
    return [GradedPoly.from_raw(ring, r) for r in result]


class Ideal:
    """An ideal given by generators, with Gröbner bases cached per order.

    ``grading`` is an optional strictly positive weight vector for which
    all generators are homogeneous; it enables faster saturation.
    """

    def __init__(self, ring: Ring, gens, grading=None):
        self.ring = ring
        self.gens = [g for g in gens if g]
        for g in self.gens:
            if g.ring != ring:
                raise ValueError("generator from a different ring")
        self.grading = tuple(grading) if grading is not None else None
        if self.grading is not None:
            if len(self.grading) != ring.nvars or min(self.grading) <= 0:
                raise ValueError("grading must be strictly positive")
            for g in self.gens:
                if not g.is_homogeneous(self.grading):
                    raise ValueError(f"generator {g} is not homogeneous for the grading")
        self._gb: dict = {}

    def __repr__(self):
        return f"Ideal({self.ring}, {len(self.gens)} generators)"

    def default_order(self) -> MonomialOrder:
        if self.grading is not None:
            return MonomialOrder.weighted(self.grading)
        return MonomialOrder.grevlex(self.ring.nvars)

    def gb(self, order: MonomialOrder | None = None, label: str = "") -> list[GradedPoly]:
        order = order or self.default_order()
        if order not in self._gb:
            self._gb[order] = groebner_basis(self.ring, self.gens, order, label)
        return self._gb[order]

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.gb())

    def normal_form(self, f: GradedPoly, order: MonomialOrder | None = None) -> GradedPoly:
        order = order or self.default_order()
        eng = Engine(self.ring.field.modulus, order)
        B = eng.basis_of([g.raw() for g in self.gb(order)])
        return GradedPoly.from_raw(self.ring, eng.reduce(f.raw(), B))

    def contains(self, f: GradedPoly) -> bool:
        return not self.normal_form(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        order = self.default_order()
        eng = Engine(self.ring.field.modulus, order)
        B = eng.basis_of([g.raw() for g in self.gb(order)])
        return all(not eng.reduce(g.raw(), B) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        """Equality via reduced Gröbner bases in a common order."""
        if self.ring != other.ring:
            raise ValueError("ideals in different rings")
        order = self.default_order()
        return [g.terms for g in self.gb(order)] == [g.terms for g in other.gb(order)]

    def __add__(self, other: "Ideal") -> "Ideal":
        return add(self, other)

    def with_grading(self, grading) -> "Ideal":
        J = Ideal(self.ring, self.gens, grading)
        return J


# -- ring changes ---------------------------------------------------------

def _restrict(f: GradedPoly, ring: Ring) -> GradedPoly:
    """Drop trailing variables (which must not occur) to move f to ring."""
    n = ring.nvars
    out = {}
    for e, c in f.terms.items():
        if any(e[n:]):
            raise ValueError("polynomial involves eliminated variables")
        out[e[:n]] = c
    return GradedPoly(ring, out)


def map_to(f: GradedPoly, ring: Ring) -> GradedPoly:
    """Move f to another ring whose variables include those occurring in f."""
    names = f.ring.names
    used = f.variables()
    pos = {}
    for i in used:
        if names[i] not in ring.index:
            raise ValueError(f"variable {names[i]} missing in target ring")
        pos[i] = ring.index[names[i]]
    n = ring.nvars
    out = {}
    for e, c in f.terms.items():
        ne = [0] * n
        for i, k in enumerate(e):
            if k:
                ne[pos[i]] = k
        out[tuple(ne)] = c
    return GradedPoly(ring, out)


# -- elimination and kernels ----------------------------------------------

def eliminate(I: Ideal, block, target: Ring, grading=None, label: str = "") -> Ideal:
    """I ∩ K[target variables]; ``block`` lists variable indices to eliminate."""
    R = I.ring
    order = MonomialOrder.elimination(R.nvars, block, grading)
    gb = groebner_basis(R, I.gens, order, label or "eliminate")
    blockset = set(block)
    kept = []
    for g in gb:
        if not (g.variables() & blockset):
            kept.append(map_to(g, target))
    tgrading = None
    if grading is not None:
        tgrading = tuple(grading[R.index[v]] for v in target.names)
        if min(tgrading) <= 0:
            tgrading = None
    return Ideal(target, kept, tgrading)


def ring_map_kernel(source: Ring, targets, label: str = "kernel") -> Ideal:
    """Kernel of source -> K[ambient], X_j -> targets[j], by graph elimination.

    The targets must share one ambient ring; source and ambient variable
    names must be disjoint.
    """
    if not targets:
        return Ideal(source, [])
    amb = targets[0].ring
    for f in targets:
        if f.ring != amb:
            raise ValueError("targets in different rings")
    if set(amb.names) & set(source.names):
        raise ValueError("source and ambient variable names overlap")
    if len(targets) != source.nvars:
        raise ValueError("need one target per source variable")
    big = Ring(amb.names + source.names, source.conductor)
    namb = amb.nvars
    graded = all(f.is_homogeneous() and not f.is_zero() and f.total_degree() > 0 for f in targets)
    grading = None
    if graded:
        grading = [1] * namb + [f.total_degree() for f in targets]
    gens = []
    for j, f in enumerate(targets):
        X = big.var(namb + j)
        gens.append(X - map_to(f, big))
    I = Ideal(big, gens, grading)
    return eliminate(I, range(namb), source, grading, label)


# -- sums, products, quotients --------------------------------------------

def _common_grading(I: Ideal, J: Ideal):
    if I.grading is not None and I.grading == J.grading:
        return I.grading
    if I.grading is not None and not J.gens:
        return I.grading
    if J.grading is not None and not I.gens:
        return J.grading
    return None


def add(I: Ideal, J: Ideal) -> Ideal:
    if I.ring != J.ring:
        raise ValueError("ideals in different rings")
    return Ideal(I.ring, I.gens + J.gens, _common_grading(I, J))


def product(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(I.ring, [f * g for f in I.gens for g in J.gens], _common_grading(I, J))


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J by eliminating w from w·I + (1 - w)·J."""
    if I.ring != J.ring:
        raise ValueError("ideals in different rings")
    R = I.ring
    if not I.gens or not J.gens:
        return Ideal(R, [])
    grading = _common_grading(I, J)
    if len(J.gens) == 1 and len(J.gens[0]) == 1:
        (e, _), = J.gens[0].terms.items()
        return _intersect_monomial(I, e)
    if len(I.gens) == 1 and len(I.gens[0]) == 1:
        (e, _), = I.gens[0].terms.items()
        return _intersect_monomial(J, e)
    wname = _fresh(R, "w")
    big = R.extend([wname])
    w = big.var(wname)
    gens = [w * big.embed_poly(f) for f in I.gens] + [(1 - w) * big.embed_poly(g) for g in J.gens]
    if grading is not None:
        order = MonomialOrder(big.nvars, [[0] * R.nvars + [1], list(grading) + [0]], "intersection")
    else:
        order = MonomialOrder(big.nvars, [[0] * R.nvars + [1], [1] * R.nvars + [0]], "intersection")
    gb = groebner_basis(big, gens, order, "intersect")
    kept = [_restrict(g, R) for g in gb if not g.variables() & {R.nvars}]
    return Ideal(R, kept, grading)


def _intersect_monomial(I: Ideal, e) -> Ideal:
    """I ∩ (x^e) = x^e · (I : x^e)."""
    R = I.ring
    Q = quotient_monomial(I, e)
    return Ideal(R, [g.mul_monomial(e) for g in Q.gb()], I.grading)


def quotient(I: Ideal, J: Ideal) -> Ideal:
    """I : J = ∩_g (I : g) over generators g of J."""
    R = I.ring
    if not J.gens:
        return Ideal(R, [R.one()])
    result = None
    for g in J.gens:
        if len(g) == 1:
            (e, _), = g.terms.items()
            Q = quotient_monomial(I, e)
        else:
            # I : g = (I ∩ (g)) / g
            inter = intersect(I, Ideal(R, [g], I.grading if I.grading and g.is_homogeneous(I.grading) else None))
            Q = Ideal(R, [_divide_exact(h, g) for h in inter.gb()], inter.grading)
        result = Q if result is None else intersect(result, Q)
    return result


def quotient_monomial(I: Ideal, e) -> Ideal:
    """I : x^e, one variable at a time."""
    J = I
    for i, k in enumerate(e):
        for _ in range(k):
            J = quotient_variable(J, i)
    return J


def quotient_variable(I: Ideal, v: int) -> Ideal:
    """I : v for a variable v.

    For ideals homogeneous in a positive grading this reads the answer off
    a Gröbner basis in a weighted reverse-lex order with v last; otherwise
    it goes through the intersection I ∩ (v).
    """
    R = I.ring
    if not I.gens:
        return I
    if I.grading is not None:
        order = _v_last_order(R, I.grading, v)
        gb = groebner_basis(R, I.gens, order, "quotient")
        gens = []
        for g in gb:
            k = min(e[v] for e in g.terms)
            if k:
                ex = [0] * R.nvars
                ex[v] = 1
                g = g.divide_monomial(ex)
            gens.append(g)
        return Ideal(R, gens, I.grading)
    ex = [0] * R.nvars
    ex[v] = 1
    wname = _fresh(R, "w")
    big = R.extend([wname])
    w = big.var(wname)
    V = big.var(R.names[v])
    gens = [w * big.embed_poly(f) for f in I.gens] + [(1 - w) * V]
    order = MonomialOrder(big.nvars, [[0] * R.nvars + [1], [1] * R.nvars + [0]], "intersection")
    gb = groebner_basis(big, gens, order, "intersect")
    inter = [_restrict(g, R) for g in gb if not g.variables() & {R.nvars}]
    return Ideal(R, [g.divide_monomial(ex) for g in inter])


def _v_last_order(R: Ring, grading, v: int) -> MonomialOrder:
    """Weighted degree, then reverse lex with v as the smallest variable.

    Implemented with a permuted revlex: an extra row -e_v right after the
    grading makes v the first variable the tie-break looks at.
    """
    row = [0] * R.nvars
    row[v] = -1
    return MonomialOrder(R.nvars, [list(grading), row], "wrevlex-last")


def saturate(I: Ideal, v: int, max_steps: int = 10_000) -> Ideal:
    """I : v^∞.

    Graded case: with v last in a weighted reverse-lex order, dividing each
    Gröbner basis element by its full power of v gives the saturation.
    Otherwise iterate I : v until it stabilizes.
    """
    R = I.ring
    if I.grading is not None and I.gens:
        gb = groebner_basis(R, I.gens, _v_last_order(R, I.grading, v), "saturate")
        gens = []
        for g in gb:
            ex = [0] * R.nvars
            ex[v] = min(e[v] for e in g.terms)
            gens.append(g.divide_monomial(ex) if ex[v] else g)
        return Ideal(R, gens, I.grading)
    cur = I
    for _ in range(max_steps):
        nxt = quotient_variable(cur, v)
        if _same_gb(cur, nxt):
            return nxt
        cur = nxt
    raise RuntimeError("saturation did not stabilize")


def _same_gb(I: Ideal, J: Ideal) -> bool:
    order = I.default_order() if I.grading == J.grading else MonomialOrder.grevlex(I.ring.nvars)
    a = [g.terms for g in I.gb(order)]
    b = [g.terms for g in J.gb(order)]
    return a == b


def _divide_exact(h: GradedPoly, g: GradedPoly) -> GradedPoly:
    """h / g for g dividing h, by multivariate division in grevlex."""
    R = h.ring
    order = MonomialOrder.grevlex(R.nvars)
    lg = max(g.terms, key=order.key)
    inv = g.terms[lg].inverse()
    q = R.zero()
    rem = h
    while rem:
        lr = max(rem.terms, key=order.key)
        d = tuple(a - b for a, b in zip(lr, lg))
        if min(d) < 0:
            raise ValueError("inexact division")
        c = rem.terms[lr] * inv
        t = R.monomial(d, c)
        q = q + t
        rem = rem - g * t
    return q


def _fresh(R: Ring, base: str) -> str:
    name = base
    k = 0
    while name in R.index:
        k += 1
        name = f"{base}{k}"
    return name


# -- homogenization and substitutions ------------------------------------

def homogenize_poly(f: GradedPoly, weights, aux: int) -> GradedPoly:
    """Multiply each monomial by aux^(deg(m) - min deg(f)).

    ``aux`` is the index of the auxiliary variable (degree -1); it is
    not counted by ``weights``.
    """
    if not f:
        return f
    degs = {e: sum(w * k for w, k in zip(weights, e)) for e in f.terms}
    lo = min(degs.values())
    out = {}
    for e, c in f.terms.items():
        ne = list(e)
        ne[aux] += degs[e] - lo
        out[tuple(ne)] = c
    return GradedPoly(f.ring, out)


def homogenize(I: Ideal, weights, aux: int, grading=None) -> Ideal:
    """Ideal generated by the homogenized generators; saturate afterwards."""
    return Ideal(I.ring, [homogenize_poly(g, weights, aux) for g in I.gens], grading)


def substitute_ideal(I: Ideal, assignments: dict, target: Ring | None = None, grading=None) -> Ideal:
    target = target or I.ring
    gens = [g.substitute(assignments, target) for g in I.gens]
    return Ideal(target, gens, grading)
