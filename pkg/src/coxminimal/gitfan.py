"""Cones and chamber fans in Cl(X)_R = R^m, with exact integer arithmetic.

Given the degrees of the Cox generators, the refinement fan has as chambers
the sets  ∩ { cone(B) : B a basis among the degrees, D ∈ cone(B) }  for
generic D.  Chambers are found by walking across facets from a start
chamber; each chamber's rays come from a double-description pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import gcd

import flint


class FanError(ValueError):
    pass


# -- integer vectors --------------------------------------------------------

def primitive(v) -> tuple:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def rank(vectors, m: int) -> int:
    if not vectors:
        return 0
    return flint.fmpz_mat([[int(x) for x in v] for v in vectors]).rank()


def normal_of(vectors, m: int) -> tuple | None:
    """Primitive normal of the hyperplane spanned by m-1 independent vectors."""
    if not vectors:
        return (1,) if m == 1 else None
    M = flint.fmpz_mat([[int(x) for x in v] for v in vectors])
    if M.rank() != m - 1:
        return None
    X, nullity = M.nullspace()
    return primitive([int(X[i, 0]) for i in range(m)])


def _solve(A_cols, b):
    """Coefficients x with sum x_j A_cols[j] = b for independent columns, or None."""
    m, n = len(b), len(A_cols)
    entries = []
    for i in range(m):
        for j in range(n + 1):
            q = Fraction(A_cols[j][i]) if j < n else Fraction(b[i])
            entries.append(flint.fmpq(q.numerator, q.denominator))
    aug = flint.fmpq_mat(m, n + 1, entries)
    R, r = aug.rref()
    piv = []
    for i in range(r):
        piv.append(next(j for j in range(n + 1) if R[i, j] != 0))
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        q = R[i, n]
        x[p] = Fraction(int(q.p), int(q.q))
    return x


# -- cones ------------------------------------------------------------------

@dataclass
class Cone:
    rays: list  # primitive integer vectors
    facets: list = dc_field(default_factory=list)  # inward primitive normals, when known
    exact: bool | None = None  # facets known to be complete (none: the whole space)

    def __post_init__(self):
        if self.exact is None:
            self.exact = bool(self.facets)
        seen = []
        for r in self.rays:
            p = primitive(r)
            if any(p) and p not in seen:
                seen.append(p)
        self.rays = seen

    @property
    def dim(self) -> int:
        return rank(self.rays, len(self.rays[0])) if self.rays else 0

    def contains(self, v, strict: bool = False) -> bool:
        """v in the nonnegative span of the rays (exact, via facets when known)."""
        if strict:
            return self.exact and all(dot(a, v) > 0 for a in self.facets)
        if self.facets:
            return all(dot(a, v) >= 0 for a in self.facets)
        return _in_span(self.rays, v)

    def interior_point(self) -> tuple:
        m = len(self.rays[0])
        acc = [0] * m
        for r in self.rays:
            acc = [a + b for a, b in zip(acc, r)]
        return tuple(acc)

    def __str__(self):
        return "cone(" + ", ".join(str(r) for r in self.rays) + ")"

    @classmethod
    def spanned(cls, rays) -> "Cone":
        """cone(rays) with its facets, when it is full-dimensional."""
        c = cls(list(rays))
        m = len(c.rays[0]) if c.rays else 0
        if not m or c.dim < m:
            return c
        B = []
        for r in c.rays:
            if rank(B + [r], m) > len(B):
                B.append(r)
        # facets of a pointed cone are the rays of its dual cone
        dual_rays, _ = double_description(simplicial_facets(B), [tuple(r) for r in B],
                                          [r for r in c.rays if r not in B])
        pointed = rank(dual_rays, m) == m
        c.facets = sorted(dual_rays if pointed else facets_of(c.rays, m))
        c.exact = True
        if pointed:
            c.rays = [r for r in c.rays if rank([a for a in c.facets if dot(a, r) == 0], m) == m - 1]
        return c

    def __eq__(self, other):
        return isinstance(other, Cone) and sorted(self.rays) == sorted(other.rays)


def facets_of(rays, m: int) -> list[tuple]:
    """Inward facet normals of a full-dimensional cone, by brute force over
    hyperplanes through m-1 rays (works for cones with a lineality space)."""
    out = set()
    for sub in combinations(rays, m - 1):
        n = normal_of(list(sub), m)
        if n is None:
            continue
        vals = [dot(n, r) for r in rays]
        if all(v >= 0 for v in vals):
            out.add(n)
        elif all(v <= 0 for v in vals):
            out.add(tuple(-x for x in n))
    return sorted(out)


def _in_span(rays, v) -> bool:
    """Membership in cone(rays) by Carathéodory: some independent subset works."""
    if not any(v):
        return True
    m = len(v)
    rays = [r for r in rays if any(r)]
    for size in range(1, min(m, len(rays)) + 1):
        for sub in combinations(rays, size):
            if rank(list(sub), m) != size:
                continue
            x = _solve(list(sub), v)
            if x is not None and all(c >= 0 for c in x):
                return True
    return False


def simplicial_facets(B) -> list[tuple]:
    """Inward normals of cone(B) for a basis B of R^m: the rows of B^-1."""
    m = len(B)
    inv = flint.fmpq_mat(m, m, [int(B[j][i]) for i in range(m) for j in range(m)]).inv()
    out = []
    for k in range(m):
        row = [inv[k, j] for j in range(m)]
        out.append(primitive([Fraction(int(c.p), int(c.q)) for c in row]))
    return out


def double_description(rays0, facets0, inequalities) -> tuple[list, list]:
    """Rays of {x in cone(rays0) : a.x >= 0 for a in inequalities}.

    rays0 is a basis (cone(rays0) simplicial with inward normals facets0);
    returns (rays, irredundant facet normals).  The result must stay
    full-dimensional, which holds for chambers.
    """
    m = len(rays0)
    ineqs = list(facets0)
    rays = [tuple(r) for r in rays0]
    zero = [frozenset(j for j, a in enumerate(ineqs) if dot(a, r) == 0) for r in rays]
    for a in inequalities:
        if a in ineqs:
            continue
        vals = [dot(a, r) for r in rays]
        if all(v >= 0 for v in vals):
            ineqs.append(a)
            idx = len(ineqs) - 1
            zero = [z | {idx} if v == 0 else z for z, v in zip(zero, vals)]
            continue
        ineqs.append(a)
        idx = len(ineqs) - 1
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        nul = [j for j, v in enumerate(vals) if v == 0]
        new_rays = [rays[j] for j in pos] + [rays[j] for j in nul]
        new_zero = [zero[j] for j in pos] + [zero[j] | {idx} for j in nul]
        for p in pos:
            for n in neg:
                common = zero[p] & zero[n]
                if len(common) < m - 2:
                    continue
                if any(q != p and q != n and common <= zero[q] for q in range(len(rays))):
                    continue
                r = primitive([vals[p] * y - vals[n] * x for x, y in zip(rays[p], rays[n])])
                new_rays.append(r)
                new_zero.append(common | {idx})
        rays, zero = new_rays, new_zero
    # irredundant facets: inequalities tight on m-1 independent rays
    facets = []
    seen = set()
    for j, a in enumerate(ineqs):
        tight = frozenset(k for k, z in enumerate(zero) if j in z)
        if tight in seen:
            continue
        if rank([rays[k] for k in tight], m) == m - 1:
            seen.add(tight)
            facets.append(primitive(a))
    order = sorted(range(len(rays)), key=lambda k: rays[k])
    return [rays[k] for k in order], sorted(set(facets))


# -- the refinement fan -----------------------------------------------------

@dataclass
class FanStructure:
    support: Cone
    walls: list  # primitive normals of interior walls
    chambers: list  # Cones with rays and facets
    lattice: list  # r_i: E_i maps to r_i e_i
    degrees: list  # the input degree vectors

    @property
    def rays(self) -> list:
        out = set()
        for c in self.chambers:
            out.update(c.rays)
        return sorted(out)


class _Arrangement:
    def __init__(self, degrees):
        m = len(degrees[0])
        self.m = m
        rays = []
        for d in degrees:
            p = primitive(d)
            if any(p) and p not in rays:
                rays.append(p)
        if rank(rays, m) < m:
            raise FanError("the degrees do not span R^m; the presentation is degenerate")
        self.rays = rays
        self.bases = []
        for B in combinations(rays, m):
            if rank(list(B), m) == m:
                self.bases.append((B, simplicial_facets(B)))
        walls = set()
        for sub in combinations(rays, m - 1):
            n = normal_of(list(sub), m)
            if n is not None:
                walls.add(_canon(n))
        self.walls = sorted(walls)

    def generic(self, v) -> bool:
        return all(dot(h, v) != 0 for h in self.walls)

    def chamber(self, q) -> Cone | None:
        """∩ cone(B) over the bases containing the generic point q."""
        inside = [(B, F) for B, F in self.bases if all(dot(a, q) > 0 for a in F)]
        if not inside:
            return None
        B0, F0 = inside[0]
        ineqs = []
        for _, F in inside[1:]:
            for a in F:
                if a not in ineqs:
                    ineqs.append(a)
        rays, facets = double_description(B0, F0, ineqs)
        return Cone(rays, facets)


def _canon(n) -> tuple:
    """Sign-normalized normal: first nonzero entry positive."""
    for x in n:
        if x:
            return tuple(n) if x > 0 else tuple(-y for y in n)
    return tuple(n)


def refinement_fan(degrees, lattice=None, *, within: Cone | None = None,
                   max_chambers: int = 5000, seed: int = 0) -> FanStructure:
    """Chambers of the fan refining every cone(B), by a walk across facets.

    With `within` (a full-dimensional union of chambers, e.g. the movable
    cone) only the chambers inside it are enumerated.
    """
    degrees = [tuple(int(x) for x in d) for d in degrees]
    if not degrees:
        raise FanError("no degrees")
    arr = _Arrangement(degrees)
    m = arr.m
    rng = random.Random(seed)
    start = None
    seeds = within.rays if within is not None else arr.rays
    for _ in range(1000):
        q = [0] * m
        for r in seeds:
            w = rng.randint(1, 1000)
            q = [a + w * b for a, b in zip(q, r)]
        if any(q) and arr.generic(q):
            start = tuple(q)
            break
    if start is None:
        raise FanError("no generic start point found")
    first = arr.chamber(start)
    if first is None:
        raise FanError("start point outside the support")
    chambers = [first]
    keys = {tuple(first.rays)}
    queue = [first]
    walls = set()
    while queue:
        C = queue.pop(0)
        for a in C.facets:
            q = _across(arr, C, a, rng)
            if q is None:
                continue
            D = arr.chamber(q)
            if D is None:
                continue  # boundary of the support
            if within is not None and not within.contains(D.interior_point(), strict=True):
                continue
            walls.add(_canon(a))
            key = tuple(D.rays)
            if key in keys:
                continue
            if len(chambers) >= max_chambers:
                raise FanError(f"more than {max_chambers} chambers")
            keys.add(key)
            chambers.append(D)
            queue.append(D)
    chambers.sort(key=lambda c: _angle_key(c) if m == 2 else tuple(c.rays))
    support = within if within is not None else Cone(list(arr.rays))
    return FanStructure(support, sorted(walls), chambers, list(lattice or []), degrees)


def _across(arr: _Arrangement, C: Cone, a, rng) -> tuple | None:
    """A generic point just beyond the facet a of C, or None past the support."""
    m = arr.m
    tight = [r for r in C.rays if dot(a, r) == 0]
    canon = _canon(a)
    for _ in range(200):
        p = [0] * m
        for r in tight:
            w = rng.randint(1, 1000)
            p = [x + w * y for x, y in zip(p, r)]
        if any(dot(h, p) == 0 for h in arr.walls if h != canon) and m > 1:
            continue
        # step outward by eps*a with eps below every other wall crossing
        eps = Fraction(1)
        for h in arr.walls:
            if h == canon:
                continue
            hp, ha = dot(h, p), dot(h, a)
            if ha and (hp > 0) == (ha > 0):
                continue
            if ha:
                eps = min(eps, Fraction(abs(hp), 2 * abs(ha)))
        q = [Fraction(x) - eps * y for x, y in zip(p, a)]
        q = primitive(q)
        if arr.generic(q):
            return q
    raise FanError("could not cross a facet generically")


def _angle_key(c: Cone):
    from math import atan2, pi

    p = c.interior_point()
    ang = atan2(p[1], p[0])
    return ang if ang >= 0 else ang + 2 * pi


# -- queries ----------------------------------------------------------------

def movable_cone(pres) -> Cone:
    """Nonnegative span of the degrees of the non-boundary generators."""
    return Cone.spanned([g.exponents for g in pres.generators if not g.boundary])


def movable_by_exclusion(fan: FanStructure) -> Cone | None:
    """Union of the chambers lying in cone(degrees without g) for every
    generator g; the usual description of the movable cone of a Mori dream
    space, used as a cross-check.  None when no chamber qualifies."""
    degs = [tuple(d) for d in fan.degrees]
    m = len(degs[0])
    cones = []
    for j in range(len(degs)):
        rest = [d for a, d in enumerate(degs) if a != j and any(d)]
        c = Cone.spanned(rest) if rest and rank(rest, m) == m else None
        if c is None:
            return None
        if c not in cones:
            cones.append(c)
    keep = [C for C in fan.chambers if all(c.contains(C.interior_point()) for c in cones)]
    if not keep:
        return None
    return Cone.spanned([r for C in keep for r in C.rays])


@dataclass
class Location:
    kind: str  # "chamber", "wall", "origin", "exterior"
    chambers: list  # indices of chambers containing D
    rays: list = dc_field(default_factory=list)  # fan rays through D, if any

    def __str__(self):
        if self.kind == "chamber":
            return f"interior of chamber {self.chambers[0]}"
        if self.kind == "wall":
            where = f" on the ray {self.rays[0]}" if self.rays else ""
            return f"on a wall{where}, shared by chambers {self.chambers}"
        return self.kind


def chamber_of(fan: FanStructure, D) -> Location:
    D = tuple(Fraction(x) for x in D)
    if not any(D):
        return Location("origin", list(range(len(fan.chambers))))
    hits = []
    strict = None
    for k, c in enumerate(fan.chambers):
        vals = [dot(a, D) for a in c.facets]
        if all(v >= 0 for v in vals):
            hits.append(k)
            if all(v > 0 for v in vals):
                strict = k
    if strict is not None:
        return Location("chamber", [strict])
    if not hits:
        return Location("exterior", [])
    m = len(D)
    p = primitive(D)
    on = [r for r in fan.rays if rank([r, p], m) == 1 and dot(r, p) > 0]
    return Location("wall", hits, on)


def unstable_locus_description(pres, fan: FanStructure, chamber: int) -> list[tuple]:
    """Index sets S' of m generators whose degree cone contains the chamber.

    The complement of the semistable locus is the intersection over these
    S' of the zero loci Z(S') = {all generators outside S' vanish}.
    """
    m = len(fan.degrees[0])
    C = fan.chambers[chamber]
    q = C.interior_point()
    degs = [g.exponents for g in pres.generators]
    out = []
    for sub in combinations(range(len(degs)), m):
        vecs = [degs[j] for j in sub]
        if rank(vecs, m) < m:
            continue
        x = _solve(vecs, q)
        if x is not None and all(c > 0 for c in x):
            out.append(sub)
    return out


def describe_unstable(pres, subsets) -> str:
    names = [g.name for g in pres.generators]
    parts = []
    for sub in subsets:
        rest = [names[j] for j in range(len(names)) if j not in sub]
        parts.append("V(" + ", ".join(rest) + ")")
    return " ∩ ".join(parts) if parts else "(empty intersection: everything is semistable)"


# -- pictures ---------------------------------------------------------------

def svg(fan: FanStructure, size: int = 400, title: str = "") -> str:
    """Rank-2 picture: fan rays with labels and the generator degrees as dots."""
    if len(fan.degrees[0]) != 2:
        raise FanError("pictures are only drawn in rank 2")
    pts = [d for d in fan.degrees] + list(fan.rays)
    reach = max(max(abs(x) for x in p) for p in pts) or 1
    half = size / 2
    s = (half - 40) / reach

    def xy(v, t=1.0):
        return half + s * t * v[0], half - s * t * v[1]

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    if title:
        out.append(f'<text x="10" y="20" font-size="14" font-family="sans-serif">{title}</text>')
    out.append(f'<line x1="0" y1="{half}" x2="{size}" y2="{half}" stroke="#ddd"/>')
    out.append(f'<line x1="{half}" y1="0" x2="{half}" y2="{size}" stroke="#ddd"/>')
    for r in fan.rays:
        n = max(abs(r[0]), abs(r[1]))
        x2, y2 = xy(r, reach / n)
        out.append(f'<line x1="{half}" y1="{half}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="black" stroke-width="1.5"/>')
        lx, ly = xy(r, reach / n * 1.08)
        out.append(f'<text x="{lx:.1f}" y="{ly:.1f}" font-size="12" font-family="sans-serif" '
                   f'text-anchor="middle">({r[0]},{r[1]})</text>')
    for d in sorted(set(fan.degrees)):
        cx, cy = xy(d)
        out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="3.5" fill="#c33"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
