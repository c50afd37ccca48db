"""Generators and relations of the Cox ring of a minimal model of V/G.

The state is a list S of character-homogeneous [G,G]-invariants.  Each
junior valuation nu_i gives the grading deg_i(X_j) = nu_i(S_j) on the
polynomial ring K[X_1..X_k]; the algorithm enlarges S until every invariant
can be written in S without losing valuation, one step at a time in the
order (0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...

Labels use 1-based junior numbers: (0, i) compares min_i(I) with min_i(J),
(i', i) compares I_A ∩ (t_i', t_i) with I_A·(t_i', t_i) for A = {1..i', i}.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from . import linalg
from .invariants import _weighted_exponents
from .matgroup import GroupAnalysis
from .polyalg import GradedPoly, Ideal, Ring, eliminate, homogenize_poly, intersect, ring_map_kernel, saturate
from .polyalg.ideal import add, quotient_variable
from .valuation import min_part, nu, valuations

log = logging.getLogger(__name__)

STEP_CAP = 64


class CoxError(RuntimeError):
    pass


class CoxIncomplete(CoxError):
    """A step did not stabilize within its iteration cap."""


class CoxInternalError(CoxError):
    """A property that holds mathematically failed: a defect, not bad input."""


@dataclass
class StepRecord:
    label: tuple  # (i', i), 1-based; i' = 0 for the (0, i) steps
    tries: int
    added: list  # names of new members of S


@dataclass
class GeneratorRecord:
    name: str
    poly: GradedPoly | None  # None for the boundary generators T_i
    character: tuple | None
    exponents: tuple

    @property
    def boundary(self) -> bool:
        return self.poly is None


@dataclass
class CoxPresentation:
    G: GroupAnalysis
    ring: Ring  # ring of the invariants, C[V]
    S: list
    names: list
    juniors: list
    degrees: list  # degrees[j][i] = nu_i(S_j)
    kernelI: Ideal
    history: list = dc_field(default_factory=list)
    position: int = 0  # index of the next step in schedule(m)
    generators: list = dc_field(default_factory=list)
    relations: Ideal | None = None
    lemma_checks: int = 0  # number of min_i(I) ⊆ min_i(J) checks performed

    @property
    def m(self) -> int:
        return len(self.juniors)

    @property
    def k(self) -> int:
        return len(self.S)

    @property
    def orders(self) -> list[int]:
        return [v.order for v in self.juniors]

    @property
    def xdeg(self) -> list[int]:
        return [f.total_degree() for f in self.S]

    @property
    def xring(self) -> Ring:
        return self.kernelI.ring

    def characters(self) -> list[tuple]:
        return [f.character for f in self.S]

    def alpha(self, h: GradedPoly) -> GradedPoly:
        """The invariant h(S_1, ..., S_k)."""
        return h.evaluate(self.S, self.ring)


def schedule(m: int) -> list[tuple]:
    out = []
    for i in range(1, m + 1):
        for ip in range(i):
            out.append((ip, i))
    return out


def xnames(k: int) -> list[str]:
    return [f"X{j + 1}" for j in range(k)]


# -- state ------------------------------------------------------------------

def start(G: GroupAnalysis, ring: Ring, S0, names=None) -> CoxPresentation:
    """Step (0): S = S_0, with the kernel of X_j -> S_j."""
    S0 = list(S0)
    if not S0:
        raise CoxError("empty generator set")
    for f in S0:
        if f.character is None:
            raise CoxError("generators must carry their Ab(G) character")
    juniors = valuations(G)
    names = list(names) if names is not None else [f"phi{j + 1}" for j in range(len(S0))]
    X = Ring(xnames(len(S0)), ring.conductor)
    I = ring_map_kernel(X, S0, "ker alpha")
    I = Ideal(X, I.gb(), [f.total_degree() for f in S0])
    degs = [[nu(v, f) for v in juniors] for f in S0]
    return CoxPresentation(G, ring, S0, names, juniors, degs, I)


def _extend(pres: CoxPresentation, new: list[tuple[GradedPoly, GradedPoly]], names: list[str]) -> None:
    """Append alpha(h) for each (h, alpha(h)); ker alpha grows by X_new - h."""
    k = pres.k
    X = Ring(xnames(k + len(new)), pres.ring.conductor)
    gens = [X.embed_poly(g) for g in pres.kernelI.gb()]
    for a, (h, f) in enumerate(new):
        gens.append(X.var(k + a) - X.embed_poly(h))
        pres.S.append(f)
        pres.degrees.append([nu(v, f) for v in pres.juniors])
    pres.names.extend(names)
    pres.kernelI = Ideal(X, gens, pres.xdeg)
    pres.kernelI = Ideal(X, pres.kernelI.gb(), pres.xdeg)


# -- the ideals of the algorithm -------------------------------------------

def _deg(pres, i: int) -> list[int]:
    return [row[i] for row in pres.degrees]


def homogenized_ideal(pres: CoxPresentation, A) -> Ideal:
    """I_A in K[X, t_i (i in A)]: homogenize ker alpha by each deg_i, then saturate."""
    A = list(A)
    cache = pres.__dict__.setdefault("_ia_cache", {})
    key = (pres.k, tuple(A))
    if key in cache:
        return cache[key]
    k = pres.k
    R = Ring(xnames(k) + [f"t{i + 1}" for i in A], pres.ring.conductor)
    # deg_i(t_i) = -1, so W = c*xdeg - sum deg_i is positive and homogeneous
    c = 1 + sum(pres.orders[i] - 1 for i in A)
    W = [c * w - sum(pres.degrees[j][i] for i in A) for j, w in enumerate(pres.xdeg)] + [1] * len(A)
    gens = []
    for g in pres.kernelI.gb():
        h = R.embed_poly(g)
        for a, i in enumerate(A):
            h = homogenize_poly(h, _deg(pres, i) + [0] * len(A), k + a)
        gens.append(h)
    J = Ideal(R, gens, W)
    for a in range(len(A)):
        J = saturate(J, k + a)
    J = Ideal(R, J.gb(), W)
    cache[key] = J
    return J


def min_ideal_I(pres: CoxPresentation, i: int) -> Ideal:
    """min_i(I), 0-based junior i: t = 0 in the saturated homogenization."""
    IA = homogenized_ideal(pres, [i])
    X = pres.xring
    k = pres.k
    gens = []
    for g in IA.gens:
        part = {e[:k]: c for e, c in g.terms.items() if e[k] == 0}
        if part:
            gens.append(GradedPoly(X, part))
    MI = Ideal(X, gens, pres.xdeg)
    return Ideal(X, MI.gb(), pres.xdeg)


def _eigen_ring(pres: CoxPresentation) -> Ring:
    n = pres.ring.nvars
    return Ring([f"u{a + 1}" for a in range(n)], pres.ring.conductor)


def min_ideal_J(pres: CoxPresentation, i: int, method: str = "homogenize") -> Ideal:
    """The Ab(G)-homogeneous part of ker(X_j -> min_i(S_j))."""
    v = pres.juniors[i]
    U = _eigen_ring(pres)
    targets = [GradedPoly(U, min_part(v, f).terms) for f in pres.S]
    X = pres.xring
    J = ring_map_kernel(X, targets, f"ker beta_{i + 1}")
    J = Ideal(X, J.gb(), pres.xdeg)
    return character_homogeneous_part(J, pres.characters(), pres.G.invariant_factors, method)


def character_homogeneous_part(J: Ideal, chars, factors, method: str = "homogenize") -> Ideal:
    """The ideal generated by the character-homogeneous elements of J.

    X_j carries the character chars[j] (exponents on the invariant factors).
    ``homogenize`` handles one cyclic factor at a time: homogenize by the
    exponent grading with an extra variable s, saturate, add s^d - 1 and
    eliminate s.  ``intersect`` intersects the translates g^a.J instead.
    """
    X = J.ring
    k = X.nvars
    grading = J.grading
    for c, d in enumerate(factors):
        a = [chi[c] % d for chi in chars]
        if d == 1 or not any(a) or J.is_zero():
            continue
        if method == "intersect":
            F = X.field
            cur = J
            for p in range(1, d):
                D = _diag([F.zeta(p * aj, d) for aj in a])
                cur = intersect(cur, Ideal(X, [g.linear_change(D) for g in J.gens], grading))
            J = Ideal(X, cur.gb(), grading)
            continue
        R = X.extend(["s" if "s" not in X.index else "s_"])
        # s has degree +1: X^e s^(top - a.e)
        gens = [_homogenize_up(R.embed_poly(g), a, k) for g in J.gb()]
        W = [w + aj for w, aj in zip(grading, a)] + [1]
        H = saturate(Ideal(R, gens, W), k)
        s = R.var(k)
        J = eliminate(Ideal(R, H.gens + [s ** d - 1]), [k], X, label="character part")
        J = Ideal(X, J.gens, grading)
    return J


def _diag(vals):
    n = len(vals)
    return [[vals[a] if a == b else 0 for b in range(n)] for a in range(n)]


def _homogenize_up(h: GradedPoly, a, k: int) -> GradedPoly:
    degs = {e: sum(x * y for x, y in zip(a, e[:k])) for e in h.terms}
    top = max(degs.values())
    out = {}
    for e, c in h.terms.items():
        ne = list(e)
        ne[k] = top - degs[e]
        out[tuple(ne)] = c
    return GradedPoly(h.ring, out)


# -- steps ------------------------------------------------------------------

def _sort_key(h: GradedPoly, xdeg):
    """Degree in V (weights xdeg; t-variables weigh 0), then the lex-largest monomial."""
    w = list(xdeg) + [0] * (h.ring.nvars - len(xdeg))
    return (h.weighted_degree(w), max(h.terms))


def _lead_inverse(f: GradedPoly):
    return f.terms[max(f.terms)].inverse()


def _select(candidates, base: Ideal, xdeg) -> list[GradedPoly]:
    """Greedy: keep a candidate when it is not in base + (kept so far)."""
    kept = []
    cur = base
    for h in sorted(candidates, key=lambda h: _sort_key(h, xdeg)):
        if cur.contains(h):
            continue
        kept.append(h)
        cur = Ideal(base.ring, cur.gb() + [h], base.grading)
    return kept


def _admit(pres: CoxPresentation, pairs, label) -> list[tuple[GradedPoly, GradedPoly]]:
    """Normalize the new invariants and drop zeros and duplicates of S."""
    known = {_key(f.scale(_lead_inverse(f))) for f in pres.S}
    out = []
    for h, f in pairs:
        if f.is_zero():
            continue
        c = _lead_inverse(f)
        f = f.scale(c)
        if _key(f) in known:
            continue
        known.add(_key(f))
        chi = h.character
        out.append((h.scale(c).with_character(chi), f.with_character(chi)))
    if not out:
        raise CoxInternalError(f"step {label}: the ideals differ but no new generator could be formed")
    return out


def _key(f: GradedPoly):
    return frozenset((e, tuple(c.poly.coeffs())) for e, c in f.terms.items())


def _character_of_monomial(pres: CoxPresentation, e) -> tuple:
    factors = pres.G.invariant_factors
    chi = [0] * len(factors)
    for j, a in enumerate(e):
        if a:
            for c, d in enumerate(factors):
                chi[c] = (chi[c] + a * pres.S[j].character[c]) % d
    return tuple(chi)


def _with_character(pres: CoxPresentation, h: GradedPoly) -> GradedPoly:
    chis = {_character_of_monomial(pres, e[:pres.k]) for e in h.terms}
    if len(chis) != 1:
        raise CoxInternalError(f"{h} is not homogeneous for Ab(G)")
    return h.with_character(chis.pop())


def step_0i(pres: CoxPresentation, i: int, pool=None) -> list[tuple]:
    """One try of Step (0, i) (i is 1-based).  Returns the (h, alpha(h)) to add."""
    if pool is not None:
        fI = pool.submit(min_ideal_I, pres, i - 1)
        fJ = pool.submit(min_ideal_J, pres, i - 1)
        MI, MJ = fI.result(), fJ.result()
    else:
        MI, MJ = min_ideal_I(pres, i - 1), min_ideal_J(pres, i - 1)
    pres.lemma_checks += 1
    if not MJ.contains_ideal(MI):
        raise CoxInternalError(f"step (0,{i}): min_i(I) is not contained in min_i(J)")
    if MI.equals(MJ):
        return []
    rems = []
    for g in MJ.gb():
        r = MI.normal_form(g)
        if r:
            rems.append(r)
    hs = [_with_character(pres, h) for h in _select(rems, MI, pres.xdeg)]
    return _admit(pres, [(h, pres.alpha(h)) for h in hs], (0, i))


def step_ii(pres: CoxPresentation, ip: int, i: int, pool=None) -> list[tuple]:
    """One try of Step (i', i), 1-based, 1 <= i' < i."""
    A = list(range(ip)) + [i - 1]
    IA = homogenized_ideal(pres, A)
    R = IA.ring
    k = pres.k
    tp, ti = k + ip - 1, k + ip
    Tp = Ideal(R, [R.var(tp)], IA.grading)
    Ti = Ideal(R, [R.var(ti)], IA.grading)
    T = Ideal(R, [R.var(tp), R.var(ti)], IA.grading)
    if pool is not None:
        jobs = [pool.submit(intersect, IA, T), pool.submit(intersect, IA, Tp), pool.submit(intersect, IA, Ti)]
        big, a, b = (j.result() for j in jobs)
    else:
        big, a, b = intersect(IA, T), intersect(IA, Tp), intersect(IA, Ti)
    small = Ideal(R, add(a, b).gens, IA.grading)
    if not big.contains_ideal(small):
        raise CoxInternalError(f"step ({ip},{i}): the sum of intersections is not inside the intersection")
    if small.equals(big):
        return []
    rems = []
    for g in big.gb():
        r = small.normal_form(g)
        if r:
            rems.append(r)
    chosen = _select(rems, small, pres.xdeg)
    X = pres.xring
    pairs = []
    for h in chosen:
        acc: dict = {}
        for e, c in h.terms.items():
            x = e[:k]
            acc[x] = acc[x] + c if x in acc else c
        h1 = GradedPoly(X, {x: c for x, c in acc.items() if c})
        if h1.is_zero():
            continue
        w = _deg(pres, i - 1)
        low = h1.min_weighted_degree(w)
        hm = GradedPoly(X, {x: c for x, c in h1.terms.items() if sum(a * b for a, b in zip(w, x)) == low})
        hm = _with_character(pres, hm)
        pairs.append((hm, pres.alpha(hm)))
    return _admit(pres, pairs, (ip, i))


def regular_sequence_check(pres: CoxPresentation, ip: int, i: int) -> bool:
    """Independent test of the (i', i) equality.

    I_A is saturated, so t_i' is a nonzerodivisor mod I_A; the two ideals of
    the step agree iff t_i is a nonzerodivisor mod I_A + (t_i').
    """
    A = list(range(ip)) + [i - 1]
    IA = homogenized_ideal(pres, A)
    R = IA.ring
    k = pres.k
    base = Ideal(R, IA.gens + [R.var(k + ip - 1)], IA.grading)
    return quotient_variable(base, k + ip).contains_ideal(base) and base.contains_ideal(quotient_variable(base, k + ip))


def run_step(pres: CoxPresentation, label, *, cap: int = STEP_CAP, pool=None, audit=None) -> StepRecord:
    ip, i = label
    added = []
    for tries in range(1, cap + 1):
        new = step_0i(pres, i, pool) if ip == 0 else step_ii(pres, ip, i, pool)
        if not new:
            rec = StepRecord(label, tries, added)
            pres.history.append(rec)
            log.info("step (%d,%d): passed after %d tr%s", ip, i, tries, "y" if tries == 1 else "ies")
            return rec
        if audit is not None:
            audit(pres, new, label)
        names = [f"phi{pres.k + a + 1}" for a in range(len(new))]
        _extend(pres, new, names)
        added.extend(names)
        log.info("step (%d,%d): added %s", ip, i, ", ".join(names))
    raise CoxIncomplete(f"step ({ip},{i}) did not stabilize after {cap} tries; "
                        "the procedure always terminates, so this indicates a defect")


def run(G: GroupAnalysis, ring: Ring, S0, names=None, *, cap: int = STEP_CAP, threads: int = 1,
        resume: CoxPresentation | None = None, on_step=None, audit=None) -> CoxPresentation:
    """Run all steps, then attach generator records and relations."""
    pres = resume if resume is not None else start(G, ring, S0, names)
    steps = schedule(pres.m)
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while pres.position < len(steps):
            run_step(pres, steps[pres.position], cap=cap, pool=pool, audit=audit)
            pres.position += 1
            if on_step is not None:
                on_step(pres)
    finally:
        if pool is not None:
            pool.shutdown()
    finish(pres)
    return pres


def finish(pres: CoxPresentation) -> None:
    pres.generators = generator_records(pres)
    pres.relations = relations(pres)


def generator_records(pres: CoxPresentation) -> list[GeneratorRecord]:
    out = [GeneratorRecord(n, f, f.character, tuple(d)) for n, f, d in zip(pres.names, pres.S, pres.degrees)]
    for i, r in enumerate(pres.orders):
        e = [0] * pres.m
        e[i] = -r
        out.append(GeneratorRecord(f"T{i + 1}", None, None, tuple(e)))
    return out


def idempotent(pres: CoxPresentation) -> bool:
    """Re-running every step on the final S adds nothing."""
    for ip, i in schedule(pres.m):
        new = step_0i(pres, i) if ip == 0 else step_ii(pres, ip, i)
        if new:
            return False
    return True


# -- relations --------------------------------------------------------------

def relation_ring(pres: CoxPresentation) -> Ring:
    return Ring(xnames(pres.k) + [f"Y{i + 1}" for i in range(pres.m)], pres.ring.conductor)


def relations(pres: CoxPresentation) -> Ideal:
    """Relations among the X_j = phi_j t^nu(phi_j) and Y_i = t_i^{-r_i}."""
    k, m = pres.k, pres.m
    Rrel = relation_ring(pres)
    if pres.kernelI.is_zero():
        return Ideal(Rrel, [])
    IA = homogenized_ideal(pres, range(m))
    gens = []
    for g in IA.gens:
        parts: dict = {}
        for e, c in g.terms.items():
            parts.setdefault(_character_of_monomial(pres, e[:k]), {})[e] = c
        for part in parts.values():
            out = {}
            for e, c in part.items():
                ye = []
                for i, r in enumerate(pres.orders):
                    b = e[k + i]
                    if b % r:
                        raise CoxInternalError(f"t{i + 1} occurs with exponent {b}, not a multiple of {r}")
                    ye.append(b // r)
                out[tuple(e[:k]) + tuple(ye)] = c
            gens.append(GradedPoly(Rrel, out))
    I = Ideal(Rrel, gens)
    return Ideal(Rrel, I.gb())


def relation_degree(pres: CoxPresentation, e) -> tuple:
    """t-exponent vector of a monomial in the X's and Y's."""
    k = pres.k
    out = [0] * pres.m
    for j, a in enumerate(e[:k]):
        for i in range(pres.m):
            out[i] += a * pres.degrees[j][i]
    for i, b in enumerate(e[k:]):
        out[i] -= b * pres.orders[i]
    return tuple(out)


def check_relations(pres: CoxPresentation) -> bool:
    """Each relation is t-homogeneous and vanishes on the generators."""
    k = pres.k
    for g in pres.relations.gens:
        if len({relation_degree(pres, e) for e in g.terms}) != 1:
            return False
        acc = pres.ring.zero()
        for e, c in g.terms.items():
            acc = acc + pres.alpha(pres.xring.monomial(e[:k], c))
        if acc:
            return False
    return True


# -- condition (*) ----------------------------------------------------------

@dataclass
class StarCertificate:
    terms: list  # (coefficient, exponent vector over S)

    def __len__(self):
        return len(self.terms)


def verify_star(pres: CoxPresentation, f: GradedPoly, degree_cap: int | None = None) -> StarCertificate | None:
    """Write f as a combination of S-monomials m with nu_i(m) >= nu_i(f).

    Returns None when no such decomposition exists.
    """
    if f.is_zero():
        raise ValueError("condition (*) concerns nonzero invariants")
    F = pres.ring.field
    target = [nu(v, f) for v in pres.juniors]
    xdeg = pres.xdeg
    terms = []
    for d, part in f.homogeneous_parts().items():
        if degree_cap is not None and d > degree_cap:
            raise ValueError(f"f has degree {d} above the cap {degree_cap}")
        cands = []
        for e in _weighted_exponents(xdeg, d):
            ok = all(sum(a * pres.degrees[j][i] for j, a in enumerate(e)) >= target[i] for i in range(pres.m))
            if ok:
                cands.append(e)
        if not cands:
            return None
        polys = [pres.alpha(pres.xring.monomial(e)) for e in cands]
        basis = sorted({x for p in polys for x in p.terms} | set(part.terms))
        index = {x: a for a, x in enumerate(basis)}

        def vec(p):
            v = [F.zero] * len(basis)
            for x, c in p.terms.items():
                v[index[x]] = c
            return v

        sol = linalg.solve(linalg.transpose([vec(p) for p in polys]), vec(part))
        if sol is None:
            return None
        terms.extend((c, e) for c, e in zip(sol, cands) if c)
    return StarCertificate(terms)


# -- persistence --------------------------------------------------------------

STATE_VERSION = 1


def state_to_json(pres: CoxPresentation) -> dict:
    """Everything needed to resume after the completed steps."""
    from .cache import poly_to_json

    return {
        "version": STATE_VERSION,
        "names": list(pres.names),
        "S": [poly_to_json(f) for f in pres.S],
        "kernel": [poly_to_json(g) for g in pres.kernelI.gb()],
        "position": pres.position,
        "history": [[list(h.label), h.tries, list(h.added)] for h in pres.history],
        "lemma_checks": pres.lemma_checks,
    }


def state_from_json(G: GroupAnalysis, ring: Ring, doc: dict) -> CoxPresentation:
    from .cache import poly_from_json

    if doc.get("version") != STATE_VERSION:
        raise CoxError(f"saved state has version {doc.get('version')}, expected {STATE_VERSION}")
    S = [poly_from_json(ring, d) for d in doc["S"]]
    juniors = valuations(G)
    X = Ring(xnames(len(S)), ring.conductor)
    xdeg = [f.total_degree() for f in S]
    kernel = Ideal(X, [poly_from_json(X, d) for d in doc["kernel"]], xdeg)
    pres = CoxPresentation(G, ring, S, list(doc["names"]), juniors,
                           [[nu(v, f) for v in juniors] for f in S], kernel)
    pres.position = doc["position"]
    pres.history = [StepRecord(tuple(a), b, list(c)) for a, b, c in doc["history"]]
    pres.lemma_checks = doc["lemma_checks"]
    return pres
