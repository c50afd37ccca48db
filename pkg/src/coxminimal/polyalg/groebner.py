"""Buchberger's algorithm with sugar selection and Gebauer-Moeller criteria.

Polynomials inside the engine are plain dicts ``{exponent: fmpq_poly}``
with coefficients already reduced modulo the cyclotomic polynomial.
Every basis element is kept monic.
"""

from __future__ import annotations

import heapq
import logging
import time

import flint

log = logging.getLogger(__name__)

PROGRESS_SECONDS = 10.0


class _Basis:
    __slots__ = ("polys", "lms", "masks", "sugars", "active", "tails")

    def __init__(self):
        self.polys = []
        self.lms = []
        self.masks = []
        self.sugars = []
        self.active = []
        self.tails = []


def _mask(e):
    m = 0
    for i, k in enumerate(e):
        if k:
            m |= 1 << i
    return m


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


class Engine:
    """Gröbner machinery for one coefficient field and one monomial order."""

    def __init__(self, modulus: flint.fmpq_poly, order):
        self.mod = modulus
        self.deg = modulus.degree()
        self.order = order
        self.key = order.key
        self.weight = order.positive_row()

    # -- coefficient helpers ------------------------------------------------
    def _inv(self, c):
        if c.degree() == 0:
            return flint.fmpq_poly([1 / c.coeffs()[0]])
        g, s, _ = c.xgcd(self.mod)
        return (s / g) % self.mod

    def _mulc(self, a, b):
        p = a * b
        if p.degree() >= self.deg:
            p = p % self.mod
        return p

    def monic(self, f: dict) -> dict:
        if not f:
            return f
        lm = max(f, key=self.key)
        c = f[lm]
        if c.is_one():
            return f
        inv = self._inv(c)
        return {e: self._mulc(v, inv) for e, v in f.items()}

    def sugar_of(self, f: dict) -> int:
        w = self.weight
        return max(sum(a * b for a, b in zip(w, e)) for e in f)

    # -- normal forms -------------------------------------------------------
    def _find_reducer(self, B: _Basis, e, em):
        lms, masks, active = B.lms, B.masks, B.active
        for j in range(len(lms)):
            if active[j] and not (masks[j] & ~em) and _divides(lms[j], e):
                return j
        return -1

    def reduce(self, f: dict, B: _Basis, full: bool = True) -> dict:
        """Normal form of f modulo the active basis elements (monic)."""
        if not f:
            return {}
        key = self.key
        work = dict(f)
        heap = [(tuple(-k for k in key(e)), e) for e in work]
        heapq.heapify(heap)
        out = {}
        mod, deg = self.mod, self.deg
        lms = B.lms
        cache = {}
        while heap:
            _, e = heapq.heappop(heap)
            c = work.pop(e, None)
            if c is None:
                continue
            if out and not full:
                out[e] = c
                continue
            em = cache.get(e)
            if em is None:
                em = _mask(e)
            j = self._find_reducer(B, e, em)
            if j < 0:
                out[e] = c
                continue
            lm = lms[j]
            q = tuple(x - y for x, y in zip(e, lm))
            for ge, gc in B.tails[j]:
                ne = tuple(x + y for x, y in zip(ge, q))
                p = c * gc
                if p.degree() >= deg:
                    p = p % mod
                v = work.get(ne)
                if v is None:
                    work[ne] = -p
                    heapq.heappush(heap, (tuple(-k for k in key(ne)), ne))
                else:
                    v = v - p
                    if v.is_zero():
                        del work[ne]
                    else:
                        work[ne] = v
        return out

    def _add(self, B: _Basis, f: dict, sugar: int) -> int:
        lm = max(f, key=self.key)
        B.polys.append(f)
        B.lms.append(lm)
        B.masks.append(_mask(lm))
        B.sugars.append(sugar)
        B.active.append(True)
        B.tails.append([(e, c) for e, c in f.items() if e != lm])
        return len(B.polys) - 1

    # -- the main loop ------------------------------------------------------
    def groebner(self, gens, progress_label: str = "") -> list[dict]:
        """Reduced Gröbner basis of the ideal spanned by ``gens``."""
        key = self.key
        B = _Basis()
        pairs = []  # heap of (sugar, lcmkey, i, j, lcm)
        inputs = []
        for f in gens:
            f = {e: c for e, c in f.items() if not c.is_zero()}
            if f:
                inputs.append(f)
        inputs.sort(key=lambda f: (self.sugar_of(f), key(max(f, key=key))))
        for f in inputs:
            s = self.sugar_of(f)
            h = self.reduce(f, B)
            if h:
                h = self.monic(h)
                self._update(B, pairs, h, s)
        start = last = time.monotonic()
        processed = 0
        while pairs:
            sug, _, i, j, lcm = heapq.heappop(pairs)
            processed += 1
            spoly = self._spoly(B, i, j, lcm)
            if spoly:
                h = self.reduce(spoly, B)
                if h:
                    h = self.monic(h)
                    self._update(B, pairs, h, max(sug, self.sugar_of(h)))
            now = time.monotonic()
            if now - last > PROGRESS_SECONDS:
                last = now
                log.info("groebner %s: %d pairs done, %d queued, basis %d, sugar %d, %.0fs",
                         progress_label, processed, len(pairs), sum(B.active), sug, now - start)
        return self._interreduce(B)

    def _spoly(self, B: _Basis, i, j, lcm) -> dict:
        out = {}
        for idx, sign in ((i, 1), (j, -1)):
            q = tuple(x - y for x, y in zip(lcm, B.lms[idx]))
            for e, c in B.tails[idx]:
                ne = tuple(x + y for x, y in zip(e, q))
                v = out.get(ne)
                if sign < 0:
                    c = -c
                if v is None:
                    out[ne] = c
                else:
                    v = v + c
                    if v.is_zero():
                        del out[ne]
                    else:
                        out[ne] = v
        return out

    def _update(self, B: _Basis, pairs, h: dict, sugar: int):
        """Insert h and its pairs, applying the Gebauer-Moeller criteria."""
        key = self.key
        w = self.weight
        hn = self._add(B, h, sugar)
        lh = B.lms[hn]
        cand = []
        for g in range(hn):
            if B.active[g]:
                cand.append((g, _lcm(lh, B.lms[g])))
        # criterion M / F: drop pairs whose lcm is a proper multiple of another
        keep = []
        for a, (g, l) in enumerate(cand):
            redundant = False
            for b, (g2, l2) in enumerate(cand):
                if a == b:
                    continue
                if _divides(l2, l):
                    if l2 != l:
                        redundant = True
                        break
                    # equal lcms: keep only the first
                    if b < a:
                        redundant = True
                        break
            if not redundant:
                keep.append((g, l))
        new = []
        for g, l in keep:
            # Buchberger's product criterion
            if all(x + y == z for x, y, z in zip(lh, B.lms[g], l)):
                continue
            new.append((g, l))
        # criterion B on the old pairs
        old = []
        for item in pairs:
            _, _, i, j, l = item
            if _divides(lh, l):
                lhi = _lcm(lh, B.lms[i])
                lhj = _lcm(lh, B.lms[j])
                if lhi != l and lhj != l:
                    continue
            old.append(item)
        if len(old) != len(pairs):
            pairs[:] = old
            heapq.heapify(pairs)
        for g, l in new:
            qh = sum(a * (x - y) for a, x, y in zip(w, l, lh))
            qg = sum(a * (x - y) for a, x, y in zip(w, l, B.lms[g]))
            s = max(sugar + qh, B.sugars[g] + qg)
            heapq.heappush(pairs, (s, key(l), g, hn, l))
        for g in range(hn):
            if B.active[g] and _divides(lh, B.lms[g]):
                B.active[g] = False

    def _interreduce(self, B: _Basis) -> list[dict]:
        key = self.key
        idx = [i for i in range(len(B.polys)) if B.active[i]]
        # minimal basis: drop elements whose leading monomial is divisible by another
        minimal = []
        for i in sorted(idx, key=lambda i: key(B.lms[i])):
            if not any(_divides(B.lms[j], B.lms[i]) for j in minimal):
                minimal.append(i)
        R = _Basis()
        for i in minimal:
            self._add(R, B.polys[i], B.sugars[i])
        out = []
        for n in range(len(R.polys)):
            R.active[n] = False
            f = R.polys[n]
            lm = R.lms[n]
            tail = {e: c for e, c in f.items() if e != lm}
            red = self.reduce(tail, R)
            red[lm] = f[lm]
            out.append(red)
            R.active[n] = True
        out.sort(key=lambda f: key(max(f, key=key)))
        return out

    # -- utilities ----------------------------------------------------------
    def normal_form(self, f: dict, gb: list[dict]) -> dict:
        B = _Basis()
        for g in gb:
            self._add(B, g, 0)
        return self.reduce(f, B)

    def basis_of(self, gb: list[dict]) -> _Basis:
        B = _Basis()
        for g in gb:
            self._add(B, g, 0)
        return B
