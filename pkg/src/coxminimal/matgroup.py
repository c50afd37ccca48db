"""Finite matrix groups: closure, classes, commutator subgroup, abelianization,
eigen-data, ages and junior elements.

Action convention: a matrix g acts on polynomials by the substitution
x_j -> sum_k g[k][j] x_k, so a linear form with coefficient column c
becomes g c.  Eigen-coordinates are therefore right eigenvectors of g.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field as dc_field
from math import gcd

from . import linalg
from .exactnum import CycNum, CyclotomicField
from .snf import smith_normal_form

log = logging.getLogger(__name__)

DEFAULT_CAP = 10_000


class GroupError(ValueError):
    """Invalid group input (determinant, pseudo-reflection, size cap)."""


@dataclass
class EigenData:
    """Eigen-coordinates of one element: rows of ``basis`` are the linear
    forms x_1..x_n with g . x_i = zeta_r^{a_i} x_i."""

    element: int
    order: int
    exponents: tuple
    basis: tuple
    inverse: tuple = None

    @property
    def age(self) -> int:
        return sum(self.exponents) // self.order


@dataclass
class GroupAnalysis:
    field: CyclotomicField
    dim: int
    generators: list
    elements: list
    orders: list
    classes: list
    class_of: list
    commutator: list
    invariant_factors: tuple
    ab_image: list  # element index -> tuple of exponents mod invariant factors
    symplectic_form: tuple | None = None
    names: dict = dc_field(default_factory=dict)
    _index: dict = dc_field(default_factory=dict, repr=False)
    _eigen: dict = dc_field(default_factory=dict, repr=False)
    _products: dict = dc_field(default_factory=dict, repr=False)
    junior_override: list | None = None
    junior_words: list | None = None

    # -- element lookup ---------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g) -> int:
        return self._index[linalg.key(g)]

    def mul(self, i: int, j: int) -> int:
        k = self._products.get((i, j))
        if k is None:
            k = self.index(linalg.matmul(self.elements[i], self.elements[j]))
            self._products[(i, j)] = k
        return k

    def inv(self, i: int) -> int:
        return self.power(i, self.orders[i] - 1)

    def power(self, i: int, k: int) -> int:
        k %= self.orders[i]
        F = self.field
        M = linalg.identity(F, self.dim)
        g = self.elements[i]
        for _ in range(k):
            M = linalg.matmul(M, g)
        return self.index(M)

    @property
    def identity(self) -> int:
        return self.index(linalg.identity(self.field, self.dim))

    # -- eigen data, ages -------------------------------------------------
    def eigen_data(self, i: int) -> EigenData:
        if i not in self._eigen:
            self._eigen[i] = eigen_data(self.elements[i], self.orders[i], i)
        return self._eigen[i]

    def age(self, i: int) -> int:
        return self.eigen_data(i).age

    def fixed_subspace_codim(self, i: int) -> int:
        return fixed_subspace_codim(self.elements[i])

    # -- characters --------------------------------------------------------
    def characters(self) -> list[tuple]:
        """All characters of Ab(G), as exponent vectors on the invariant factors."""
        from itertools import product

        return [tuple(c) for c in product(*(range(d) for d in self.invariant_factors))]

    def character_product(self, a, b) -> tuple:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def character_value(self, chi, i: int) -> CycNum:
        """chi(g_i) for a character given by exponents on the invariant factors."""
        F = self.field
        total = F.one
        for c, d, a in zip(chi, self.invariant_factors, self.ab_image[i]):
            total = total * F.zeta(c * a, d)
        return total

    def character_exponent(self, chi, i: int) -> tuple:
        """chi(g_i) as (numerator, denominator) of the angle / 2 pi."""
        from fractions import Fraction

        s = sum((Fraction(c * a, d) for c, d, a in zip(chi, self.invariant_factors, self.ab_image[i])), Fraction(0))
        return s - (s.numerator // s.denominator)

    # -- juniors and diagnostics ------------------------------------------
    def junior_classes(self) -> list[int]:
        """Indices (into ``classes``) of junior conjugacy classes."""
        return [c for c, members in enumerate(self.classes) if self.age(members[0]) == 1]

    def junior_representatives(self) -> list[int]:
        if self.junior_override is not None:
            return list(self.junior_override)
        reps = []
        for c in self.junior_classes():
            rep = min(self.classes[c], key=lambda i: _matrix_sort_key(self.elements[i]))
            reps.append(rep)
        reps.sort(key=lambda i: (self.orders[i], _matrix_sort_key(self.elements[i])))
        return reps

    def junior_elements(self) -> list[int]:
        out = []
        for c in self.junior_classes():
            out.extend(self.classes[c])
        return out

    def generated_by_juniors(self) -> bool:
        return self.subgroup_order(self.junior_elements()) == self.order

    def class_group_torsion_free(self) -> bool:
        return self.subgroup_order(self.junior_elements() + list(self.commutator)) == self.order

    def subgroup_order(self, gens: list[int]) -> int:
        return len(self.subgroup(gens))

    def subgroup(self, gens: list[int]) -> set[int]:
        ident = self.identity
        seen = {ident}
        gens = sorted(set(gens))
        queue = deque([ident])
        while queue:
            a = queue.popleft()
            for g in gens:
                b = self.mul(a, g)
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return seen

    def abelianization_order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n


def _matrix_sort_key(M) -> tuple:
    return tuple(c.sort_key() for row in M for c in row)


def element_order(M, cap: int = 10_000) -> int:
    F = M[0][0].field
    I = linalg.identity(F, len(M))
    P = M
    k = 1
    while P != I:
        P = linalg.matmul(P, M)
        k += 1
        if k > cap:
            raise GroupError("element of infinite or excessive order")
    return k


def fixed_subspace_codim(M) -> int:
    F = M[0][0].field
    n = len(M)
    return linalg.rank(linalg.sub(M, linalg.identity(F, n)))


def eigen_data(M, r: int, idx: int = -1) -> EigenData:
    """Eigenvalues zeta_r^a (a ascending) and right eigenvectors in echelon form."""
    F = M[0][0].field
    n = len(M)
    if F.conductor % r:
        raise ValueError(f"zeta_{r} not in the coefficient field")
    rows, exps = [], []
    for a in range(r):
        lam = F.zeta(a, r)
        A = linalg.sub(M, linalg.scale(linalg.identity(F, n), lam))
        for v in linalg.nullspace(A, F):
            rows.append(tuple(v))
            exps.append(a)
    if len(rows) != n:
        raise ArithmeticError("matrix is not diagonalizable over the field")
    basis = tuple(rows)
    if sum(exps) % r:
        raise GroupError("eigenvalue exponents do not sum to 0 mod r (not in SL)")
    return EigenData(idx, r, tuple(exps), basis, linalg.inverse(basis))


def close_group(generators, *, cap: int = DEFAULT_CAP, symplectic_form=None,
                allow_pseudo_reflections: bool = False, names: dict | None = None) -> GroupAnalysis:
    """Enumerate the group generated by square CycNum matrices."""
    if not generators:
        raise GroupError("no generators")
    F = generators[0][0][0].field
    n = len(generators[0])
    for k, g in enumerate(generators):
        if len(g) != n or any(len(r) != n for r in g):
            raise GroupError(f"generator {k + 1} is not {n}x{n}")
        d = linalg.det(g)
        if d != 1:
            raise GroupError(f"generator {k + 1} has determinant {d}, not 1")
    ident = linalg.identity(F, n)
    elements = [ident]
    index = {linalg.key(ident): 0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for g in generators:
            b = linalg.matmul(elements[a], g)
            kb = linalg.key(b)
            if kb not in index:
                if len(elements) >= cap:
                    raise GroupError(f"group closure exceeded {cap} elements; the group may be infinite")
                index[kb] = len(elements)
                elements.append(b)
                queue.append(index[kb])
    log.info("closed group of order %d", len(elements))

    products = {}

    def mul(i, j):
        k = products.get((i, j))
        if k is None:
            k = index[linalg.key(linalg.matmul(elements[i], elements[j]))]
            products[(i, j)] = k
        return k

    gen_idx = [index[linalg.key(g)] for g in generators]

    # orders and inverses, one cyclic subgroup at a time
    orders = [0] * len(elements)
    inverse = [0] * len(elements)
    orders[0] = 1
    for i in range(1, len(elements)):
        if orders[i]:
            continue
        powers = [0]
        j = i
        while j != 0:
            powers.append(j)
            j = mul(j, i)
        r = len(powers)
        for k in range(1, r):
            p = powers[k]
            if not orders[p]:
                orders[p] = r // gcd(k, r)
                inverse[p] = powers[r - k]

    if not allow_pseudo_reflections:
        for i, M in enumerate(elements):
            if i and fixed_subspace_codim(M) == 1:
                raise GroupError("the group contains a pseudo-reflection")

    if symplectic_form is not None:
        J = symplectic_form
        for k, g in enumerate(generators):
            if linalg.matmul(linalg.matmul(linalg.transpose(g), J), g) != J:
                raise GroupError(f"generator {k + 1} does not preserve the symplectic form")

    # conjugacy classes: orbits under conjugation by the generators
    class_of = [-1] * len(elements)
    classes = []
    ginv = [inverse[g] for g in gen_idx]
    for i in range(len(elements)):
        if class_of[i] >= 0:
            continue
        c = len(classes)
        members = [i]
        class_of[i] = c
        q = deque([i])
        while q:
            a = q.popleft()
            for g, gi in zip(gen_idx, ginv):
                b = mul(mul(g, a), gi)
                if class_of[b] < 0:
                    class_of[b] = c
                    members.append(b)
                    q.append(b)
        classes.append(sorted(members))

    # commutator subgroup: normal closure of generator commutators
    comm_gens = set()
    for a, ai in zip(gen_idx, ginv):
        for b, bi in zip(gen_idx, ginv):
            comm_gens.add(mul(mul(a, b), mul(ai, bi)))
    comm_gens.discard(0)
    H = _subgroup(mul, comm_gens)
    changed = True
    while changed:
        changed = False
        for h in list(comm_gens):
            for g, gi in zip(gen_idx, ginv):
                c = mul(mul(g, h), gi)
                if c not in H:
                    comm_gens.add(c)
                    H = _subgroup(mul, comm_gens)
                    changed = True
    commutator = sorted(H)

    invariant_factors, ab_image = _abelianize(elements, gen_idx, mul, H)

    G = GroupAnalysis(
        field=F, dim=n, generators=list(generators), elements=elements, orders=orders,
        classes=classes, class_of=class_of, commutator=commutator,
        invariant_factors=invariant_factors, ab_image=ab_image,
        symplectic_form=symplectic_form, names=dict(names or {}),
    )
    G._index = index
    G._products = products
    return G


def _subgroup(mul, gens) -> set[int]:
    seen = {0}
    q = deque([0])
    gens = sorted(gens)
    while q:
        a = q.popleft()
        for g in gens:
            b = mul(a, g)
            if b not in seen:
                seen.add(b)
                q.append(b)
    return seen


def _abelianize(elements, gen_idx, mul, H: set[int]):
    """Invariant factors of G/H and the image of every element."""
    k = len(gen_idx)
    coset_of = [-1] * len(elements)
    reps = []

    def coset(i):
        if coset_of[i] < 0:
            c = len(reps)
            reps.append(i)
            for h in H:
                coset_of[mul(i, h)] = c
        return coset_of[i]

    # BFS on the Cayley graph of G/H with vectors in Z^k
    vec = {coset(0): (0,) * k}
    relations = []
    q = deque([coset(0)])
    while q:
        c = q.popleft()
        rep = reps[c]
        for s, g in enumerate(gen_idx):
            d = coset(mul(rep, g))
            v = list(vec[c])
            v[s] += 1
            v = tuple(v)
            if d in vec:
                rel = tuple(a - b for a, b in zip(v, vec[d]))
                if any(rel):
                    relations.append(rel)
            else:
                vec[d] = v
                q.append(d)
    if not relations:
        relations = [(0,) * k]
    D, U, V = smith_normal_form(relations)
    diag = [D[i][i] if i < len(D) and i < k else 0 for i in range(k)]
    keep = [i for i in range(k) if abs(diag[i]) != 1]
    factors = tuple(abs(diag[i]) for i in keep)
    if any(d == 0 for d in factors):
        raise GroupError("abelianization is infinite; the group is not finite")
    ab_image = [None] * len(elements)
    for i in range(len(elements)):
        v = vec[coset_of[i]] if coset_of[i] >= 0 else vec[coset(i)]
        w = [sum(v[r] * V[r][c] for r in range(k)) for c in range(k)]
        ab_image[i] = tuple(w[c] % diag[c] for c in keep)
    return factors, ab_image
