"""Ideal operations against an exhaustive linear-algebra membership oracle.

For homogeneous ideals in two variables every graded piece I_d is the span
of the shifts m*g with deg m + deg g = d, so intersections, quotients and
saturations can be computed degree by degree with plain linear algebra
over Q.  The oracle never touches the Gröbner engine.
"""

import random
from math import gcd

import flint
import pytest

from coxminimal.polyalg import Ideal, Ring, intersect, quotient, saturate

R = Ring(["x", "y"])
TOP = 8  # degrees compared
SAT = 12  # power of x used for the saturation oracle


def as_dict(f):
    """Integer coefficients: the rational ones scaled by a common denominator."""
    qs = {e: c.rational() for e, c in f.terms.items()}
    den = 1
    for c in qs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return {e: int(c * den) for e, c in qs.items()}


def degree(g):
    return sum(next(iter(g)))


def shifts(g, d):
    """All m*g of total degree d, as coefficient rows over the monomials of degree d."""
    k = d - degree(g)
    if k < 0:
        return []
    rows = []
    for a in range(k + 1):
        row = [0] * (d + 1)
        for (i, j), c in g.items():
            row[i + a] += c  # column index = exponent of x
        rows.append(row)
    return rows


def rank(rows, width):
    if not rows:
        return 0
    return flint.fmpz_mat(rows).rank()


def piece(gens, d):
    rows = []
    for g in gens:
        rows += shifts(g, d)
    return rows


def dim(gens, d):
    return rank(piece(gens, d), d + 1)


def inside(small, big, d):
    """small_d ⊆ big_d."""
    b = piece(big, d)
    return rank(b, d + 1) == rank(b + piece(small, d), d + 1)


def quotient_dim(I, J, d):
    """dim (I : J)_d from the kernel of (a, b) -> f_a*g_j - sum b_k B_jk.

    The b-part of the kernel has the dimension of the relations among the
    rows B_jk, which is subtracted off.
    """
    blocks = [(g, degree(g), piece(I, d + degree(g))) for g in J]
    ncols = (d + 1) + sum(len(B) for _, _, B in blocks)
    rows = []
    offset = d + 1
    slack = 0
    for g, e, B in blocks:
        for col in range(d + e + 1):
            row = [0] * ncols
            for a in range(d + 1):  # f = sum a_a x^a y^(d-a)
                for (i, j), c in g.items():
                    if i + a == col:
                        row[a] += c
            for k, b in enumerate(B):
                row[offset + k] -= b[col]
            rows.append(row)
        offset += len(B)
        slack += len(B) - rank(B, d + e + 1)
    return ncols - rank(rows, ncols) - slack


def random_form(rng, d):
    while True:
        terms = {}
        for a in range(d + 1):
            if rng.random() < 0.6:
                c = rng.randint(-3, 3)
                if c:
                    terms[(a, d - a)] = c
        if terms:
            return terms


def to_poly(g):
    return sum((R.monomial(e, int(c)) for e, c in g.items()), R.zero())


def random_ideal(rng):
    return [random_form(rng, rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]


def ideal(gens):
    return Ideal(R, [to_poly(g) for g in gens], [1, 1])


def gens_of(I):
    return [as_dict(g) for g in I.gens if g]


def check_intersection(A, B, K=None):
    K = gens_of(K if K is not None else intersect(ideal(A), ideal(B)))
    for d in range(TOP + 1):
        expected = dim(A, d) + dim(B, d) - dim(A + B, d)
        assert inside(K, A, d) and inside(K, B, d)
        assert dim(K, d) == expected, d


def check_quotient(A, B, Q=None):
    Q = gens_of(Q if Q is not None else quotient(ideal(A), ideal(B)))
    for d in range(TOP + 1):
        assert dim(Q, d) == quotient_dim(A, B, d), d
        for g in B:
            prod = [p for p in (_mul(q, g) for q in Q) if p]
            assert inside(prod, A, d + degree(g))


def _mul(p, q):
    out = {}
    for (i, j), c in p.items():
        for (k, l), c2 in q.items():
            e = (i + k, j + l)
            out[e] = out.get(e, 0) + c * c2
    return {e: c for e, c in out.items() if c}


def check_saturation(A, S=None):
    S = gens_of(S if S is not None else saturate(ideal(A), 0))
    xk = [{(SAT, 0): 1}]
    for d in range(TOP + 1):
        assert dim(S, d) == quotient_dim(A, xk, d), d


def trials(n=100, seed=20240607):
    rng = random.Random(seed)
    return [(random_ideal(rng), random_ideal(rng)) for _ in range(n)]


def library_results(cases):
    """(intersection, quotient, saturation) per case, from the Gröbner engine."""
    out = []
    for A, B in cases:
        I, J = ideal(A), ideal(B)
        out.append((intersect(I, J), quotient(I, J), saturate(I, 0)))
    return out


def check_all(cases, results):
    for (A, B), (K, Q, S) in zip(cases, results):
        check_intersection(A, B, K)
        check_quotient(A, B, Q)
        check_saturation(A, S)


def test_micro_oracles_100_trials():
    cases = trials()
    check_all(cases, library_results(cases))


@pytest.mark.parametrize("A,B", [
    ([{(1, 0): 1}], [{(0, 1): 1}]),  # (x) ∩ (y) = (xy)
    ([{(2, 0): 1}, {(1, 1): 1}], [{(1, 0): 1}]),
])
def test_hand_examples(A, B):
    check_intersection(A, B)
    check_quotient(A, B)
    check_saturation(A)


def test_saturation_removes_embedded_component():
    # (x^2, xy) = (x) ∩ (x^2, y): saturating by y gives (x), by x the unit ideal
    I = Ideal(R, [R.parse("x^2"), R.parse("x*y")], [1, 1])
    assert saturate(I, 1).equals(Ideal(R, [R.parse("x")], [1, 1]))
    assert saturate(I, 0).is_unit()
