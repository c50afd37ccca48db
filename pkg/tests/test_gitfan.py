import itertools
import random
from fractions import Fraction
from math import atan2, gcd, pi

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from coxminimal import gitfan
from coxminimal.coxring import GeneratorRecord
from coxminimal.gitfan import Cone, FanError, chamber_of, refinement_fan

G4_DEGREES = [(0, 0)] * 8 + [(2, 1)] * 5 + [(1, 2)] * 5 + [(3, 3), (-3, 0), (0, -3)]


def prim(v):
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return tuple(int(x) // g for x in v)


def angle(v):
    a = atan2(v[1], v[0])
    return a if a >= 0 else a + 2 * pi


def solve2(a, b, q):
    det = a[0] * b[1] - a[1] * b[0]
    if det == 0:
        return None
    return (Fraction(q[0] * b[1] - q[1] * b[0], det), Fraction(a[0] * q[1] - a[1] * q[0], det))


def sector_oracle(degrees):
    """Rank-2 chambers: sectors between angularly adjacent degree directions
    that lie in some cone spanned by two independent degrees."""
    dirs = sorted({prim(d) for d in degrees if any(d)}, key=angle)
    out = set()
    for k, a in enumerate(dirs):
        b = dirs[(k + 1) % len(dirs)]
        if len(dirs) < 2 or (angle(b) - angle(a)) % (2 * pi) >= pi:
            continue
        q = (a[0] + b[0], a[1] + b[1])
        if any((x := solve2(u, v, q)) and x[0] > 0 and x[1] > 0
               for u, v in itertools.combinations(dirs, 2)):
            out.add(frozenset([a, b]))
    return out


def signature_oracle(degrees, samples, seed=1):
    """Count chambers as distinct sets of simplicial cones strictly containing a random point."""
    import sympy

    m = len(degrees[0])
    inverses = []
    for B in itertools.combinations(range(len(degrees)), m):
        M = sympy.Matrix([degrees[j] for j in B]).T
        if M.det() != 0:
            inverses.append([[float(x) for x in row] for row in M.inv().tolist()])
    rng = random.Random(seed)
    sigs = set()
    for _ in range(samples):
        q = [rng.uniform(-1, 1) for _ in range(m)]
        sig = frozenset(i for i, Minv in enumerate(inverses)
                        if all(sum(r[c] * q[c] for c in range(m)) > 1e-12 for r in Minv))
        if sig:
            sigs.add(sig)
    return len(sigs)


def pair_configuration(m):
    degs = []
    for i, j in itertools.combinations(range(m), 2):
        v = [0] * m
        v[i] = v[j] = 1
        degs.append(tuple(v))
    for i in range(m):
        v = [0] * m
        v[i] = -2
        degs.append(tuple(v))
    return degs


# -- the G4 picture ---------------------------------------------------------------

def test_g4_fan():
    fan = refinement_fan(G4_DEGREES)
    assert fan.rays == sorted([(-1, 0), (0, -1), (2, 1), (1, 1), (1, 2)])
    assert len(fan.chambers) == 5
    assert {frozenset(c.rays) for c in fan.chambers} == sector_oracle(G4_DEGREES)


def test_g4_movable_cone():
    recs = [GeneratorRecord(f"g{k}", object(), None, d) for k, d in enumerate(G4_DEGREES[:-2])]
    recs += [GeneratorRecord("T1", None, None, (-3, 0)), GeneratorRecord("T2", None, None, (0, -3))]

    class Pres:
        generators = recs

    mov = gitfan.movable_cone(Pres)
    assert sorted(mov.rays) == [(1, 2), (2, 1)]
    fan = refinement_fan(G4_DEGREES)
    assert gitfan.movable_by_exclusion(fan) == mov
    inner = refinement_fan(G4_DEGREES, within=mov)
    assert sorted(sorted(c.rays) for c in inner.chambers) == [[(1, 1), (1, 2)], [(1, 1), (2, 1)]]


def test_chamber_of():
    fan = refinement_fan(G4_DEGREES)
    loc = chamber_of(fan, (1, 1))
    assert loc.kind == "wall" and loc.rays == [(1, 1)] and len(loc.chambers) == 2
    loc = chamber_of(fan, (3, 2))
    assert loc.kind == "chamber"
    assert fan.chambers[loc.chambers[0]].contains((3, 2), strict=True)
    assert chamber_of(fan, (0, 0)).kind == "origin"
    half = refinement_fan([(1, 0), (0, 1)])
    assert chamber_of(half, (-1, -1)).kind == "exterior"


def test_small_cases():
    line = refinement_fan([(1,), (-1,), (2,)])
    assert sorted(c.rays for c in line.chambers) == [[(-1,)], [(1,)]]
    orthant = refinement_fan([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert len(orthant.chambers) == 1
    with pytest.raises(FanError):
        refinement_fan([])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=2, max_size=7))
def test_rank_two_matches_sectors(degrees):
    assume(any(solve2(a, b, (1, 1)) is not None for a, b in itertools.combinations(degrees, 2)))
    fan = refinement_fan(degrees)
    assert {frozenset(c.rays) for c in fan.chambers} == sector_oracle(degrees)


def test_pair_configuration_rank_three():
    degs = pair_configuration(3)
    fan = refinement_fan(degs)
    assert len(fan.chambers) == signature_oracle(degs, 20000) == 14


def test_pair_configuration_rank_four():
    # 137 = signature_oracle(pair_configuration(4), 300000), frozen
    fan = refinement_fan(pair_configuration(4))
    assert len(fan.chambers) == 137


def test_fan_limit():
    with pytest.raises(FanError):
        refinement_fan(pair_configuration(4), max_chambers=50)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_points_lie_in_one_chamber(seed):
    fan = refinement_fan(pair_configuration(3))
    rng = random.Random(seed)
    q = [rng.randint(-100, 100) for _ in range(3)]
    inside = [k for k, c in enumerate(fan.chambers) if c.contains(q, strict=True)]
    assert len(inside) <= 1
    if inside:
        assert chamber_of(fan, q).chambers == inside


def test_cone_spanned():
    c = Cone.spanned([(1, 0), (0, 1), (1, 1)])
    assert sorted(c.rays) == [(0, 1), (1, 0)]
    assert c.contains((1, 1), strict=True) and not c.contains((1, 0), strict=True)
    half = Cone.spanned([(1, 0), (-1, 0), (0, 1)])
    assert half.contains((5, 1), strict=True) and not half.contains((0, -1))
    whole = Cone.spanned([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert whole.contains((3, -7), strict=True)


def test_svg():
    fan = refinement_fan(G4_DEGREES)
    pic = gitfan.svg(fan, title="fan")
    assert pic.startswith("<svg") and pic.rstrip().endswith("</svg>")
    assert pic.count("<line") >= 5
    with pytest.raises(FanError):
        gitfan.svg(refinement_fan(pair_configuration(3)))
