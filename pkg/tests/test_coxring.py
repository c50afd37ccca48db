import json
from fractions import Fraction
from math import gcd

import pytest

from conftest import presentation, seeds
from coxminimal import coxring
from coxminimal.valuation import min_part


def test_schedule():
    assert coxring.schedule(1) == [(0, 1)]
    assert coxring.schedule(3) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_cyclic_generators(m):
    pres = presentation(f"A{m}")
    n = m + 1
    assert pres.k == 2 and len(pres.generators) == m + 2
    assert pres.relations.is_zero()
    for i, r in enumerate(pres.orders):
        k = i + 1
        assert r == n // gcd(k, n)
        assert sorted(g.exponents[i] for g in pres.generators[:2]) == sorted(
            [Fraction(k * r, n), r - Fraction(k * r, n)])
        assert pres.generators[2 + i].exponents == tuple(-r if j == i else 0 for j in range(m))


def test_start_rejects_bad_input():
    G, R, names, polys = seeds("A2")
    with pytest.raises(coxring.CoxError):
        coxring.start(G, R, [], [])
    with pytest.raises(coxring.CoxError):
        coxring.start(G, R, [p.with_character(None) for p in polys], names)


def test_every_step_passes_first_try_on_order32():
    pres = presentation("order32")
    assert len(pres.history) == 15
    assert all(h.tries == 1 and not h.added for h in pres.history)
    assert pres.k == 10


def test_d_relation_is_principal():
    for name in ["D4", "D5", "D6"]:
        pres = presentation(name)
        assert len(pres.relations.gens) == 1
        assert coxring.check_relations(pres)


def test_idempotent():
    assert coxring.idempotent(presentation("D5"))
    assert coxring.idempotent(presentation("E6"))


def test_regular_sequence_cross_check():
    pres = presentation("D4")
    for ip, i in coxring.schedule(pres.m):
        if ip:
            assert coxring.regular_sequence_check(pres, ip, i)


def test_min_ideal_routes_agree():
    G, R, names, polys = seeds("D5")
    pres = coxring.start(G, R, polys, names)
    for i in range(pres.m):
        a = coxring.min_ideal_J(pres, i, "homogenize")
        b = coxring.min_ideal_J(pres, i, "intersect")
        assert a.equals(b)


def test_d_min_parts_at_the_reflection_juniors():
    # min_k(x^{m-2} + (iy)^{m-2}) is a power of the i-eigenvector x + iy at k = m-1
    G, R, names, polys = seeds("D5")
    pres = coxring.start(G, R, polys, names)
    v = pres.juniors[3]
    part = min_part(v, polys[0], eigen_coordinates=False)
    i = R.field.zeta(1, 4)
    lin = R.var("x") + R.var("y").scale(i)
    ratio = None
    for e, c in (lin ** 3).terms.items():
        q = part.terms[e] / c
        ratio = ratio or q
        assert q == ratio
    assert len(part.terms) == 4


def test_relations_in_the_relation_ring():
    pres = presentation("D4")
    Rrel = coxring.relation_ring(pres)
    assert Rrel.names == ("X1", "X2", "X3", "Y1", "Y2", "Y3", "Y4")
    g = pres.relations.gens[0]
    degs = {coxring.relation_degree(pres, e) for e in g.terms}
    assert len(degs) == 1


def test_state_roundtrip_and_resume():
    G, R, names, polys = seeds("D5")
    saved = []
    full = coxring.run(G, R, polys, names, on_step=lambda p: saved.append(json.dumps(coxring.state_to_json(p))))
    assert len(saved) == len(coxring.schedule(full.m))
    mid = coxring.state_from_json(G, R, json.loads(saved[6]))
    assert mid.position == 7 and len(mid.history) == 7
    resumed = coxring.run(G, R, polys, names, resume=mid)
    assert resumed.position == full.position
    assert [str(f) for f in resumed.S] == [str(f) for f in full.S]
    assert resumed.relations.equals(full.relations)
    assert resumed.lemma_checks == full.lemma_checks
    doc = json.loads(saved[0])
    doc["version"] = 99
    with pytest.raises(coxring.CoxError):
        coxring.state_from_json(G, R, doc)


def test_threads_give_the_same_presentation():
    G, R, names, polys = seeds("D6")
    a = coxring.run(G, R, polys, names, threads=1)
    b = coxring.run(G, R, polys, names, threads=4)
    assert [str(f) for f in a.S] == [str(f) for f in b.S]
    assert [g.terms for g in a.relations.gens] == [g.terms for g in b.relations.gens]


def test_star_on_seed_products():
    pres = presentation("E6")
    f = pres.S[0] * pres.S[2] + pres.S[2] ** 2
    cert = coxring.verify_star(pres, f)
    assert cert is not None and len(cert) >= 1
    with pytest.raises(ValueError):
        coxring.verify_star(pres, pres.ring.zero())
    big = pres.S[2] ** 3
    with pytest.raises(ValueError):
        coxring.verify_star(pres, big, degree_cap=12)


def test_relation_ideal_contains_kernel_image():
    # setting every Y to 1 sends the relations into ker(alpha)
    pres = presentation("E7")
    k = pres.k
    for g in pres.relations.gens:
        poly = pres.xring.zero()
        for e, c in g.terms.items():
            poly = poly + pres.xring.monomial(e[:k], c)
        assert poly and pres.kernelI.contains(poly)
