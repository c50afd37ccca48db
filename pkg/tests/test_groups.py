import pytest

from coxminimal import linalg
from coxminimal.exactnum import field
from coxminimal.groupfile import InputError, build_group, read_group_text
from coxminimal.matgroup import GroupError, close_group

from conftest import group

# |G| for the ADE fixtures: cyclic m+1, binary dihedral 4(m-2), binary polyhedral 24/48/120
ADE_ORDERS = {"A1": 2, "A2": 3, "A3": 4, "A4": 5, "A5": 6, "D4": 8, "D5": 12, "D6": 16,
              "E6": 24, "E7": 48, "E8": 120}
ADE_RANK = {k: int(k[1]) for k in ADE_ORDERS}


@pytest.mark.parametrize("name", sorted(ADE_ORDERS))
def test_ade_orders_and_mckay(name):
    G = group(name)
    assert G.order == ADE_ORDERS[name]
    # McKay: classes = irreducible representations = m + 1; juniors = exceptional curves = m
    assert len(G.classes) == ADE_RANK[name] + 1
    assert len(G.junior_classes()) == ADE_RANK[name]


def test_class_equation():
    for name in ["E7", "order32", "G4"]:
        G = group(name)
        assert sum(len(c) for c in G.classes) == G.order
        assert sorted(k for c in G.classes for k in c) == list(range(G.order))


@pytest.mark.parametrize("name", ["E8", "order32", "G4", "D5", "type_K"])
def test_ages_integral_and_class_functions(name):
    G = group(name)
    for c in G.classes:
        ages = {G.age(k) for k in c}
        orders = {G.orders[k] for k in c}
        assert len(ages) == 1 and len(orders) == 1
        e = G.eigen_data(c[0])
        assert sum(e.exponents) % e.order == 0


def test_abelianization_orders():
    assert group("E8").invariant_factors in ((), (1,))
    assert group("D5").abelianization_order() == 4
    assert group("order32").abelianization_order() * len(group("order32").commutator) == 32
    G4 = group("G4")
    assert G4.abelianization_order() == 3 and len(G4.commutator) == 8


def test_order32_juniors():
    G = group("order32")
    assert G.order == 32
    juniors = G.junior_representatives()
    assert len(juniors) == 5
    assert all(G.orders[k] == 2 for k in juniors)


@pytest.mark.parametrize("name,order", [("type_G_1_1", 8), ("type_G_2_1", 16), ("type_G_6_5", 48),
                                        ("type_K", 48), ("type_P", 96), ("type_Q", 96)])
def test_imprimitive_groups(name, order):
    # G(K, alpha) has twice the order of K, and preserves dx^dy + dz^dw
    G = group(name)
    assert G.order == order
    assert G.symplectic_form is not None
    assert G.generated_by_juniors()


def test_minus_identity():
    G = group("minusId4")
    assert G.order == 2
    assert G.junior_classes() == []
    assert not G.generated_by_juniors()
    assert not G.class_group_torsion_free()


def test_determinant_checked():
    F = field(4)
    i = F.zeta()
    with pytest.raises(GroupError):
        close_group([((i, F.zero), (F.zero, i))])


def test_closure_cap():
    F = field(1)
    M = ((F.one, F.one), (F.zero, F.one))  # infinite order
    with pytest.raises(GroupError):
        close_group([M], cap=50)


def test_inverse_and_power():
    G = group("D5")
    for k in range(G.order):
        assert G.mul(k, G.inv(k)) == G.identity
        assert G.power(k, G.orders[k]) == G.identity


GOOD = """\
# cyclic group of order 3
conductor: 3
dimension: 2
generator g: [[z, 0], [0, z^2]]
"""


def test_group_file_roundtrip():
    G = build_group(read_group_text(GOOD))
    assert G.order == 3
    assert len(G.junior_classes()) == 2


@pytest.mark.parametrize("text,line", [
    (GOOD.replace("conductor: 3", "conductor: x"), 2),
    (GOOD.replace("[[z, 0], [0, z^2]]", "[[z, 0], [0, z^2]"), 4),
    (GOOD + "nonsense here\n", 5),
    (GOOD.replace("generator g:", "generator:"), 4),
])
def test_group_file_errors_carry_lines(text, line):
    with pytest.raises(InputError) as exc:
        build_group(read_group_text(text, "t.grp"))
    assert exc.value.line == line
    assert f"t.grp:{line}:" in str(exc.value)


def test_group_file_missing_lines():
    with pytest.raises(InputError):
        read_group_text("dimension: 2\ngenerator g: [[1,0],[0,1]]\n")


def test_bad_determinant_reported_as_input_error():
    text = GOOD.replace("[[z, 0], [0, z^2]]", "[[z, 0], [0, z]]")
    with pytest.raises(InputError):
        build_group(read_group_text(text))


def test_junior_words_validated():
    text = GOOD + "juniors: g\n"
    with pytest.raises(InputError):
        build_group(read_group_text(text))
    G = build_group(read_group_text(GOOD + "juniors: g, g^2\n"))
    assert G.junior_words == ["g", "g^2"]


def test_matrix_helpers():
    F = field(4)
    i = F.zeta()
    M = ((i, F.zero), (F.zero, -i))
    assert linalg.det(M) == F.one
    assert linalg.matmul(M, M) == ((-F.one, F.zero), (F.zero, -F.one))
