"""Built-in groups, expanded to group-file text.

Tags: ``ADE A m``, ``ADE D m``, ``ADE E 6|7|8``, ``order32``, ``G4``,
``minusId4``, ``type_G l r``, ``type_J``, ``type_K``, ``type_P``,
``type_Q``, ``type_U``, ``type_V``.
"""

from __future__ import annotations

from math import gcd

from . import linalg
from .exactnum import field

__all__ = ["expand", "TAGS"]

TAGS = ("ADE", "order32", "G4", "minusId4", "type_G", "type_J", "type_K",
        "type_P", "type_Q", "type_U", "type_V")


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


class _Consts:
    """Frequently used constants of Q(zeta_N) as CycNum values."""

    def __init__(self, N: int):
        self.N = N
        self.F = F = field(N)
        self.one = F.one
        self.zero = F.zero
        if N % 4 == 0:
            self.i = F.zeta(1, 4)
        if N % 8 == 0:
            z8 = F.zeta(1, 8)
            self.z8 = z8
            self.inv_sqrt2 = (z8 - z8 ** 3) / 2
        if N % 5 == 0:
            z5 = F.zeta(1, 5)
            self.sqrt5 = 2 * (z5 + z5 ** 4) + 1
            self.phi = (1 + self.sqrt5) / 2

    def m(self, rows):
        return linalg.mat(self.F, rows)


def _text(N: int, gens: dict, juniors=None, elements=None, symplectic=None, comment: str = "") -> str:
    n = len(next(iter(gens.values())))
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"conductor: {N}")
    lines.append(f"dimension: {n}")
    for name, M in gens.items():
        lines.append(f"generator {name}: {_fmt(M)}")
    for name, M in (elements or {}).items():
        lines.append(f"element {name}: {M if isinstance(M, str) else _fmt(M)}")
    if juniors:
        lines.append("juniors: " + ", ".join(juniors))
    if symplectic is not None:
        lines.append(f"symplectic: {_fmt(symplectic)}")
    return "\n".join(lines) + "\n"


def _fmt(M) -> str:
    return "[" + ", ".join("[" + ", ".join(str(c) for c in row) + "]" for row in M) + "]"


def _block(A, B):
    F = A[0][0].field
    z = F.zero
    return tuple(tuple(A[i]) + (z, z) for i in range(2)) + tuple((z, z) + tuple(B[i]) for i in range(2))


def _swap(F):
    return linalg.mat(F, [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])


def _omega_form(F):
    # dx^dy + dz^dw
    return linalg.mat(F, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def _pow(M, k):
    F = M[0][0].field
    if k < 0:
        M = linalg.inverse(M)
        k = -k
    P = linalg.identity(F, len(M))
    for _ in range(k):
        P = linalg.matmul(P, M)
    return P


def _neg(M):
    return linalg.scale(M, M[0][0].field(-1))


# --- two-dimensional groups ---------------------------------------------------

def _ade_a(m: int) -> str:
    N = m + 1
    c = _Consts(N)
    z = c.F.zeta(1, N)
    g1 = c.m([[z, 0], [0, z ** m]])
    return _text(N, {"g1": g1}, [f"g1^{k}" if k > 1 else "g1" for k in range(1, m + 1)],
                 comment=f"cyclic group of order {m + 1} (A_{m})")


def _ade_d(m: int) -> str:
    if m < 4:
        raise ValueError("D_m needs m >= 4")
    N = _lcm(2 * (m - 2), 4)
    c = _Consts(N)
    z = c.F.zeta(1, 2 * (m - 2))
    g1 = c.m([[z, 0], [0, z.inverse()]])
    s = c.m([[0, 1], [-1, 0]])
    juniors = ["g1" if k == 1 else f"g1^{k}" for k in range(1, m - 1)] + [f"g{m - 1}", f"g{m - 1}*g1"]
    return _text(N, {"g1": g1, f"g{m - 1}": s}, juniors,
                 comment=f"binary dihedral group of order {4 * (m - 2)} (D_{m})")


def _ade_e(m: int) -> str:
    if m == 6:
        N = 24
        c = _Consts(N)
        i, z = c.i, c.z8
        g1 = c.m([[i, 0], [0, -i]])
        g2 = linalg.scale(c.m([[z, z], [z ** 3, z ** 7]]), c.inv_sqrt2)
        juniors = ["g1", "g2", "g2^2", "g2^3", "g2^4", "g2^5"]
        return _text(N, {"g1": g1, "g2": g2}, juniors, comment="binary tetrahedral group (E_6)")
    if m == 7:
        N = 24
        c = _Consts(N)
        i, z = c.i, c.z8
        g1 = c.m([[z, 0], [0, z ** 7]])
        g5 = linalg.scale(c.m([[z, z], [z ** 3, z ** 7]]), c.inv_sqrt2)
        g7 = linalg.scale(c.m([[i, 1], [-1, -i]]), c.inv_sqrt2)
        juniors = ["g1", "g1^2", "g1^3", "g1^4", "g5", "g5^2", "g7"]
        return _text(N, {"g1": g1, "g5": g5}, juniors, elements={"g7": g7},
                     comment="binary octahedral group (E_7)")
    if m == 8:
        N = 60
        c = _Consts(N)
        e = c.F.zeta(1, 10)
        g1 = c.m([[e, 0], [0, e ** 9]])
        # off-diagonal of h is the negative of the printed one, so the listed invariants are fixed
        h = linalg.scale(c.m([[e ** 2 - e ** 8, e ** 6 - e ** 4], [e ** 6 - e ** 4, e ** 8 - e ** 2]]),
                         c.sqrt5.inverse())
        g8 = c.m([[0, 1], [-1, 0]])
        juniors = ["g1", "g1^2", "g1^3", "g1^4", "g1^5", "-g1*h", "(-g1*h)^2", "g8"]
        return _text(N, {"g1": g1, "h": h, "g8": g8}, juniors, comment="binary icosahedral group (E_8)")
    raise ValueError(f"no exceptional group E_{m}")


# --- four-dimensional groups --------------------------------------------------

def _order32() -> str:
    c = _Consts(4)
    i = c.i
    g1 = c.m([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])
    g2 = c.m([[0, i, 0, 0], [-i, 0, 0, 0], [0, 0, 0, -i], [0, 0, i, 0]])
    g3 = c.m([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    g4 = c.m([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
    return _text(4, {"g1": g1, "g2": g2, "g3": g3, "g4": g4},
                 ["g1", "g2", "g3", "g4", "g1*g2*g3*g4"],
                 comment="group of order 32 in SL(4)")


def _g4() -> str:
    N = 12
    c = _Consts(N)
    i = c.i
    w = c.F.zeta(1, 3)
    w2 = w * w
    a, b = 1 + i, 1 - i
    g1 = c.m([[a * w, a * w, 0, 0], [(-1 + i) * w, b * w, 0, 0],
              [0, 0, b * w2, b * w2], [0, 0, (-1 - i) * w2, a * w2]])
    # g2 as printed is not in SL(4); here w and w^2 are exchanged between the
    # blocks and the last row is the inverse transpose of the upper block
    g2 = c.m([[a * w2, b * w2, 0, 0], [(-1 - i) * w2, b * w2, 0, 0],
              [0, 0, b * w, a * w], [0, 0, (-1 + i) * w, a * w]])
    half = c.F(-1) / 2
    g1 = linalg.scale(g1, half)
    g2 = linalg.scale(g2, half)
    # junior order chosen so that nu_1 is 2 on phi9..phi13 of the shipped invariants
    return _text(N, {"g1": g1, "g2": g2}, ["g2", "g1"], comment="complex reflection group G_4 on V + V*")


def _minus_id4() -> str:
    F = field(1)
    M = linalg.scale(linalg.identity(F, 4), F(-1))
    return _text(1, {"g1": M}, comment="{Id, -Id} in SL(4); no junior elements")


def _gk(N: int, k_gens, a_gens, comment: str, extra=None) -> str:
    """G(K, alpha): block diagonal lifts of K and the coordinate swap."""
    F = field(N)
    gens = {}
    for n, (x, ax) in enumerate(zip(k_gens, a_gens), 1):
        gens[f"k{n}"] = _block(x, ax)
    gens["s"] = _swap(F)
    if extra is not None:
        gens["e"] = extra
    return _text(N, gens, None, symplectic=_omega_form(F), comment=comment)


def _type_g(l: int, r: int) -> str:
    if not (1 <= r <= l and r % 2 == 1 and l == gcd(l, (r + 1) // 2) * gcd(l, (r - 1) // 2)):
        raise ValueError(f"type_G needs r <= l, r odd and l = gcd(l,(r+1)/2) gcd(l,(r-1)/2); got l={l}, r={r}")
    N = _lcm(2 * l, 4)
    c = _Consts(N)
    z = c.F.zeta(1, 2 * l)
    g1 = c.m([[z, 0], [0, z.inverse()]])
    g2 = c.m([[0, c.i], [c.i, 0]])
    return _gk(N, [g1, g2], [_pow(g1, r), _neg(g2)], f"G(K, alpha) of type G with l={l}, r={r}")


def _k_data():
    c = _Consts(8)
    z, i = c.z8, c.i
    g1 = c.m([[i, 0], [0, -i]])
    g2 = linalg.scale(c.m([[z ** 5, z ** 5], [z ** 7, z ** 3]]), c.inv_sqrt2)
    a1 = c.m([[0, -1], [1, 0]])
    a2 = linalg.scale(c.m([[z ** 3, z], [z ** 3, z ** 5]]), c.inv_sqrt2)
    return c, [g1, g2], [a1, a2]


def _type_k() -> str:
    _, k, a = _k_data()
    return _gk(8, k, a, "G(K, alpha) of type K")


def _type_j() -> str:
    c, k, a = _k_data()
    e = c.m([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
    return _gk(8, k, a, "type K extended by diag(1, 1, -1, -1)", extra=e)


def _octahedral(N: int):
    c = _Consts(N)
    z = c.z8
    g1 = c.m([[z, 0], [0, z ** 7]])
    g2 = linalg.scale(c.m([[z ** 5, z ** 5], [z ** 7, z ** 3]]), c.inv_sqrt2)
    a2 = linalg.scale(c.m([[z ** 3, z ** 7], [z ** 5, z ** 5]]), c.inv_sqrt2)
    return c, g1, g2, a2


def _type_p() -> str:
    _, g1, g2, a2 = _octahedral(8)
    return _gk(8, [g1, g2], [_pow(g1, -1), a2], "G(K, alpha) of type P")


def _type_q() -> str:
    _, g1, g2, _ = _octahedral(8)
    return _gk(8, [g1, g2], [_neg(g1), g2], "G(K, alpha) of type Q")


def _icosa_g1(c: _Consts):
    phi, i = c.phi, c.i
    return linalg.scale(c.m([[phi + i * phi.inverse(), 1], [-1, phi - i * phi.inverse()]]), c.F(1) / 2)


def _type_u() -> str:
    N = 40
    c, _, g2, a2 = _octahedral(N)
    g1 = _icosa_g1(c)
    return _gk(N, [g1, g2], [_pow(g1, -1), a2], "G(K, alpha) of type U")


def _type_v() -> str:
    N = 20
    c = _Consts(N)
    g1 = _icosa_g1(c)
    g2 = c.m([[c.i, 0], [0, -c.i]])
    a1 = _neg(linalg.matmul(linalg.matmul(g1, g2), _pow(g1, 3)))
    a2 = c.m([[0, c.i], [c.i, 0]])
    return _gk(N, [g1, g2], [a1, a2], "G(K, alpha) of type V")


def expand(tag: str) -> str:
    """Group-file text for a catalog tag such as ``'ADE E 8'`` or ``'type_G 2 1'``."""
    parts = tag.split()
    if not parts:
        raise ValueError("empty catalog tag")
    head, args = parts[0], parts[1:]
    try:
        ints = [int(a) for a in args if a.lstrip("-").isdigit()]
    except ValueError:
        ints = []
    if head == "ADE":
        if len(args) != 2 or args[0] not in ("A", "D", "E") or len(ints) != 1:
            raise ValueError(f"catalog tag 'ADE' expects 'A|D|E m', got {tag!r}")
        kind, m = args[0], ints[0]
        if kind == "A":
            if m < 1:
                raise ValueError("A_m needs m >= 1")
            return _ade_a(m)
        if kind == "D":
            return _ade_d(m)
        return _ade_e(m)
    if head == "type_G":
        if len(ints) != 2:
            raise ValueError(f"catalog tag 'type_G' expects two integers l r, got {tag!r}")
        return _type_g(*ints)
    simple = {"order32": _order32, "G4": _g4, "minusId4": _minus_id4, "type_J": _type_j,
              "type_K": _type_k, "type_P": _type_p, "type_Q": _type_q, "type_U": _type_u,
              "type_V": _type_v}
    if head in simple:
        if args:
            raise ValueError(f"catalog tag {head!r} takes no arguments")
        return simple[head]()
    raise ValueError(f"unknown catalog tag {head!r}; known tags: {', '.join(TAGS)}")
