"""Group and generator input files.

A group file is line oriented::

    # binary dihedral group, m = 5
    conductor: 12
    dimension: 2
    generator g1: [[z^2, 0], [0, z^10]]
    generator g4: [[0, 1], [-1, 0]]
    element g5: g4*g1                   # named product, must lie in G
    juniors: g1, g1^2, g1^3, g4, g5     # optional, fixes the junior order
    symplectic: [[0, 1], [-1, 0]]       # optional
    catalog: D 5                         # alternative: expand a known group

Matrix literals are nested brackets of scalars; a scalar factor may
precede a literal as ``expr * [[...]]``.  Words use generator names,
``*``, ``^k``, parentheses and a leading ``-`` for multiplication by -Id.

An invariants file lists generators of the invariant ring::

    conductor: 24
    variables: x, y
    phi1: x^4 + y^4 + [4*z^8 + 2]*x^2*y^2
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from math import gcd
from pathlib import Path

from . import linalg
from .exactnum import ScalarSyntaxError, field, parse_scalar
from .polyalg import PolySyntaxError, Ring


class InputError(ValueError):
    """A validation error in an input file; carries a line number."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


@dataclass
class GroupSpec:
    conductor: int
    dimension: int
    generators: list  # (name, text)
    elements: list = dc_field(default_factory=list)  # (name, word text)
    juniors: list | None = None  # word texts
    symplectic: str | None = None
    catalog: str | None = None
    source: str = "<input>"
    lines: dict = dc_field(default_factory=dict)


_KEY = re.compile(r"^\s*(conductor|dimension|generator|element|juniors|symplectic|catalog)\b\s*([A-Za-z_][A-Za-z0-9_]*)?\s*:\s*(.*)$")


def read_group_text(text: str, source: str = "<input>") -> GroupSpec:
    conductor = None
    dimension = None
    gens, elems = [], []
    juniors = symplectic = catalog = None
    lines = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _KEY.match(line)
        if not m:
            raise InputError(f"cannot parse line {line!r}", no, source)
        key, name, value = m.group(1), m.group(2), m.group(3).strip()
        if key in ("generator", "element") and not name:
            raise InputError(f"{key} needs a name, e.g. '{key} g1: ...'", no, source)
        if key not in ("generator", "element") and name:
            raise InputError(f"unexpected name after {key}", no, source)
        lines[(key, name)] = no
        if key == "conductor":
            try:
                conductor = int(value)
            except ValueError:
                raise InputError(f"conductor must be an integer, got {value!r}", no, source)
            if conductor < 1:
                raise InputError("conductor must be positive", no, source)
        elif key == "dimension":
            try:
                dimension = int(value)
            except ValueError:
                raise InputError(f"dimension must be an integer, got {value!r}", no, source)
        elif key == "generator":
            gens.append((name, value))
        elif key == "element":
            elems.append((name, value))
        elif key == "juniors":
            juniors = [w.strip() for w in _split_top(value) if w.strip()]
        elif key == "symplectic":
            symplectic = value
        elif key == "catalog":
            catalog = value
    if catalog is not None:
        if gens:
            raise InputError("a catalog entry cannot be combined with explicit generators", lines[("catalog", None)], source)
        from .catalog import expand

        try:
            text2 = expand(catalog)
        except ValueError as exc:
            raise InputError(str(exc), lines[("catalog", None)], source)
        spec = read_group_text(text2, f"{source} [catalog {catalog}]")
        spec.catalog = catalog
        spec.source = source
        if juniors is not None:
            spec.juniors = juniors
        return spec
    if conductor is None:
        raise InputError("missing 'conductor:' line", None, source)
    if dimension is None:
        raise InputError("missing 'dimension:' line", None, source)
    if not gens:
        raise InputError("no generators given", None, source)
    return GroupSpec(conductor, dimension, gens, elems, juniors, symplectic, None, source, lines)


def _split_top(text: str) -> list[str]:
    """Split on commas that are not nested in brackets or parentheses."""
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def parse_matrix(text: str, conductor: int, dimension: int | None = None):
    text = text.strip()
    k = text.find("[[")
    if k < 0:
        raise ValueError(f"expected a matrix literal '[[...], ...]' in {text!r}")
    prefix = text[:k].strip()
    body = text[k:]
    F = field(conductor)
    factor = F.one
    if prefix:
        if not prefix.endswith("*"):
            raise ValueError(f"expected 'scalar * [[...]]' in {text!r}")
        factor = parse_scalar(prefix[:-1], conductor)
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"unbalanced matrix literal {body!r}")
    inner = body[1:-1]
    rows = []
    for rtext in _split_top(inner):
        rtext = rtext.strip()
        if not (rtext.startswith("[") and rtext.endswith("]")):
            raise ValueError(f"bad matrix row {rtext!r}")
        rows.append(tuple(parse_scalar(e, conductor) * factor for e in _split_top(rtext[1:-1])))
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    if dimension is not None and n != dimension:
        raise ValueError(f"matrix is {n}x{n}, expected {dimension}x{dimension}")
    return tuple(rows)


def format_matrix(M) -> str:
    return "[" + ", ".join("[" + ", ".join(str(c) for c in row) + "]" for row in M) + "]"


_WTOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(\d+)|([-*^()]))")


def eval_word(text: str, named: dict, F, n: int):
    """Evaluate a word in named matrices."""
    toks = []
    pos = 0
    s = text.strip()
    while pos < len(s):
        m = _WTOKEN.match(s, pos)
        if not m:
            raise ValueError(f"bad word {text!r}")
        if m.group(1):
            toks.append(("name", m.group(1)))
        elif m.group(2):
            toks.append(("int", int(m.group(2))))
        else:
            toks.append(("op", m.group(3)))
        pos = m.end()
    i = 0
    ident = linalg.identity(F, n)

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def product():
        nonlocal i
        neg = False
        if peek() == ("op", "-"):
            i += 1
            neg = True
        M = power()
        while peek() == ("op", "*"):
            i += 1
            M = linalg.matmul(M, power())
        if neg:
            M = linalg.scale(M, F(-1))
        return M

    def power():
        nonlocal i
        M = atom()
        if peek() == ("op", "^"):
            i += 1
            neg = False
            if peek() == ("op", "-"):
                i += 1
                neg = True
            kind, k = peek()
            if kind != "int":
                raise ValueError(f"expected exponent in {text!r}")
            i += 1
            if neg:
                M = linalg.inverse(M)
            P = ident
            for _ in range(k):
                P = linalg.matmul(P, M)
            M = P
        return M

    def atom():
        nonlocal i
        kind, v = peek()
        i += 1
        if kind == "name":
            if v not in named:
                raise ValueError(f"unknown name {v!r} in {text!r}")
            return named[v]
        if (kind, v) == ("op", "("):
            M = product()
            if peek() != ("op", ")"):
                raise ValueError(f"missing ')' in {text!r}")
            i += 1
            return M
        raise ValueError(f"unexpected token {v!r} in {text!r}")

    M = product()
    if i != len(toks):
        raise ValueError(f"trailing input in word {text!r}")
    return M


@dataclass
class LoadedGroup:
    spec: GroupSpec
    conductor: int
    generators: list
    named: dict
    juniors: list | None  # matrices
    symplectic: tuple | None


def load_group_spec(spec: GroupSpec, conductor: int | None = None) -> LoadedGroup:
    """Parse every matrix of a spec in conductor ``conductor`` (default: declared)."""
    N = conductor or spec.conductor
    if N % spec.conductor:
        raise InputError(f"conductor {N} is not a multiple of the declared {spec.conductor}")
    F = field(N)
    named = {}
    gens = []
    for name, text in spec.generators:
        try:
            M = parse_matrix(text, spec.conductor, spec.dimension)
        except (ValueError, ScalarSyntaxError) as exc:
            raise InputError(f"generator {name}: {exc}", spec.lines.get(("generator", name)), spec.source)
        M = tuple(tuple(c.embed(N) for c in row) for row in M)
        named[name] = M
        gens.append(M)
    for name, text in spec.elements:
        try:
            if "[[" in text:
                M = parse_matrix(text, spec.conductor, spec.dimension)
                M = tuple(tuple(c.embed(N) for c in row) for row in M)
            else:
                M = eval_word(text, named, F, spec.dimension)
        except (ValueError, ScalarSyntaxError) as exc:
            raise InputError(f"element {name}: {exc}", spec.lines.get(("element", name)), spec.source)
        named[name] = M
    juniors = None
    if spec.juniors is not None:
        juniors = []
        for w in spec.juniors:
            try:
                juniors.append(eval_word(w, named, F, spec.dimension))
            except ValueError as exc:
                raise InputError(f"juniors: {exc}", spec.lines.get(("juniors", None)), spec.source)
    J = None
    if spec.symplectic:
        try:
            J = parse_matrix(spec.symplectic, spec.conductor, spec.dimension)
        except (ValueError, ScalarSyntaxError) as exc:
            raise InputError(f"symplectic: {exc}", spec.lines.get(("symplectic", None)), spec.source)
        J = tuple(tuple(c.embed(N) for c in row) for row in J)
    return LoadedGroup(spec, N, gens, named, juniors, J)


def read_group_file(path) -> GroupSpec:
    path = Path(path)
    return read_group_text(path.read_text(), str(path))


@dataclass
class InvariantSpec:
    conductor: int
    variables: list
    polys: list  # (name, text, line)
    source: str = "<input>"


def read_invariants_text(text: str, source: str = "<input>") -> InvariantSpec:
    conductor = None
    variables = None
    polys = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise InputError(f"expected 'name: polynomial', got {line!r}", no, source)
        key, value = (s.strip() for s in line.split(":", 1))
        if key == "conductor":
            try:
                conductor = int(value)
            except ValueError:
                raise InputError("conductor must be an integer", no, source)
        elif key == "variables":
            variables = [v.strip() for v in value.split(",") if v.strip()]
        else:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", key):
                raise InputError(f"bad generator name {key!r}", no, source)
            polys.append((key, value, no))
    if conductor is None:
        raise InputError("missing 'conductor:' line", None, source)
    if not variables:
        raise InputError("missing 'variables:' line", None, source)
    return InvariantSpec(conductor, variables, polys, source)


def read_invariants_file(path) -> InvariantSpec:
    path = Path(path)
    return read_invariants_text(path.read_text(), str(path))


def parse_invariants(spec: InvariantSpec, ring: Ring):
    """Parse the polynomials of an invariants spec into ``ring``."""
    if ring.conductor % spec.conductor:
        raise InputError(f"invariants conductor {spec.conductor} does not divide the session conductor {ring.conductor}",
                         None, spec.source)
    if list(ring.names) != list(spec.variables):
        raise InputError(f"variables {spec.variables} do not match the group dimension", None, spec.source)
    src = Ring(spec.variables, spec.conductor)
    out = []
    for name, text, no in spec.polys:
        try:
            f = src.parse(text)
        except (PolySyntaxError, ScalarSyntaxError) as exc:
            raise InputError(f"{name}: {exc}", no, spec.source)
        out.append((name, ring.embed_poly(f)))
    return out


def session_conductor(declared: int, orders) -> int:
    N = declared
    for r in orders:
        N = N * r // gcd(N, r)
    return N


def build_group(spec: GroupSpec, *, cap: int | None = None, allow_pseudo_reflections: bool = False):
    """Close the group of a spec, enlarging the conductor so that every
    eigenvalue of every element lies in the field.  Returns a GroupAnalysis."""
    from .matgroup import DEFAULT_CAP, GroupError, close_group

    cap = cap or DEFAULT_CAP
    loaded = load_group_spec(spec)
    try:
        G = close_group(loaded.generators, cap=cap, symplectic_form=loaded.symplectic,
                        allow_pseudo_reflections=allow_pseudo_reflections)
    except GroupError as exc:
        raise InputError(str(exc), None, spec.source)
    N = session_conductor(loaded.conductor, set(G.orders))
    if N != loaded.conductor:
        loaded = load_group_spec(spec, N)
        G = close_group(loaded.generators, cap=cap, symplectic_form=loaded.symplectic,
                        allow_pseudo_reflections=allow_pseudo_reflections)
    G.names = {name: G.index(M) for name, M in loaded.named.items()}
    if loaded.juniors is not None:
        reps = []
        for w, M in zip(spec.juniors, loaded.juniors):
            try:
                k = G.index(M)
            except KeyError:
                raise InputError(f"junior word {w!r} is not an element of the group", None, spec.source)
            if G.age(k) != 1:
                raise InputError(f"junior word {w!r} has age {G.age(k)}, not 1", None, spec.source)
            reps.append(k)
        classes = sorted(G.class_of[k] for k in reps)
        if classes != sorted(G.junior_classes()) or len(set(classes)) != len(classes):
            raise InputError("the junior words are not one representative per junior conjugacy class",
                             None, spec.source)
        G.junior_override = reps
        G.junior_words = list(spec.juniors)
    return G
